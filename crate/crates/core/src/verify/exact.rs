//! Exact comparison of the law of `λ` along a path, obtained by enumerating
//! every truncated weight assignment, with the exact measure.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::greene::brute_g_k;
use crate::growth::{grow, grow_rectangle};
use crate::lpp::{FullSpaceParams, HalfSpaceParams};
use crate::measure::Model;
use crate::partition::{Cell, Partition};
use crate::rational::{self, Rational};
use crate::shapes::{DownRightPath, FerrersShape, Filling, WeightMatrix};
use crate::verify::report::{Check, ComparisonReport, Mode, SequenceRow, Side};

/// Largest number of weight assignments enumerated by default.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 20_000_000;

/// Number of assignments on which the `g_k` firewall and the locality and
/// reflection checks run. Evenly spaced through the enumeration.
const CHECK_SAMPLES: u64 = 2_000;

const MAX_REPORTED_FAILURES: usize = 5;

pub fn exact_compare_full(
    gamma: &DownRightPath,
    params: &FullSpaceParams,
    t: u64,
) -> Result<ComparisonReport> {
    exact_compare(gamma, &Model::Full(params.clone()), t, DEFAULT_ENUMERATION_BUDGET)
}

pub fn exact_compare_half(
    gamma: &DownRightPath,
    params: &HalfSpaceParams,
    t: u64,
) -> Result<ComparisonReport> {
    exact_compare(gamma, &Model::Half(params.clone()), t, DEFAULT_ENUMERATION_BUDGET)
}

/// The cells carrying independent weights, with their geometric parameters.
struct Setup {
    side: Side,
    region: FerrersShape,
    free: Vec<Cell>,
    q: Vec<Rational>,
    /// Position in `free` of the independent weight behind each region cell.
    source: BTreeMap<Cell, usize>,
    /// Size of the matrix the side checks grow over.
    window: (usize, usize),
}

impl Setup {
    fn new(gamma: &DownRightPath, model: &Model) -> Result<Self> {
        let region = model.region(gamma)?;
        let (side, free, q): (Side, Vec<Cell>, Vec<Rational>) = match model {
            Model::Full(p) => {
                let free = region.cells();
                let q = free.iter().map(|c| p.q(c.col, c.row)).collect();
                (Side::Full, free, q)
            }
            Model::Half(p) => {
                if p.x.len() < gamma.end().0 {
                    return Err(Error::BadParameter(format!(
                        "need {} x-parameters, got {}",
                        gamma.end().0,
                        p.x.len()
                    )));
                }
                let free: Vec<Cell> = region.cells().into_iter().filter(|c| c.col >= c.row).collect();
                let q = free.iter().map(|c| p.q(c.col, c.row)).collect();
                (Side::Half, free, q)
            }
        };
        if let Some(bad) = q.iter().find(|q| !rational::is_probability_parameter(q)) {
            return Err(Error::BadParameter(format!("cell parameter {bad} is not in [0, 1)")));
        }
        let index: BTreeMap<Cell, usize> = free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let source = region
            .cells()
            .into_iter()
            .map(|c| {
                let key = match side {
                    Side::Full => c,
                    Side::Half => Cell::new(c.col.max(c.row), c.col.min(c.row)),
                };
                (c, index[&key])
            })
            .collect();
        let window = (gamma.end().0, gamma.start().1);
        Ok(Setup { side, region, free, q, source, window })
    }

    fn filling(&self, values: &[u64]) -> Filling {
        Filling::from_fn(self.region.clone(), |c| values[self.source[&c]])
    }

    /// The weights on the bounding rectangle, with `outside` supplying cells
    /// beyond the region.
    fn matrix(&self, values: &[u64], outside: impl Fn(Cell) -> u64) -> WeightMatrix {
        WeightMatrix::from_fn(self.window.0, self.window.1, |c| match self.source.get(&c) {
            Some(&i) => values[i],
            None => outside(c),
        })
    }
}

fn decode(mut index: u64, base: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = index % base;
            index /= base;
            d
        })
        .collect()
}

#[derive(Default)]
struct Acc {
    lhs: BTreeMap<Vec<Partition>, Rational>,
    checked: u64,
    failures: BTreeMap<u64, String>,
}

impl Acc {
    fn fail(&mut self, index: u64, msg: String) {
        self.failures.insert(index, msg);
        while self.failures.len() > MAX_REPORTED_FAILURES {
            self.failures.pop_last();
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        for (seq, p) in other.lhs {
            *self.lhs.entry(seq).or_insert_with(rational::zero) += p;
        }
        self.checked += other.checked;
        for (i, msg) in other.failures {
            self.fail(i, msg);
        }
        self
    }
}

/// Cross-checks one assignment: `λ` against brute-force `g_k`, insensitivity
/// to weights outside the region and, in half-space, the symmetry
/// `λ(m, n) = λ(n, m)`.
fn side_checks(setup: &Setup, gamma: &DownRightPath, values: &[u64], index: u64, lam: &[Partition]) -> Result<Option<String>> {
    let plain = setup.matrix(values, |_| 0);
    for (&(u, v), l) in gamma.vertices().iter().zip(lam) {
        if u == 0 || v == 0 {
            continue;
        }
        let window = plain.window(u, v);
        let mut h = 0;
        for k in 1..=u.min(v) {
            h += l.part(k);
            let g = brute_g_k(&window, k)?;
            if g != h {
                return Ok(Some(format!("g_{k} = {g} but growth gives h_{k} = {h} at ({u},{v})")));
            }
        }
    }
    let noisy = setup.matrix(values, |c| 1 + (index + 3 * c.col as u64 + 7 * c.row as u64) % 4);
    let (m, n) = setup.window;
    if grow_rectangle(&noisy, m, n)?.read_along(gamma)? != lam {
        return Ok(Some("λ along the path changed with weights outside the region".into()));
    }
    if setup.side == Side::Half {
        let k = m.max(n);
        let sym = WeightMatrix::from_fn(k, k, |c| {
            setup.source.get(&Cell::new(c.col.max(c.row), c.col.min(c.row))).map_or(0, |&i| values[i])
        });
        let table = grow_rectangle(&sym, k, k)?;
        for (&(u, v), l) in gamma.vertices().iter().zip(lam) {
            if table.get(v, u) != l {
                return Ok(Some(format!("λ({v},{u}) differs from λ({u},{v})")));
            }
        }
    }
    Ok(None)
}

/// Enumerates every assignment of weights in `0..=t` to the independent
/// cells of the region, accumulates the exact probability of each sequence
/// read along `gamma`, and compares with the model.
///
/// By the RSK bijection each sequence has exactly one preimage, so the
/// enumerated and exact probabilities must agree on every enumerated
/// sequence; the remaining discrepancy is the truncated geometric mass.
pub fn exact_compare(
    gamma: &DownRightPath,
    model: &Model,
    t: u64,
    budget: u128,
) -> Result<ComparisonReport> {
    let setup = Setup::new(gamma, model)?;
    let base = t + 1;
    let cells = setup.free.len();
    let needed = u128::from(base).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let total = needed as u64;
    let point: Vec<Vec<Rational>> = setup
        .q
        .iter()
        .map(|q| (0..=t).map(|k| (rational::int(1) - q) * rational::pow(q, k)).collect())
        .collect();
    let stride = (total / CHECK_SAMPLES).max(1);

    let acc = (0..total)
        .into_par_iter()
        .try_fold(Acc::default, |mut acc, index| -> Result<Acc> {
            let values = decode(index, base, cells);
            let lam = grow(&setup.filling(&values))?.read_along(gamma)?;
            if index % stride == 0 {
                acc.checked += 1;
                if let Some(msg) = side_checks(&setup, gamma, &values, index, &lam)? {
                    acc.fail(index, format!("weights {values:?}: {msg}"));
                }
            }
            let mass = values
                .iter()
                .zip(&point)
                .fold(rational::int(1), |m, (&v, p)| m * &p[v as usize]);
            if mass != rational::zero() {
                *acc.lhs.entry(lam).or_insert_with(rational::zero) += mass;
            }
            Ok(acc)
        })
        .try_reduce(Acc::default, |a, b| Ok(a.merge(b)))?;

    let mut rows = Vec::with_capacity(acc.lhs.len());
    let (mut sum_l, mut sum_r, mut disc) = (rational::zero(), rational::zero(), rational::zero());
    for (seq, l) in acc.lhs {
        let r = model.probability(gamma, &seq)?;
        let diff = if l > r { &l - &r } else { &r - &l };
        disc += diff;
        sum_l += &l;
        sum_r += &r;
        rows.push(SequenceRow {
            lhs: rational::to_f64(&l),
            rhs: rational::to_f64(&r),
            sequence: seq,
            lhs_exact: Some(l),
            rhs_exact: r,
            count: None,
        });
    }
    let half = rational::ratio(1, 2);
    let one = rational::int(1);
    let support_discrepancy = &half * disc;
    let truncated_mass = &one - &sum_l;
    let tv = &support_discrepancy + &half * (&truncated_mass + (&one - &sum_r));
    let union_bound = setup.q.iter().fold(rational::zero(), |s, q| s + rational::pow(q, base));
    let expected_mass = &one
        - setup.q.iter().fold(one.clone(), |p, q| p * (&one - rational::pow(q, base)));

    let failures: Vec<String> = acc.failures.into_values().collect();
    let checks = vec![
        Check::new(
            "support-agreement",
            support_discrepancy == rational::zero(),
            format!("½Σ|LHS−RHS| over {} enumerated sequences = {support_discrepancy}", rows.len()),
        ),
        Check::new(
            "truncated-mass",
            truncated_mass == expected_mass,
            format!("1 − ΣLHS = {truncated_mass}, expected 1 − Π(1 − q^{base}) = {expected_mass}"),
        ),
        Check::new(
            "tv-within-union-bound",
            tv <= union_bound,
            format!("TV = {tv} ≤ Σq^{base} = {union_bound}"),
        ),
        Check::new(
            "firewall-locality-reflection",
            failures.is_empty(),
            if failures.is_empty() {
                format!("{} assignments cross-checked", acc.checked)
            } else {
                failures.join("; ")
            },
        ),
    ];
    Ok(ComparisonReport {
        mode: Mode::ExactTruncated,
        side: setup.side,
        path: gamma.clone(),
        tv_distance: rational::to_f64(&tv),
        pass: checks.iter().all(|c| c.pass),
        tv_exact: Some(tv),
        support_discrepancy: Some(support_discrepancy),
        truncated_mass: Some(truncated_mass),
        tolerance: rational::to_f64(&union_bound),
        union_bound: Some(union_bound),
        truncation: Some(t),
        sample_count: None,
        cap: None,
        overflow_count: None,
        support_size: rows.len(),
        rows,
        checks,
    })
}
