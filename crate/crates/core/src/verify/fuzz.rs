//! Randomised cross-module properties with counterexample shrinking.
//!
//! Each property draws small random inputs from its own ChaCha stream, so a
//! report is a pure function of `(seed, budget, rule)`. A failing input is
//! shrunk greedily (dropping rows, columns, cells and weight) while it keeps
//! failing, and the smallest one found is reported.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::greene::{
    brute_g_k, brute_h_k, check_layers, check_offdiag, family_to_diagram, layers_decompose,
    maximalize, optimal_ne_chains, random_matrix_family, straighten,
};
use crate::growth::{forward_f1, grow_rectangle_with, rsk_gamma_inverse, rsk_gamma_with, LocalRule};
use crate::partition::{Cell, Partition};
use crate::shapes::{chain_weight, is_up_right, FerrersShape, Filling, WeightMatrix};
use crate::verify::report::{Counterexample, FuzzReport, GreeneCheckReport, PropertyOutcome};

pub const DEFAULT_FUZZ_BUDGET: u64 = 7_000;

/// Cap on shrinking steps per failure.
const SHRINK_STEPS: usize = 500;

#[derive(Debug, Clone)]
enum Input {
    Matrix(WeightMatrix),
    Filling(Filling),
    /// `k` disjoint NE-chains in an `m × n` matrix, optionally weighted.
    Family { m: usize, n: usize, k: usize, chains: Vec<Vec<Cell>>, weights: Option<WeightMatrix> },
}

impl Input {
    fn size(&self) -> usize {
        match self {
            Input::Matrix(w) => w.cols() * w.rows(),
            Input::Filling(f) => f.shape().len(),
            Input::Family { m, n, .. } => m * n,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Input::Matrix(w) => json!({ "matrix": w }),
            Input::Filling(f) => json!({ "filling": f }),
            Input::Family { m, n, k, chains, weights } => {
                json!({ "m": m, "n": n, "k": k, "chains": chains, "matrix": weights })
            }
        }
    }

    /// Strictly smaller variants, most aggressive first.
    fn shrink(&self) -> Vec<Input> {
        match self {
            Input::Matrix(w) => shrink_matrix(w).into_iter().map(Input::Matrix).collect(),
            Input::Filling(f) => shrink_filling(f).into_iter().map(Input::Filling).collect(),
            Input::Family { m, n, k, chains, weights } => {
                let mut out = Vec::new();
                for (i, chain) in chains.iter().enumerate() {
                    for j in 0..chain.len() {
                        let mut smaller = chains.clone();
                        smaller[i].remove(j);
                        out.push(Input::Family { m: *m, n: *n, k: *k, chains: smaller, weights: weights.clone() });
                    }
                }
                if let Some(w) = weights {
                    for c in cells_of(w) {
                        if w.get(c) > 0 {
                            let mut lighter = w.clone();
                            lighter.set(c, w.get(c) - 1).expect("cell in support");
                            out.push(Input::Family { m: *m, n: *n, k: *k, chains: chains.clone(), weights: Some(lighter) });
                        }
                    }
                }
                out
            }
        }
    }
}

fn cells_of(w: &WeightMatrix) -> Vec<Cell> {
    (1..=w.rows()).flat_map(|r| (1..=w.cols()).map(move |c| Cell::new(c, r))).collect()
}

fn shrink_matrix(w: &WeightMatrix) -> Vec<WeightMatrix> {
    let (m, n) = (w.cols(), w.rows());
    let mut out = Vec::new();
    if m > 1 {
        out.push(w.window(m - 1, n));
        out.push(WeightMatrix::from_fn(m - 1, n, |c| w.get(Cell::new(c.col + 1, c.row))));
    }
    if n > 1 {
        out.push(w.window(m, n - 1));
        out.push(WeightMatrix::from_fn(m, n - 1, |c| w.get(Cell::new(c.col, c.row + 1))));
    }
    for c in cells_of(w) {
        let v = w.get(c);
        if v > 0 {
            let mut zeroed = w.clone();
            zeroed.set(c, 0).expect("cell in support");
            out.push(zeroed);
            if v > 1 {
                let mut lighter = w.clone();
                lighter.set(c, v - 1).expect("cell in support");
                out.push(lighter);
            }
        }
    }
    out
}

fn shrink_filling(f: &Filling) -> Vec<Filling> {
    let cells = f.shape().cell_set();
    let mut out = Vec::new();
    for &c in &cells {
        let corner = !cells.contains(&Cell::new(c.col + 1, c.row))
            && !cells.contains(&Cell::new(c.col, c.row + 1));
        if corner {
            let mut rest: BTreeSet<Cell> = cells.clone();
            rest.remove(&c);
            let shape = FerrersShape::from_cells(&rest).expect("removing a corner keeps a shape");
            out.push(Filling::from_fn(shape, |x| f.get(x).unwrap_or(0)));
        }
    }
    for &c in &cells {
        let v = f.get(c).unwrap_or(0);
        if v > 0 {
            let mut lighter = f.clone();
            lighter.set(c, v / 2).expect("cell in shape");
            out.push(lighter);
        }
    }
    out
}

type Check = fn(&Input, LocalRule) -> Result<(), String>;
type Generate = fn(&mut ChaCha8Rng) -> Input;

struct Property {
    name: &'static str,
    generate: Generate,
    check: Check,
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, max_entry: u64) -> WeightMatrix {
    let (m, n) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
    WeightMatrix::from_fn(m, n, |_| rng.gen_range(0..=max_entry))
}

fn gen_filling(rng: &mut ChaCha8Rng) -> Input {
    let height = rng.gen_range(0..=4);
    let mut rows: Vec<u64> = (0..height).map(|_| rng.gen_range(1..=4)).collect();
    rows.sort_unstable_by(|a, b| b.cmp(a));
    let shape = FerrersShape::from_rows(Partition::new(rows).expect("sorted rows"));
    Input::Filling(Filling::from_fn(shape, |_| rng.gen_range(0..=4)))
}

fn check_round_trip(input: &Input, rule: LocalRule) -> Result<(), String> {
    let Input::Filling(f) = input else { unreachable!() };
    let shape = f.shape();
    let gamma = shape.boundary_path(shape.width(), shape.height()).map_err(err)?;
    let seq = rsk_gamma_with(f, &gamma, rule).map_err(err)?;
    let back = rsk_gamma_inverse(&seq, &gamma).map_err(err)?;
    if &back != f {
        return Err(format!("inverse RSK returned {:?}", back.rows()));
    }
    Ok(())
}

fn gen_greene(rng: &mut ChaCha8Rng) -> Input {
    Input::Matrix(random_matrix(rng, 4, 3))
}

/// Compares growth prefix sums with both oracles for every `k`. Oracle
/// errors (such as an exceeded enumeration budget) propagate; a mismatch is
/// returned as a message.
fn greene_mismatch(w: &WeightMatrix, rule: LocalRule) -> crate::Result<Option<String>> {
    let (m, n) = (w.cols(), w.rows());
    let lam = grow_rectangle_with(w, m, n, rule)?.get(m, n).clone();
    let mut prefix = 0;
    for k in 1..=m.min(n) {
        prefix += lam.part(k);
        let g = brute_g_k(w, k)?;
        let h = brute_h_k(w, k)?;
        if !(g == h && h == prefix) {
            return Ok(Some(format!("k = {k}: growth {prefix}, g_k {g}, h_k {h}")));
        }
    }
    Ok(None)
}

fn check_greene(input: &Input, rule: LocalRule) -> Result<(), String> {
    let Input::Matrix(w) = input else { unreachable!() };
    match greene_mismatch(w, rule).map_err(err)? {
        Some(msg) => Err(msg),
        None => Ok(()),
    }
}

fn gen_symmetric(rng: &mut ChaCha8Rng) -> Input {
    let n = rng.gen_range(1..=4);
    let upper = WeightMatrix::from_fn(n, n, |_| rng.gen_range(0..=3));
    Input::Matrix(WeightMatrix::from_fn(n, n, |c| {
        upper.get(Cell::new(c.col.max(c.row), c.col.min(c.row)))
    }))
}

fn check_symmetry(input: &Input, rule: LocalRule) -> Result<(), String> {
    let Input::Matrix(w) = input else { unreachable!() };
    if !w.is_symmetric() {
        // Shrinking may break symmetry; such inputs are out of scope.
        return Ok(());
    }
    let n = w.cols();
    let t = grow_rectangle_with(w, n, n, rule).map_err(err)?;
    for u in 1..=n {
        for v in 1..u {
            if t.get(u, v) != t.get(v, u) {
                return Err(format!("λ({u},{v}) = {} but λ({v},{u}) = {}", t.get(u, v), t.get(v, u)));
            }
        }
    }
    Ok(())
}

fn gen_concavity(rng: &mut ChaCha8Rng) -> Input {
    Input::Matrix(random_matrix(rng, 4, 5))
}

fn check_concavity(input: &Input, rule: LocalRule) -> Result<(), String> {
    let Input::Matrix(w) = input else { unreachable!() };
    let (m, n) = (w.cols(), w.rows());
    let wt = w.transpose();
    let mut prev = (0, u64::MAX);
    for k in 1..=m.min(n) + 1 {
        let h = brute_h_k(w, k).map_err(err)?;
        let ht = brute_h_k(&wt, k).map_err(err)?;
        if h != ht {
            return Err(format!("h_{k}(A) = {h} but h_{k}(Aᵀ) = {ht}"));
        }
        let inc = h - prev.0;
        if inc > prev.1 {
            return Err(format!("h_{k} − h_{} = {inc} exceeds the previous increment {}", k - 1, prev.1));
        }
        prev = (h, inc);
    }
    let a = grow_rectangle_with(w, m, n, rule).map_err(err)?.get(m, n).clone();
    let b = grow_rectangle_with(&wt, n, m, rule).map_err(err)?.get(n, m).clone();
    if a != b {
        return Err(format!("λ(A) = {a} but λ(Aᵀ) = {b}"));
    }
    Ok(())
}

fn gen_family(rng: &mut ChaCha8Rng) -> Input {
    let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
    let k = rng.gen_range(1..=3);
    let chains = random_matrix_family(rng, m, n, k);
    Input::Family { m, n, k, chains, weights: None }
}

fn check_layers_lemma(input: &Input, _: LocalRule) -> Result<(), String> {
    let Input::Family { m, n, chains, .. } = input else { unreachable!() };
    let diagram = family_to_diagram(chains, *n);
    let rect = Partition::new(vec![*m as u64; *n]).map_err(err)?;
    let layers = layers_decompose(&diagram, &rect).map_err(err)?;
    if !check_layers(&diagram, &rect, &layers) {
        return Err(format!("layers {layers:?} violate nesting or coverage"));
    }
    Ok(())
}

fn gen_offdiag(rng: &mut ChaCha8Rng) -> Input {
    let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let k = rng.gen_range(1..=m.min(n));
    let chains = random_matrix_family(rng, m, n, k);
    Input::Family { m, n, k, chains, weights: None }
}

fn check_offdiag_lemma(input: &Input, _: LocalRule) -> Result<(), String> {
    let Input::Family { m, n, k, chains, .. } = input else { unreachable!() };
    let family = maximalize(chains, *m, *n, *k).map_err(err)?;
    if !check_offdiag(&family_to_diagram(&family, *n), *m, *n, *k) {
        return Err(format!("maximal family {family:?} misses a corner"));
    }
    Ok(())
}

fn gen_straighten(rng: &mut ChaCha8Rng) -> Input {
    let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let k = rng.gen_range(1..=m.min(n).min(3));
    let chains = random_matrix_family(rng, m, n, k);
    let w = WeightMatrix::from_fn(m, n, |_| rng.gen_range(0..=5));
    Input::Family { m, n, k, chains, weights: Some(w) }
}

fn check_straighten(input: &Input, _: LocalRule) -> Result<(), String> {
    let Input::Family { k, chains, weights: Some(w), .. } = input else { unreachable!() };
    let total = |f: &[Vec<Cell>]| -> Result<u64, String> {
        f.iter().map(|c| chain_weight(w, c).map_err(err)).sum()
    };
    let paths = straighten(chains, w, *k).map_err(err)?;
    if !paths.iter().all(|p| is_up_right(p)) {
        return Err(format!("straighten returned non-paths {paths:?}"));
    }
    if total(&paths)? < total(chains)? {
        return Err(format!("weight dropped from {} to {}", total(chains)?, total(&paths)?));
    }
    let (best, optimal) = optimal_ne_chains(w, *k).map_err(err)?;
    let reached = total(&straighten(&optimal, w, *k).map_err(err)?)?;
    let g = brute_g_k(w, *k).map_err(err)?;
    if reached != best || g != best {
        return Err(format!("h_k = {best}, straightened {reached}, g_k = {g}"));
    }
    Ok(())
}

fn properties() -> Vec<Property> {
    vec![
        Property { name: "rsk-round-trip", generate: gen_filling, check: check_round_trip },
        Property { name: "greene-consistency", generate: gen_greene, check: check_greene },
        Property { name: "half-space-symmetry", generate: gen_symmetric, check: check_symmetry },
        Property { name: "concavity-and-transpose", generate: gen_concavity, check: check_concavity },
        Property { name: "layers-lemma", generate: gen_family, check: check_layers_lemma },
        Property { name: "offdiag-lemma", generate: gen_offdiag, check: check_offdiag_lemma },
        Property { name: "straighten", generate: gen_straighten, check: check_straighten },
    ]
}

/// Runs a property check, turning panics (such as the inline mass
/// preservation assertion in F¹) into failures.
fn run(check: Check, input: &Input, rule: LocalRule) -> Result<(), String> {
    match std::panic::catch_unwind(|| check(input, rule)) {
        Ok(r) => r,
        Err(payload) => Err(payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    }
}

fn shrink(check: Check, mut input: Input, mut message: String, rule: LocalRule) -> (Input, String) {
    let mut steps = 0;
    'outer: while steps < SHRINK_STEPS {
        for candidate in input.shrink() {
            steps += 1;
            if let Err(msg) = run(check, &candidate, rule) {
                input = candidate;
                message = msg;
                continue 'outer;
            }
        }
        break;
    }
    (input, message)
}

/// Every registered property under the correct local rule.
pub fn fuzz_suite(seed: u64, budget: u64) -> FuzzReport {
    fuzz_suite_with_rule(seed, budget, forward_f1)
}

/// Splits `budget` cases across the properties and runs them with `rule` in
/// place of F¹. A zero budget yields an empty, passing report.
pub fn fuzz_suite_with_rule(seed: u64, budget: u64, rule: LocalRule) -> FuzzReport {
    let props = properties();
    let count = props.len() as u64;
    let mut outcomes = Vec::new();
    let mut failures = Vec::new();
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    for (i, prop) in props.iter().enumerate() {
        let cases = budget / count + u64::from((i as u64) < budget % count);
        if cases == 0 {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64 + 1);
        let mut pass = true;
        for _ in 0..cases {
            let input = (prop.generate)(&mut rng);
            if let Err(msg) = run(prop.check, &input, rule) {
                let (small, message) = shrink(prop.check, input, msg, rule);
                failures.push(Counterexample {
                    property: prop.name.to_string(),
                    input: small.to_json(),
                    message,
                    size: small.size(),
                });
                pass = false;
                break;
            }
        }
        outcomes.push(PropertyOutcome { property: prop.name.to_string(), cases, pass });
    }
    std::panic::set_hook(hook);
    FuzzReport { seed, budget, pass: failures.is_empty(), properties: outcomes, failures }
}

/// Checks `trials` random `cols × rows` matrices with entries in
/// `0..=max_entry`: growth prefix sums must equal `g_k` and `h_k` for every
/// `k`. The first mismatch is shrunk and reported.
pub fn greene_check(
    cols: usize,
    rows: usize,
    max_entry: u64,
    trials: u64,
    seed: u64,
) -> crate::Result<GreeneCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut counterexample = None;
    for _ in 0..trials {
        let w = WeightMatrix::from_fn(cols, rows, |_| rng.gen_range(0..=max_entry));
        checked += 1;
        if let Some(msg) = greene_mismatch(&w, forward_f1)? {
            let (small, message) = shrink(check_greene, Input::Matrix(w), msg, forward_f1);
            counterexample = Some(Counterexample {
                property: "greene-consistency".into(),
                input: small.to_json(),
                message,
                size: small.size(),
            });
            break;
        }
    }
    Ok(GreeneCheckReport {
        seed,
        cols,
        rows,
        max_entry,
        trials: checked,
        pass: counterexample.is_none(),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// F¹ with `min` and `max` exchanged.
    fn swapped_rule(rho: &Partition, mu: &Partition, nu: &Partition, m: u64) -> crate::Result<Partition> {
        let mut parts = Vec::new();
        let mut carry = m;
        for i in 1..=mu.len().max(nu.len()) + 1 {
            parts.push(mu.part(i).min(nu.part(i)) + carry);
            carry = mu.part(i).max(nu.part(i)).saturating_sub(rho.part(i));
        }
        parts.retain(|&p| p > 0);
        Partition::new(parts)
    }

    #[test]
    fn zero_budget_is_empty() {
        let r = fuzz_suite(1, 0);
        assert!(r.pass);
        assert!(r.properties.is_empty() && r.failures.is_empty());
    }

    #[test]
    fn small_budget_passes_and_is_deterministic() {
        let a = fuzz_suite(11, 140);
        assert!(a.pass, "{:?}", a.failures);
        assert_eq!(a.properties.len(), 7);
        assert_eq!(a, fuzz_suite(11, 140));
    }

    #[test]
    fn mutant_rule_is_caught_with_a_small_counterexample() {
        let r = fuzz_suite_with_rule(3, 140, swapped_rule);
        assert!(!r.pass);
        let greene = r.failures.iter().find(|f| f.property == "greene-consistency").unwrap();
        assert!(greene.size <= 9, "{greene:?}");
        let m = &greene.input["matrix"];
        assert!(m["cols"].as_u64().unwrap() <= 3 && m["rows"].as_u64().unwrap() <= 3);
    }

    #[test]
    fn greene_check_is_deterministic_and_clean() {
        let r = greene_check(3, 2, 3, 50, 4).unwrap();
        assert!(r.pass);
        assert_eq!(r.trials, 50);
        assert_eq!(r, greene_check(3, 2, 3, 50, 4).unwrap());
    }

}
