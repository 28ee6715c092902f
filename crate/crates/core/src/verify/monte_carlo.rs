//! Statistical comparison of sampled `λ` sequences with the exact measure.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::growth::grow_rectangle;
use crate::lpp::{replica_seed, sample_full, sample_half};
use crate::measure::{enumerate_sequences, Model};
use crate::partition::Partition;
use crate::rational::{self, Rational};
use crate::shapes::DownRightPath;
use crate::verify::report::{Check, ComparisonReport, Mode, SequenceRow, Side};

/// `3 √(S / n)`: a conservative bound on the TV distance between `n`
/// multinomial samples over `S` bins and their law.
pub fn mc_tolerance(support: usize, samples: u64) -> f64 {
    3.0 * (support as f64 / samples as f64).sqrt()
}

#[derive(Default)]
struct Counts {
    bins: BTreeMap<Vec<Partition>, u64>,
    overflow: u64,
}

impl Counts {
    fn merge(mut self, other: Counts) -> Counts {
        for (seq, c) in other.bins {
            *self.bins.entry(seq).or_default() += c;
        }
        self.overflow += other.overflow;
        self
    }
}

fn observe_replica(gamma: &DownRightPath, model: &Model, seed: u64) -> Result<Vec<Partition>> {
    let (m, n) = (gamma.end().0, gamma.start().1);
    let w = match model {
        Model::Full(p) => sample_full(p, m, n, seed)?,
        Model::Half(p) => sample_half(p, m, seed)?,
    };
    grow_rectangle(&w, m, n)?.read_along(gamma)
}

/// Samples `n_samples` independent replicas, bins the sequence read along
/// `gamma` (sequences with a part above `cap` share one overflow bin), and
/// measures the TV distance to the exact law of the same bins.
///
/// Replica `r` draws its noise from [`replica_seed`]`(seed, r)`, so the report
/// does not depend on the number of worker threads.
pub fn mc_compare(
    gamma: &DownRightPath,
    model: &Model,
    n_samples: u64,
    seed: u64,
    cap: u64,
) -> Result<ComparisonReport> {
    compare_samples(gamma, model, model, n_samples, seed, cap)
}

/// Samples under `sampler` and compares with the exact law of `model`.
fn compare_samples(
    gamma: &DownRightPath,
    sampler: &Model,
    model: &Model,
    n_samples: u64,
    seed: u64,
    cap: u64,
) -> Result<ComparisonReport> {
    if n_samples == 0 {
        return Err(Error::BadParameter("need at least one sample".into()));
    }
    let side = match model {
        Model::Full(_) => Side::Full,
        Model::Half(_) => Side::Half,
    };
    let mut exact: BTreeMap<Vec<Partition>, Rational> = BTreeMap::new();
    for seq in enumerate_sequences(gamma, cap) {
        let p = model.probability(gamma, &seq)?;
        exact.insert(seq, p);
    }
    let support = exact.len();
    let exact_overflow = rational::int(1) - exact.values().fold(rational::zero(), |s, p| s + p);

    let counts = (0..n_samples)
        .into_par_iter()
        .try_fold(Counts::default, |mut acc, r| -> Result<Counts> {
            let seq = observe_replica(gamma, sampler, replica_seed(seed, r))?;
            if seq.iter().any(|l| l.first() > cap) {
                acc.overflow += 1;
            } else {
                *acc.bins.entry(seq).or_default() += 1;
            }
            Ok(acc)
        })
        .try_reduce(Counts::default, |a, b| Ok(a.merge(b)))?;

    let n = n_samples as f64;
    let mut unexpected = Vec::new();
    for seq in counts.bins.keys() {
        if !exact.contains_key(seq) {
            unexpected.push(format!("{seq:?}"));
            exact.insert(seq.clone(), rational::zero());
        }
    }
    let mut rows = Vec::with_capacity(exact.len());
    let mut l1 = (counts.overflow as f64 / n - rational::to_f64(&exact_overflow)).abs();
    for (seq, p) in exact {
        let count = counts.bins.get(&seq).copied().unwrap_or(0);
        let (lhs, rhs) = (count as f64 / n, rational::to_f64(&p));
        l1 += (lhs - rhs).abs();
        rows.push(SequenceRow { sequence: seq, lhs, rhs, lhs_exact: None, rhs_exact: p, count: Some(count) });
    }
    let tv = l1 / 2.0;
    let tolerance = mc_tolerance(support, n_samples);
    let checks = vec![
        Check::new("tv-within-tolerance", tv <= tolerance, format!("TV = {tv:.6} ≤ 3√(S/n) = {tolerance:.6}")),
        Check::new(
            "observed-support",
            unexpected.is_empty(),
            if unexpected.is_empty() {
                "every observed sequence interlaces correctly".to_string()
            } else {
                format!("sequences outside the support: {}", unexpected.join(", "))
            },
        ),
    ];
    Ok(ComparisonReport {
        mode: Mode::MonteCarlo,
        side,
        path: gamma.clone(),
        tv_distance: tv,
        tv_exact: None,
        support_discrepancy: None,
        truncated_mass: None,
        union_bound: None,
        truncation: None,
        sample_count: Some(n_samples),
        cap: Some(cap),
        overflow_count: Some(counts.overflow),
        support_size: support,
        tolerance,
        pass: checks.iter().all(|c| c.pass),
        rows,
        checks,
    })
}
