//! Exact probabilities of partition sequences along a down-right path under
//! the full-space Schur measure and its half-space (Pfaffian) counterpart.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lpp::{FullSpaceParams, HalfSpaceParams};
use crate::partition::{partitions_in_box, skew_schur_mono, tau, Partition};
use crate::rational::{self, Rational};
use crate::shapes::{half_space_region, shape_of, DownRightPath, FerrersShape, Step, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "side", rename_all = "lowercase")]
pub enum Model {
    Full(FullSpaceParams),
    Half(HalfSpaceParams),
}

impl Model {
    pub fn weigh(&self, gamma: &DownRightPath, seq: &[Partition]) -> Result<SequenceWeight> {
        match self {
            Model::Full(p) => fs_weight(gamma, p, seq),
            Model::Half(p) => hs_weight(gamma, p, seq),
        }
    }

    pub fn probability(&self, gamma: &DownRightPath, seq: &[Partition]) -> Result<Rational> {
        Ok(self.weigh(gamma, seq)?.probability)
    }

    /// The cells whose weights determine `λ` along `gamma`.
    pub fn region(&self, gamma: &DownRightPath) -> Result<FerrersShape> {
        match self {
            Model::Full(_) => shape_of(gamma),
            Model::Half(_) => half_space_region(gamma),
        }
    }
}

/// One transition factor `Q(λ^{i-1}, λ^i)`, with the variable it used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFactor {
    /// 1-based step index `i`.
    pub step: usize,
    pub letter: Step,
    /// `t` such that the factor is in `y_t` (D step) or `x_t` (R step).
    pub index: usize,
    #[serde(with = "rational::as_string")]
    pub value: Rational,
}

impl StepFactor {
    pub fn label(&self) -> String {
        match self.letter {
            Step::D => format!("s_{{λ{}/λ{}}}(y_{})", self.step - 1, self.step, self.index),
            Step::R => format!("s_{{λ{}/λ{}}}(x_{})", self.step, self.step - 1, self.index),
        }
    }
}

/// A probability together with every factor that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceWeight {
    pub sequence: Vec<Partition>,
    #[serde(with = "rational::as_string")]
    pub probability: Rational,
    #[serde(with = "rational::as_string")]
    pub z: Rational,
    /// Endpoint indicator, 0 or 1.
    pub indicator: bool,
    /// `τ_{λ^0}(c)`; 1 in the full-space case.
    #[serde(with = "rational::as_string")]
    pub tau: Rational,
    pub factors: Vec<StepFactor>,
}

impl SequenceWeight {
    pub fn recompute(&self) -> Rational {
        if !self.indicator {
            return rational::zero();
        }
        self.factors.iter().fold(&self.z * &self.tau, |acc, f| acc * &f.value)
    }
}

/// `Q(λ^{i-1}, λ^i)` for every step. A D step leaving `v_{i-1} = (a, t)` uses
/// `y_t`; an R step leaving `v_{i-1} = (t - 1, b)` uses `x_t`.
fn step_factors(
    gamma: &DownRightPath,
    seq: &[Partition],
    x: &[Rational],
    y: &[Rational],
) -> Vec<StepFactor> {
    gamma
        .word()
        .iter()
        .enumerate()
        .map(|(k, &letter)| {
            let (a, b) = gamma.vertex(k);
            let (prev, next) = (&seq[k], &seq[k + 1]);
            let (index, value) = match letter {
                Step::D => (b, skew_schur_mono(prev, next, &y[b - 1])),
                Step::R => (a + 1, skew_schur_mono(next, prev, &x[a])),
            };
            StepFactor { step: k + 1, letter, index, value }
        })
        .collect()
}

fn check_length(gamma: &DownRightPath, seq: &[Partition]) -> Result<()> {
    if seq.len() != gamma.len() + 1 {
        return Err(Error::LengthMismatch { expected: gamma.len() + 1, got: seq.len() });
    }
    Ok(())
}

fn assemble(
    seq: &[Partition],
    z: Rational,
    indicator: bool,
    tau: Rational,
    factors: Vec<StepFactor>,
) -> SequenceWeight {
    let mut w = SequenceWeight {
        sequence: seq.to_vec(),
        probability: rational::zero(),
        z,
        indicator,
        tau,
        factors,
    };
    w.probability = w.recompute();
    w
}

/// Full-space weight of `seq` along `gamma` from `(0, N)` to `(M, 0)`.
pub fn fs_weight(
    gamma: &DownRightPath,
    params: &FullSpaceParams,
    seq: &[Partition],
) -> Result<SequenceWeight> {
    check_length(gamma, seq)?;
    let shape = shape_of(gamma)?;
    let (m, n) = (gamma.end().0, gamma.start().1);
    if params.x.len() < m || params.y.len() < n {
        return Err(Error::BadParameter(format!(
            "need {m} x-parameters and {n} y-parameters, got {} and {}",
            params.x.len(),
            params.y.len()
        )));
    }
    if params.x[..m].iter().chain(&params.y[..n]).any(|v| v < &rational::zero()) {
        return Err(Error::BadParameter("parameters must be non-negative".into()));
    }
    let mut z = rational::int(1);
    for c in shape.cells() {
        let q = params.q(c.col, c.row);
        if !rational::is_probability_parameter(&q) {
            return Err(Error::BadParameter(format!("x_{} y_{} = {q} is not in [0, 1)", c.col, c.row)));
        }
        z *= rational::int(1) - q;
    }
    let indicator = seq[0].is_empty() && seq[seq.len() - 1].is_empty();
    let factors = step_factors(gamma, seq, &params.x, &params.y);
    Ok(assemble(seq, z, indicator, rational::int(1), factors))
}

pub fn fs_probability(
    gamma: &DownRightPath,
    params: &FullSpaceParams,
    seq: &[Partition],
) -> Result<Rational> {
    Ok(fs_weight(gamma, params, seq)?.probability)
}

/// Half-space weight of `seq` along `gamma` from `(N, N)` to `(M + N, 0)`.
pub fn hs_weight(
    gamma: &DownRightPath,
    params: &HalfSpaceParams,
    seq: &[Partition],
) -> Result<SequenceWeight> {
    check_length(gamma, seq)?;
    let (n0, y0) = gamma.start();
    if n0 != y0 || gamma.end().1 != 0 {
        return Err(Error::BadEndpoints(format!(
            "expected a path from (N,N) to (M+N,0), got {:?} to {:?}",
            gamma.start(),
            gamma.end()
        )));
    }
    params.validate(gamma.end().0)?;
    let mut z = rational::int(1);
    for i in 1..=n0 {
        z *= rational::int(1) - params.q(i, i);
    }
    for c in half_space_region(gamma)?.strict_lower() {
        z *= rational::int(1) - params.q(c.col, c.row);
    }
    let indicator = seq[seq.len() - 1].is_empty();
    let factors = step_factors(gamma, seq, &params.x, &params.x);
    Ok(assemble(seq, z, indicator, tau(&seq[0], &params.c), factors))
}

pub fn hs_probability(
    gamma: &DownRightPath,
    params: &HalfSpaceParams,
    seq: &[Partition],
) -> Result<Rational> {
    Ok(hs_weight(gamma, params, seq)?.probability)
}

/// Partitions that may follow `prev` along a step, sorted.
fn successors(prev: &Partition, step: Step, at: Vertex, cap: u64) -> Vec<Partition> {
    let max_len = at.0.min(at.1);
    // Ranges [lo_i, hi_i] for each part; interlacing decouples the parts.
    let ranges: Vec<(u64, u64)> = (1..=max_len)
        .map(|i| match step {
            Step::D => (prev.part(i + 1), prev.part(i)),
            Step::R => (prev.part(i), if i == 1 { cap } else { prev.part(i - 1) }),
        })
        .collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) || prev.len() > max_len + usize::from(step == Step::D) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(max_len);
    fn rec(ranges: &[(u64, u64)], cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
        match ranges.split_first() {
            None => {
                let len = cur.iter().position(|&v| v == 0).unwrap_or(cur.len());
                out.push(Partition::from_sorted(cur[..len].to_vec()));
            }
            Some((&(lo, hi), rest)) => {
                for v in lo..=hi {
                    cur.push(v);
                    rec(rest, cur, out);
                    cur.pop();
                }
            }
        }
    }
    rec(&ranges, &mut cur, &mut out);
    out.sort();
    out
}

/// Depth-first, lexicographically ordered stream of partition sequences that
/// follow the interlacing pattern of a path. Each `λ^i` has at most
/// `min(v_i)` parts, so sequences vanish on the axes automatically.
pub struct SequenceStream {
    gamma: DownRightPath,
    vertices: Vec<Vertex>,
    cap: u64,
    /// `stack[i]` holds the remaining candidates for `λ^i`, reversed.
    stack: Vec<Vec<Partition>>,
    current: Vec<Partition>,
}

impl SequenceStream {
    fn new(gamma: &DownRightPath, cap: u64) -> Self {
        let vertices = gamma.vertices();
        let (x, y) = vertices[0];
        let mut first = partitions_in_box(cap, x.min(y));
        first.reverse();
        SequenceStream { gamma: gamma.clone(), vertices, cap, stack: vec![first], current: Vec::new() }
    }
}

impl Iterator for SequenceStream {
    type Item = Vec<Partition>;

    fn next(&mut self) -> Option<Vec<Partition>> {
        let last = self.vertices.len();
        loop {
            let depth = self.stack.len();
            if depth == 0 {
                return None;
            }
            let Some(next) = self.stack[depth - 1].pop() else {
                self.stack.pop();
                self.current.pop();
                continue;
            };
            self.current.truncate(depth - 1);
            self.current.push(next);
            if depth == last {
                return Some(self.current.clone());
            }
            let step = self.gamma.word()[depth - 1];
            let mut cands = successors(&self.current[depth - 1], step, self.vertices[depth], self.cap);
            cands.reverse();
            self.stack.push(cands);
        }
    }
}

/// All sequences along `gamma` with the right interlacing pattern and every
/// part at most `cap`, in lexicographic order.
pub fn enumerate_sequences(gamma: &DownRightPath, cap: u64) -> SequenceStream {
    SequenceStream::new(gamma, cap)
}

/// `1 − Σ` of the probabilities of all sequences with parts `≤ cap`.
pub fn normalization_defect(gamma: &DownRightPath, model: &Model, cap: u64) -> Result<Rational> {
    let mut total = rational::zero();
    for seq in enumerate_sequences(gamma, cap) {
        total += model.probability(gamma, &seq)?;
    }
    Ok(rational::int(1) - total)
}
