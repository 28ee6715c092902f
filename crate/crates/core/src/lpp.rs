//! Geometric noise and higher-rank last passage observables.
//!
//! Every cell draws from its own ChaCha stream keyed by the run seed and the
//! cell coordinates, so a sample is reproducible regardless of thread count
//! and enlarging the window extends the field without changing old cells.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::grow_rectangle;
use crate::partition::{Cell, Partition};
use crate::rational::{self, Rational};
use crate::shapes::{DownRightPath, WeightMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullSpaceParams {
    #[serde(with = "rational::vec_as_string")]
    pub x: Vec<Rational>,
    #[serde(with = "rational::vec_as_string")]
    pub y: Vec<Rational>,
}

impl FullSpaceParams {
    pub fn new(x: Vec<Rational>, y: Vec<Rational>) -> Self {
        FullSpaceParams { x, y }
    }

    /// `x_i · y_j`, 1-based.
    pub fn q(&self, i: usize, j: usize) -> Rational {
        &self.x[i - 1] * &self.y[j - 1]
    }

    /// Checks that every cell of the `m × n` window has a valid geometric
    /// parameter.
    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        if self.x.len() < m || self.y.len() < n {
            return Err(Error::BadParameter(format!(
                "need {m} x-parameters and {n} y-parameters, got {} and {}",
                self.x.len(),
                self.y.len()
            )));
        }
        if let Some(v) = self.x[..m].iter().chain(&self.y[..n]).find(|v| v < &&rational::zero()) {
            return Err(Error::BadParameter(format!("negative parameter {v}")));
        }
        for i in 1..=m {
            for j in 1..=n {
                let q = self.q(i, j);
                if !rational::is_probability_parameter(&q) {
                    return Err(Error::BadParameter(format!("x_{i} y_{j} = {q} is not in [0, 1)")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfSpaceParams {
    #[serde(with = "rational::vec_as_string")]
    pub x: Vec<Rational>,
    #[serde(with = "rational::as_string")]
    pub c: Rational,
}

impl HalfSpaceParams {
    pub fn new(x: Vec<Rational>, c: Rational) -> Self {
        HalfSpaceParams { x, c }
    }

    /// `c · x_i` on the diagonal and `x_i · x_j` off it.
    pub fn q(&self, i: usize, j: usize) -> Rational {
        if i == j {
            &self.c * &self.x[i - 1]
        } else {
            &self.x[i - 1] * &self.x[j - 1]
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.x.len() < n {
            return Err(Error::BadParameter(format!(
                "need {n} x-parameters, got {}",
                self.x.len()
            )));
        }
        if self.c < rational::zero() || self.x[..n].iter().any(|v| v < &rational::zero()) {
            return Err(Error::BadParameter("parameters must be non-negative".into()));
        }
        for i in 1..=n {
            for j in i..=n {
                let q = self.q(i, j);
                if !rational::is_probability_parameter(&q) {
                    return Err(Error::BadParameter(format!(
                        "parameter {q} at ({i},{j}) is not in [0, 1)"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A draw `k` with probability `q^k (1 - q)`, by inversion of one uniform
/// variate: `k = ⌊ln U / ln q⌋` with `U` uniform on `(0, 1]`.
pub fn sample_geometric<R: Rng + ?Sized>(q: &Rational, rng: &mut R) -> Result<u64> {
    if !rational::is_probability_parameter(q) {
        return Err(Error::BadParameter(format!("geometric parameter {q} is not in [0, 1)")));
    }
    Ok(geometric_from_uniform(rational::to_f64(q), 1.0 - rng.gen::<f64>()))
}

fn geometric_from_uniform(q: f64, u: f64) -> u64 {
    if q <= 0.0 {
        return 0;
    }
    let k = (u.ln() / q.ln()).floor();
    if k.is_finite() && k >= 0.0 {
        k as u64
    } else {
        0
    }
}

/// The generator for one cell of the noise field.
pub fn cell_rng(seed: u64, i: usize, j: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((i as u64) << 32) | j as u64);
    rng
}

/// The seed of replica `index` of a run with base seed `seed`. Drawn from a
/// stream no cell stream can reach (cell streams keep the top bit clear).
pub fn replica_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1 << 63);
    rng.set_word_pos(u128::from(index) * 2);
    rng.next_u64()
}

/// Independent `w(i, j) ~ Geom(x_i y_j)` on the `m × n` window.
pub fn sample_full(params: &FullSpaceParams, m: usize, n: usize, seed: u64) -> Result<WeightMatrix> {
    params.validate(m, n)?;
    let q: Vec<Vec<f64>> = (1..=m)
        .map(|i| (1..=n).map(|j| rational::to_f64(&params.q(i, j))).collect())
        .collect();
    Ok(WeightMatrix::from_fn(m, n, |c| {
        let qc = q[c.col - 1][c.row - 1];
        if qc == 0.0 {
            return 0;
        }
        let u = 1.0 - cell_rng(seed, c.col, c.row).gen::<f64>();
        geometric_from_uniform(qc, u)
    }))
}

/// A symmetric `n × n` window: `w(i, j) = w(j, i) ~ Geom(x_i x_j)` off the
/// diagonal and `w(i, i) ~ Geom(c x_i)`. The pair `{i, j}` shares the stream
/// keyed by `(min, max)`.
pub fn sample_half(params: &HalfSpaceParams, n: usize, seed: u64) -> Result<WeightMatrix> {
    params.validate(n)?;
    let q: Vec<Vec<f64>> = (1..=n)
        .map(|i| (1..=n).map(|j| rational::to_f64(&params.q(i, j))).collect())
        .collect();
    let mut upper = vec![vec![0u64; n + 1]; n + 1];
    for i in 1..=n {
        for j in i..=n {
            let qc = q[i - 1][j - 1];
            if qc > 0.0 {
                let u = 1.0 - cell_rng(seed, i, j).gen::<f64>();
                upper[i][j] = geometric_from_uniform(qc, u);
            }
        }
    }
    Ok(WeightMatrix::from_fn(n, n, |c| upper[c.col.min(c.row)][c.col.max(c.row)]))
}

/// `λ(v)` at every vertex of a down-right path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LppObservation {
    pub path: DownRightPath,
    pub lambdas: Vec<Partition>,
}

/// Reads `λ(u, v)` along `gamma` from one growth pass over the bounding
/// rectangle of the path.
pub fn observe(w: &WeightMatrix, gamma: &DownRightPath) -> Result<LppObservation> {
    let (m, n) = (gamma.end().0, gamma.start().1);
    if m > w.cols() || n > w.rows() {
        return Err(Error::OutOfSupport(Cell::new(m, n)));
    }
    let table = grow_rectangle(w, m, n)?;
    Ok(LppObservation { path: gamma.clone(), lambdas: table.read_along(gamma)? })
}

/// `G_1(v_i), …, G_{k_max}(v_i)` as prefix sums of `λ(v_i)`.
pub fn g_times(obs: &LppObservation, i: usize, k_max: usize) -> Result<Vec<u64>> {
    let lam = obs.lambdas.get(i).ok_or_else(|| {
        Error::BadParameter(format!("vertex index {i} out of range 0..={}", obs.lambdas.len() - 1))
    })?;
    Ok((1..=k_max)
        .scan(0, |acc, k| {
            *acc += lam.part(k);
            Some(*acc)
        })
        .collect())
}
