use serde::{Deserialize, Serialize};

use crate::partition::Partition;
use crate::rational::{self, Rational};
use crate::shapes::DownRightPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ExactTruncated,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Full,
    Half,
}

/// One sequence with its observed (or exactly enumerated) probability and its
/// exact model probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub sequence: Vec<Partition>,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(with = "rational::opt_as_string", default, skip_serializing_if = "Option::is_none")]
    pub lhs_exact: Option<Rational>,
    #[serde(with = "rational::as_string")]
    pub rhs_exact: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
}

/// A named side condition checked along the way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub mode: Mode,
    pub side: Side,
    pub path: DownRightPath,
    pub tv_distance: f64,
    /// Exact TV distance in truncated mode.
    #[serde(with = "rational::opt_as_string", default, skip_serializing_if = "Option::is_none")]
    pub tv_exact: Option<Rational>,
    /// `½ Σ |LHS − RHS|` over the enumerated support alone.
    #[serde(with = "rational::opt_as_string", default, skip_serializing_if = "Option::is_none")]
    pub support_discrepancy: Option<Rational>,
    /// Geometric mass lost to truncation, `1 − Σ LHS`.
    #[serde(with = "rational::opt_as_string", default, skip_serializing_if = "Option::is_none")]
    pub truncated_mass: Option<Rational>,
    /// `Σ q_cell^{T+1}`, an upper bound on the truncated mass.
    #[serde(with = "rational::opt_as_string", default, skip_serializing_if = "Option::is_none")]
    pub union_bound: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    /// Monte Carlo samples with some part above the cap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overflow_count: Option<u64>,
    pub support_size: usize,
    pub tolerance: f64,
    pub rows: Vec<SequenceRow>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// A property that failed, with the smallest input found for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub property: String,
    pub input: serde_json::Value,
    pub message: String,
    /// Number of cells in the shrunk input.
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub property: String,
    pub cases: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub budget: u64,
    pub properties: Vec<PropertyOutcome>,
    pub failures: Vec<Counterexample>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreeneCheckReport {
    pub seed: u64,
    pub cols: usize,
    pub rows: usize,
    pub max_entry: u64,
    /// Matrices checked before stopping.
    pub trials: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub pass: bool,
}
