//! Integer partitions and Young diagrams.
//!
//! A [`Partition`] stores its positive parts only; indexing past the length
//! reads zero. Diagram cells use one coordinate system throughout the crate:
//! `Cell { col, row }` with both coordinates starting at 1 and row 1 the
//! longest row. A cell `(i, j)` belongs to `λ` iff `i <= λ_j`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub col: usize,
    pub row: usize,
}

impl Cell {
    pub const fn new(col: usize, row: usize) -> Self {
        Cell { col, row }
    }
}

impl From<(usize, usize)> for Cell {
    fn from((col, row): (usize, usize)) -> Self {
        Cell { col, row }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition(Vec<u64>);

impl Partition {
    pub const fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Builds a partition from a non-increasing list, dropping trailing zeros.
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    /// Like [`Partition::new`] but for callers that have already established
    /// monotonicity. Trailing zeros are still stripped.
    pub(crate) fn from_sorted(mut parts: Vec<u64>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    /// The `i`-th part, 1-based; zero beyond the length.
    pub fn part(&self, i: usize) -> u64 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn first(&self) -> u64 {
        self.part(1)
    }

    /// `λ_1 - λ_2 + λ_3 - ...`
    pub fn alternating_sum(&self) -> u64 {
        self.0
            .chunks(2)
            .map(|pair| pair[0] - pair.get(1).copied().unwrap_or(0))
            .sum()
    }

    /// Diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(o, s)| o <= s)
    }

    pub fn contains_cell(&self, cell: Cell) -> bool {
        cell.col >= 1 && cell.row >= 1 && cell.col as u64 <= self.part(cell.row)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.0.iter().enumerate().flat_map(|(j, &len)| {
            (1..=len as usize).map(move |i| Cell::new(i, j + 1))
        })
    }

    pub fn cell_set(&self) -> BTreeSet<Cell> {
        self.cells().collect()
    }
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u64>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// `λ ⪰ μ`: `λ_1 >= μ_1 >= λ_2 >= μ_2 >= ...`
pub fn interlaces(lam: &Partition, mu: &Partition) -> bool {
    let n = lam.len().max(mu.len());
    (1..=n).all(|i| lam.part(i) >= mu.part(i) && mu.part(i) >= lam.part(i + 1))
}

/// Single-variable skew Schur polynomial `s_{λ/μ}(x)`.
pub fn skew_schur_mono(lam: &Partition, mu: &Partition, x: &Rational) -> Rational {
    if !interlaces(lam, mu) {
        return rational::zero();
    }
    rational::pow(x, lam.weight() - mu.weight())
}

pub fn tau(lam: &Partition, c: &Rational) -> Rational {
    rational::pow(c, lam.alternating_sum())
}

fn zip_parts(lam: &Partition, mu: &Partition, f: impl Fn(u64, u64) -> u64) -> Partition {
    let n = lam.len().max(mu.len());
    Partition::from_sorted((1..=n).map(|i| f(lam.part(i), mu.part(i))).collect())
}

/// Diagram intersection.
pub fn part_min(lam: &Partition, mu: &Partition) -> Partition {
    zip_parts(lam, mu, u64::min)
}

/// Diagram union.
pub fn part_max(lam: &Partition, mu: &Partition) -> Partition {
    zip_parts(lam, mu, u64::max)
}

/// Cells `(i, j)` of `λ` whose diagonal neighbour `(i+1, j+1)` is also in `λ`.
pub fn interior(lam: &Partition) -> Partition {
    Partition::from_sorted((1..=lam.len()).map(|j| lam.part(j + 1).saturating_sub(1)).collect())
}

/// `λ` minus its interior. Always a chain running from the bottom-left cell
/// to the end of the first row.
pub fn boundary(lam: &Partition) -> BTreeSet<Cell> {
    let inner = interior(lam);
    lam.cells()
        .filter(|c| c.col as u64 > inner.part(c.row))
        .collect()
}

/// Boundary cells in chain order: columns weakly increasing, rows weakly
/// decreasing.
pub fn boundary_chain(lam: &Partition) -> Vec<Cell> {
    let mut cells: Vec<Cell> = boundary(lam).into_iter().collect();
    cells.sort_by(|a, b| a.col.cmp(&b.col).then(b.row.cmp(&a.row)));
    cells
}

/// The smallest diagram containing every cell of `cells`.
pub fn min_diagram_containing<'a>(cells: impl IntoIterator<Item = &'a Cell>) -> Partition {
    let mut widest = Vec::<u64>::new();
    for c in cells {
        if c.row == 0 || c.col == 0 {
            continue;
        }
        if widest.len() < c.row {
            widest.resize(c.row, 0);
        }
        widest[c.row - 1] = widest[c.row - 1].max(c.col as u64);
    }
    // λ_j = max over rows r >= j of the widest cell in row r.
    let mut running = 0;
    for w in widest.iter_mut().rev() {
        running = running.max(*w);
        *w = running;
    }
    Partition::from_sorted(widest)
}

/// Every partition whose diagram fits in `max_len` rows of width `max_part`,
/// in lexicographic order.
pub fn partitions_in_box(max_part: u64, max_len: usize) -> Vec<Partition> {
    fn rec(prefix: &mut Vec<u64>, bound: u64, max_len: usize, out: &mut Vec<Partition>) {
        out.push(Partition::from_sorted(prefix.clone()));
        if prefix.len() == max_len {
            return;
        }
        for p in 1..=bound {
            prefix.push(p);
            rec(prefix, p, max_len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), max_part, max_len, &mut out);
    out.sort();
    out
}

/// All partitions of `n`.
pub fn partitions_of(n: u64) -> Vec<Partition> {
    partitions_in_box(n, n as usize)
        .into_iter()
        .filter(|p| p.weight() == n)
        .collect()
}
