//! The local growth rules F¹ and B¹ and the RSK bijections between fillings
//! of Ferrers shapes and interlacing partition sequences.

use std::collections::HashMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::{interlaces, Cell, Partition};
use crate::shapes::{
    growth_order, shape_of, DownRightPath, FerrersShape, Filling, GrowthOrder, Step, Vertex,
    WeightMatrix,
};

/// A forward local rule `(ρ, μ, ν, m) ↦ λ`. The growth drivers take the rule
/// as a parameter so that the fuzzer can exercise deliberately broken rules.
pub type LocalRule = fn(&Partition, &Partition, &Partition, u64) -> Result<Partition>;

/// Algorithm F¹: the unique `λ ⪰ μ, ν` paired with `(ρ, m)`.
pub fn forward_f1(rho: &Partition, mu: &Partition, nu: &Partition, m: u64) -> Result<Partition> {
    if !interlaces(mu, rho) || !interlaces(nu, rho) {
        return Err(Error::PreconditionViolation(format!(
            "F1 needs ρ ⪯ μ and ρ ⪯ ν, got ρ = {rho}, μ = {mu}, ν = {nu}"
        )));
    }
    let mut parts = Vec::with_capacity(mu.len().max(nu.len()) + 1);
    let mut carry = m;
    let mut i = 1;
    loop {
        let lam_i = mu.part(i).max(nu.part(i)) + carry;
        if lam_i == 0 {
            break;
        }
        parts.push(lam_i);
        carry = mu.part(i).min(nu.part(i)) - rho.part(i);
        i += 1;
    }
    let lam = Partition::new(parts)
        .map_err(|e| Error::Internal(format!("F1 produced a non-partition: {e}")))?;
    assert_eq!(
        lam.weight() + rho.weight(),
        m + mu.weight() + nu.weight(),
        "mass preservation failed in F1 at ρ = {rho}, μ = {mu}, ν = {nu}, m = {m}"
    );
    Ok(lam)
}

/// Algorithm B¹: inverts [`forward_f1`] for fixed `μ, ν`.
pub fn backward_b1(lam: &Partition, mu: &Partition, nu: &Partition) -> Result<(Partition, u64)> {
    if !interlaces(lam, mu) || !interlaces(lam, nu) {
        return Err(Error::PreconditionViolation(format!(
            "B1 needs λ ⪰ μ and λ ⪰ ν, got λ = {lam}, μ = {mu}, ν = {nu}"
        )));
    }
    let mut rho = vec![0u64; lam.len()];
    let mut carry = 0u64;
    for i in (1..=lam.len()).rev() {
        rho[i - 1] = (mu.part(i).min(nu.part(i))).checked_sub(carry).ok_or_else(|| {
            Error::PreconditionViolation(format!("B1 underflow at row {i} for λ = {lam}"))
        })?;
        carry = lam.part(i) - mu.part(i).max(nu.part(i));
    }
    let rho = Partition::new(rho)
        .map_err(|e| Error::PreconditionViolation(format!("B1 produced a non-partition: {e}")))?;
    if !interlaces(mu, &rho) || !interlaces(nu, &rho) {
        return Err(Error::PreconditionViolation(format!(
            "B1 output ρ = {rho} does not interlace with μ = {mu}, ν = {nu}"
        )));
    }
    Ok((rho, carry))
}

/// The partitions `λ^(u,v)` attached to the cells of a Ferrers shape.
/// Reads with a zero coordinate return `∅`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthTable {
    shape: FerrersShape,
    rows: Vec<Vec<Partition>>,
}

static EMPTY: Partition = Partition::empty();

impl GrowthTable {
    pub fn shape(&self) -> &FerrersShape {
        &self.shape
    }

    /// `λ^(u,v)`; `∅` on the axes. Panics outside the shape.
    pub fn get(&self, u: usize, v: usize) -> &Partition {
        if u == 0 || v == 0 {
            return &EMPTY;
        }
        &self.rows[v - 1][u - 1]
    }

    pub fn try_get(&self, u: usize, v: usize) -> Option<&Partition> {
        if u == 0 || v == 0 {
            return Some(&EMPTY);
        }
        self.rows.get(v - 1)?.get(u - 1)
    }

    /// The sequence read along the vertices of `path`.
    pub fn read_along(&self, path: &DownRightPath) -> Result<Vec<Partition>> {
        path.vertices()
            .into_iter()
            .map(|(x, y)| {
                self.try_get(x, y).cloned().ok_or(Error::OutOfSupport(Cell::new(x, y)))
            })
            .collect()
    }
}

impl Serialize for GrowthTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.shape.len()))?;
        for c in self.shape.cells() {
            map.serialize_entry(&format!("{},{}", c.col, c.row), self.get(c.col, c.row))?;
        }
        map.end()
    }
}

/// Runs the growth over `filling` in the given cell order with `rule`.
pub fn grow_with(filling: &Filling, order: GrowthOrder, rule: LocalRule) -> Result<GrowthTable> {
    let shape = filling.shape().clone();
    let mut rows: Vec<Vec<Partition>> =
        (1..=shape.height()).map(|j| vec![Partition::empty(); shape.row_len(j)]).collect();
    let read = |rows: &Vec<Vec<Partition>>, u: usize, v: usize| -> Partition {
        if u == 0 || v == 0 {
            Partition::empty()
        } else {
            rows[v - 1][u - 1].clone()
        }
    };
    for cell in growth_order(&shape, order) {
        let (u, v) = (cell.col, cell.row);
        let rho = read(&rows, u - 1, v - 1);
        let nu = read(&rows, u - 1, v);
        let mu = read(&rows, u, v - 1);
        let m = filling.get(cell).expect("cell of the shape");
        rows[v - 1][u - 1] = rule(&rho, &mu, &nu, m)?;
    }
    Ok(GrowthTable { shape, rows })
}

pub fn grow(filling: &Filling) -> Result<GrowthTable> {
    grow_with(filling, GrowthOrder::RowMajor, forward_f1)
}

/// `RSK_γ(f)`: the growth table of `f` read along `γ`.
pub fn rsk_gamma(filling: &Filling, gamma: &DownRightPath) -> Result<Vec<Partition>> {
    rsk_gamma_with(filling, gamma, forward_f1)
}

pub fn rsk_gamma_with(
    filling: &Filling,
    gamma: &DownRightPath,
    rule: LocalRule,
) -> Result<Vec<Partition>> {
    if &shape_of(gamma)? != filling.shape() {
        return Err(Error::ShapeMismatch);
    }
    grow_with(filling, GrowthOrder::RowMajor, rule)?.read_along(gamma)
}

/// Checks that `seq` has the interlacing pattern dictated by the word of
/// `path`: `λ^i ⪰ λ^{i-1}` on R steps and `λ^i ⪯ λ^{i-1}` on D steps.
pub fn follows_pattern(path: &DownRightPath, seq: &[Partition]) -> bool {
    seq.len() == path.len() + 1
        && path.word().iter().enumerate().all(|(i, step)| match step {
            Step::R => interlaces(&seq[i + 1], &seq[i]),
            Step::D => interlaces(&seq[i], &seq[i + 1]),
        })
}

/// The inverse of [`rsk_gamma`], peeling corner cells with B¹.
pub fn rsk_gamma_inverse(seq: &[Partition], gamma: &DownRightPath) -> Result<Filling> {
    let shape = shape_of(gamma)?;
    if seq.len() != gamma.len() + 1 {
        return Err(Error::NotInImage(format!(
            "expected {} partitions, got {}",
            gamma.len() + 1,
            seq.len()
        )));
    }
    if !follows_pattern(gamma, seq) {
        return Err(Error::NotInImage("interlacing pattern violated".into()));
    }
    let mut at: HashMap<Vertex, Partition> = HashMap::with_capacity(seq.len() + shape.len());
    for (v, lam) in gamma.vertices().into_iter().zip(seq) {
        if (v.0 == 0 || v.1 == 0) && !lam.is_empty() {
            return Err(Error::NotInImage(format!("nonempty partition {lam} on the axis at {v:?}")));
        }
        at.insert(v, lam.clone());
    }
    let lookup = |at: &HashMap<Vertex, Partition>, u: usize, v: usize| -> Result<Partition> {
        if u == 0 || v == 0 {
            return Ok(Partition::empty());
        }
        at.get(&(u, v))
            .cloned()
            .ok_or_else(|| Error::Internal(format!("vertex ({u},{v}) missing during peeling")))
    };
    let mut filling = Filling::zeros(shape.clone());
    for cell in growth_order(&shape, GrowthOrder::RowMajor).into_iter().rev() {
        let (u, v) = (cell.col, cell.row);
        let lam = lookup(&at, u, v)?;
        let mu = lookup(&at, u, v - 1)?;
        let nu = lookup(&at, u - 1, v)?;
        let (rho, m) = backward_b1(&lam, &mu, &nu).map_err(|e| Error::NotInImage(e.to_string()))?;
        if (u == 1 || v == 1) && !rho.is_empty() {
            return Err(Error::NotInImage(format!("cell ({u},{v}) peels to nonempty ρ = {rho}")));
        }
        at.remove(&(u, v));
        if u > 1 && v > 1 {
            at.insert((u - 1, v - 1), rho);
        }
        filling.set(cell, m)?;
    }
    Ok(filling)
}

/// `λ(u, v)` on the whole `m × n` rectangle of `w`.
pub fn grow_rectangle(w: &WeightMatrix, m: usize, n: usize) -> Result<GrowthTable> {
    grow_rectangle_with(w, m, n, forward_f1)
}

pub fn grow_rectangle_with(
    w: &WeightMatrix,
    m: usize,
    n: usize,
    rule: LocalRule,
) -> Result<GrowthTable> {
    if m > w.cols() || n > w.rows() {
        return Err(Error::OutOfSupport(Cell::new(m, n)));
    }
    let filling = Filling::from_matrix(w, FerrersShape::rectangle(m, n))?;
    grow_with(&filling, GrowthOrder::RowMajor, rule)
}

/// Column-by-column growth over a strip of fixed height, keeping only the
/// most recent column in memory.
#[derive(Debug, Clone)]
pub struct ColumnGrowth {
    column: Vec<Partition>,
    cols_done: usize,
}

impl ColumnGrowth {
    pub fn new(height: usize) -> Self {
        ColumnGrowth { column: vec![Partition::empty(); height], cols_done: 0 }
    }

    pub fn height(&self) -> usize {
        self.column.len()
    }

    pub fn columns_done(&self) -> usize {
        self.cols_done
    }

    /// Adds the next column of weights (bottom to top) and returns
    /// `λ(u, 1..=n)` for the new column index `u`.
    pub fn push_column(&mut self, weights: &[u64]) -> Result<&[Partition]> {
        if weights.len() != self.column.len() {
            return Err(Error::LengthMismatch { expected: self.column.len(), got: weights.len() });
        }
        let mut below = Partition::empty();
        let mut below_left = Partition::empty();
        for (j, &m) in weights.iter().enumerate() {
            let left = std::mem::take(&mut self.column[j]);
            let lam = forward_f1(&below_left, &below, &left, m)?;
            below_left = left;
            below = lam.clone();
            self.column[j] = lam;
        }
        self.cols_done += 1;
        Ok(&self.column)
    }

    pub fn column(&self) -> &[Partition] {
        &self.column
    }
}

/// `RSK^sym_γ(f)`: the second half of `RSK_γ(f)` for a symmetric path and a
/// symmetric filling.
pub fn rsk_symmetric(filling: &Filling, gamma_sym: &DownRightPath) -> Result<Vec<Partition>> {
    if !gamma_sym.is_symmetric() || !filling.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let full = rsk_gamma(filling, gamma_sym)?;
    let r = gamma_sym.len() / 2;
    if full.iter().ne(full.iter().rev()) {
        return Err(Error::Internal("symmetric growth did not give a palindrome".into()));
    }
    Ok(full[r..].to_vec())
}

/// The inverse of [`rsk_symmetric`].
pub fn rsk_symmetric_inverse(half: &[Partition], gamma_sym: &DownRightPath) -> Result<Filling> {
    if !gamma_sym.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let r = gamma_sym.len() / 2;
    if half.len() != r + 1 {
        return Err(Error::LengthMismatch { expected: r + 1, got: half.len() });
    }
    let mut full: Vec<Partition> = half[1..].iter().rev().cloned().collect();
    full.extend_from_slice(half);
    let filling = rsk_gamma_inverse(&full, gamma_sym)?;
    if !filling.is_symmetric() {
        return Err(Error::Internal("inverse growth gave an asymmetric filling".into()));
    }
    Ok(filling)
}
