//! Chain rearrangements that turn disjoint NE-chains into disjoint up-right
//! paths without losing weight.
//!
//! Everything except [`maximalize`] and [`straighten`] works in diagram
//! coordinates: `Cell { col, row }` with row 1 the longest row of a Young
//! diagram. A chain there runs with columns weakly increasing and rows weakly
//! decreasing, so that the boundary of a diagram is itself a chain. A matrix
//! cell `(i, j)` of an `m × n` matrix corresponds to the diagram cell
//! `(i, n + 1 - j)` of the rectangle `R = (m^n)`; under this map matrix
//! NE-chains and diagram chains correspond, as do up-right paths and
//! connected boundary chains.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::greene::brute::family_covering;
use crate::partition::{
    boundary, boundary_chain, interior, min_diagram_containing, part_max, part_min, Cell,
    Partition,
};
use crate::shapes::{chain_weight, is_ne_chain, is_up_right, pairwise_disjoint, WeightMatrix};

pub fn matrix_to_diagram(cell: Cell, n: usize) -> Cell {
    Cell::new(cell.col, n + 1 - cell.row)
}

pub fn diagram_to_matrix(cell: Cell, n: usize) -> Cell {
    Cell::new(cell.col, n + 1 - cell.row)
}

/// A random family of `k` disjoint NE-chains in the `m × n` matrix, built
/// from random monotone walks with repeated cells dropped. Chains may be
/// empty.
pub fn random_matrix_family<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, k: usize) -> Vec<Vec<Cell>> {
    let mut used = BTreeSet::new();
    (0..k)
        .map(|_| {
            let mut chain = Vec::new();
            let (mut c, mut r) = (rng.gen_range(1..=m), rng.gen_range(1..=n));
            for _ in 0..rng.gen_range(0..=m + n) {
                if used.insert(Cell::new(c, r)) {
                    chain.push(Cell::new(c, r));
                }
                c += rng.gen_range(0..=1);
                r += rng.gen_range(0..=2);
                if c > m || r > n {
                    break;
                }
            }
            chain
        })
        .collect()
}

/// Matrix chains of an `n`-row matrix as diagram chains in `R = (m^n)`.
pub fn family_to_diagram(chains: &[Vec<Cell>], n: usize) -> Vec<Vec<Cell>> {
    chains
        .iter()
        .map(|c| diagram_order(c.iter().map(|&x| matrix_to_diagram(x, n))))
        .collect()
}

/// Sorts a cell set into diagram-chain order: columns ascending, rows
/// descending.
pub fn diagram_order(cells: impl IntoIterator<Item = Cell>) -> Vec<Cell> {
    let mut v: Vec<Cell> = cells.into_iter().collect();
    v.sort_by(|a, b| a.col.cmp(&b.col).then(b.row.cmp(&a.row)));
    v.dedup();
    v
}

/// Whether the cells, taken as a set, form a chain in diagram coordinates.
pub fn is_diagram_chain(cells: &[Cell]) -> bool {
    let sorted = diagram_order(cells.iter().copied());
    sorted.len() == cells.len() && sorted.windows(2).all(|w| w[0].row >= w[1].row)
}

/// `λ(χ)`: the smallest diagram containing the chain.
pub fn lambda_of(chain: &[Cell]) -> Partition {
    min_diagram_containing(chain)
}

fn union(chains: &[Vec<Cell>]) -> BTreeSet<Cell> {
    chains.iter().flatten().copied().collect()
}

/// Rearranges two disjoint chains so that the first covers the boundary of
/// `λ = max(λ(χ1), λ(χ2))` and the second sits inside its interior.
pub fn twist(chi1: &[Cell], chi2: &[Cell]) -> Result<(Vec<Cell>, Vec<Cell>)> {
    let a: BTreeSet<Cell> = chi1.iter().copied().collect();
    let b: BTreeSet<Cell> = chi2.iter().copied().collect();
    if !a.is_disjoint(&b) {
        return Err(Error::NotDisjoint);
    }
    let (la, lb) = (lambda_of(chi1), lambda_of(chi2));
    let lam = part_max(&la, &lb);
    let mu = part_min(&la, &lb);
    let edge_lam = boundary(&lam);
    let edge_mu = boundary(&mu);
    let both: BTreeSet<Cell> = a.union(&b).copied().collect();
    let first = diagram_order(both.iter().copied().filter(|c| edge_lam.contains(c)));
    let second = diagram_order(
        both.iter().copied().filter(|c| edge_mu.contains(c) && !edge_lam.contains(c)),
    );
    if first.len() + second.len() != both.len() {
        return Err(Error::Internal("twist lost cells of the union".into()));
    }
    Ok((first, second))
}

/// Nested diagrams `λ¹ ⊆ … ⊆ λᵏ ⊆ λ` with `λⁱ ⊆ interior(λ^{i+1})` whose
/// boundaries cover the given chains.
///
/// For `k ≥ 2` the last chain is twisted in turn against chains `1, …, k-1`,
/// after which it spans `λᵏ = λ(χ_k)` and the others lie in the interior of
/// `λᵏ`; the first `k - 1` chains are then handled recursively inside that
/// interior.
pub fn layers_decompose(chains: &[Vec<Cell>], lam: &Partition) -> Result<Vec<Partition>> {
    for chain in chains {
        if !is_diagram_chain(chain) {
            return Err(Error::NotAChain(chain.clone()));
        }
        if !chain.iter().all(|&c| lam.contains_cell(c)) {
            return Err(Error::ChainNotContained);
        }
    }
    if !pairwise_disjoint(chains) {
        return Err(Error::NotDisjoint);
    }
    let mut work: Vec<Vec<Cell>> = chains.to_vec();
    let mut layers = Vec::with_capacity(chains.len());
    let mut outer = lam.clone();
    while let Some(k) = work.len().checked_sub(1) {
        for m in 0..k {
            let (top, inner) = twist(&work[k], &work[m])?;
            work[k] = top;
            work[m] = inner;
        }
        let top = lambda_of(&work[k]);
        if !outer.contains(&top) {
            return Err(Error::Internal(format!("layer {top} escapes {outer}")));
        }
        outer = interior(&top);
        work.pop();
        for chain in &work {
            if !chain.iter().all(|&c| outer.contains_cell(c)) {
                return Err(Error::Internal("twisted chain left the interior".into()));
            }
        }
        layers.push(top);
    }
    layers.reverse();
    Ok(layers)
}

/// Checks the two defining properties of a layer decomposition together with
/// nesting inside `lam`.
pub fn check_layers(chains: &[Vec<Cell>], lam: &Partition, layers: &[Partition]) -> bool {
    if layers.len() != chains.len() {
        return false;
    }
    let nested = layers.windows(2).all(|w| interior(&w[1]).contains(&w[0]));
    let inside = layers.last().is_none_or(|top| lam.contains(top));
    let edges: BTreeSet<Cell> = layers.iter().flat_map(boundary).collect();
    let disjoint_edges = layers.iter().map(|l| boundary(l).len()).sum::<usize>() == edges.len();
    let covered = union(chains).is_subset(&edges);
    let edges_are_chains = layers.iter().all(|l| is_diagram_chain(&boundary_chain(l)));
    nested && inside && disjoint_edges && covered && edges_are_chains
}

/// Whether the union of `chains` (diagram coordinates, inside `R = (m^n)`)
/// contains all corner cells `(j, n - k + j)` and `(m - j + 1, k + 1 - j)` for
/// `j = 1, …, k`.
pub fn check_offdiag(chains: &[Vec<Cell>], m: usize, n: usize, k: usize) -> bool {
    if k > m.min(n) {
        return false;
    }
    let cells = union(chains);
    (1..=k).all(|j| {
        cells.contains(&Cell::new(j, n - k + j)) && cells.contains(&Cell::new(m - j + 1, k + 1 - j))
    })
}

fn validate_matrix_family(chains: &[Vec<Cell>], m: usize, n: usize) -> Result<()> {
    for chain in chains {
        let mut sorted = chain.clone();
        sorted.sort();
        if !is_ne_chain(&sorted) {
            return Err(Error::NotAChain(chain.clone()));
        }
        if let Some(&c) =
            chain.iter().find(|c| !(1..=m).contains(&c.col) || !(1..=n).contains(&c.row))
        {
            return Err(Error::OutOfSupport(c));
        }
    }
    if !pairwise_disjoint(chains) {
        return Err(Error::NotDisjoint);
    }
    Ok(())
}

/// Enlarges a family of `k` disjoint NE-chains in the `m × n` matrix until
/// its union is maximal under inclusion.
///
/// Single cells are first appended greedily. Since a greedy fixed point need
/// not be maximal (a larger union may require rerouting the chains), each
/// remaining cell is then tested exactly: if some family covers the current
/// union plus that cell, the family is replaced by it and the greedy phase
/// resumes.
pub fn maximalize(chains: &[Vec<Cell>], m: usize, n: usize, k: usize) -> Result<Vec<Vec<Cell>>> {
    if chains.len() > k {
        return Err(Error::BadParameter(format!("{} chains given for k = {k}", chains.len())));
    }
    validate_matrix_family(chains, m, n)?;
    let mut family: Vec<Vec<Cell>> = chains.to_vec();
    family.resize(k, Vec::new());
    for chain in &mut family {
        chain.sort();
    }
    let all: Vec<Cell> = (1..=m).flat_map(|c| (1..=n).map(move |r| Cell::new(c, r))).collect();
    'outer: loop {
        let mut grew = true;
        while grew {
            grew = false;
            let used = union(&family);
            for &cell in all.iter().filter(|c| !used.contains(c)) {
                if let Some(chain) = family.iter_mut().find(|ch| {
                    ch.iter().all(|d| (d.col <= cell.col && d.row <= cell.row) || (d.col >= cell.col && d.row >= cell.row))
                }) {
                    chain.push(cell);
                    chain.sort();
                    grew = true;
                    break;
                }
            }
        }
        let used = union(&family);
        for &cell in all.iter().filter(|c| !used.contains(c)) {
            let mut required = used.clone();
            required.insert(cell);
            if let Some(bigger) = family_covering(&required, m, n, k)? {
                family = bigger;
                continue 'outer;
            }
        }
        return Ok(family);
    }
}

/// Turns `k` disjoint NE-chains in `a` into `k` disjoint up-right paths, path
/// `i` running from `(1, k - i + 1)` to `(m, n - i + 1)`, of at least the same
/// total weight.
pub fn straighten(chains: &[Vec<Cell>], a: &WeightMatrix, k: usize) -> Result<Vec<Vec<Cell>>> {
    let (m, n) = (a.cols(), a.rows());
    if k == 0 || k > m.min(n) {
        return Err(Error::BadParameter(format!("k = {k} must lie in 1..=min(m, n)")));
    }
    validate_matrix_family(chains, m, n)?;
    let before: u64 = chains.iter().map(|c| chain_weight(a, c)).sum::<Result<u64>>()?;
    let family = maximalize(chains, m, n, k)?;
    let diagram: Vec<Vec<Cell>> = family
        .iter()
        .map(|c| diagram_order(c.iter().map(|&x| matrix_to_diagram(x, n))))
        .collect();
    let rect = Partition::new(vec![m as u64; n])?;
    let layers = layers_decompose(&diagram, &rect)?;
    let edges: Vec<Vec<Cell>> = layers.iter().map(boundary_chain).collect();
    if union(&edges) != union(&diagram) {
        return Err(Error::Internal("maximal family is not a union of boundaries".into()));
    }
    let mut paths = Vec::with_capacity(k);
    for (idx, edge) in edges.iter().enumerate() {
        let i = idx + 1;
        let path: Vec<Cell> = edge.iter().map(|&c| diagram_to_matrix(c, n)).collect();
        if !is_up_right(&path) || path.first() != Some(&Cell::new(1, k - i + 1)) {
            return Err(Error::Internal(format!("boundary {i} does not start at (1,{})", k - i + 1)));
        }
        let pivot = Cell::new(m - k + i, n - i + 1);
        let cut = path
            .iter()
            .position(|&c| c == pivot)
            .ok_or_else(|| Error::Internal(format!("boundary {i} misses {pivot:?}")))?;
        let mut straight: Vec<Cell> = path[..=cut].to_vec();
        straight.extend((m - k + i + 1..=m).map(|col| Cell::new(col, n - i + 1)));
        paths.push(straight);
    }
    if !pairwise_disjoint(&paths) || !paths.iter().all(|p| is_up_right(p)) {
        return Err(Error::Internal("straightened paths are not disjoint up-right paths".into()));
    }
    let after: u64 = paths.iter().map(|p| chain_weight(a, p)).sum::<Result<u64>>()?;
    if after < before {
        return Err(Error::NotOptimal { chains: before, paths: after });
    }
    Ok(paths)
}
