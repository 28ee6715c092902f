//! Exhaustive `g_k` and `h_k`.
//!
//! Both oracles are dynamic programmes over an explicit state space rather
//! than clever algorithms, so their correctness is easy to audit. Cells are in
//! matrix coordinates `(col, row)` with row 1 at the bottom.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::partition::Cell;
use crate::shapes::WeightMatrix;

/// Hard cap on the number of DP states visited by one oracle call.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Maximum total weight of `k` pairwise disjoint up-right paths, path `i`
/// running from `(1, i)` to `(m, n - k + i)`. For `k > min(m, n)` this is
/// the total mass.
pub fn brute_g_k(a: &WeightMatrix, k: usize) -> Result<u64> {
    brute_g_k_budget(a, k, DEFAULT_BUDGET)
}

pub fn brute_g_k_budget(a: &WeightMatrix, k: usize, budget: u64) -> Result<u64> {
    let (m, n) = (a.cols(), a.rows());
    if k == 0 {
        return Ok(0);
    }
    if k > m.min(n) {
        return Ok(a.total());
    }
    // State after a column: the rows e_1 < … < e_k where each path leaves it.
    let mut layer: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let starts: Vec<usize> = (1..=k).collect();
    let mut visited = 0u64;
    for col in 1..=m {
        // prefix[r] = sum of rows 1..=r in this column.
        let prefix: Vec<u64> = std::iter::once(0)
            .chain((1..=n).scan(0, |acc, r| {
                *acc += a.get(Cell::new(col, r));
                Some(*acc)
            }))
            .collect();
        let last = col == m;
        let sources: Vec<(Vec<usize>, u64)> = if col == 1 {
            vec![(starts.clone(), 0)]
        } else {
            std::mem::take(&mut layer).into_iter().collect()
        };
        let mut next: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for (begin, base) in sources {
            let mut ends = vec![0; k];
            extend_column(&begin, &prefix, n, k, last, 0, base, &mut ends, &mut |state, w| {
                let slot = next.entry(state.to_vec()).or_insert(0);
                *slot = (*slot).max(w);
            });
            visited += next.len() as u64;
            if visited > budget {
                return Err(Error::TooLarge { budget });
            }
        }
        layer = next;
    }
    let target: Vec<usize> = (1..=k).map(|i| n - k + i).collect();
    layer
        .get(&target)
        .copied()
        .ok_or_else(|| Error::Internal("no admissible path family".into()))
}

#[allow(clippy::too_many_arguments)]
fn extend_column(
    begin: &[usize],
    prefix: &[u64],
    n: usize,
    k: usize,
    last: bool,
    i: usize,
    acc: u64,
    ends: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], u64),
) {
    if i == k {
        emit(ends, acc);
        return;
    }
    let lo = begin[i];
    let hi = if i + 1 < k { begin[i + 1] - 1 } else { n };
    let range = if last { (n - k + i + 1)..=(n - k + i + 1) } else { lo..=hi };
    for e in range {
        if e < lo || e > hi {
            continue;
        }
        ends[i] = e;
        let w = prefix[e] - prefix[lo - 1];
        extend_column(begin, prefix, n, k, last, i + 1, acc + w, ends, emit);
    }
}

/// Maximum total weight of `k` pairwise disjoint NE-chains in the support of
/// `a`; empty chains are allowed.
pub fn brute_h_k(a: &WeightMatrix, k: usize) -> Result<u64> {
    let (m, n) = (a.cols(), a.rows());
    let k_eff = k.min(m).min(n);
    if k_eff == 0 {
        return Ok(0);
    }
    let mut layer: BTreeMap<Vec<usize>, u64> = BTreeMap::from([(vec![0; k_eff], 0)]);
    let mut visited = 0u64;
    for c in 1..=m {
        for r in 1..=n {
            let w = a.get(Cell::new(c, r));
            let mut next: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
            for (state, &value) in &layer {
                let slot = next.entry(state.clone()).or_insert(0);
                *slot = (*slot).max(value);
                let mut prev_last = None;
                for (idx, &last) in state.iter().enumerate() {
                    if last <= r && prev_last != Some(last) {
                        prev_last = Some(last);
                        let mut s = state.clone();
                        s[idx] = r;
                        s.sort_unstable();
                        let slot = next.entry(s).or_insert(0);
                        *slot = (*slot).max(value + w);
                    }
                }
            }
            visited += next.len() as u64;
            if visited > DEFAULT_BUDGET {
                return Err(Error::TooLarge { budget: DEFAULT_BUDGET });
            }
            layer = next;
        }
    }
    Ok(layer.into_values().max().unwrap_or(0))
}

/// An optimal family for [`brute_h_k`], padded with empty chains to length `k`.
pub fn optimal_ne_chains(a: &WeightMatrix, k: usize) -> Result<(u64, Vec<Vec<Cell>>)> {
    best_chain_family(a.cols(), a.rows(), k, |c| a.get(c), DEFAULT_BUDGET)
}

/// A family of `k` disjoint NE-chains inside `m × n` whose union contains
/// `required`, if one exists.
pub fn family_covering(
    required: &BTreeSet<Cell>,
    m: usize,
    n: usize,
    k: usize,
) -> Result<Option<Vec<Vec<Cell>>>> {
    let (best, family) =
        best_chain_family(m, n, k, |c| u64::from(required.contains(&c)), DEFAULT_BUDGET)?;
    Ok((best == required.len() as u64).then_some(family))
}

/// Cells are scanned column by column, bottom to top. A chain can take the
/// current cell iff its last cell is in a row no higher, so the state is the
/// multiset of the chains' last rows (0 for a chain that is still empty).
pub fn best_chain_family(
    m: usize,
    n: usize,
    k: usize,
    weight: impl Fn(Cell) -> u64,
    budget: u64,
) -> Result<(u64, Vec<Vec<Cell>>)> {
    // Rows (or columns) are chains, so more than min(m, n) chains never help.
    let k_eff = k.min(m).min(n);
    if k_eff == 0 {
        return Ok((0, vec![Vec::new(); k]));
    }
    type State = Vec<usize>;
    let cells: Vec<Cell> =
        (1..=m).flat_map(|c| (1..=n).map(move |r| Cell::new(c, r))).collect();
    let mut layer: BTreeMap<State, u64> = BTreeMap::from([(vec![0; k_eff], 0)]);
    // back[t][state] = (previous state, last row of the chain extended).
    let mut back: Vec<BTreeMap<State, (State, Option<usize>)>> = Vec::with_capacity(cells.len());
    let mut visited = 0u64;
    for &cell in &cells {
        let w = weight(cell);
        let mut next: BTreeMap<State, u64> = BTreeMap::new();
        let mut links: BTreeMap<State, (State, Option<usize>)> = BTreeMap::new();
        let mut offer = |state: State, value: u64, from: &State, choice: Option<usize>| {
            match next.get(&state) {
                Some(&old) if old >= value => {}
                _ => {
                    links.insert(state.clone(), (from.clone(), choice));
                    next.insert(state, value);
                }
            }
        };
        for (state, &value) in &layer {
            offer(state.clone(), value, state, None);
            let mut tried = BTreeSet::new();
            for (idx, &last) in state.iter().enumerate() {
                if last <= cell.row && tried.insert(last) {
                    let mut s = state.clone();
                    s[idx] = cell.row;
                    s.sort_unstable();
                    offer(s, value + w, state, Some(last));
                }
            }
        }
        visited += next.len() as u64;
        if visited > budget {
            return Err(Error::TooLarge { budget });
        }
        layer = next;
        back.push(links);
    }
    let (mut state, best) = layer
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(s, v)| (s.clone(), *v))
        .expect("nonempty DP layer");
    let mut choices = vec![None; cells.len()];
    for t in (0..cells.len()).rev() {
        let (prev, choice) = back[t][&state].clone();
        choices[t] = choice;
        state = prev;
    }
    let mut chains: Vec<Vec<Cell>> = vec![Vec::new(); k];
    let mut lasts = vec![0usize; k_eff];
    for (cell, choice) in cells.iter().zip(choices) {
        if let Some(last) = choice {
            let idx = lasts.iter().position(|&l| l == last).expect("consistent traceback");
            lasts[idx] = cell.row;
            chains[idx].push(*cell);
        }
    }
    Ok((best, chains))
}

/// The classical single-path last passage time by the recurrence
/// `G(i, j) = a(i, j) + max(G(i - 1, j), G(i, j - 1))`.
pub fn single_path_lpp(a: &WeightMatrix) -> u64 {
    let (m, n) = (a.cols(), a.rows());
    let mut g = vec![vec![0u64; n + 1]; m + 1];
    for i in 1..=m {
        for j in 1..=n {
            g[i][j] = a.get(Cell::new(i, j)) + g[i - 1][j].max(g[i][j - 1]);
        }
    }
    g[m][n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{chain_weight, is_ne_chain, pairwise_disjoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example() -> WeightMatrix {
        WeightMatrix::from_rows(vec![vec![1, 3], vec![2, 4]]).unwrap()
    }

    /// Assigns each cell to one of `k` chains or to none and keeps the
    /// assignments in which every chain is totally ordered.
    fn naive_h_k(a: &WeightMatrix, k: usize) -> u64 {
        let cells: Vec<Cell> = (1..=a.cols())
            .flat_map(|c| (1..=a.rows()).map(move |r| Cell::new(c, r)))
            .collect();
        let total = (k + 1).pow(cells.len() as u32);
        let mut best = 0;
        for code in 0..total {
            let mut chains = vec![Vec::new(); k];
            let mut x = code;
            for &c in &cells {
                let slot = x % (k + 1);
                x /= k + 1;
                if slot > 0 {
                    chains[slot - 1].push(c);
                }
            }
            if chains.iter().all(|ch| is_ne_chain(ch)) {
                best = best.max(chains.iter().map(|ch| chain_weight(a, ch).unwrap()).sum());
            }
        }
        best
    }

    /// Enumerates all k-tuples of up-right paths with the prescribed
    /// endpoints and keeps the disjoint ones.
    fn naive_g_k(a: &WeightMatrix, k: usize) -> u64 {
        let (m, n) = (a.cols(), a.rows());
        if k > m.min(n) {
            return a.total();
        }
        fn paths(from: Cell, to: Cell) -> Vec<Vec<Cell>> {
            if from == to {
                return vec![vec![from]];
            }
            let mut out = Vec::new();
            if from.col < to.col {
                for mut p in paths(Cell::new(from.col + 1, from.row), to) {
                    p.insert(0, from);
                    out.push(p);
                }
            }
            if from.row < to.row {
                for mut p in paths(Cell::new(from.col, from.row + 1), to) {
                    p.insert(0, from);
                    out.push(p);
                }
            }
            out
        }
        let options: Vec<Vec<Vec<Cell>>> =
            (1..=k).map(|i| paths(Cell::new(1, i), Cell::new(m, n - k + i))).collect();
        let mut best = 0;
        let mut pick = vec![0usize; k];
        loop {
            let family: Vec<Vec<Cell>> =
                (0..k).map(|i| options[i][pick[i]].clone()).collect();
            if pairwise_disjoint(&family) {
                best = best.max(family.iter().map(|p| chain_weight(a, p).unwrap()).sum());
            }
            let mut i = 0;
            while i < k {
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        best
    }

    #[test]
    fn small_examples() {
        let one = WeightMatrix::from_rows(vec![vec![5]]).unwrap();
        assert_eq!(brute_g_k(&one, 1).unwrap(), 5);
        assert_eq!(brute_h_k(&one, 1).unwrap(), 5);
        assert_eq!(brute_h_k(&one, 2).unwrap(), 5);
        let a = example();
        assert_eq!(brute_g_k(&a, 1).unwrap(), 8);
        assert_eq!(brute_g_k(&a, 3).unwrap(), 10);
        assert_eq!(brute_h_k(&a, 1).unwrap(), 8);
        assert_eq!(brute_h_k(&a, 2).unwrap(), 10);
        assert_eq!(brute_h_k(&WeightMatrix::zeros(3, 2), 2).unwrap(), 0);
        assert_eq!(brute_g_k(&WeightMatrix::zeros(0, 0), 1).unwrap(), 0);
    }

    #[test]
    fn witnesses_are_valid_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let a = WeightMatrix::from_fn(m, n, |_| rng.gen_range(0..5));
            for k in 1..=3 {
                let (best, chains) = optimal_ne_chains(&a, k).unwrap();
                assert_eq!(chains.len(), k);
                assert!(pairwise_disjoint(&chains));
                assert!(chains.iter().all(|c| is_ne_chain(c)));
                let w: u64 = chains.iter().map(|c| chain_weight(&a, c).unwrap()).sum();
                assert_eq!(w, best);
                assert_eq!(brute_h_k(&a, k).unwrap(), best);
            }
        }
    }

    #[test]
    fn dp_oracles_agree_with_naive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let (m, n) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let a = WeightMatrix::from_fn(m, n, |_| rng.gen_range(0..4));
            for k in 1..=2 {
                if (k as u64 + 1).pow((m * n) as u32) <= 20_000 {
                    assert_eq!(brute_h_k(&a, k).unwrap(), naive_h_k(&a, k), "{a:?} k={k}");
                }
                assert_eq!(brute_g_k(&a, k).unwrap(), naive_g_k(&a, k), "{a:?} k={k}");
            }
        }
    }

    #[test]
    fn single_path_matches_g1() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = WeightMatrix::from_fn(4, 4, |_| rng.gen_range(0..6));
            assert_eq!(single_path_lpp(&a), brute_g_k(&a, 1).unwrap());
        }
    }

    #[test]
    fn covering_families() {
        let required: BTreeSet<Cell> = [Cell::new(1, 2), Cell::new(2, 1)].into();
        assert!(family_covering(&required, 2, 2, 1).unwrap().is_none());
        let fam = family_covering(&required, 2, 2, 2).unwrap().unwrap();
        let union: BTreeSet<Cell> = fam.iter().flatten().copied().collect();
        assert!(required.is_subset(&union));
        assert!(fam.iter().all(|c| is_ne_chain(c)));
    }

    #[test]
    fn budget_is_enforced() {
        let a = WeightMatrix::from_fn(5, 5, |_| 1);
        assert_eq!(
            best_chain_family(5, 5, 3, |c| a.get(c), 10).unwrap_err(),
            Error::TooLarge { budget: 10 }
        );
        assert_eq!(brute_g_k_budget(&a, 2, 1).unwrap_err(), Error::TooLarge { budget: 1 });
    }
}
