//! Acceptance gate: one line per criterion, with the tolerance it was held to.
//!
//! Runs as a plain binary (`harness = false`) so the verdict lines are always
//! printed; the process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lpp_core::greene::{
    brute_g_k, brute_h_k, check_layers, check_offdiag, family_to_diagram, layers_decompose,
    maximalize, optimal_ne_chains, random_matrix_family, straighten,
};
use lpp_core::growth::{forward_f1, grow_rectangle, rsk_gamma, rsk_gamma_inverse};
use lpp_core::lpp::{FullSpaceParams, HalfSpaceParams};
use lpp_core::measure::{normalization_defect, Model};
use lpp_core::partition::{interlaces, partitions_in_box};
use lpp_core::rational::{self, int, pow, ratio};
use lpp_core::shapes::{chain_weight, is_up_right, path_from_word};
use lpp_core::verify::{exact_compare_full, exact_compare_half, mc_compare};
use lpp_core::{Cell, FerrersShape, Filling, Partition, WeightMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

/// All fillings of `shape` with entries in `0..=max`, by mixed-radix count.
fn all_fillings(shape: &FerrersShape, max: u64) -> impl Iterator<Item = Filling> + '_ {
    let cells = shape.cells();
    let total = (max + 1).pow(cells.len() as u32);
    (0..total).map(move |mut idx| {
        let mut values = std::collections::BTreeMap::new();
        for &c in &cells {
            values.insert(c, idx % (max + 1));
            idx /= max + 1;
        }
        Filling::from_fn(shape.clone(), |c| values[&c])
    })
}

fn round_trips(f: &Filling) -> bool {
    let shape = f.shape();
    let Ok(gamma) = shape.boundary_path(shape.width(), shape.height()) else { return false };
    match rsk_gamma(f, &gamma) {
        Ok(seq) => rsk_gamma_inverse(&seq, &gamma).is_ok_and(|back| &back == f),
        Err(_) => false,
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let shapes: Vec<FerrersShape> =
        partitions_in_box(3, 3).into_iter().map(FerrersShape::from_rows).collect();
    let (checked, failures) = shapes
        .par_iter()
        .map(|s| all_fillings(s, 2).fold((0u64, 0u64), |(n, bad), f| (n + 1, bad + u64::from(!round_trips(&f)))))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut random_failures = 0;
    for _ in 0..500 {
        let height = rng.gen_range(0..=6);
        let mut rows: Vec<u64> = (0..height).map(|_| rng.gen_range(1..=6)).collect();
        rows.sort_unstable_by(|a, b| b.cmp(a));
        let shape = FerrersShape::from_rows(Partition::new(rows).unwrap());
        let f = Filling::from_fn(shape, |_| rng.gen_range(0..=5));
        random_failures += u64::from(!round_trips(&f));
    }
    let elapsed = start.elapsed();
    verdict(
        failures == 0 && random_failures == 0 && within(elapsed, 10),
        format!(
            "{checked} exhaustive fillings ({} shapes in 3×3, entries ≤ 2) + 500 random up to 6×6: \
             {failures}+{random_failures} failures (tol 0), {elapsed:.2?} (limit 10s)",
            shapes.len()
        ),
    )
}

/// `g_k = h_k = λ_1 + … + λ_k` for every `k ≤ 4`.
fn greene_mismatches(w: &WeightMatrix) -> u64 {
    let (m, n) = (w.cols(), w.rows());
    let lam = grow_rectangle(w, m, n).unwrap().get(m, n).clone();
    let mut prefix = 0;
    let mut bad = 0;
    for k in 1..=4 {
        prefix += lam.part(k);
        let g = brute_g_k(w, k).unwrap();
        let h = brute_h_k(w, k).unwrap();
        bad += u64::from(g != prefix || h != prefix);
    }
    bad
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let dims: Vec<(usize, usize)> = (1..=3).flat_map(|m| (1..=3).map(move |n| (m, n))).collect();
    let (count, mismatches) = dims
        .par_iter()
        .flat_map(|&(m, n)| {
            let total = 4u64.pow((m * n) as u32);
            (0..total).into_par_iter().map(move |mut idx| {
                let w = WeightMatrix::from_fn(m, n, |_| {
                    let v = idx % 4;
                    idx /= 4;
                    v
                });
                greene_mismatches(&w)
            })
        })
        .fold(|| (0u64, 0u64), |(c, b), x| (c + 1, b + x))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let random: Vec<WeightMatrix> =
        (0..200).map(|_| WeightMatrix::from_fn(5, 5, |_| rng.gen_range(0..=6))).collect();
    let random_mismatches: u64 = random.par_iter().map(greene_mismatches).sum();
    let elapsed = start.elapsed();
    verdict(
        mismatches == 0 && random_mismatches == 0 && within(elapsed, 60),
        format!(
            "{count} matrices within 3×3 (entries ≤ 3) + 200 random 5×5 (entries ≤ 6), k ≤ 4: \
             {mismatches}+{random_mismatches} mismatches (tol 0), {elapsed:.2?} (limit 60s)"
        ),
    )
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let inputs: Vec<WeightMatrix> = (0..500)
        .map(|_| {
            let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
            WeightMatrix::from_fn(m, n, |_| rng.gen_range(0..=6))
        })
        .collect();
    let violations: u64 = inputs
        .par_iter()
        .map(|w| {
            let wt = w.transpose();
            let mut prev = (0u64, u64::MAX);
            let mut bad = 0;
            for k in 1..=w.cols().min(w.rows()) + 1 {
                let h = brute_h_k(w, k).unwrap();
                bad += u64::from(h != brute_h_k(&wt, k).unwrap());
                let inc = h - prev.0;
                bad += u64::from(inc > prev.1);
                prev = (h, inc);
            }
            bad
        })
        .sum();
    verdict(violations == 0, format!("500 random matrices within 5×5: {violations} violations (tol 0)"))
}

fn criterion_4() -> Verdict {
    let gamma = path_from_word((0, 2), "RRDD").unwrap();
    let params = FullSpaceParams::new(vec![ratio(2, 5), ratio(3, 10)], vec![ratio(1, 2), ratio(1, 5)]);
    let start = Instant::now();
    let r6 = exact_compare_full(&gamma, &params, 6).unwrap();
    let r8 = exact_compare_full(&gamma, &params, 8).unwrap();
    let elapsed = start.elapsed();
    let (tv6, tv8) = (r6.tv_exact.clone().unwrap(), r8.tv_exact.clone().unwrap());
    let bound = r6.union_bound.clone().unwrap();
    verdict(
        r6.pass && r8.pass && bound < ratio(1, 1000) && tv8 < tv6 && within(elapsed, 120),
        format!(
            "T=6: TV = {:.3e} ≤ Σq⁷ = {:.3e} (< 1e-3), support discrepancy {}; T=8: TV = {:.3e} < TV(T=6); {elapsed:.2?} (limit 120s)",
            rational::to_f64(&tv6),
            rational::to_f64(&bound),
            r6.support_discrepancy.unwrap(),
            rational::to_f64(&tv8),
        ),
    )
}

fn criterion_5() -> Verdict {
    let gamma = path_from_word((1, 1), "RD").unwrap();
    let params = HalfSpaceParams::new(vec![ratio(1, 2), ratio(1, 3)], ratio(1, 4));
    let r = exact_compare_half(&gamma, &params, 6).unwrap();
    let single = path_from_word((1, 1), "D").unwrap();
    let diag = HalfSpaceParams::new(vec![ratio(1, 2)], ratio(1, 4));
    let s = exact_compare_half(&single, &diag, 6).unwrap();
    // Oracle: Geom(c·x₁) point masses, computed independently of the harness.
    let q = ratio(1, 8);
    let geometric = s.rows.iter().all(|row| {
        let k = row.sequence[0].first();
        row.lhs_exact.clone().unwrap() == (int(1) - &q) * pow(&q, k) && row.rhs_exact == row.lhs_exact.clone().unwrap()
    });
    verdict(
        r.pass && s.pass && geometric && s.support_discrepancy == Some(int(0)) && s.rows.len() == 7,
        format!(
            "N=1,M=1: TV = {:.3e} ≤ {:.3e}; N=1,M=0: support TV = {} over {} sequences, Geom(1/8) law exact",
            r.tv_distance,
            r.tolerance,
            s.support_discrepancy.clone().unwrap(),
            s.rows.len()
        ),
    )
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let rd = path_from_word((0, 1), "RD").unwrap();
    let full = Model::Full(FullSpaceParams::new(vec![ratio(3, 5)], vec![ratio(1, 2)]));
    let a = mc_compare(&rd, &full, 100_000, 2024, 15).unwrap();
    let a2 = mc_compare(&rd, &full, 100_000, 2024, 15).unwrap();
    let dd = path_from_word((2, 2), "DD").unwrap();
    let half = Model::Half(HalfSpaceParams::new(vec![ratio(1, 2), ratio(1, 3)], ratio(1, 4)));
    let b = mc_compare(&dd, &half, 200_000, 2025, 8).unwrap();
    let elapsed = start.elapsed();
    let deterministic = serde_json::to_string(&a).unwrap() == serde_json::to_string(&a2).unwrap();
    verdict(
        a.tv_distance <= 0.02 && b.tv_distance <= 0.03 && a.pass && b.pass && deterministic && within(elapsed, 60),
        format!(
            "full RD q=3/10, n=1e5: TV = {:.4} (tol 0.02); half DD from (2,2), n=2e5: TV = {:.4} (tol 0.03); \
             reproducible: {deterministic}; {elapsed:.2?} (limit 60s)",
            a.tv_distance, b.tv_distance
        ),
    )
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut layer_failures = 0;
    for _ in 0..300 {
        let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let k = rng.gen_range(1..=3);
        let chains = family_to_diagram(&random_matrix_family(&mut rng, m, n, k), n);
        let rect = Partition::new(vec![m as u64; n]).unwrap();
        let ok = layers_decompose(&chains, &rect).is_ok_and(|l| check_layers(&chains, &rect, &l));
        layer_failures += u32::from(!ok);
    }
    let mut offdiag_failures = 0;
    for _ in 0..100 {
        let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let k = rng.gen_range(1..=m.min(n).min(3));
        let start = random_matrix_family(&mut rng, m, n, k);
        let ok = maximalize(&start, m, n, k)
            .is_ok_and(|fam| check_offdiag(&family_to_diagram(&fam, n), m, n, k));
        offdiag_failures += u32::from(!ok);
    }
    let mut straighten_failures = 0;
    for _ in 0..100 {
        let a = WeightMatrix::from_fn(4, 4, |_| rng.gen_range(0..=6));
        let k = rng.gen_range(1..=3);
        let total = |f: &[Vec<Cell>]| f.iter().map(|c| chain_weight(&a, c).unwrap()).sum::<u64>();
        let chains = random_matrix_family(&mut rng, 4, 4, k);
        let paths = straighten(&chains, &a, k).unwrap();
        let (best, optimal) = optimal_ne_chains(&a, k).unwrap();
        let reached = straighten(&optimal, &a, k).unwrap();
        let ok = total(&paths) >= total(&chains)
            && paths.iter().all(|p| is_up_right(p))
            && total(&reached) == best
            && best == brute_g_k(&a, k).unwrap();
        straighten_failures += u32::from(!ok);
    }
    let fig: Vec<Vec<Cell>> = [
        vec![(1, 3), (4, 3), (5, 1)],
        vec![(1, 2), (3, 2), (4, 2), (4, 1)],
        vec![(2, 4), (2, 2), (2, 1)],
    ]
    .iter()
    .map(|c| c.iter().copied().map(Cell::from).collect())
    .collect();
    let lam = Partition::new(vec![5, 4, 4, 3, 2]).unwrap();
    let witness: Vec<Partition> = [vec![2], vec![3, 3, 1], vec![5, 4, 4, 2]]
        .into_iter()
        .map(|p| Partition::new(p).unwrap())
        .collect();
    let figure = layers_decompose(&fig, &lam).is_ok_and(|l| l == witness) && check_layers(&fig, &lam, &witness);
    verdict(
        layer_failures + offdiag_failures + straighten_failures == 0 && figure,
        format!(
            "layers 300 families: {layer_failures} failures; offdiag 100 maximal families: {offdiag_failures}; \
             straighten 100 4×4: {straighten_failures} (tol 0); witness (2),(3,3,1),(5,4,4,2) reproduced: {figure}"
        ),
    )
}

fn criterion_8() -> Verdict {
    let gamma = path_from_word((0, 1), "RD").unwrap();
    let model = Model::Full(FullSpaceParams::new(vec![int(1)], vec![ratio(1, 2)]));
    let half = ratio(1, 2);
    let defects_exact = (0..=20u64).all(|cap| normalization_defect(&gamma, &model, cap).unwrap() == pow(&half, cap + 1));
    // Mass preservation, checked here from the outside on every small input
    // F¹ accepts (it also asserts it internally on every call).
    let pool = partitions_in_box(3, 3);
    let mut calls = 0u64;
    let mut violations = 0u64;
    for rho in &pool {
        for mu in pool.iter().filter(|mu| interlaces(mu, rho)) {
            for nu in pool.iter().filter(|nu| interlaces(nu, rho)) {
                for m in 0..=3 {
                    let lam = forward_f1(rho, mu, nu, m).unwrap();
                    calls += 1;
                    violations += u64::from(lam.weight() + rho.weight() != m + mu.weight() + nu.weight());
                }
            }
        }
    }
    verdict(
        defects_exact && violations == 0,
        format!(
            "defect(RD, q=1/2, cap) = (1/2)^(cap+1) exactly for cap ≤ 20: {defects_exact}; \
             mass preservation on {calls} F¹ calls: {violations} violations (tol 0, also asserted inline)"
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("rsk-bijection", criterion_1),
        ("greene-equality", criterion_2),
        ("concavity-transpose", criterion_3),
        ("full-space-exact", criterion_4),
        ("half-space-exact", criterion_5),
        ("monte-carlo", criterion_6),
        ("chain-constructions", criterion_7),
        ("measure-sanity", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        failed += usize::from(!v.pass);
        println!("[{}] {} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
