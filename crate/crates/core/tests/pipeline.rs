use lpp_core::growth::{rsk_gamma, rsk_gamma_inverse};
use lpp_core::lpp::{g_times, observe, sample_full, sample_half, FullSpaceParams, HalfSpaceParams};
use lpp_core::measure::{enumerate_sequences, Model};
use lpp_core::rational::{int, ratio};
use lpp_core::shapes::{path_from_word, shape_of};
use lpp_core::verify::fuzz::DEFAULT_FUZZ_BUDGET;
use lpp_core::verify::{exact_compare, fuzz_suite, fuzz_suite_with_rule, ComparisonReport};
use lpp_core::{Filling, Partition, Result};

#[test]
fn sampled_noise_round_trips_through_rsk() {
    let params = FullSpaceParams::new(vec![ratio(1, 2); 6], vec![ratio(3, 5); 4]);
    let gamma = path_from_word((0, 4), "RRDRDDRRRD").unwrap();
    let shape = shape_of(&gamma).unwrap();
    for seed in 0..25 {
        let w = sample_full(&params, 6, 4, seed).unwrap();
        let filling = Filling::from_matrix(&w, shape.clone()).unwrap();
        let seq = rsk_gamma(&filling, &gamma).unwrap();
        assert_eq!(seq, observe(&w, &gamma).unwrap().lambdas);
        assert_eq!(rsk_gamma_inverse(&seq, &gamma).unwrap(), filling);
    }
}

#[test]
fn every_observation_has_positive_probability() {
    let gamma = path_from_word((0, 3), "RDRRDD").unwrap();
    let params = FullSpaceParams::new(vec![ratio(1, 3); 3], vec![ratio(1, 2); 3]);
    let model = Model::Full(params.clone());
    for seed in 0..40 {
        let obs = observe(&sample_full(&params, 3, 3, seed).unwrap(), &gamma).unwrap();
        assert!(model.probability(&gamma, &obs.lambdas).unwrap() > int(0));
        let g = g_times(&obs, 3, 3).unwrap();
        assert!(g.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn half_space_observations_are_in_the_support() {
    let gamma = path_from_word((2, 2), "RDRD").unwrap();
    let params = HalfSpaceParams::new(vec![ratio(1, 2), ratio(2, 3), ratio(1, 3), ratio(1, 2)], ratio(1, 3));
    let model = Model::Half(params.clone());
    for seed in 0..40 {
        let obs = observe(&sample_half(&params, 4, seed).unwrap(), &gamma).unwrap();
        assert!(model.probability(&gamma, &obs.lambdas).unwrap() > int(0));
    }
}

#[test]
fn larger_half_space_path_is_exact() {
    let gamma = path_from_word((2, 2), "DRD").unwrap();
    let model = Model::Half(HalfSpaceParams::new(vec![ratio(1, 2), ratio(1, 3), ratio(1, 4)], ratio(1, 2)));
    let r = exact_compare(&gamma, &model, 3, 1_000_000).unwrap();
    assert!(r.pass, "{:?}", r.checks);
}

#[test]
fn reports_serialize_losslessly() {
    let gamma = path_from_word((0, 2), "RDRD").unwrap();
    let model = Model::Full(FullSpaceParams::new(vec![ratio(1, 2), ratio(1, 5)], vec![ratio(1, 3), ratio(2, 3)]));
    let r = exact_compare(&gamma, &model, 2, 1_000_000).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    let back: ComparisonReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back.tv_exact, r.tv_exact);
    assert_eq!(back.rows.len(), r.rows.len());
    let m: Model = serde_json::from_str(&serde_json::to_string(&model).unwrap()).unwrap();
    assert_eq!(m, model);
}

#[test]
fn enumeration_stream_is_sorted_and_unique() {
    let gamma = path_from_word((0, 3), "RDRDRD").unwrap();
    let seqs: Vec<Vec<Partition>> = enumerate_sequences(&gamma, 2).collect();
    assert!(seqs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn default_fuzz_budget_passes() {
    let report = fuzz_suite(1, DEFAULT_FUZZ_BUDGET);
    assert!(report.pass, "{:?}", report.failures);
    assert!(report.properties.iter().all(|p| p.cases >= DEFAULT_FUZZ_BUDGET / 7));
}

/// F¹ with `min` and `max` exchanged.
fn swapped(rho: &Partition, mu: &Partition, nu: &Partition, m: u64) -> Result<Partition> {
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
fn mutant_local_rule_yields_a_small_greene_counterexample() {
    for seed in 1..=5 {
        let report = fuzz_suite_with_rule(seed, DEFAULT_FUZZ_BUDGET, swapped);
        assert!(!report.pass);
        let cx = report.failures.iter().find(|f| f.property == "greene-consistency").unwrap();
        let (cols, rows) = (cx.input["matrix"]["cols"].as_u64().unwrap(), cx.input["matrix"]["rows"].as_u64().unwrap());
        assert!(cols <= 3 && rows <= 3, "seed {seed}: {cx:?}");
    }
}
