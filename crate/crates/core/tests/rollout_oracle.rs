use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit::toy::{Erratic, TableProblem, ToyDp, ToyPolicy};
use rolloutkit::trajectory::{check_sequential_improvement, random_probes, PolicyHeuristic};
use rolloutkit::{fortified_rollout, rollout, tree_rollout, Problem, RolloutError};
use rolloutkit_oracle::{exact_dp, OracleBudget};

/// First seed from `start` whose 4-stage toy has two controls at every stage
/// and a feasible greedy start.
fn binary_toy(start: u64) -> ToyDp {
    (start..)
        .find_map(|seed| {
            let mut p = ToyDp::generate(&mut gen::rng(seed, INSTANCE_STREAM), 4, 2, 5);
            (p.branching == [2; 4] && p.ensure_feasible(&ToyPolicy::Myopic)).then_some(p)
        })
        .expect("some seed qualifies")
}

#[test]
fn greedy_rollout_on_binary_toy_improves_and_is_bounded_by_optimum() {
    let p = binary_toy(0);
    let mut budget = OracleBudget::default();
    let (_, optimum) = exact_dp(&p, &mut budget).unwrap();
    assert_eq!(budget.used(), 16);

    let out = rollout(&p, &ToyPolicy::Myopic).unwrap();
    assert!(out.cost <= out.baseline_cost);
    assert!(out.cost >= optimum);
    assert!(p.feasible(&out.trajectory));
    assert!(out.chain.windows(2).all(|w| w[0] >= w[1]), "chain {:?}", out.chain);
}

#[test]
fn dead_end_is_at_the_stage_with_no_feasible_candidate() {
    let (p, h) = TableProblem::dead_end();
    // only (0, 0) is feasible, and the heuristic completes any stage-0
    // extension with 1, so U_0 has no feasible member
    let (best, _) = exact_dp(&p, &mut OracleBudget::default()).unwrap();
    assert_eq!(best.controls(), &[0, 0]);
    assert_eq!(rollout(&p, &h), Err(RolloutError::DeadEnd { stage: 0 }));

    let fortified = fortified_rollout(&p, &h).unwrap();
    assert!(fortified.cost <= fortified.baseline_cost);
    assert!(p.feasible(&fortified.trajectory));
}

#[test]
fn fortified_equals_plain_under_sequential_improvement() {
    let mut compared = 0;
    for seed in 0..60 {
        let mut p = ToyDp::generate(&mut gen::rng(seed, INSTANCE_STREAM), 4, 3, 6);
        if !p.ensure_feasible(&ToyPolicy::Lightest) {
            continue;
        }
        let probes = random_probes(&p, &ToyPolicy::Lightest, 100, seed);
        if !check_sequential_improvement(&p, &ToyPolicy::Lightest, &probes).is_improving() {
            continue;
        }
        let plain = rollout(&p, &ToyPolicy::Lightest).unwrap();
        let fortified = fortified_rollout(&p, &ToyPolicy::Lightest).unwrap();
        assert_eq!(plain.trajectory, fortified.trajectory, "seed {seed}");
        compared += 1;
    }
    assert!(compared > 10);
}

#[test]
fn exhaustive_tree_reaches_the_optimum() {
    for seed in 0..20 {
        let p = binary_toy(seed * 100);
        let (_, optimum) = exact_dp(&p, &mut OracleBudget::default()).unwrap();
        // 1 + 2 + 4 + 8 internal nodes
        let out = tree_rollout(&p, &ToyPolicy::Myopic, 15).unwrap();
        assert_eq!(out.cost, optimum, "seed {seed}");
    }
}

#[test]
fn tree_strictly_beats_rollout_on_crafted_instance() {
    let p = TableProblem::tree_beats_rollout();
    let zeros = PolicyHeuristic::new(|_: &TableProblem, _: usize, _: &Vec<u8>| Some(0u8));
    let (best, optimum) = exact_dp(&p, &mut OracleBudget::default()).unwrap();
    assert_eq!(best.controls(), &[1, 1, 1]);

    let plain = rollout(&p, &zeros).unwrap();
    let tree = tree_rollout(&p, &zeros, 2 * p.horizon()).unwrap();
    assert!(tree.cost < plain.cost);
    assert_eq!(tree.cost, optimum);
}

#[test]
fn erratic_heuristics_never_worsen_fortified() {
    for seed in 0..40 {
        let h = Erratic { salt: seed };
        let mut p = ToyDp::generate(&mut gen::rng(seed, INSTANCE_STREAM), 5, 3, 6);
        if !p.ensure_feasible(&h) {
            continue;
        }
        let out = fortified_rollout(&p, &h).unwrap();
        assert!(out.cost <= out.baseline_cost);
        assert!(p.feasible(&out.trajectory));
        let (_, optimum) = exact_dp(&p, &mut OracleBudget::default()).unwrap();
        assert!(out.cost >= optimum);
    }
}
