mod common;

use rolloutkit::discrete::facility::{facility_base_heuristic, facility_rollout, solve_transportation, FacilityInstance};
use rolloutkit::discrete::{wrap_discrete, FnObjective};
use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit_oracle::{exact_dp, OracleBudget};

const SEEDED_OPTIMUM: i64 = 18;
const SEEDED_CLOSED_FIRST_TRANSPORT: i64 = 12;

fn seeded() -> FacilityInstance {
    gen::facility(&mut gen::rng(1, INSTANCE_STREAM), 2, 3)
}

#[test]
fn wrapped_dp_matches_direct_tuple_enumeration() {
    let weights = [3, 1, 4, 1];
    let cost = move |t: &[i64]| t.iter().zip(weights).map(|(&u, w)| (u * w) as f64).sum::<f64>() - 2.0 * t[0] as f64 * t[3] as f64;
    let feasible = |t: &[i64]| t.iter().sum::<i64>() >= 2;
    let p = wrap_discrete(vec![vec![0, 1]; 4], FnObjective::new(cost, feasible));
    let (best, value) = exact_dp(&p, &mut OracleBudget::default()).unwrap();

    let mut direct: Option<(Vec<i64>, f64)> = None;
    for mask in 0..16u32 {
        let t: Vec<i64> = (0..4).map(|k| i64::from(mask >> (3 - k) & 1)).collect();
        if feasible(&t) && direct.as_ref().is_none_or(|(_, c)| cost(&t) < *c) {
            direct = Some((t.clone(), cost(&t)));
        }
    }
    let (tuple, direct_value) = direct.unwrap();
    assert_eq!(value, direct_value);
    assert_eq!(best.last_state(), &tuple);
}

#[test]
fn transportation_matches_integer_flow_oracle() {
    for seed in 0..30 {
        let inst = gen::facility(&mut gen::rng(seed, INSTANCE_STREAM), 2, 2);
        let placements = [true, true];
        let s = solve_transportation(&inst, &placements).unwrap();
        s.check(&inst, &placements).unwrap();
        assert_eq!(Some(s.cost), common::best_transport(&inst, &placements), "seed {seed}");
    }
}

#[test]
fn seeded_prefix_completion_is_pinned() {
    let inst = seeded();
    assert_eq!(common::best_transport(&inst, &[false, true, true]), Some(SEEDED_CLOSED_FIRST_TRANSPORT));
    let (placements, flows, cost) = facility_base_heuristic(&inst, &[false]).unwrap();
    assert_eq!(placements, vec![false, true, true]);
    assert_eq!(flows.cost, SEEDED_CLOSED_FIRST_TRANSPORT);
    assert_eq!(cost, SEEDED_CLOSED_FIRST_TRANSPORT + inst.placement_cost(&placements));
}

#[test]
fn seeded_rollout_reaches_the_pinned_optimum() {
    let inst = seeded();
    let (_, optimum) = common::best_facility(&inst);
    assert_eq!(optimum, SEEDED_OPTIMUM);
    let out = facility_rollout(&inst, true).unwrap();
    assert_eq!(out.cost, SEEDED_OPTIMUM);
    out.flows.check(&inst, &out.placements).unwrap();
}

#[test]
fn every_sub_solve_matches_the_oracle() {
    for seed in 0..20 {
        let inst = gen::facility(&mut gen::rng(seed, INSTANCE_STREAM), 2, 3);
        for cache in [true, false] {
            let out = facility_rollout(&inst, cache).unwrap();
            assert!(out.cost <= out.baseline_cost);
            assert!(out.cost >= common::best_facility(&inst).1);
            for sub in &out.sub_solves {
                let expected = common::best_transport(&inst, &sub.placements);
                assert_eq!(sub.solution.as_ref().map(|s| s.cost), expected, "seed {seed} {:?}", sub.placements);
            }
        }
    }
}
