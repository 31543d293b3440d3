use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit::multiagent::{multiagent_rollout, split_agents, AsBase, ComponentPolicy};
use rolloutkit::toy::AgentToy;
use rolloutkit::{Problem, Variant};
use rolloutkit_oracle::{exact_dp, OracleBudget};

fn lightest() -> ComponentPolicy<impl Fn(&AgentToy, usize, &u32, usize, &[u8]) -> Option<u8>> {
    ComponentPolicy::new(|p: &AgentToy, _, _: &u32, agent: usize, _: &[u8]| {
        (0..p.sizes[agent]).min_by_key(|&c| (p.weights[agent][c], c)).map(|c| c as u8)
    })
}

#[test]
fn split_optimum_equals_original_on_two_agents_two_stages() {
    let p = AgentToy::generate(&mut gen::rng(11, INSTANCE_STREAM), 2, 2, 3);
    let split = split_agents(&p).unwrap();
    let direct = exact_dp(&p, &mut OracleBudget::default());
    let via_split = exact_dp(&split, &mut OracleBudget::default());
    match (direct, via_split) {
        (Ok((t, c)), Ok((s, cs))) => {
            assert_eq!(c, cs);
            assert_eq!(split.to_original(&s), *t.as_trajectory());
        }
        (Err(a), Err(b)) => assert_eq!(a, b),
        (a, b) => panic!("formulations disagree: {a:?} vs {b:?}"),
    }
}

#[test]
fn split_optimum_equals_original_across_seeds() {
    for seed in 0..40 {
        let agents = 2 + (seed % 2) as usize;
        let p = AgentToy::generate(&mut gen::rng(seed, INSTANCE_STREAM), 2, agents, 2);
        let split = split_agents(&p).unwrap();
        let direct = exact_dp(&p, &mut OracleBudget::default()).map(|(_, c)| c);
        let via_split = exact_dp(&split, &mut OracleBudget::default()).map(|(_, c)| c);
        assert_eq!(direct, via_split, "seed {seed}");
    }
}

#[test]
fn fortified_three_agents_never_worse_than_baseline() {
    let h = lightest();
    let mut checked = 0;
    for seed in 0..30 {
        let mut p = AgentToy::generate(&mut gen::rng(seed, INSTANCE_STREAM), 3, 3, 2);
        if !p.ensure_feasible(&AsBase(&h)) {
            continue;
        }
        let out = multiagent_rollout(&p, &h, Variant::Fortified).unwrap();
        assert!(out.cost <= out.baseline_cost, "seed {seed}");
        assert!(p.feasible(&out.trajectory));
        let (_, optimum) = exact_dp(&p, &mut OracleBudget::default()).unwrap();
        assert!(out.cost >= optimum);
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn per_stage_calls_are_the_component_set_sum() {
    let h = lightest();
    for seed in 0..20 {
        let agents = 2 + (seed % 3) as usize;
        let mut p = AgentToy::generate(&mut gen::rng(seed, INSTANCE_STREAM), 3, agents, 3);
        if !p.ensure_feasible(&AsBase(&h)) {
            continue;
        }
        let out = multiagent_rollout(&p, &h, Variant::Fortified).unwrap();
        let expected: usize = p.sizes.iter().sum();
        assert_eq!(out.stage_calls, vec![expected; p.horizon()]);
        assert!(expected <= 3 * agents);
    }
}
