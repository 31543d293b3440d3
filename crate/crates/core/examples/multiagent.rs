//! One-agent-at-a-time rollout. Each stage costs the sum of the agents'
//! component counts in heuristic calls rather than their product.

use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit::multiagent::{multiagent_rollout, AsBase, ComponentPolicy};
use rolloutkit::toy::AgentToy;
use rolloutkit::Variant;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lightest = ComponentPolicy::new(|p: &AgentToy, _, _: &u32, agent: usize, _: &[u8]| {
        (0..p.sizes[agent]).min_by_key(|&c| (p.weights[agent][c], c)).map(|c| c as u8)
    });
    let mut problem = AgentToy::generate(&mut gen::rng(3, INSTANCE_STREAM), 4, 3, 3);
    if !problem.ensure_feasible(&AsBase(&lightest)) {
        return Err("base heuristic is infeasible on this seed".into());
    }
    let out = multiagent_rollout(&problem, &lightest, Variant::Fortified)?;
    let joint: usize = problem.sizes.iter().product();
    let summed: usize = problem.sizes.iter().sum();
    println!("agents {} with component sizes {:?}", problem.agents, problem.sizes);
    println!("baseline {}  rollout {}", out.baseline_cost, out.cost);
    println!("calls per stage {:?} (joint control space {joint}, component sum {summed})", out.stage_calls);
    Ok(())
}
