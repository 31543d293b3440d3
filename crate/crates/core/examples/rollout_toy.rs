//! Plain rollout on a seeded toy DP, compared with its base heuristic.

use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit::rollout;
use rolloutkit::toy::{ToyDp, ToyPolicy};

const SEED: u64 = 1;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut problem = ToyDp::generate(&mut gen::rng(SEED, INSTANCE_STREAM), 5, 3, 6);
    if !problem.ensure_feasible(&ToyPolicy::Myopic) {
        return Err("no feasible completion from the initial state".into());
    }
    let out = rollout(&problem, &ToyPolicy::Myopic)?;
    println!("base heuristic cost  {}", out.baseline_cost);
    println!("rollout cost         {}", out.cost);
    println!("controls             {:?}", out.controls);
    println!("heuristic calls      {}", out.heuristic_calls);
    for (stage, cost) in out.chain.iter().enumerate() {
        println!("  stage {stage}: chain cost {cost}");
    }
    Ok(())
}
