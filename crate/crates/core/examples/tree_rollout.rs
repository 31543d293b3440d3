//! Tree rollout with a growing expansion budget on a three-stage table.

use rolloutkit::toy::TableProblem;
use rolloutkit::trajectory::PolicyHeuristic;
use rolloutkit::{fortified_rollout, rollout, tree_rollout, Problem};

fn main() -> Result<(), rolloutkit::RolloutError> {
    let problem = TableProblem::tree_beats_rollout();
    // always plays 0
    let zeros = PolicyHeuristic::new(|_: &TableProblem, _: usize, _: &Vec<u8>| Some(0u8));
    println!("plain      {}", rollout(&problem, &zeros)?.cost);
    println!("fortified  {}", fortified_rollout(&problem, &zeros)?.cost);
    for budget in problem.horizon()..=2 * problem.horizon() + 1 {
        let out = tree_rollout(&problem, &zeros, budget)?;
        println!("tree {budget:>2}    {} {:?}", out.cost, out.controls);
    }
    Ok(())
}
