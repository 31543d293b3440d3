//! A heuristic that is feasible from the root but nowhere else. Plain
//! rollout stalls at stage 0; the fortified variant keeps the root plan.

use rolloutkit::toy::TableProblem;
use rolloutkit::{fortified_rollout, rollout};

fn main() {
    let (problem, heuristic) = TableProblem::dead_end();
    match rollout(&problem, &heuristic) {
        Ok(out) => println!("plain rollout: cost {}", out.cost),
        Err(e) => println!("plain rollout: {e}"),
    }
    let out = fortified_rollout(&problem, &heuristic).expect("root plan is feasible");
    println!("fortified rollout: cost {} via {:?}", out.cost, out.controls);
    for t in &out.trace {
        let step = match t.chosen {
            Some(i) => format!("took candidate {:?}", t.candidates[i]),
            None => "followed tentative best".to_string(),
        };
        println!("  stage {}: {} feasible, {step}", t.stage, t.feasible);
    }
}
