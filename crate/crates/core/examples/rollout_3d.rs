//! Three-layer assignment: enforced separation as the base heuristic and
//! node-by-node rollout on top, with the 2D solve ledger.

use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit::multidim::{enforced_separation_nd, rollout_3d, RolloutOptions};

fn main() -> Result<(), rolloutkit::multidim::MultidimError> {
    let m = 5;
    let inst = gen::assign_nd(&mut gen::rng(21, INSTANCE_STREAM), 3, m, 50);
    let base = enforced_separation_nd(&inst)?;
    let out = rollout_3d(&inst, RolloutOptions::default())?;
    println!("enforced separation  cost {}  ({} 2D solves)", base.solution.cost, base.solves);
    println!("rollout              cost {}", out.solution.cost);
    println!(
        "2D solves: initial {} + sweep {} + final {} = {}",
        out.ledger.initial,
        out.ledger.sweep,
        out.ledger.final_pass,
        out.ledger.total()
    );
    for d in &out.decisions {
        let tag = if d.followed_tentative { " (kept tentative)" } else { "" };
        println!("  pair {} node {} -> {}{tag}", d.pair, d.node, d.fixed_to);
    }
    for g in &out.solution.groupings {
        println!("  grouping {g:?}");
    }
    Ok(())
}
