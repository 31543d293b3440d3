use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit::multidim::{rollout_nd, MultiAssignInstance, RolloutOptions};

fn main() -> Result<(), rolloutkit::multidim::MultidimError> {
    let dense = gen::assign_nd(&mut gen::rng(4, INSTANCE_STREAM), 4, 4, 30);
    let out = rollout_nd(&dense, RolloutOptions::default())?;
    println!("4 layers, dense: cost {} in {} 2D solves", out.solution.cost, out.ledger.total());

    // cost given as a function of the grouping
    let spread = MultiAssignInstance::callable(5, 6, |t: &[usize]| {
        let mixed: usize = t.iter().enumerate().map(|(k, &v)| (k + 2) * (v + 1) * (v + 3)).sum();
        (mixed % 11) as i64
    })?;
    let out = rollout_nd(&spread, RolloutOptions::default())?;
    println!("5 layers, callable: cost {} in {} 2D solves", out.solution.cost, out.ledger.total());
    Ok(())
}
