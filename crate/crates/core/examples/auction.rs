use rolloutkit::auction::{auction_scaled, dual_value, verify_eps_cs, Assignment2DInstance};

fn main() -> Result<(), rolloutkit::auction::AuctionError> {
    let inst = Assignment2DInstance::from_rows(&[
        vec![7, 2, 9, 4],
        vec![3, 8, 1, 6],
        vec![5, 5, 7, 2],
        vec![9, 1, 3, 8],
    ])?;
    let r = auction_scaled(&inst, None)?;
    println!("assignment {:?}", r.assignment);
    println!("primal {}  dual {:.3}  scale {}", r.primal, r.dual(), r.scale);
    for p in &r.passes {
        println!("  eps {:>3}: {} bids", p.epsilon, p.bids);
    }
    let scaled = inst.scaled(r.scale);
    println!("eps-CS holds: {}", verify_eps_cs(&inst, &r).holds());
    println!("dual recomputed: {}", dual_value(&scaled, &r.prices)?);
    Ok(())
}
