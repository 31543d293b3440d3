//! Reusing auction prices after a one-entry change in the benefit matrix.

use rand::Rng;
use rolloutkit::auction::{auction_scaled, Assignment2DInstance};
use rolloutkit::gen::{self, INSTANCE_STREAM, SOLVER_STREAM};

fn main() -> Result<(), rolloutkit::auction::AuctionError> {
    let n = 40;
    let base = gen::assign2d(&mut gen::rng(1, INSTANCE_STREAM), n, n, 100)?;
    let solved = auction_scaled(&base, None)?;
    let mut rng = gen::rng(1, SOLVER_STREAM);
    for _ in 0..8 {
        let mut benefits = base.benefits().to_vec();
        benefits[rng.random_range(0..n * n)] = rng.random_range(-100..=100);
        let changed = Assignment2DInstance::new(n, n, benefits, None)?;
        let warm = auction_scaled(&changed, Some(&solved.prices))?;
        let cold = auction_scaled(&changed, None)?;
        assert_eq!(warm.primal, cold.primal);
        println!("primal {:>5}  warm {:>5} bids  cold {:>5} bids", warm.primal, warm.rounds, cold.rounds);
    }
    Ok(())
}
