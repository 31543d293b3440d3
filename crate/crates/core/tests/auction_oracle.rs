mod common;

use rolloutkit::auction::{
    auction_scaled, auction_solve, bid, dual_value, verify_eps_cs, verify_eps_cs_with, Assignment2DInstance,
};
use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit_oracle::{equilibrium_prices, OracleBudget};

const SEEDED_5X5_OPTIMUM: i64 = 371;

#[test]
fn seeded_5x5_matches_permutation_oracle() {
    let inst = gen::assign2d(&mut gen::rng(5, INSTANCE_STREAM), 5, 5, 100).unwrap();
    let (value, _) = common::best_assignment(&inst);
    assert_eq!(value, SEEDED_5X5_OPTIMUM);
    let r = auction_scaled(&inst, None).unwrap();
    assert_eq!(r.primal, SEEDED_5X5_OPTIMUM);
    assert!(verify_eps_cs(&inst, &r).holds());
}

#[test]
fn seeded_8x8_matches_permutation_oracle() {
    let inst = gen::assign2d(&mut gen::rng(8, INSTANCE_STREAM), 8, 8, 100).unwrap();
    let r = auction_scaled(&inst, None).unwrap();
    assert_eq!(r.primal, common::best_assignment(&inst).0);
}

#[test]
fn bids_on_seeded_4x4_raise_by_at_least_epsilon() {
    for seed in 0..20 {
        let inst = gen::assign2d(&mut gen::rng(seed, INSTANCE_STREAM), 4, 4, 100).unwrap();
        let prices = vec![0; 4];
        for person in 0..4 {
            for eps in [1, 3, 7] {
                let b = bid(&inst, &prices, person, eps).unwrap();
                assert!(b.best_value >= b.second_value);
                assert!(b.new_price - prices[b.object] >= eps);
            }
        }
    }
}

#[test]
fn oracle_equilibrium_satisfies_exact_complementary_slackness() {
    let inst = gen::assign2d(&mut gen::rng(3, INSTANCE_STREAM), 3, 3, 5).unwrap();
    let (_, assignment) = common::best_assignment(&inst);
    let prices = equilibrium_prices(3, inst.benefits(), &assignment, 20, &mut OracleBudget::default())
        .unwrap()
        .expect("an optimal assignment has equilibrium prices");
    assert!(verify_eps_cs_with(&inst, &assignment, &prices, 0).holds());
}

#[test]
fn weak_duality_on_seeded_4x4() {
    for seed in 0..20 {
        let inst = gen::assign2d(&mut gen::rng(seed, INSTANCE_STREAM), 4, 4, 100).unwrap();
        let (optimum, _) = common::best_assignment(&inst);
        for prices in [vec![0; 4], vec![5, -3, 40, 0], vec![100, 100, 100, 100]] {
            assert!(dual_value(&inst, &prices).unwrap() >= optimum);
        }
    }
}

#[test]
fn unscaled_pass_dual_gap_within_n_epsilon() {
    for seed in 0..30 {
        let inst = gen::assign2d(&mut gen::rng(seed, INSTANCE_STREAM), 6, 6, 100).unwrap();
        for eps in [1, 2, 5, 20] {
            let r = auction_solve(&inst, eps, &[0; 6]).unwrap();
            let dual = dual_value(&inst, &r.prices).unwrap();
            assert!(dual - r.primal <= 6 * eps);
            assert!(verify_eps_cs(&inst, &r).holds());
        }
    }
}

#[test]
fn asymmetric_two_by_three_matches_injection_oracle() {
    for seed in 0..20 {
        let inst = gen::assign2d(&mut gen::rng(seed, INSTANCE_STREAM), 2, 3, 50).unwrap();
        let r = auction_scaled(&inst, None).unwrap();
        assert_eq!(r.primal, common::best_assignment(&inst).0, "seed {seed}");
    }
}

#[test]
fn masked_instances_match_oracle() {
    for seed in 0..40 {
        let inst = gen::assign2d_masked(&mut gen::rng(seed, INSTANCE_STREAM), 6, 50, 0.4);
        let r = auction_scaled(&inst, None).unwrap();
        assert_eq!(r.primal, common::best_assignment(&inst).0, "seed {seed}");
        assert!(r.assignment.iter().enumerate().all(|(i, &j)| inst.is_allowed(i, j)));
    }
}

#[test]
fn warm_start_after_unit_perturbation() {
    let base = gen::assign2d(&mut gen::rng(21, INSTANCE_STREAM), 8, 8, 100).unwrap();
    let cold_base = auction_scaled(&base, None).unwrap();
    let mut no_worse = 0;
    for k in 0..10 {
        let mut benefits = base.benefits().to_vec();
        benefits[(k * 7) % 64] += if k % 2 == 0 { 1 } else { -1 };
        let perturbed = Assignment2DInstance::new(8, 8, benefits, None).unwrap();
        let warm = auction_scaled(&perturbed, Some(&cold_base.prices)).unwrap();
        let cold = auction_scaled(&perturbed, None).unwrap();
        let (optimum, _) = common::best_assignment(&perturbed);
        assert_eq!(warm.primal, optimum);
        assert_eq!(cold.primal, optimum);
        if warm.rounds <= cold.rounds {
            no_worse += 1;
        }
    }
    println!("warm start no worse than cold on {no_worse} of 10 perturbations");
}
