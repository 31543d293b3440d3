//! Seeded instance generators.
//!
//! One 64-bit seed drives a ChaCha8 stream per purpose, so adding a consumer
//! on a new stream never perturbs existing instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::auction::{AuctionError, Assignment2DInstance};
use crate::discrete::facility::FacilityInstance;
use crate::multidim::MultiAssignInstance;

/// Sub-stream for instance data.
pub const INSTANCE_STREAM: u64 = 0;
/// Reserved for solver randomness; unused by the current solvers.
pub const SOLVER_STREAM: u64 = 1;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Dense benefits drawn uniformly from `-max_abs..=max_abs`.
pub fn assign2d(rng: &mut impl Rng, persons: usize, objects: usize, max_abs: i64) -> Result<Assignment2DInstance, AuctionError> {
    let benefits = (0..persons * objects).map(|_| rng.random_range(-max_abs..=max_abs)).collect();
    Assignment2DInstance::new(persons, objects, benefits, None)
}

/// Dense benefits with each pair allowed with probability `density`; resampled
/// until some assignment covers every person.
pub fn assign2d_masked(rng: &mut impl Rng, n: usize, max_abs: i64, density: f64) -> Assignment2DInstance {
    loop {
        let benefits: Vec<i64> = (0..n * n).map(|_| rng.random_range(-max_abs..=max_abs)).collect();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|_| rng.random_bool(density))
            .collect();
        if let Ok(inst) = Assignment2DInstance::new(n, n, benefits, Some(&pairs)) {
            return inst;
        }
    }
}

/// Dense grouping costs drawn from `0..=max_cost`.
pub fn assign_nd(rng: &mut impl Rng, layers: usize, m: usize, max_cost: i64) -> MultiAssignInstance {
    let costs = (0..m.pow(layers as u32)).map(|_| rng.random_range(0..=max_cost)).collect();
    MultiAssignInstance::dense(layers, m, costs).expect("generated shape is consistent")
}

/// Ground truth of a (perturbed) separable three-layer instance.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SeparableTruth {
    /// `m x m`, layer 0 to layer 1.
    pub beta: Vec<i64>,
    /// `m x m`, layer 1 to layer 2.
    pub gamma: Vec<i64>,
    /// Largest allowed `|a - (beta + gamma)|`.
    pub eps: i64,
}

/// `a_jlw = beta_jl + gamma_lw + noise` with `|noise| <= eps`.
pub fn eps_separable3d(rng: &mut impl Rng, m: usize, max_cost: i64, eps: i64) -> (MultiAssignInstance, SeparableTruth) {
    let beta: Vec<i64> = (0..m * m).map(|_| rng.random_range(0..=max_cost)).collect();
    let gamma: Vec<i64> = (0..m * m).map(|_| rng.random_range(0..=max_cost)).collect();
    let mut costs = Vec::with_capacity(m * m * m);
    for j in 0..m {
        for l in 0..m {
            for w in 0..m {
                costs.push(beta[j * m + l] + gamma[l * m + w] + rng.random_range(-eps..=eps));
            }
        }
    }
    let inst = MultiAssignInstance::dense(3, m, costs).expect("generated shape is consistent");
    (inst, SeparableTruth { beta, gamma, eps })
}

pub fn separable3d(rng: &mut impl Rng, m: usize, max_cost: i64) -> (MultiAssignInstance, SeparableTruth) {
    eps_separable3d(rng, m, max_cost, 0)
}

/// Facility instance with total demand at most total capacity, by rejection.
pub fn facility(rng: &mut impl Rng, clients: usize, locations: usize) -> FacilityInstance {
    loop {
        let demands: Vec<i64> = (0..clients).map(|_| rng.random_range(1..=6)).collect();
        let capacities: Vec<i64> = (0..locations).map(|_| rng.random_range(1..=8)).collect();
        if demands.iter().sum::<i64>() > capacities.iter().sum::<i64>() {
            continue;
        }
        let placement_costs = (0..locations).map(|_| rng.random_range(0..=10)).collect();
        let service_costs = (0..clients * locations).map(|_| rng.random_range(0..=9)).collect();
        return FacilityInstance::new(demands, capacities, placement_costs, service_costs)
            .expect("generated shape is consistent");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let a = assign2d(&mut rng(42, INSTANCE_STREAM), 5, 5, 100).unwrap();
        let b = assign2d(&mut rng(42, INSTANCE_STREAM), 5, 5, 100).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_are_independent() {
        let a: u64 = rng(42, INSTANCE_STREAM).random();
        let b: u64 = rng(42, SOLVER_STREAM).random();
        assert_ne!(a, b);
    }

    #[test]
    fn eps_separable_is_within_eps() {
        let (inst, truth) = eps_separable3d(&mut rng(7, INSTANCE_STREAM), 3, 20, 2);
        let costs = inst.dense_costs().unwrap();
        for j in 0..3 {
            for l in 0..3 {
                for w in 0..3 {
                    let sep = truth.beta[j * 3 + l] + truth.gamma[l * 3 + w];
                    assert!((costs[j * 9 + l * 3 + w] - sep).abs() <= 2);
                }
            }
        }
    }

    #[test]
    fn facility_is_feasible_when_all_open() {
        for seed in 0..50 {
            let f = facility(&mut rng(seed, INSTANCE_STREAM), 2, 3);
            assert!(f.total_demand() <= f.capacities.iter().sum());
        }
    }
}
