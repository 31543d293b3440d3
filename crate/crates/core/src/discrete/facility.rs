//! Capacitated facility location.
//!
//! Minimize `sum_k b_k u_k + sum_{i,k} a_ik y_ik` over placements `u_k in {0,1}`
//! and integer flows with `sum_k y_ik = d_i` and `sum_i y_ik <= c_k u_k`.
//! For fixed placements the flow problem is a transportation problem, solved
//! here by splitting clients into unit persons and open locations into unit
//! objects and running the asymmetric auction.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{wrap_discrete, DiscreteObjective};
use crate::auction::{auction_scaled, AuctionError, Assignment2DInstance};
use crate::rollout::{fortified_rollout, RolloutError};
use crate::trajectory::{BaseHeuristic, Problem, Traj, Trajectory};

/// Largest total demand the unit split will accept.
pub const UNIT_SPLIT_LIMIT: i64 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FacilityError {
    #[error("instance needs at least one client and one location")]
    Empty,
    #[error("service cost table has {got} entries, expected {expected}")]
    Shape { got: usize, expected: usize },
    #[error("demands, capacities, and costs must be nonnegative")]
    Negative,
    #[error("placement vector has {got} entries, expected {expected}")]
    PlacementLength { got: usize, expected: usize },
    #[error("demand {demand} exceeds open capacity {capacity}")]
    InfeasiblePlacement { demand: i64, capacity: i64 },
    #[error("demand {demand} exceeds open capacity {capacity} even with every location open")]
    Infeasible { demand: i64, capacity: i64 },
    #[error("total demand {units} exceeds the unit-split limit {limit}")]
    SizeGuard { units: i64, limit: i64 },
    #[error(transparent)]
    Auction(#[from] AuctionError),
    #[error(transparent)]
    Rollout(#[from] RolloutError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacilityInstance {
    pub demands: Vec<i64>,
    pub capacities: Vec<i64>,
    pub placement_costs: Vec<i64>,
    /// Clients by locations, row-major.
    pub service_costs: Vec<i64>,
}

impl FacilityInstance {
    pub fn new(
        demands: Vec<i64>,
        capacities: Vec<i64>,
        placement_costs: Vec<i64>,
        service_costs: Vec<i64>,
    ) -> Result<Self, FacilityError> {
        let inst = Self {
            demands,
            capacities,
            placement_costs,
            service_costs,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), FacilityError> {
        if self.demands.is_empty() || self.capacities.is_empty() {
            return Err(FacilityError::Empty);
        }
        if self.placement_costs.len() != self.locations() {
            return Err(FacilityError::Shape {
                got: self.placement_costs.len(),
                expected: self.locations(),
            });
        }
        let expected = self.clients() * self.locations();
        if self.service_costs.len() != expected {
            return Err(FacilityError::Shape {
                got: self.service_costs.len(),
                expected,
            });
        }
        let all = [&self.demands, &self.capacities, &self.placement_costs, &self.service_costs];
        if all.iter().any(|v| v.iter().any(|&x| x < 0)) {
            return Err(FacilityError::Negative);
        }
        Ok(())
    }

    pub fn clients(&self) -> usize {
        self.demands.len()
    }

    pub fn locations(&self) -> usize {
        self.capacities.len()
    }

    pub fn service_cost(&self, client: usize, location: usize) -> i64 {
        self.service_costs[client * self.locations() + location]
    }

    pub fn total_demand(&self) -> i64 {
        self.demands.iter().sum()
    }

    pub fn open_capacity(&self, placements: &[bool]) -> i64 {
        self.capacities.iter().zip(placements).filter(|(_, &o)| o).map(|(c, _)| c).sum()
    }

    pub fn placement_cost(&self, placements: &[bool]) -> i64 {
        self.placement_costs.iter().zip(placements).filter(|(_, &o)| o).map(|(b, _)| b).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportationSolution {
    /// Clients by locations, row-major.
    pub flows: Vec<i64>,
    pub cost: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowViolation {
    #[error("flow table has the wrong size")]
    Shape,
    #[error("negative flow from client {client} to location {location}")]
    Negative { client: usize, location: usize },
    #[error("demand conservation fails for client {client}: ships {shipped}, demand {demand}")]
    Conservation { client: usize, shipped: i64, demand: i64 },
    #[error("capacity exceeded at location {location}: receives {received}, allows {allowed}")]
    Capacity { location: usize, received: i64, allowed: i64 },
    #[error("recorded cost {recorded} differs from recomputed {actual}")]
    Cost { recorded: i64, actual: i64 },
}

impl TransportationSolution {
    /// Structural check of conservation, capacity, and the recorded cost.
    pub fn check(&self, instance: &FacilityInstance, placements: &[bool]) -> Result<(), FlowViolation> {
        let (mm, nn) = (instance.clients(), instance.locations());
        if self.flows.len() != mm * nn || placements.len() != nn {
            return Err(FlowViolation::Shape);
        }
        for i in 0..mm {
            for k in 0..nn {
                if self.flows[i * nn + k] < 0 {
                    return Err(FlowViolation::Negative { client: i, location: k });
                }
            }
            let shipped: i64 = self.flows[i * nn..(i + 1) * nn].iter().sum();
            if shipped != instance.demands[i] {
                return Err(FlowViolation::Conservation {
                    client: i,
                    shipped,
                    demand: instance.demands[i],
                });
            }
        }
        for (k, &open) in placements.iter().enumerate() {
            let received: i64 = (0..mm).map(|i| self.flows[i * nn + k]).sum();
            let allowed = if open { instance.capacities[k] } else { 0 };
            if received > allowed {
                return Err(FlowViolation::Capacity {
                    location: k,
                    received,
                    allowed,
                });
            }
        }
        let actual = (0..mm * nn).map(|e| self.flows[e] * instance.service_costs[e]).sum();
        if actual != self.cost {
            return Err(FlowViolation::Cost {
                recorded: self.cost,
                actual,
            });
        }
        Ok(())
    }
}

/// Optimal flows for fixed placements.
pub fn solve_transportation(instance: &FacilityInstance, placements: &[bool]) -> Result<TransportationSolution, FacilityError> {
    let (mm, nn) = (instance.clients(), instance.locations());
    if placements.len() != nn {
        return Err(FacilityError::PlacementLength {
            got: placements.len(),
            expected: nn,
        });
    }
    let demand = instance.total_demand();
    let capacity = instance.open_capacity(placements);
    if demand > capacity {
        return Err(FacilityError::InfeasiblePlacement { demand, capacity });
    }
    if demand > UNIT_SPLIT_LIMIT {
        return Err(FacilityError::SizeGuard {
            units: demand,
            limit: UNIT_SPLIT_LIMIT,
        });
    }
    let mut flows = vec![0; mm * nn];
    if demand == 0 {
        return Ok(TransportationSolution { flows, cost: 0 });
    }
    let persons: Vec<usize> = (0..mm).flat_map(|i| std::iter::repeat_n(i, instance.demands[i] as usize)).collect();
    // no location can absorb more than the whole demand
    let objects: Vec<usize> = (0..nn)
        .filter(|&k| placements[k])
        .flat_map(|k| std::iter::repeat_n(k, instance.capacities[k].min(demand) as usize))
        .collect();
    let benefits: Vec<i64> = persons
        .iter()
        .flat_map(|&i| objects.iter().map(move |&k| -instance.service_cost(i, k)))
        .collect();
    let sub = Assignment2DInstance::new_trusted(persons.len(), objects.len(), benefits, None)?;
    let result = auction_scaled(&sub, None)?;
    for (p, &o) in result.assignment.iter().enumerate() {
        flows[persons[p] * nn + objects[o]] += 1;
    }
    Ok(TransportationSolution { flows, cost: -result.primal })
}

/// All-open completion of a placement prefix, with its flows and total cost.
pub fn facility_base_heuristic(
    instance: &FacilityInstance,
    prefix: &[bool],
) -> Result<(Vec<bool>, TransportationSolution, i64), FacilityError> {
    let mut placements = prefix.to_vec();
    placements.resize(instance.locations(), true);
    let flows = solve_transportation(instance, &placements).map_err(|e| match e {
        FacilityError::InfeasiblePlacement { demand, capacity } => FacilityError::Infeasible { demand, capacity },
        other => other,
    })?;
    let cost = instance.placement_cost(&placements) + flows.cost;
    Ok((placements, flows, cost))
}

/// One posed transportation problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubSolve {
    pub placements: Vec<bool>,
    /// `None` when the placement cannot carry the demand.
    pub solution: Option<TransportationSolution>,
}

/// Facility cost as a [`DiscreteObjective`], counting every transportation
/// problem it poses. With caching on, repeated placements are answered from
/// the table.
pub struct FacilityObjective<'a> {
    instance: &'a FacilityInstance,
    cache: Option<Mutex<HashMap<Vec<bool>, Option<TransportationSolution>>>>,
    log: Mutex<Vec<SubSolve>>,
    first_error: Mutex<Option<FacilityError>>,
}

impl<'a> FacilityObjective<'a> {
    pub fn new(instance: &'a FacilityInstance, cache: bool) -> Self {
        Self {
            instance,
            cache: cache.then(|| Mutex::new(HashMap::new())),
            log: Mutex::new(Vec::new()),
            first_error: Mutex::new(None),
        }
    }

    /// Transportation problems actually solved, in order.
    pub fn log(&self) -> Vec<SubSolve> {
        self.log.lock().expect("log lock").clone()
    }

    pub fn solves(&self) -> usize {
        self.log.lock().expect("log lock").len()
    }

    pub fn transport(&self, placements: &[bool]) -> Option<TransportationSolution> {
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.lock().expect("cache lock").get(placements) {
                return hit.clone();
            }
        }
        let solution = match solve_transportation(self.instance, placements) {
            Ok(s) => Some(s),
            Err(FacilityError::InfeasiblePlacement { .. }) => None,
            Err(e) => {
                self.first_error.lock().expect("error lock").get_or_insert(e);
                None
            }
        };
        self.log.lock().expect("log lock").push(SubSolve {
            placements: placements.to_vec(),
            solution: solution.clone(),
        });
        if let Some(cache) = &self.cache {
            cache
                .lock()
                .expect("cache lock")
                .entry(placements.to_vec())
                .or_insert_with(|| solution.clone());
        }
        solution
    }

    fn take_error(&self) -> Option<FacilityError> {
        self.first_error.lock().expect("error lock").take()
    }
}

impl DiscreteObjective for FacilityObjective<'_> {
    fn evaluate(&self, tuple: &[i64]) -> Option<f64> {
        let placements: Vec<bool> = tuple.iter().map(|&u| u != 0).collect();
        let flows = self.transport(&placements)?;
        Some((self.instance.placement_cost(&placements) + flows.cost) as f64)
    }
}

/// Completes any placement prefix by opening every remaining location.
#[derive(Debug, Clone, Copy, Default)]
pub struct OpenRemaining;

impl<P: Problem<State = Vec<i64>, Control = i64>> BaseHeuristic<P> for OpenRemaining {
    fn complete(&self, problem: &P, prefix: &Traj<P>) -> Option<Traj<P>> {
        let mut states = vec![prefix.last_state().clone()];
        let mut controls = Vec::new();
        for stage in prefix.len()..problem.horizon() {
            states.push(problem.successor(stage, &states[states.len() - 1], &1));
            controls.push(1);
        }
        Trajectory::from_parts(states, controls).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacilityOutcome {
    pub placements: Vec<bool>,
    pub flows: TransportationSolution,
    pub cost: i64,
    /// All-open heuristic cost.
    pub baseline_cost: i64,
    /// Transportation problems solved beyond the initial all-open one.
    pub transport_solves: usize,
    pub sub_solves: Vec<SubSolve>,
}

/// Fortified rollout over placements in location order.
pub fn facility_rollout(instance: &FacilityInstance, cache: bool) -> Result<FacilityOutcome, FacilityError> {
    instance.validate()?;
    let all_open = vec![true; instance.locations()];
    let capacity = instance.open_capacity(&all_open);
    if instance.total_demand() > capacity {
        return Err(FacilityError::Infeasible {
            demand: instance.total_demand(),
            capacity,
        });
    }
    let objective = FacilityObjective::new(instance, cache);
    let problem = wrap_discrete(vec![vec![0, 1]; instance.locations()], &objective);
    let out = fortified_rollout(&problem, &OpenRemaining);
    if let Some(e) = objective.take_error() {
        return Err(e);
    }
    let out = out?;
    let placements: Vec<bool> = out.trajectory.last_state().iter().map(|&u| u != 0).collect();
    let log = objective.log();
    let flows = log
        .iter()
        .rev()
        .find(|s| s.placements == placements)
        .and_then(|s| s.solution.clone())
        .expect("final placement was evaluated");
    Ok(FacilityOutcome {
        cost: out.cost as i64,
        baseline_cost: out.baseline_cost as i64,
        placements,
        flows,
        transport_solves: log.len() - 1,
        sub_solves: log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_client_single_location() {
        let inst = FacilityInstance::new(vec![3], vec![5], vec![0], vec![2]).unwrap();
        let s = solve_transportation(&inst, &[true]).unwrap();
        assert_eq!(s.flows, vec![3]);
        assert_eq!(s.cost, 6);
        s.check(&inst, &[true]).unwrap();
    }

    #[test]
    fn zero_demand_is_free() {
        let inst = FacilityInstance::new(vec![0, 0], vec![1, 1], vec![4, 4], vec![1; 4]).unwrap();
        let s = solve_transportation(&inst, &[false, false]).unwrap();
        assert_eq!(s.cost, 0);
        assert!(s.flows.iter().all(|&f| f == 0));
    }

    #[test]
    fn closed_capacity_is_infeasible() {
        let inst = FacilityInstance::new(vec![4], vec![5, 1], vec![0, 0], vec![1, 1]).unwrap();
        assert!(matches!(
            facility_base_heuristic(&inst, &[false]),
            Err(FacilityError::Infeasible { demand: 4, capacity: 1 })
        ));
    }

    #[test]
    fn size_guard_trips() {
        let inst = FacilityInstance::new(vec![600], vec![600], vec![0], vec![1]).unwrap();
        assert!(matches!(
            solve_transportation(&inst, &[true]),
            Err(FacilityError::SizeGuard { units: 600, .. })
        ));
    }

    #[test]
    fn flow_check_names_conservation() {
        let inst = FacilityInstance::new(vec![2, 1], vec![3, 3], vec![0, 0], vec![1, 2, 2, 1]).unwrap();
        let mut s = solve_transportation(&inst, &[true, true]).unwrap();
        s.flows[0] += 1;
        let err = s.check(&inst, &[true, true]).unwrap_err();
        assert!(matches!(err, FlowViolation::Conservation { client: 0, .. }));
        assert!(err.to_string().contains("demand conservation"));
    }

    #[test]
    fn solve_counts_with_and_without_cache() {
        let inst = FacilityInstance::new(vec![2, 3], vec![4, 3, 5], vec![3, 1, 4], vec![1, 5, 2, 4, 1, 3]).unwrap();
        let cached = facility_rollout(&inst, true).unwrap();
        let plain = facility_rollout(&inst, false).unwrap();
        assert!(cached.transport_solves <= 4);
        assert_eq!(plain.transport_solves, 6);
        assert_eq!(cached.cost, plain.cost);
        assert!(cached.cost <= cached.baseline_cost);
        cached.flows.check(&inst, &cached.placements).unwrap();
    }
}
