//! Brute-force reference solvers.
//!
//! Everything here enumerates. Inputs are plain data (matrices, tensors,
//! vectors) or the generic [`Problem`] trait, never the solvers under test.
//! Ties resolve to the first candidate in enumeration order.

use rolloutkit::trajectory::{CompleteTrajectory, Problem, Trajectory};
use thiserror::Error;

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration exceeded the budget of {0}")]
    BudgetExceeded(usize),
    #[error("no feasible solution exists")]
    NoFeasible,
}

/// Enumeration limit with a running counter.
#[derive(Debug, Clone)]
pub struct OracleBudget {
    limit: usize,
    used: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}

impl OracleBudget {
    pub fn new(limit: usize) -> Self {
        Self { limit, used: 0 }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn used(&self) -> usize {
        self.used
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.used += 1;
        if self.used > self.limit {
            Err(OracleError::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

type Found<P> = (CompleteTrajectory<<P as Problem>::State, <P as Problem>::Control>, f64);

/// Minimum-cost feasible complete trajectory by depth-first enumeration.
pub fn exact_dp<P: Problem + ?Sized>(problem: &P, budget: &mut OracleBudget) -> Result<Found<P>, OracleError> {
    let mut best: Option<Found<P>> = None;
    let root = Trajectory::new(problem.initial_state());
    dfs(problem, root, budget, &mut best)?;
    best.ok_or(OracleError::NoFeasible)
}

fn dfs<P: Problem + ?Sized>(
    problem: &P,
    y: Trajectory<P::State, P::Control>,
    budget: &mut OracleBudget,
    best: &mut Option<Found<P>>,
) -> Result<(), OracleError> {
    let k = y.len();
    if k == problem.horizon() {
        budget.tick()?;
        let t = CompleteTrajectory::new(y, problem.horizon()).expect("length equals horizon");
        if problem.feasible(&t) {
            let c = problem.cost(&t);
            if best.as_ref().is_none_or(|(_, b)| c < *b) {
                *best = Some((t, c));
            }
        }
        return Ok(());
    }
    for u in problem.candidates(k, &y) {
        let next = problem.successor(k, y.last_state(), &u);
        let mut states = y.states().to_vec();
        let mut controls = y.controls().to_vec();
        states.push(next);
        controls.push(u);
        dfs(problem, Trajectory::from_parts(states, controls).expect("alternating"), budget, best)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Maximize,
    Minimize,
}

/// Best injection of `persons` rows into `objects` columns of the row-major
/// `values` matrix, restricted to pairs where `allowed` holds.
pub fn exact_assignment_2d(
    persons: usize,
    objects: usize,
    values: &[i64],
    allowed: &dyn Fn(usize, usize) -> bool,
    orientation: Orientation,
    budget: &mut OracleBudget,
) -> Result<(i64, Vec<usize>), OracleError> {
    struct Search<'a> {
        objects: usize,
        values: &'a [i64],
        allowed: &'a dyn Fn(usize, usize) -> bool,
        orientation: Orientation,
        used: Vec<bool>,
        current: Vec<usize>,
        best: Option<(i64, Vec<usize>)>,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, persons: usize, acc: i64, budget: &mut OracleBudget) -> Result<(), OracleError> {
            if i == persons {
                budget.tick()?;
                let better = match (&self.best, self.orientation) {
                    (None, _) => true,
                    (Some((b, _)), Orientation::Maximize) => acc > *b,
                    (Some((b, _)), Orientation::Minimize) => acc < *b,
                };
                if better {
                    self.best = Some((acc, self.current.clone()));
                }
                return Ok(());
            }
            for j in 0..self.objects {
                if self.used[j] || !(self.allowed)(i, j) {
                    continue;
                }
                self.used[j] = true;
                self.current.push(j);
                let v = self.values[i * self.objects + j];
                self.go(i + 1, persons, acc + v, budget)?;
                self.current.pop();
                self.used[j] = false;
            }
            Ok(())
        }
    }
    let mut s = Search {
        objects,
        values,
        allowed,
        orientation,
        used: vec![false; objects],
        current: Vec::with_capacity(persons),
        best: None,
    };
    s.go(0, persons, 0, budget)?;
    s.best.ok_or(OracleError::NoFeasible)
}

/// Integer prices under which `assignment` leaves every person exactly happy
/// (ε = 0), searched over the grid `0..=max_price` per object.
pub fn equilibrium_prices(
    n: usize,
    benefits: &[i64],
    assignment: &[usize],
    max_price: i64,
    budget: &mut OracleBudget,
) -> Result<Option<Vec<i64>>, OracleError> {
    let mut prices = vec![0i64; n];
    loop {
        budget.tick()?;
        let happy = (0..n).all(|i| {
            let own = benefits[i * n + assignment[i]] - prices[assignment[i]];
            (0..n).all(|j| own >= benefits[i * n + j] - prices[j])
        });
        if happy {
            return Ok(Some(prices));
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(None);
            }
            prices[pos] += 1;
            if prices[pos] <= max_price {
                break;
            }
            prices[pos] = 0;
            pos += 1;
        }
    }
}

/// Minimum-cost partition of `layers` layers of `m` nodes into `m` groupings,
/// enumerating one permutation per adjacent layer pair. Groupings are listed
/// by layer-0 node.
pub fn exact_assignment_nd(
    layers: usize,
    m: usize,
    cost: &dyn Fn(&[usize]) -> i64,
    budget: &mut OracleBudget,
) -> Result<(i64, Vec<Vec<usize>>), OracleError> {
    let perms = all_permutations(m);
    let pairs = layers - 1;
    let mut index = vec![0usize; pairs];
    let mut best: Option<(i64, Vec<Vec<usize>>)> = None;
    loop {
        budget.tick()?;
        let groupings: Vec<Vec<usize>> = (0..m)
            .map(|start| {
                let mut g = vec![start];
                for &pi in &index {
                    g.push(perms[pi][g[g.len() - 1]]);
                }
                g
            })
            .collect();
        let total: i64 = groupings.iter().map(|g| cost(g)).sum();
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, groupings));
        }
        let mut pos = pairs;
        loop {
            if pos == 0 {
                return best.ok_or(OracleError::NoFeasible);
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < perms.len() {
                break;
            }
            index[pos] = 0;
        }
    }
}

fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == used.len() {
            out.push(current.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                current.push(j);
                go(current, used, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Cheapest integer flows shipping every demand within `capacities`, or
/// `None` when the capacities cannot carry the demand. `costs` is clients by
/// locations, row-major.
pub fn exact_transportation(
    demands: &[i64],
    capacities: &[i64],
    costs: &[i64],
    budget: &mut OracleBudget,
) -> Result<Option<(i64, Vec<i64>)>, OracleError> {
    let nn = capacities.len();
    let mut flows = vec![0i64; demands.len() * nn];
    let mut remaining = capacities.to_vec();
    let mut best: Option<(i64, Vec<i64>)> = None;
    ship(demands, costs, nn, 0, 0, demands.first().copied().unwrap_or(0), &mut remaining, &mut flows, budget, &mut best)?;
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn ship(
    demands: &[i64],
    costs: &[i64],
    nn: usize,
    client: usize,
    location: usize,
    left: i64,
    remaining: &mut [i64],
    flows: &mut [i64],
    budget: &mut OracleBudget,
    best: &mut Option<(i64, Vec<i64>)>,
) -> Result<(), OracleError> {
    if client == demands.len() {
        budget.tick()?;
        let total: i64 = flows.iter().zip(costs).map(|(f, c)| f * c).sum();
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            *best = Some((total, flows.to_vec()));
        }
        return Ok(());
    }
    if location == nn {
        if left == 0 {
            let next = demands.get(client + 1).copied().unwrap_or(0);
            ship(demands, costs, nn, client + 1, 0, next, remaining, flows, budget, best)?;
        }
        return Ok(());
    }
    let most = left.min(remaining[location]);
    for amount in 0..=most {
        flows[client * nn + location] = amount;
        remaining[location] -= amount;
        ship(demands, costs, nn, client, location + 1, left - amount, remaining, flows, budget, best)?;
        remaining[location] += amount;
    }
    flows[client * nn + location] = 0;
    Ok(())
}

/// Optimal placements, total cost, and flows over every placement vector.
pub fn exact_facility(
    demands: &[i64],
    capacities: &[i64],
    placement_costs: &[i64],
    service_costs: &[i64],
    budget: &mut OracleBudget,
) -> Result<(Vec<bool>, i64, Vec<i64>), OracleError> {
    let nn = capacities.len();
    let mut best: Option<(Vec<bool>, i64, Vec<i64>)> = None;
    for mask in 0..(1u64 << nn) {
        // location 0 is the most significant bit, so enumeration follows tuple order
        let placements: Vec<bool> = (0..nn).map(|k| mask >> (nn - 1 - k) & 1 == 1).collect();
        let open: Vec<i64> = capacities
            .iter()
            .zip(&placements)
            .map(|(&c, &o)| if o { c } else { 0 })
            .collect();
        let Some((service, flows)) = exact_transportation(demands, &open, service_costs, budget)? else {
            continue;
        };
        let fixed: i64 = placement_costs.iter().zip(&placements).filter(|(_, &o)| o).map(|(b, _)| b).sum();
        let total = fixed + service;
        if best.as_ref().is_none_or(|(_, b, _)| total < *b) {
            best = Some((placements, total, flows));
        }
    }
    best.ok_or(OracleError::NoFeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rolloutkit::trajectory::{Complete, Traj};

    struct Table {
        horizon: usize,
        branching: u8,
        cost: fn(&[u8]) -> f64,
        feasible: fn(&[u8]) -> bool,
    }

    impl Problem for Table {
        type State = Vec<u8>;
        type Control = u8;
        fn horizon(&self) -> usize {
            self.horizon
        }
        fn initial_state(&self) -> Vec<u8> {
            vec![]
        }
        fn successor(&self, _: usize, x: &Vec<u8>, u: &u8) -> Vec<u8> {
            let mut n = x.clone();
            n.push(*u);
            n
        }
        fn candidates(&self, _: usize, _: &Traj<Self>) -> Vec<u8> {
            (0..self.branching).collect()
        }
        fn cost(&self, t: &Complete<Self>) -> f64 {
            (self.cost)(t.controls())
        }
        fn feasible(&self, t: &Complete<Self>) -> bool {
            (self.feasible)(t.controls())
        }
    }

    #[test]
    fn single_candidate_dp() {
        let p = Table {
            horizon: 3,
            branching: 1,
            cost: |_| 2.0,
            feasible: |_| true,
        };
        let (t, c) = exact_dp(&p, &mut OracleBudget::default()).unwrap();
        assert_eq!(t.controls(), &[0, 0, 0]);
        assert_eq!(c, 2.0);
    }

    #[test]
    fn four_stage_hand_table() {
        // cost = binary value with bit weights 8,4,2,1, minus 5 for 1010;
        // feasible iff at least two ones. Hand enumeration of the 11 feasible
        // sequences: 0011 = 3 is smallest, 1010 = 10 - 5 = 5.
        let p = Table {
            horizon: 4,
            branching: 2,
            cost: |u| {
                let v = u.iter().fold(0, |a, &b| a * 2 + i32::from(b));
                f64::from(if v == 10 { v - 5 } else { v })
            },
            feasible: |u| u.iter().filter(|&&b| b == 1).count() >= 2,
        };
        let mut budget = OracleBudget::default();
        let (t, c) = exact_dp(&p, &mut budget).unwrap();
        assert_eq!(t.controls(), &[0, 0, 1, 1]);
        assert_eq!(c, 3.0);
        assert_eq!(budget.used(), 16);
    }

    #[test]
    fn all_infeasible_dp() {
        let p = Table {
            horizon: 2,
            branching: 2,
            cost: |_| 0.0,
            feasible: |_| false,
        };
        assert_eq!(exact_dp(&p, &mut OracleBudget::default()).unwrap_err(), OracleError::NoFeasible);
    }

    #[test]
    fn dp_budget() {
        let p = Table {
            horizon: 10,
            branching: 2,
            cost: |_| 0.0,
            feasible: |_| true,
        };
        assert_eq!(exact_dp(&p, &mut OracleBudget::new(100)).unwrap_err(), OracleError::BudgetExceeded(100));
    }

    #[test]
    fn assignment_basics() {
        let any = |_: usize, _: usize| true;
        let (v, a) = exact_assignment_2d(1, 1, &[7], &any, Orientation::Maximize, &mut OracleBudget::default()).unwrap();
        assert_eq!((v, a), (7, vec![0]));
        let diag = [10, 0, 0, 0, 10, 0, 0, 0, 10];
        let (v, a) = exact_assignment_2d(3, 3, &diag, &any, Orientation::Maximize, &mut OracleBudget::default()).unwrap();
        assert_eq!((v, a), (30, vec![0, 1, 2]));
        let (v, _) = exact_assignment_2d(3, 3, &diag, &any, Orientation::Minimize, &mut OracleBudget::default()).unwrap();
        assert_eq!(v, 0);
    }

    #[test]
    fn injections_count() {
        let any = |_: usize, _: usize| true;
        let mut budget = OracleBudget::default();
        exact_assignment_2d(2, 3, &[0; 6], &any, Orientation::Maximize, &mut budget).unwrap();
        assert_eq!(budget.used(), 6);
    }

    #[test]
    fn diagonal_equilibrium() {
        let b = [10, 0, 0, 10];
        let p = equilibrium_prices(2, &b, &[0, 1], 5, &mut OracleBudget::default()).unwrap();
        assert_eq!(p, Some(vec![0, 0]));
    }

    #[test]
    fn nd_single_node() {
        let (v, g) = exact_assignment_nd(3, 1, &|_| 9, &mut OracleBudget::default()).unwrap();
        assert_eq!(v, 9);
        assert_eq!(g, vec![vec![0, 0, 0]]);
    }

    #[test]
    fn nd_separable_decouples() {
        let beta = [1, 9, 9, 1];
        let gamma = [8, 2, 3, 8];
        let cost = |t: &[usize]| beta[t[0] * 2 + t[1]] + gamma[t[1] * 2 + t[2]];
        let (v, _) = exact_assignment_nd(3, 2, &cost, &mut OracleBudget::default()).unwrap();
        assert_eq!(v, 2 + 5);
    }

    #[test]
    fn transportation_small() {
        let r = exact_transportation(&[3], &[5], &[2], &mut OracleBudget::default()).unwrap();
        assert_eq!(r, Some((6, vec![3])));
        let r = exact_transportation(&[3], &[2], &[2], &mut OracleBudget::default()).unwrap();
        assert_eq!(r, None);
        let r = exact_transportation(&[2, 1], &[2, 2], &[1, 5, 1, 2], &mut OracleBudget::default()).unwrap();
        // client 0 takes location 0 twice (2), client 1 location 1 (2)
        assert_eq!(r, Some((4, vec![2, 0, 0, 1])));
    }

    #[test]
    fn facility_zero_demand_closes_everything() {
        let (p, c, _) = exact_facility(&[0], &[3, 3], &[1, 1], &[1, 1], &mut OracleBudget::default()).unwrap();
        assert_eq!(p, vec![false, false]);
        assert_eq!(c, 0);
    }

    #[test]
    fn facility_single_location_forced_open() {
        let (p, c, _) = exact_facility(&[2], &[5], &[4], &[3], &mut OracleBudget::default()).unwrap();
        assert_eq!(p, vec![true]);
        assert_eq!(c, 4 + 6);
    }
}
