//! Small seeded DP problems used by the examples, tests, and the `toy-dp`
//! instance kind.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::multiagent::AgentDecomposition;
use crate::trajectory::{complete_with, BaseHeuristic, Complete, Problem, Traj, Trajectory};

type SeqCost = Arc<dyn Fn(&[u8]) -> f64 + Send + Sync>;
type SeqPredicate = Arc<dyn Fn(&[u8]) -> bool + Send + Sync>;

/// Problem whose state is the control history and whose cost and constraint
/// are arbitrary functions of the full control sequence.
#[derive(Clone)]
pub struct TableProblem {
    horizon: usize,
    candidates: Vec<Vec<u8>>,
    cost: SeqCost,
    feasible: SeqPredicate,
}

impl TableProblem {
    pub fn from_fn(
        horizon: usize,
        candidates: Vec<Vec<u8>>,
        cost: impl Fn(&[u8]) -> f64 + Send + Sync + 'static,
        feasible: impl Fn(&[u8]) -> bool + Send + Sync + 'static,
    ) -> Self {
        assert_eq!(candidates.len(), horizon, "one candidate list per stage");
        Self {
            horizon,
            candidates,
            cost: Arc::new(cost),
            feasible: Arc::new(feasible),
        }
    }

    /// Three binary stages where greedy rollout with an all-zeros completion
    /// settles on `010` (cost 4) but the optimum `111` (cost 1) sits behind
    /// the stage-0 runner-up.
    pub fn tree_beats_rollout() -> Self {
        const COSTS: [f64; 8] = [5.0, 8.0, 4.0, 9.0, 6.0, 7.0, 2.0, 1.0];
        Self::from_fn(
            3,
            vec![vec![0, 1]; 3],
            |u| COSTS[usize::from(u[0]) * 4 + usize::from(u[1]) * 2 + usize::from(u[2])],
            |_| true,
        )
    }

    /// Two binary stages, only `(0, 0)` feasible, and a heuristic that plays
    /// `(0, 0)` from the root but `1` from anywhere else. Plain rollout has no
    /// feasible candidate at stage 0.
    pub fn dead_end() -> (Self, RootPlan) {
        let p = Self::from_fn(2, vec![vec![0, 1]; 2], |u| f64::from(u[0] + u[1]), |u| u == [0, 0]);
        (p, RootPlan::new(vec![0, 0], 1))
    }
}

impl Problem for TableProblem {
    type State = Vec<u8>;
    type Control = u8;

    fn horizon(&self) -> usize {
        self.horizon
    }
    fn initial_state(&self) -> Vec<u8> {
        Vec::new()
    }
    fn successor(&self, _: usize, state: &Vec<u8>, control: &u8) -> Vec<u8> {
        let mut next = state.clone();
        next.push(*control);
        next
    }
    fn candidates(&self, stage: usize, _: &Traj<Self>) -> Vec<u8> {
        self.candidates[stage].clone()
    }
    fn cost(&self, t: &Complete<Self>) -> f64 {
        (self.cost)(t.controls())
    }
    fn feasible(&self, t: &Complete<Self>) -> bool {
        (self.feasible)(t.controls())
    }
}

/// Plays a fixed plan when started from the root and a constant control when
/// resumed anywhere else. Not sequentially consistent unless the plan is
/// constant and equal to the fallback.
#[derive(Debug, Clone)]
pub struct RootPlan {
    plan: Vec<u8>,
    fallback: u8,
}

impl RootPlan {
    pub fn new(plan: Vec<u8>, fallback: u8) -> Self {
        Self { plan, fallback }
    }
}

impl<P: Problem<Control = u8>> BaseHeuristic<P> for RootPlan {
    fn complete(&self, problem: &P, prefix: &Traj<P>) -> Option<Traj<P>> {
        let mut states = vec![prefix.last_state().clone()];
        let mut controls = Vec::new();
        for stage in prefix.len()..problem.horizon() {
            let u = if prefix.is_empty() {
                *self.plan.get(stage)?
            } else {
                self.fallback
            };
            states.push(problem.successor(stage, &states[states.len() - 1], &u));
            controls.push(u);
        }
        Trajectory::from_parts(states, controls).ok()
    }
}

/// Seeded finite-state DP: tabulated transitions and stage costs, a terminal
/// cost, a knapsack-style weight limit, and a set of forbidden terminal states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyDp {
    pub branching: Vec<usize>,
    pub modulus: u32,
    /// `[stage][state][control]`.
    pub next: Vec<Vec<Vec<u32>>>,
    pub stage_cost: Vec<Vec<Vec<i32>>>,
    pub terminal_cost: Vec<i32>,
    /// `[stage][control]`.
    pub weights: Vec<Vec<u32>>,
    pub capacity: u32,
    pub forbidden_terminal: Vec<bool>,
}

impl ToyDp {
    /// Random instance with `horizon` stages, `1..=max_branching` controls per
    /// stage, and `modulus` states.
    pub fn generate(rng: &mut impl Rng, horizon: usize, max_branching: usize, modulus: u32) -> Self {
        let branching: Vec<usize> = (0..horizon).map(|_| rng.random_range(1..=max_branching)).collect();
        let next = branching
            .iter()
            .map(|&b| (0..modulus).map(|_| (0..b).map(|_| rng.random_range(0..modulus)).collect()).collect())
            .collect();
        let stage_cost = branching
            .iter()
            .map(|&b| (0..modulus).map(|_| (0..b).map(|_| rng.random_range(0..10)).collect()).collect())
            .collect();
        let terminal_cost = (0..modulus).map(|_| rng.random_range(0..10)).collect();
        let weights: Vec<Vec<u32>> = branching
            .iter()
            .map(|&b| (0..b).map(|_| rng.random_range(0..4)).collect())
            .collect();
        let max_weight: u32 = weights.iter().map(|w| w.iter().copied().max().unwrap_or(0)).sum();
        let capacity = rng.random_range(0..=max_weight);
        let forbidden_terminal = (0..modulus).map(|_| rng.random_bool(0.3)).collect();
        Self {
            branching,
            modulus,
            next,
            stage_cost,
            terminal_cost,
            weights,
            capacity,
            forbidden_terminal,
        }
    }

    /// Relaxes the constraint just enough that `R(y_0)` is feasible.
    pub fn ensure_feasible<H: BaseHeuristic<Self>>(&mut self, heuristic: &H) -> bool {
        let root = Trajectory::new(self.initial_state());
        let Some(t) = complete_with(self, heuristic, &root) else {
            return false;
        };
        self.capacity = self.capacity.max(self.weight(t.controls()));
        self.forbidden_terminal[*t.last_state() as usize] = false;
        true
    }

    fn weight(&self, controls: &[u8]) -> u32 {
        controls
            .iter()
            .enumerate()
            .map(|(k, &u)| self.weights[k][usize::from(u)])
            .sum()
    }
}

impl Problem for ToyDp {
    type State = u32;
    type Control = u8;

    fn horizon(&self) -> usize {
        self.branching.len()
    }
    fn initial_state(&self) -> u32 {
        0
    }
    fn successor(&self, stage: usize, x: &u32, u: &u8) -> u32 {
        self.next[stage][*x as usize][usize::from(*u)]
    }
    fn candidates(&self, stage: usize, _: &Traj<Self>) -> Vec<u8> {
        (0..self.branching[stage] as u8).collect()
    }
    fn cost(&self, t: &Complete<Self>) -> f64 {
        let running: i32 = t
            .controls()
            .iter()
            .enumerate()
            .map(|(k, &u)| self.stage_cost[k][t.states()[k] as usize][usize::from(u)])
            .sum();
        f64::from(running + self.terminal_cost[*t.last_state() as usize])
    }
    fn feasible(&self, t: &Complete<Self>) -> bool {
        self.weight(t.controls()) <= self.capacity && !self.forbidden_terminal[*t.last_state() as usize]
    }
}

/// Feedback policies for [`ToyDp`]. All are sequentially consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToyPolicy {
    FirstCandidate,
    /// Cheapest immediate stage cost.
    Myopic,
    /// Lightest weight, keeping the knapsack constraint satisfiable.
    Lightest,
}

impl ToyPolicy {
    pub const ALL: [ToyPolicy; 3] = [ToyPolicy::FirstCandidate, ToyPolicy::Myopic, ToyPolicy::Lightest];

    pub fn control(self, p: &ToyDp, stage: usize, x: u32) -> u8 {
        let b = p.branching[stage];
        let key = |u: usize| match self {
            ToyPolicy::FirstCandidate => 0,
            ToyPolicy::Myopic => p.stage_cost[stage][x as usize][u],
            ToyPolicy::Lightest => p.weights[stage][u] as i32,
        };
        (0..b).min_by_key(|&u| (key(u), u)).unwrap_or(0) as u8
    }
}

impl BaseHeuristic<ToyDp> for ToyPolicy {
    fn complete(&self, p: &ToyDp, prefix: &Traj<ToyDp>) -> Option<Traj<ToyDp>> {
        let mut states = vec![*prefix.last_state()];
        let mut controls = Vec::new();
        for stage in prefix.len()..p.horizon() {
            let x = states[states.len() - 1];
            let u = self.control(p, stage, x);
            states.push(p.successor(stage, &x, &u));
            controls.push(u);
        }
        Trajectory::from_parts(states, controls).ok()
    }
}

/// Heuristic whose choices depend on where it was started, not just on the
/// current state. Generally neither consistent nor improving.
#[derive(Debug, Clone, Copy)]
pub struct Erratic {
    pub salt: u64,
}

impl BaseHeuristic<ToyDp> for Erratic {
    fn complete(&self, p: &ToyDp, prefix: &Traj<ToyDp>) -> Option<Traj<ToyDp>> {
        let origin = prefix.len() as u64;
        let mut states = vec![*prefix.last_state()];
        let mut controls = Vec::new();
        for stage in prefix.len()..p.horizon() {
            let x = states[states.len() - 1];
            let mix = self
                .salt
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(origin * 31 + stage as u64 * 7 + u64::from(x));
            let u = (mix % p.branching[stage] as u64) as u8;
            states.push(p.successor(stage, &x, &u));
            controls.push(u);
        }
        Trajectory::from_parts(states, controls).ok()
    }
}

/// Seeded multiagent DP. A control is one component per agent; agent `l`
/// chooses from `0..sizes[l]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentToy {
    pub horizon: usize,
    pub agents: usize,
    pub sizes: Vec<usize>,
    pub modulus: u32,
    /// `[stage][state][joint index]`.
    pub next: Vec<Vec<Vec<u32>>>,
    pub stage_cost: Vec<Vec<Vec<i32>>>,
    pub terminal_cost: Vec<i32>,
    /// `[agent][component]`, summed over all stages and agents.
    pub weights: Vec<Vec<u32>>,
    pub capacity: u32,
    pub forbidden_terminal: Vec<bool>,
}

impl AgentToy {
    /// `agents` agents with component sets of size `1..=max_size`, at least
    /// one of them of size exactly `max_size`.
    pub fn generate(rng: &mut impl Rng, horizon: usize, agents: usize, max_size: usize) -> Self {
        let mut sizes: Vec<usize> = (0..agents).map(|_| rng.random_range(1..=max_size)).collect();
        if let Some(first) = sizes.first_mut() {
            *first = max_size;
        }
        let joint: usize = sizes.iter().product();
        let modulus = 6;
        let next = (0..horizon)
            .map(|_| (0..modulus).map(|_| (0..joint).map(|_| rng.random_range(0..modulus)).collect()).collect())
            .collect();
        let stage_cost = (0..horizon)
            .map(|_| (0..modulus).map(|_| (0..joint).map(|_| rng.random_range(0..20)).collect()).collect())
            .collect();
        let terminal_cost = (0..modulus).map(|_| rng.random_range(0..10)).collect();
        let weights: Vec<Vec<u32>> = sizes
            .iter()
            .map(|&s| (0..s).map(|_| rng.random_range(0..3)).collect())
            .collect();
        let max_weight: u32 = weights.iter().map(|w| w.iter().copied().max().unwrap_or(0)).sum::<u32>() * horizon as u32;
        let capacity = rng.random_range(0..=max_weight);
        let forbidden_terminal = (0..modulus).map(|_| rng.random_bool(0.3)).collect();
        Self {
            horizon,
            agents,
            sizes,
            modulus,
            next,
            stage_cost,
            terminal_cost,
            weights,
            capacity,
            forbidden_terminal,
        }
    }

    pub fn ensure_feasible<H: BaseHeuristic<Self>>(&mut self, heuristic: &H) -> bool {
        let root = Trajectory::new(self.initial_state());
        let Some(t) = complete_with(self, heuristic, &root) else {
            return false;
        };
        self.capacity = self.capacity.max(self.weight(t.controls()));
        self.forbidden_terminal[*t.last_state() as usize] = false;
        true
    }

    fn joint_index(&self, u: &[u8]) -> usize {
        u.iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&c, &s)| acc * s + usize::from(c))
    }

    fn weight(&self, controls: &[Vec<u8>]) -> u32 {
        controls
            .iter()
            .flat_map(|u| u.iter().enumerate().map(|(l, &c)| self.weights[l][usize::from(c)]))
            .sum()
    }
}

impl Problem for AgentToy {
    type State = u32;
    type Control = Vec<u8>;

    fn horizon(&self) -> usize {
        self.horizon
    }
    fn initial_state(&self) -> u32 {
        0
    }
    fn successor(&self, stage: usize, x: &u32, u: &Vec<u8>) -> u32 {
        self.next[stage][*x as usize][self.joint_index(u)]
    }
    /// Full Cartesian product in lexicographic order.
    fn candidates(&self, _: usize, _: &Traj<Self>) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for &s in &self.sizes {
            out = out
                .into_iter()
                .flat_map(|p: Vec<u8>| {
                    (0..s as u8).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        out
    }
    fn cost(&self, t: &Complete<Self>) -> f64 {
        let running: i32 = t
            .controls()
            .iter()
            .enumerate()
            .map(|(k, u)| self.stage_cost[k][t.states()[k] as usize][self.joint_index(u)])
            .sum();
        f64::from(running + self.terminal_cost[*t.last_state() as usize])
    }
    fn feasible(&self, t: &Complete<Self>) -> bool {
        self.weight(t.controls()) <= self.capacity && !self.forbidden_terminal[*t.last_state() as usize]
    }
}

impl AgentDecomposition for AgentToy {
    type Component = u8;

    fn agent_count(&self) -> usize {
        self.agents
    }
    fn component_candidates(&self, _: usize, _: &Traj<Self>, agent: usize, _: &[u8]) -> Vec<u8> {
        (0..self.sizes[agent] as u8).collect()
    }
    fn compose(&self, components: &[u8]) -> Vec<u8> {
        components.to_vec()
    }
    fn decompose(&self, control: &Vec<u8>) -> Vec<u8> {
        control.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generator_is_deterministic() {
        let a = ToyDp::generate(&mut ChaCha8Rng::seed_from_u64(9), 4, 3, 5);
        let b = ToyDp::generate(&mut ChaCha8Rng::seed_from_u64(9), 4, 3, 5);
        assert_eq!(a, b);
    }

    #[test]
    fn ensure_feasible_admits_the_heuristic() {
        for seed in 0..20 {
            let mut p = ToyDp::generate(&mut ChaCha8Rng::seed_from_u64(seed), 5, 3, 6);
            for h in ToyPolicy::ALL {
                assert!(p.ensure_feasible(&h));
                let t = complete_with(&p, &h, &Trajectory::new(0)).unwrap();
                assert!(p.feasible(&t));
            }
        }
    }

    #[test]
    fn agent_candidates_are_the_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = AgentToy::generate(&mut rng, 2, 3, 2);
        let expected: usize = p.sizes.iter().product();
        assert_eq!(p.candidates(0, &Trajectory::new(0)).len(), expected);
    }

    #[test]
    fn table_problem_costs() {
        let p = TableProblem::tree_beats_rollout();
        let t = Trajectory::from_parts(vec![vec![], vec![1], vec![1, 1], vec![1, 1, 1]], vec![1, 1, 1]).unwrap();
        let t = crate::trajectory::CompleteTrajectory::new(t, 3).unwrap();
        assert_eq!(p.cost(&t), 1.0);
    }
}
