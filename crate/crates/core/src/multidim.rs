//! Multidimensional assignment: `N + 1` layers of `m` nodes, partitioned into
//! `m` node-disjoint groupings (one node per layer) of minimum total cost.
//!
//! The base heuristic is enforced separation: sweeping from the last layer
//! pair to the first, each pair is solved as a 2-dimensional assignment whose
//! costs minimize the grouping cost over every prefix tuple still consistent
//! with the fixed pairs. The rollout drivers fix pairs one node at a time,
//! layer pair by layer pair, keeping a tentative best solution.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::auction::{auction_scaled, AuctionError, Assignment2DInstance};

pub const DEFAULT_TUPLE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultidimError {
    #[error("need at least 3 layers, got {0}")]
    TooFewLayers(usize),
    #[error("expected {expected} layers, got {got}")]
    WrongLayerCount { expected: usize, got: usize },
    #[error("need at least one node per layer")]
    Empty,
    #[error("dense cost tensor has {got} entries, expected {expected}")]
    Shape { got: usize, expected: usize },
    #[error("fixed pairs are out of range or not injective")]
    InconsistentContext,
    #[error("prefix enumeration exceeded the tuple budget of {0}")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Auction(#[from] AuctionError),
}

/// Grouping cost over `(N + 1)`-tuples.
#[derive(Clone)]
pub enum GroupingCost {
    /// Row-major tensor with layer 0 as the slowest index.
    Dense(Vec<i64>),
    /// Must be pure.
    Callable(Arc<dyn Fn(&[usize]) -> i64 + Send + Sync>),
}

impl fmt::Debug for GroupingCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupingCost::Dense(v) => f.debug_tuple("Dense").field(&v.len()).finish(),
            GroupingCost::Callable(_) => f.write_str("Callable"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MultiAssignInstance {
    layers: usize,
    nodes: usize,
    cost: GroupingCost,
}

impl MultiAssignInstance {
    pub fn dense(layers: usize, nodes: usize, costs: Vec<i64>) -> Result<Self, MultidimError> {
        Self::check(layers, nodes)?;
        let expected = nodes.pow(layers as u32);
        if costs.len() != expected {
            return Err(MultidimError::Shape {
                got: costs.len(),
                expected,
            });
        }
        Ok(Self {
            layers,
            nodes,
            cost: GroupingCost::Dense(costs),
        })
    }

    pub fn callable(
        layers: usize,
        nodes: usize,
        cost: impl Fn(&[usize]) -> i64 + Send + Sync + 'static,
    ) -> Result<Self, MultidimError> {
        Self::check(layers, nodes)?;
        Ok(Self {
            layers,
            nodes,
            cost: GroupingCost::Callable(Arc::new(cost)),
        })
    }

    fn check(layers: usize, nodes: usize) -> Result<(), MultidimError> {
        if layers < 3 {
            return Err(MultidimError::TooFewLayers(layers));
        }
        if nodes == 0 {
            return Err(MultidimError::Empty);
        }
        Ok(())
    }

    /// `N + 1`.
    pub fn layers(&self) -> usize {
        self.layers
    }

    /// `m`.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn dense_costs(&self) -> Option<&[i64]> {
        match &self.cost {
            GroupingCost::Dense(v) => Some(v),
            GroupingCost::Callable(_) => None,
        }
    }

    pub fn grouping_cost(&self, tuple: &[usize]) -> i64 {
        debug_assert_eq!(tuple.len(), self.layers);
        match &self.cost {
            GroupingCost::Dense(v) => v[tuple.iter().fold(0, |acc, &j| acc * self.nodes + j)],
            GroupingCost::Callable(f) => f(tuple),
        }
    }

    /// Solution from one permutation per layer pair (`perms[t][x]` is the
    /// layer-`t+1` partner of node `x` in layer `t`).
    pub fn solution_from_permutations(&self, perms: &[Vec<usize>]) -> MultiAssignSolution {
        let groupings: Vec<Vec<usize>> = (0..self.nodes)
            .map(|start| {
                let mut g = Vec::with_capacity(self.layers);
                g.push(start);
                for p in perms {
                    g.push(p[g[g.len() - 1]]);
                }
                g
            })
            .collect();
        let cost = groupings.iter().map(|g| self.grouping_cost(g)).sum();
        MultiAssignSolution { groupings, cost }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("expected {expected} groupings, got {got}")]
    GroupingCount { expected: usize, got: usize },
    #[error("grouping {0} does not have one node per layer")]
    TupleShape(usize),
    #[error("node {node} of layer {layer} is covered {count} times")]
    Coverage { layer: usize, node: usize, count: usize },
    #[error("recorded cost {recorded} differs from recomputed {actual}")]
    CostMismatch { recorded: i64, actual: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiAssignSolution {
    /// Each grouping lists one node per layer, ordered by layer-0 node.
    pub groupings: Vec<Vec<usize>>,
    pub cost: i64,
}

impl MultiAssignSolution {
    /// Checks disjointness, coverage, and the recorded cost.
    pub fn validate(&self, instance: &MultiAssignInstance) -> Result<(), PartitionError> {
        let (layers, m) = (instance.layers, instance.nodes);
        if self.groupings.len() != m {
            return Err(PartitionError::GroupingCount {
                expected: m,
                got: self.groupings.len(),
            });
        }
        let mut seen = vec![vec![0usize; m]; layers];
        for (i, g) in self.groupings.iter().enumerate() {
            if g.len() != layers || g.iter().any(|&j| j >= m) {
                return Err(PartitionError::TupleShape(i));
            }
            for (layer, &node) in g.iter().enumerate() {
                seen[layer][node] += 1;
            }
        }
        for (layer, counts) in seen.iter().enumerate() {
            if let Some((node, &count)) = counts.iter().enumerate().find(|(_, &c)| c != 1) {
                return Err(PartitionError::Coverage { layer, node, count });
            }
        }
        let actual = self.groupings.iter().map(|g| instance.grouping_cost(g)).sum();
        if actual != self.cost {
            return Err(PartitionError::CostMismatch {
                recorded: self.cost,
                actual,
            });
        }
        Ok(())
    }

    /// Inverse of [`MultiAssignInstance::solution_from_permutations`].
    pub fn permutations(&self) -> Vec<Vec<usize>> {
        let layers = self.groupings.first().map_or(0, Vec::len);
        let m = self.groupings.len();
        let mut perms = vec![vec![0; m]; layers.saturating_sub(1)];
        for g in &self.groupings {
            for t in 0..layers - 1 {
                perms[t][g[t]] = g[t + 1];
            }
        }
        perms
    }
}

/// Permanently fixed pairs per adjacent layer pair, plus an optional trial pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeparationContext {
    /// `fixed[t]` lists `(layer-t node, layer-t+1 node)` pairs.
    pub fixed: Vec<Vec<(usize, usize)>>,
    /// `(pair, source, target)` under evaluation.
    pub trial: Option<(usize, usize, usize)>,
}

/// Partial injective maps per layer pair.
#[derive(Debug, Clone)]
struct Fixings {
    forward: Vec<Vec<Option<usize>>>,
    backward: Vec<Vec<Option<usize>>>,
}

impl Fixings {
    fn empty(pairs: usize, m: usize) -> Self {
        Self {
            forward: vec![vec![None; m]; pairs],
            backward: vec![vec![None; m]; pairs],
        }
    }

    fn try_fix(&mut self, pair: usize, x: usize, y: usize) -> Result<(), MultidimError> {
        let m = self.forward.first().map_or(0, Vec::len);
        if pair >= self.forward.len() || x >= m || y >= m {
            return Err(MultidimError::InconsistentContext);
        }
        match (self.forward[pair][x], self.backward[pair][y]) {
            (None, None) => {
                self.forward[pair][x] = Some(y);
                self.backward[pair][y] = Some(x);
                Ok(())
            }
            (Some(b), Some(a)) if a == x && b == y => Ok(()),
            _ => Err(MultidimError::InconsistentContext),
        }
    }

    fn is_complete(&self, pair: usize) -> bool {
        self.forward[pair].iter().all(Option::is_some)
    }

    fn from_context(ctx: &SeparationContext, pairs: usize, m: usize) -> Result<(Self, Option<(usize, usize, usize)>), MultidimError> {
        if ctx.fixed.len() > pairs {
            return Err(MultidimError::InconsistentContext);
        }
        let mut f = Self::empty(pairs, m);
        for (t, list) in ctx.fixed.iter().enumerate() {
            for &(x, y) in list {
                f.try_fix(t, x, y)?;
            }
        }
        if let Some((t, x, y)) = ctx.trial {
            if t >= pairs || x >= m || y >= m || f.forward[t][x].is_some() || f.backward[t][y].is_some() {
                return Err(MultidimError::InconsistentContext);
            }
        }
        Ok((f, ctx.trial))
    }
}

/// Prices carried between related 2D solves, keyed by layer pair and target node.
#[derive(Debug, Clone, Default)]
pub struct PriceStore {
    by_pair: HashMap<usize, (i64, Vec<Option<i64>>)>,
}

impl PriceStore {
    fn warm(&self, pair: usize, targets: &[usize], scale: i64) -> Option<Vec<i64>> {
        let (stored_scale, prices) = self.by_pair.get(&pair)?;
        Some(
            targets
                .iter()
                .map(|&y| prices[y].map_or(0, |p| p * scale / stored_scale))
                .collect(),
        )
    }

    fn record(&mut self, pair: usize, m: usize, targets: &[usize], scale: i64, prices: &[i64]) {
        let entry = self.by_pair.entry(pair).or_insert_with(|| (scale, vec![None; m]));
        if entry.0 != scale {
            for p in entry.1.iter_mut().flatten() {
                *p = *p * scale / entry.0;
            }
            entry.0 = scale;
        }
        for (&y, &p) in targets.iter().zip(prices) {
            entry.1[y] = Some(p);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationOutcome {
    pub solution: MultiAssignSolution,
    /// 2D subproblems formed, one per layer pair not fully fixed by the
    /// permanent context; zero-size ones included.
    pub solves: usize,
    pub auction_rounds: usize,
}

/// Enforced separation for three layers under `ctx`.
pub fn enforced_separation_3d(
    instance: &MultiAssignInstance,
    ctx: &SeparationContext,
) -> Result<SeparationOutcome, MultidimError> {
    if instance.layers != 3 {
        return Err(MultidimError::WrongLayerCount {
            expected: 3,
            got: instance.layers,
        });
    }
    enforced_separation_with(instance, ctx, DEFAULT_TUPLE_BUDGET)
}

/// Enforced separation for any layer count, with an empty context.
pub fn enforced_separation_nd(instance: &MultiAssignInstance) -> Result<SeparationOutcome, MultidimError> {
    enforced_separation_with(instance, &SeparationContext::default(), DEFAULT_TUPLE_BUDGET)
}

pub fn enforced_separation_with(
    instance: &MultiAssignInstance,
    ctx: &SeparationContext,
    tuple_budget: usize,
) -> Result<SeparationOutcome, MultidimError> {
    let (fixings, trial) = Fixings::from_context(ctx, instance.layers - 1, instance.nodes)?;
    separate(instance, &fixings, trial, None, tuple_budget)
}

fn separate(
    instance: &MultiAssignInstance,
    permanent: &Fixings,
    trial: Option<(usize, usize, usize)>,
    mut store: Option<&mut PriceStore>,
    tuple_budget: usize,
) -> Result<SeparationOutcome, MultidimError> {
    let m = instance.nodes;
    let pairs = instance.layers - 1;
    let mut fix = permanent.clone();
    if let Some((t, x, y)) = trial {
        fix.try_fix(t, x, y)?;
    }
    let mut perms: Vec<Vec<usize>> = vec![Vec::new(); pairs];
    let mut solves = 0;
    let mut rounds = 0;
    let mut evaluated = 0usize;

    for s in (0..pairs).rev() {
        if !permanent.is_complete(s) {
            solves += 1;
        }
        let sources: Vec<usize> = (0..m).filter(|&x| fix.forward[s][x].is_none()).collect();
        let targets: Vec<usize> = (0..m).filter(|&y| fix.backward[s][y].is_none()).collect();
        let mut perm: Vec<usize> = fix.forward[s].iter().map(|o| o.unwrap_or(usize::MAX)).collect();
        if !sources.is_empty() {
            let k = sources.len();
            let mut costs = Vec::with_capacity(k * k);
            let mut tuple = vec![0; instance.layers];
            for &x in &sources {
                let prefixes = consistent_prefixes(&fix, s, x);
                for &y in &targets {
                    // suffix through the already-solved pairs
                    tuple[s] = x;
                    tuple[s + 1] = y;
                    for u in s + 1..pairs {
                        tuple[u + 1] = perms[u][tuple[u]];
                    }
                    let mut best = i64::MAX;
                    for prefix in &prefixes {
                        evaluated += 1;
                        if evaluated > tuple_budget {
                            return Err(MultidimError::BudgetExceeded(tuple_budget));
                        }
                        tuple[..s].copy_from_slice(prefix);
                        best = best.min(instance.grouping_cost(&tuple));
                    }
                    costs.push(best);
                }
            }
            let sub = Assignment2DInstance::from_costs(k, k, &costs)?;
            let scale = k as i64 + 1;
            let warm = store.as_deref().and_then(|st| st.warm(s, &targets, scale));
            let result = auction_scaled(&sub, warm.as_deref())?;
            rounds += result.rounds;
            if let Some(st) = store.as_deref_mut() {
                st.record(s, m, &targets, result.scale, &result.prices);
            }
            for (i, &x) in sources.iter().enumerate() {
                perm[x] = targets[result.assignment[i]];
            }
        }
        perms[s] = perm;
    }
    Ok(SeparationOutcome {
        solution: instance.solution_from_permutations(&perms),
        solves,
        auction_rounds: rounds,
    })
}

/// Every `(j_0, ..., j_{s-1})` such that each consecutive pair, and the pair
/// `(j_{s-1}, x)`, is either fixed together or free on both ends.
fn consistent_prefixes(fix: &Fixings, s: usize, x: usize) -> Vec<Vec<usize>> {
    let m = fix.forward.first().map_or(0, Vec::len);
    // built backward from x, reversed at the end
    let mut partial: Vec<Vec<usize>> = vec![vec![x]];
    for t in (0..s).rev() {
        let mut next = Vec::new();
        for p in &partial {
            let head = p[p.len() - 1];
            match fix.backward[t][head] {
                Some(src) => {
                    let mut q = p.clone();
                    q.push(src);
                    next.push(q);
                }
                None => {
                    for src in (0..m).filter(|&j| fix.forward[t][j].is_none()) {
                        let mut q = p.clone();
                        q.push(src);
                        next.push(q);
                    }
                }
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|mut p| {
            p.reverse();
            p.pop();
            p
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RolloutOptions {
    /// Carry auction prices between trials of one node's sweep.
    pub warm_start: bool,
    pub tuple_budget: usize,
}

impl Default for RolloutOptions {
    fn default() -> Self {
        Self {
            warm_start: true,
            tuple_budget: DEFAULT_TUPLE_BUDGET,
        }
    }
}

/// Counts of 2D auction solves, itemized by phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SolveLedger {
    /// The heuristic run that sets the first tentative best.
    pub initial: usize,
    /// All trial evaluations.
    pub sweep: usize,
    /// The closing solve of the last layer pair.
    pub final_pass: usize,
}

impl SolveLedger {
    pub fn rollout_phase(&self) -> usize {
        self.sweep + self.final_pass
    }

    pub fn total(&self) -> usize {
        self.initial + self.sweep + self.final_pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDecision {
    pub pair: usize,
    pub node: usize,
    /// `(target, completed cost)` per trial, in trial order.
    pub trials: Vec<(usize, i64)>,
    pub fixed_to: usize,
    /// No trial beat the tentative best, so its pair was kept.
    pub followed_tentative: bool,
    pub tentative_cost: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiRollout {
    pub solution: MultiAssignSolution,
    /// Enforced-separation solution from the empty context.
    pub heuristic: MultiAssignSolution,
    pub ledger: SolveLedger,
    pub auction_rounds: usize,
    pub decisions: Vec<NodeDecision>,
}

/// Three-layer rollout.
pub fn rollout_3d(instance: &MultiAssignInstance, options: RolloutOptions) -> Result<MultiRollout, MultidimError> {
    if instance.layers != 3 {
        return Err(MultidimError::WrongLayerCount {
            expected: 3,
            got: instance.layers,
        });
    }
    rollout_nd(instance, options)
}

/// Node-by-node fortified rollout over layer pairs `0..N-1`, then one 2D
/// solve for the last pair.
pub fn rollout_nd(instance: &MultiAssignInstance, options: RolloutOptions) -> Result<MultiRollout, MultidimError> {
    let m = instance.nodes;
    let pairs = instance.layers - 1;
    if m == 1 {
        let sol = instance.solution_from_permutations(&vec![vec![0]; pairs]);
        return Ok(MultiRollout {
            heuristic: sol.clone(),
            solution: sol,
            ledger: SolveLedger::default(),
            auction_rounds: 0,
            decisions: Vec::new(),
        });
    }
    let mut fix = Fixings::empty(pairs, m);
    let mut ledger = SolveLedger::default();
    let initial = separate(instance, &fix, None, None, options.tuple_budget)?;
    ledger.initial = initial.solves;
    let mut rounds = initial.auction_rounds;
    let heuristic = initial.solution;
    let mut best = heuristic.clone();
    let mut best_perms = best.permutations();
    let mut decisions = Vec::new();

    for t in 0..pairs - 1 {
        for x in 0..m {
            let targets: Vec<usize> = (0..m).filter(|&y| fix.backward[t][y].is_none()).collect();
            let mut store = PriceStore::default();
            let mut trials = Vec::with_capacity(targets.len());
            let mut winner: Option<(usize, MultiAssignSolution)> = None;
            for &y in &targets {
                let store_ref = options.warm_start.then_some(&mut store);
                let out = separate(instance, &fix, Some((t, x, y)), store_ref, options.tuple_budget)?;
                ledger.sweep += out.solves;
                rounds += out.auction_rounds;
                trials.push((y, out.solution.cost));
                if winner.as_ref().is_none_or(|(_, w)| out.solution.cost < w.cost) {
                    winner = Some((y, out.solution));
                }
            }
            let (fixed_to, followed) = match winner {
                Some((y, sol)) if sol.cost <= best.cost => {
                    best_perms = sol.permutations();
                    best = sol;
                    (y, false)
                }
                _ => (best_perms[t][x], true),
            };
            fix.try_fix(t, x, fixed_to)?;
            decisions.push(NodeDecision {
                pair: t,
                node: x,
                trials,
                fixed_to,
                followed_tentative: followed,
                tentative_cost: best.cost,
            });
        }
    }

    let closing = separate(instance, &fix, None, None, options.tuple_budget)?;
    ledger.final_pass = closing.solves;
    rounds += closing.auction_rounds;
    debug_assert!(closing.solution.cost <= best.cost);
    Ok(MultiRollout {
        solution: closing.solution,
        heuristic,
        ledger,
        auction_rounds: rounds,
        decisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn separable(beta: &[i64], gamma: &[i64], m: usize) -> MultiAssignInstance {
        let mut costs = Vec::new();
        for j in 0..m {
            for l in 0..m {
                for w in 0..m {
                    costs.push(beta[j * m + l] + gamma[l * m + w]);
                }
            }
        }
        MultiAssignInstance::dense(3, m, costs).unwrap()
    }

    #[test]
    fn rejects_two_layers() {
        assert_eq!(
            MultiAssignInstance::dense(2, 2, vec![0; 4]).unwrap_err(),
            MultidimError::TooFewLayers(2)
        );
    }

    #[test]
    fn dense_indexing_is_row_major() {
        let inst = MultiAssignInstance::dense(3, 2, (0..8).collect()).unwrap();
        assert_eq!(inst.grouping_cost(&[1, 0, 1]), 5);
        assert_eq!(inst.grouping_cost(&[0, 1, 1]), 3);
    }

    #[test]
    fn separable_heuristic_hits_both_optima() {
        // beta optimum: 1 + 1 = 2 (diagonal); gamma optimum: 2 + 3 = 5 (anti-diagonal)
        let beta = [1, 9, 9, 1];
        let gamma = [8, 2, 3, 8];
        let inst = separable(&beta, &gamma, 2);
        let out = enforced_separation_3d(&inst, &SeparationContext::default()).unwrap();
        out.solution.validate(&inst).unwrap();
        assert_eq!(out.solution.cost, 7);
        assert_eq!(out.solves, 2);
    }

    #[test]
    fn fixed_pairs_are_respected() {
        let inst = MultiAssignInstance::dense(3, 3, (0..27).map(|v| (v * 7) % 11).collect()).unwrap();
        let ctx = SeparationContext {
            fixed: vec![vec![(0, 2)]],
            trial: Some((0, 1, 0)),
        };
        let out = enforced_separation_3d(&inst, &ctx).unwrap();
        out.solution.validate(&inst).unwrap();
        let perms = out.solution.permutations();
        assert_eq!(perms[0][0], 2);
        assert_eq!(perms[0][1], 0);
    }

    #[test]
    fn inconsistent_context_rejected() {
        let inst = MultiAssignInstance::dense(3, 2, vec![0; 8]).unwrap();
        let ctx = SeparationContext {
            fixed: vec![vec![(0, 1), (1, 1)]],
            trial: None,
        };
        assert_eq!(
            enforced_separation_3d(&inst, &ctx).unwrap_err(),
            MultidimError::InconsistentContext
        );
        let ctx = SeparationContext {
            fixed: vec![vec![(0, 1)]],
            trial: Some((0, 1, 1)),
        };
        assert_eq!(
            enforced_separation_3d(&inst, &ctx).unwrap_err(),
            MultidimError::InconsistentContext
        );
    }

    #[test]
    fn single_node_short_circuits() {
        let inst = MultiAssignInstance::dense(4, 1, vec![42]).unwrap();
        let out = rollout_nd(&inst, RolloutOptions::default()).unwrap();
        assert_eq!(out.solution.groupings, vec![vec![0, 0, 0, 0]]);
        assert_eq!(out.solution.cost, 42);
        assert!(out.decisions.is_empty());
        assert_eq!(out.ledger.total(), 0);
    }

    #[test]
    fn three_layer_ledger_itemization() {
        for m in 2..=4 {
            let inst = MultiAssignInstance::callable(3, m, |t| ((t[0] * 5 + t[1] * 3 + t[2] * 7) % 13) as i64).unwrap();
            let out = rollout_3d(&inst, RolloutOptions::default()).unwrap();
            assert_eq!(out.ledger.initial, 2);
            assert_eq!(out.ledger.sweep, m * (m + 1));
            assert_eq!(out.ledger.final_pass, 1);
            assert!(out.solution.cost <= out.heuristic.cost);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let inst = MultiAssignInstance::callable(6, 3, |t| t.iter().sum::<usize>() as i64).unwrap();
        let err = enforced_separation_with(&inst, &SeparationContext::default(), 10).unwrap_err();
        assert_eq!(err, MultidimError::BudgetExceeded(10));
    }

    #[test]
    fn prefixes_follow_fixed_pairs() {
        let mut fix = Fixings::empty(2, 3);
        fix.try_fix(0, 2, 1).unwrap();
        // x = 1 in layer 1 is the fixed partner of node 2
        assert_eq!(consistent_prefixes(&fix, 1, 1), vec![vec![2]]);
        // x = 0 is free: sources 0 and 1 remain
        assert_eq!(consistent_prefixes(&fix, 1, 0), vec![vec![0], vec![1]]);
    }
}
