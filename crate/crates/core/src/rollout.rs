//! Plain, fortified, and tree-based constrained rollout.
//!
//! All three variants evaluate a candidate `u` at a partial trajectory `y_k`
//! by building `T_k(y_k, u) = (y_k, u, R(y_{k+1}))` and testing it against the
//! constraint set. A candidate whose heuristic completion fails is treated
//! as infeasible.

use thiserror::Error;

use crate::trajectory::{complete_with, step, BaseHeuristic, Complete, Problem, Traj, Trajectory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RolloutError {
    #[error("base heuristic does not produce a feasible trajectory from the initial state")]
    InfeasibleStart,
    #[error("no candidate at stage {stage} yields a feasible completion")]
    DeadEnd { stage: usize },
    #[error("tree budget must be at least 1")]
    ZeroBudget,
}

/// One stage (plain/fortified) or one node expansion (tree).
#[derive(Debug, Clone, PartialEq)]
pub struct StageTrace<C> {
    pub stage: usize,
    pub candidates: Vec<C>,
    /// Candidates with `T_k(y_k, u)` in the constraint set.
    pub feasible: usize,
    /// Feasible candidates no costlier than the tentative best (fortified and tree).
    pub improving: usize,
    /// Index into `candidates` of the selected control. `None` when the
    /// fortified run followed its tentative best instead.
    pub chosen: Option<usize>,
    pub chain_cost: f64,
    pub heuristic_calls: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RolloutOutcome<S, C> {
    pub trajectory: crate::trajectory::CompleteTrajectory<S, C>,
    pub cost: f64,
    /// `G(R(y_0))`.
    pub baseline_cost: f64,
    pub baseline: crate::trajectory::CompleteTrajectory<S, C>,
    /// Plain: `G(T_k(y_k, u_k))` per stage. Fortified: tentative-best cost after each stage.
    pub chain: Vec<f64>,
    pub controls: Vec<C>,
    /// Total invocations of the base heuristic, including the initial one.
    pub heuristic_calls: usize,
    pub trace: Vec<StageTrace<C>>,
}

pub type Outcome<P> = RolloutOutcome<<P as Problem>::State, <P as Problem>::Control>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Fortified,
    Tree { budget: usize },
}

/// Dispatches on `variant`.
pub fn run<P, H>(problem: &P, heuristic: &H, variant: Variant) -> Result<Outcome<P>, RolloutError>
where
    P: Problem + ?Sized,
    H: BaseHeuristic<P> + ?Sized,
{
    match variant {
        Variant::Plain => rollout(problem, heuristic),
        Variant::Fortified => fortified_rollout(problem, heuristic),
        Variant::Tree { budget } => tree_rollout(problem, heuristic, budget),
    }
}

struct Evaluated<P: Problem + ?Sized> {
    candidates: Vec<P::Control>,
    /// `Some((T, G(T)))` for feasible candidates.
    results: Vec<Option<(Complete<P>, f64)>>,
}

impl<P: Problem + ?Sized> Evaluated<P> {
    fn feasible(&self) -> usize {
        self.results.iter().filter(|r| r.is_some()).count()
    }

    /// First-in-order argmin over feasible candidates.
    fn argmin(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, r) in self.results.iter().enumerate() {
            if let Some((_, c)) = r {
                if best.is_none_or(|(_, b)| *c < b) {
                    best = Some((i, *c));
                }
            }
        }
        best.map(|(i, _)| i)
    }
}

fn evaluate_candidates<P, H>(problem: &P, heuristic: &H, y: &Traj<P>) -> Evaluated<P>
where
    P: Problem + ?Sized,
    H: BaseHeuristic<P> + ?Sized,
{
    let candidates = problem.candidates(y.len(), y);
    let results = candidates
        .iter()
        .map(|u| {
            let t = complete_with(problem, heuristic, &step(problem, y, u))?;
            let cost = problem.evaluate(&t)?;
            Some((t, cost))
        })
        .collect();
    Evaluated { candidates, results }
}

fn start<P, H>(problem: &P, heuristic: &H) -> Result<(Traj<P>, Complete<P>, f64), RolloutError>
where
    P: Problem + ?Sized,
    H: BaseHeuristic<P> + ?Sized,
{
    let y0 = Trajectory::new(problem.initial_state());
    let r0 = complete_with(problem, heuristic, &y0).ok_or(RolloutError::InfeasibleStart)?;
    let cost = problem.evaluate(&r0).ok_or(RolloutError::InfeasibleStart)?;
    Ok((y0, r0, cost))
}

/// Plain constrained rollout.
///
/// Errors with [`RolloutError::DeadEnd`] when no candidate at some stage has
/// a feasible completion, which can happen only if the heuristic is not
/// sequentially improving along the visited path.
pub fn rollout<P, H>(problem: &P, heuristic: &H) -> Result<Outcome<P>, RolloutError>
where
    P: Problem + ?Sized,
    H: BaseHeuristic<P> + ?Sized,
{
    let (mut y, baseline, baseline_cost) = start(problem, heuristic)?;
    let mut calls = 1;
    let mut chain = Vec::with_capacity(problem.horizon());
    let mut trace = Vec::with_capacity(problem.horizon());
    let mut last = None;
    for stage in 0..problem.horizon() {
        let eval = evaluate_candidates(problem, heuristic, &y);
        calls += eval.candidates.len();
        let idx = eval.argmin().ok_or(RolloutError::DeadEnd { stage })?;
        let (t, cost) = eval.results[idx].clone().expect("argmin is feasible");
        trace.push(StageTrace {
            stage,
            candidates: eval.candidates.clone(),
            feasible: eval.feasible(),
            improving: eval.feasible(),
            chosen: Some(idx),
            chain_cost: cost,
            heuristic_calls: eval.candidates.len(),
        });
        chain.push(cost);
        y = step(problem, &y, &eval.candidates[idx]);
        last = Some((t, cost));
    }
    let (trajectory, cost) = match last {
        Some(found) => found,
        None => (baseline.clone(), baseline_cost),
    };
    debug_assert_eq!(trajectory.as_trajectory(), &y);
    Ok(RolloutOutcome {
        controls: trajectory.controls().to_vec(),
        trajectory,
        cost,
        baseline_cost,
        baseline,
        chain,
        heuristic_calls: calls,
        trace,
    })
}

/// Fortified rollout: never worse than `R(y_0)` and never dead-ends.
pub fn fortified_rollout<P, H>(problem: &P, heuristic: &H) -> Result<Outcome<P>, RolloutError>
where
    P: Problem + ?Sized,
    H: BaseHeuristic<P> + ?Sized,
{
    let (mut y, baseline, baseline_cost) = start(problem, heuristic)?;
    let mut best = (baseline.clone(), baseline_cost);
    let mut calls = 1;
    let mut chain = Vec::with_capacity(problem.horizon());
    let mut trace = Vec::with_capacity(problem.horizon());
    for stage in 0..problem.horizon() {
        let eval = evaluate_candidates(problem, heuristic, &y);
        calls += eval.candidates.len();
        let improving = eval
            .results
            .iter()
            .filter(|r| r.as_ref().is_some_and(|(_, c)| *c <= best.1))
            .count();
        let chosen = eval
            .argmin()
            .filter(|&i| eval.results[i].as_ref().is_some_and(|(_, c)| *c <= best.1));
        let control = match chosen {
            Some(i) => {
                best = eval.results[i].clone().expect("argmin is feasible");
                eval.candidates[i].clone()
            }
            None => best.0.controls()[stage].clone(),
        };
        y = step(problem, &y, &control);
        chain.push(best.1);
        trace.push(StageTrace {
            stage,
            feasible: eval.feasible(),
            improving,
            chosen,
            chain_cost: best.1,
            heuristic_calls: eval.candidates.len(),
            candidates: eval.candidates,
        });
    }
    let (trajectory, cost) = best;
    debug_assert_eq!(trajectory.as_trajectory(), &y);
    Ok(RolloutOutcome {
        controls: trajectory.controls().to_vec(),
        trajectory,
        cost,
        baseline_cost,
        baseline,
        chain,
        heuristic_calls: calls,
        trace,
    })
}

struct TreeNode<P: Problem + ?Sized> {
    prefix: Traj<P>,
    /// Best complete trajectory known through this node; `None` when its
    /// completion was infeasible.
    associated: Option<(Complete<P>, f64)>,
    /// Tie-break rank among leaves of equal cost and depth.
    order: usize,
}

impl<P: Problem + ?Sized> TreeNode<P> {
    fn key(&self) -> f64 {
        self.associated.as_ref().map_or(f64::INFINITY, |(_, c)| *c)
    }
}

/// Tree-based rollout with a fixed expansion `budget`.
///
/// The next leaf to expand is the one with the lowest associated cost,
/// deeper first on ties, then earlier insertion. Infeasible children stay in
/// the tree at infinite cost so a large budget becomes exhaustive. The child
/// on the expanded node's own associated path inherits that trajectory when
/// its fresh completion is infeasible or worse, and ranks after its siblings.
/// Under these rules a budget equal to the horizon reproduces
/// [`fortified_rollout`] exactly.
pub fn tree_rollout<P, H>(problem: &P, heuristic: &H, budget: usize) -> Result<Outcome<P>, RolloutError>
where
    P: Problem + ?Sized,
    H: BaseHeuristic<P> + ?Sized,
{
    if budget == 0 {
        return Err(RolloutError::ZeroBudget);
    }
    let (y0, baseline, baseline_cost) = start(problem, heuristic)?;
    let horizon = problem.horizon();
    let mut best = (baseline.clone(), baseline_cost);
    let mut calls = 1;
    let mut chain = Vec::new();
    let mut trace = Vec::new();
    let mut leaves: Vec<TreeNode<P>> = vec![TreeNode {
        prefix: y0,
        associated: Some((baseline.clone(), baseline_cost)),
        order: 0,
    }];
    let mut inserted = 1;

    for _ in 0..budget {
        let Some(pick) = select_leaf(&leaves, horizon) else {
            break;
        };
        let node = leaves.swap_remove(pick);
        let stage = node.prefix.len();
        let eval = evaluate_candidates(problem, heuristic, &node.prefix);
        calls += eval.candidates.len();

        let followed = node
            .associated
            .as_ref()
            .map(|(a, _)| a.controls()[stage].clone());
        let mut children = Vec::with_capacity(eval.candidates.len());
        let mut inheritor = None;
        for (i, u) in eval.candidates.iter().enumerate() {
            let fresh = eval.results[i].clone();
            let inherit = followed.as_ref() == Some(u)
                && match (&fresh, &node.associated) {
                    (None, _) => true,
                    (Some((_, c)), Some((_, a))) => c > a,
                    (Some(_), None) => false,
                };
            let child = TreeNode {
                prefix: step(problem, &node.prefix, u),
                associated: if inherit { node.associated.clone() } else { fresh },
                order: 0,
            };
            if inherit {
                inheritor = Some(child);
            } else {
                children.push(child);
            }
        }
        children.extend(inheritor);
        for mut child in children {
            child.order = inserted;
            inserted += 1;
            leaves.push(child);
        }

        let improving = eval
            .results
            .iter()
            .filter(|r| r.as_ref().is_some_and(|(_, c)| *c <= best.1))
            .count();
        let chosen = eval
            .argmin()
            .filter(|&i| eval.results[i].as_ref().is_some_and(|(_, c)| *c <= best.1));
        if let Some(i) = chosen {
            best = eval.results[i].clone().expect("argmin is feasible");
        }
        chain.push(best.1);
        trace.push(StageTrace {
            stage,
            feasible: eval.feasible(),
            improving,
            chosen,
            chain_cost: best.1,
            heuristic_calls: eval.candidates.len(),
            candidates: eval.candidates,
        });
    }

    let (trajectory, cost) = best;
    Ok(RolloutOutcome {
        controls: trajectory.controls().to_vec(),
        trajectory,
        cost,
        baseline_cost,
        baseline,
        chain,
        heuristic_calls: calls,
        trace,
    })
}

fn select_leaf<P: Problem + ?Sized>(leaves: &[TreeNode<P>], horizon: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, leaf) in leaves.iter().enumerate() {
        if leaf.prefix.len() >= horizon {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => {
                let other = &leaves[b];
                match leaf.key().total_cmp(&other.key()) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => {
                        (std::cmp::Reverse(leaf.prefix.len()), leaf.order)
                            < (std::cmp::Reverse(other.prefix.len()), other.order)
                    }
                }
            }
        };
        if better {
            best = Some(i);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy::{RootPlan, TableProblem};
    use crate::trajectory::PolicyHeuristic;

    fn zeros() -> PolicyHeuristic<impl Fn(&TableProblem, usize, &Vec<u8>) -> Option<u8>> {
        PolicyHeuristic::new(|_: &TableProblem, _, _: &Vec<u8>| Some(0))
    }

    #[test]
    fn single_candidate_has_no_choice() {
        let p = TableProblem::from_fn(3, vec![vec![0]; 3], |u| u.len() as f64, |_| true);
        let out = rollout(&p, &zeros()).unwrap();
        assert_eq!(out.controls, vec![0, 0, 0]);
        assert_eq!(out.chain, vec![3.0; 3]);
        assert_eq!(out.cost, out.baseline_cost);
    }

    #[test]
    fn plain_call_count_equals_candidates() {
        let p = TableProblem::tree_beats_rollout();
        let out = rollout(&p, &zeros()).unwrap();
        for t in &out.trace {
            assert_eq!(t.heuristic_calls, t.candidates.len());
        }
        assert_eq!(out.heuristic_calls, 1 + 2 * 3);
    }

    #[test]
    fn dead_end_at_stage_zero() {
        let (p, h) = TableProblem::dead_end();
        assert_eq!(rollout(&p, &h), Err(RolloutError::DeadEnd { stage: 0 }));
    }

    #[test]
    fn fortified_survives_dead_end() {
        let (p, h) = TableProblem::dead_end();
        let out = fortified_rollout(&p, &h).unwrap();
        assert_eq!(out.controls, vec![0, 0]);
        assert_eq!(out.cost, out.baseline_cost);
        // stage 0 follows the tentative best; at stage 1 the completed (0, 0) ties it
        assert_eq!(out.trace[0].chosen, None);
        assert_eq!(out.trace[0].feasible, 0);
        assert_eq!(out.trace[1].chosen, Some(0));
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let p = TableProblem::from_fn(2, vec![vec![0, 1]; 2], |_| 0.0, |u| u == [1, 1]);
        assert_eq!(rollout(&p, &zeros()), Err(RolloutError::InfeasibleStart));
        assert_eq!(fortified_rollout(&p, &zeros()), Err(RolloutError::InfeasibleStart));
        assert_eq!(tree_rollout(&p, &zeros(), 4), Err(RolloutError::InfeasibleStart));
    }

    #[test]
    fn all_worse_keeps_baseline() {
        // every trajectory but the heuristic's own all-ones is costlier;
        // the heuristic resumed anywhere but the root plays zeros
        let p = TableProblem::from_fn(3, vec![vec![0, 1]; 3], |u| if u == [1, 1, 1] { 0.0 } else { 5.0 }, |_| true);
        let h = RootPlan::new(vec![1, 1, 1], 0);
        let out = fortified_rollout(&p, &h).unwrap();
        assert_eq!(out.controls, vec![1, 1, 1]);
        assert_eq!(out.trajectory, out.baseline);
    }

    #[test]
    fn plain_rollout_misses_tree_optimum() {
        let p = TableProblem::tree_beats_rollout();
        let plain = rollout(&p, &zeros()).unwrap();
        assert_eq!(plain.controls, vec![0, 1, 0]);
        assert_eq!(plain.cost, 4.0);
        let tree = tree_rollout(&p, &zeros(), 6).unwrap();
        assert_eq!(tree.controls, vec![1, 1, 1]);
        assert_eq!(tree.cost, 1.0);
    }

    #[test]
    fn tree_with_horizon_budget_is_fortified() {
        let p = TableProblem::tree_beats_rollout();
        assert_eq!(tree_rollout(&p, &zeros(), 3).unwrap(), fortified_rollout(&p, &zeros()).unwrap());
        let (p, h) = TableProblem::dead_end();
        assert_eq!(tree_rollout(&p, &h, 2).unwrap(), fortified_rollout(&p, &h).unwrap());
    }

    #[test]
    fn zero_budget_is_an_error() {
        let p = TableProblem::tree_beats_rollout();
        assert_eq!(tree_rollout(&p, &zeros(), 0), Err(RolloutError::ZeroBudget));
    }

    #[test]
    fn tree_stops_when_exhausted() {
        let p = TableProblem::tree_beats_rollout();
        let out = tree_rollout(&p, &zeros(), 1000).unwrap();
        // 1 + 2 + 4 internal nodes
        assert_eq!(out.trace.len(), 7);
        assert_eq!(out.cost, 1.0);
    }
}
