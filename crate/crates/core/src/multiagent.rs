//! One-agent-at-a-time reformulation.
//!
//! A control `u_k = (u_k^1, ..., u_k^m)` is unfolded into `m` consecutive
//! decision slots. Between slots the state carries the components chosen so
//! far; the wrapped transition fires once all `m` are fixed. Rollout over the
//! split problem costs `sum_l |U_k^l|` heuristic calls per stage instead of
//! `prod_l |U_k^l|`.

use thiserror::Error;

use crate::rollout::{self, RolloutError, Variant};
use crate::trajectory::{BaseHeuristic, Complete, CompleteTrajectory, Problem, Traj, Trajectory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiagentError {
    #[error("problem declares no agent components")]
    NotDecomposed,
    #[error("heuristic cannot resume after {agent} fixed component(s)")]
    IncompleteHeuristic { agent: usize },
    #[error(transparent)]
    Rollout(#[from] RolloutError),
}

/// A problem whose controls are tuples of per-agent components.
pub trait AgentDecomposition: Problem {
    type Component: Clone + PartialEq + std::fmt::Debug;

    fn agent_count(&self) -> usize;

    /// `U_k^l` given the components already fixed for this stage.
    fn component_candidates(
        &self,
        stage: usize,
        prefix: &Traj<Self>,
        agent: usize,
        fixed: &[Self::Component],
    ) -> Vec<Self::Component>;

    fn compose(&self, components: &[Self::Component]) -> Self::Control;
    fn decompose(&self, control: &Self::Control) -> Vec<Self::Component>;
}

/// `(x_k, u_k^1, ..., u_k^l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitState<S, K> {
    pub base: S,
    pub pending: Vec<K>,
}

/// The split problem over `N * m` decision slots.
pub struct AgentSplit<'a, P: AgentDecomposition> {
    inner: &'a P,
    agents: usize,
}

pub type SplitTraj<P> = Trajectory<SplitState<<P as Problem>::State, <P as AgentDecomposition>::Component>, <P as AgentDecomposition>::Component>;

pub fn split_agents<P: AgentDecomposition>(problem: &P) -> Result<AgentSplit<'_, P>, MultiagentError> {
    match problem.agent_count() {
        0 => Err(MultiagentError::NotDecomposed),
        agents => Ok(AgentSplit { inner: problem, agents }),
    }
}

impl<'a, P: AgentDecomposition> AgentSplit<'a, P> {
    pub fn inner(&self) -> &'a P {
        self.inner
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    /// Collapses a split trajectory to the original problem's stages. Any
    /// trailing partial stage is dropped; see [`SplitState::pending`].
    pub fn to_original(&self, split: &SplitTraj<P>) -> Traj<P> {
        let m = self.agents;
        let stages = split.len() / m;
        let states = (0..=stages).map(|i| split.states()[i * m].base.clone()).collect();
        let controls = (0..stages)
            .map(|i| self.inner.compose(&split.controls()[i * m..(i + 1) * m]))
            .collect();
        Trajectory::from_parts(states, controls).expect("stage boundaries alternate")
    }

    /// Expands an original trajectory into slots, starting with `fixed`
    /// components already pending at its first state.
    pub fn from_original(&self, original: &Traj<P>, stage_offset: usize, fixed: &[P::Component]) -> SplitTraj<P> {
        let mut states = vec![SplitState {
            base: original.first_state().clone(),
            pending: fixed.to_vec(),
        }];
        let mut controls = Vec::new();
        for (i, u) in original.controls().iter().enumerate() {
            let comps = self.inner.decompose(u);
            let start = if i == 0 { fixed.len() } else { 0 };
            for (l, c) in comps.iter().enumerate().skip(start) {
                controls.push(c.clone());
                let base = if l + 1 == self.agents {
                    let next = original.states()[i + 1].clone();
                    debug_assert_eq!(next, self.inner.successor(stage_offset + i, &original.states()[i], u));
                    next
                } else {
                    original.states()[i].clone()
                };
                let pending = if l + 1 == self.agents { Vec::new() } else { comps[..=l].to_vec() };
                states.push(SplitState { base, pending });
            }
        }
        Trajectory::from_parts(states, controls).expect("slots alternate")
    }

    fn to_original_complete(&self, split: &Complete<Self>) -> Complete<P> {
        CompleteTrajectory::new(self.to_original(split), self.inner.horizon()).expect("split horizon is N*m")
    }
}

impl<P: AgentDecomposition> Problem for AgentSplit<'_, P> {
    type State = SplitState<P::State, P::Component>;
    type Control = P::Component;

    fn horizon(&self) -> usize {
        self.inner.horizon() * self.agents
    }

    fn initial_state(&self) -> Self::State {
        SplitState {
            base: self.inner.initial_state(),
            pending: Vec::new(),
        }
    }

    fn successor(&self, slot: usize, state: &Self::State, control: &P::Component) -> Self::State {
        let mut pending = state.pending.clone();
        pending.push(control.clone());
        if pending.len() == self.agents {
            let u = self.inner.compose(&pending);
            SplitState {
                base: self.inner.successor(slot / self.agents, &state.base, &u),
                pending: Vec::new(),
            }
        } else {
            SplitState {
                base: state.base.clone(),
                pending,
            }
        }
    }

    fn candidates(&self, slot: usize, prefix: &Traj<Self>) -> Vec<P::Component> {
        let original = self.to_original(prefix);
        self.inner.component_candidates(
            slot / self.agents,
            &original,
            slot % self.agents,
            &prefix.last_state().pending,
        )
    }

    fn cost(&self, trajectory: &Complete<Self>) -> f64 {
        self.inner.cost(&self.to_original_complete(trajectory))
    }

    fn feasible(&self, trajectory: &Complete<Self>) -> bool {
        self.inner.feasible(&self.to_original_complete(trajectory))
    }

    fn evaluate(&self, trajectory: &Complete<Self>) -> Option<f64> {
        self.inner.evaluate(&self.to_original_complete(trajectory))
    }
}

/// A heuristic that can complete from the middle of a stage.
///
/// The returned tail starts at `x_k`; its first control must begin with
/// `fixed`. With `fixed` empty this is an ordinary completion.
pub trait AgentHeuristic<P: AgentDecomposition> {
    fn complete_partial(&self, problem: &P, prefix: &Traj<P>, fixed: &[P::Component]) -> Option<Traj<P>>;
}

impl<P: AgentDecomposition, H: AgentHeuristic<P> + ?Sized> AgentHeuristic<P> for &H {
    fn complete_partial(&self, problem: &P, prefix: &Traj<P>, fixed: &[P::Component]) -> Option<Traj<P>> {
        (**self).complete_partial(problem, prefix, fixed)
    }
}

/// Per-component feedback policy `(stage, x_k, agent, fixed) -> u_k^l`.
pub struct ComponentPolicy<F> {
    policy: F,
}

impl<F> ComponentPolicy<F> {
    pub fn new(policy: F) -> Self {
        Self { policy }
    }
}

impl<P, F> AgentHeuristic<P> for ComponentPolicy<F>
where
    P: AgentDecomposition,
    F: Fn(&P, usize, &P::State, usize, &[P::Component]) -> Option<P::Component>,
{
    fn complete_partial(&self, problem: &P, prefix: &Traj<P>, fixed: &[P::Component]) -> Option<Traj<P>> {
        let m = problem.agent_count();
        let mut states = vec![prefix.last_state().clone()];
        let mut controls = Vec::new();
        let mut comps = fixed.to_vec();
        for stage in prefix.len()..problem.horizon() {
            let x = states[states.len() - 1].clone();
            for agent in comps.len()..m {
                let c = (self.policy)(problem, stage, &x, agent, &comps)?;
                comps.push(c);
            }
            let u = problem.compose(&comps);
            states.push(problem.successor(stage, &x, &u));
            controls.push(u);
            comps.clear();
        }
        Trajectory::from_parts(states, controls).ok()
    }
}

/// Uses an [`AgentHeuristic`] as an ordinary base heuristic of `P`.
pub struct AsBase<H>(pub H);

impl<P: AgentDecomposition, H: AgentHeuristic<P>> BaseHeuristic<P> for AsBase<H> {
    fn complete(&self, problem: &P, prefix: &Traj<P>) -> Option<Traj<P>> {
        self.0.complete_partial(problem, prefix, &[])
    }
}

/// Base heuristic of the split problem induced by an [`AgentHeuristic`].
pub struct SplitHeuristic<'h, H>(pub &'h H);

impl<'a, P, H> BaseHeuristic<AgentSplit<'a, P>> for SplitHeuristic<'_, H>
where
    P: AgentDecomposition,
    H: AgentHeuristic<P>,
{
    fn complete(&self, split: &AgentSplit<'a, P>, prefix: &Traj<AgentSplit<'a, P>>) -> Option<Traj<AgentSplit<'a, P>>> {
        let original = split.to_original(prefix);
        let fixed = &prefix.last_state().pending;
        let tail = self.0.complete_partial(split.inner, &original, fixed)?;
        if let Some(first) = tail.controls().first() {
            if !split.inner.decompose(first).starts_with(fixed) {
                return None;
            }
        } else if !fixed.is_empty() {
            return None;
        }
        Some(split.from_original(&tail, original.len(), fixed))
    }
}

/// Confirms that `heuristic` resumes after every proper prefix of the
/// components of its own first control.
pub fn check_resumable<P, H>(problem: &P, heuristic: &H) -> Result<(), MultiagentError>
where
    P: AgentDecomposition,
    H: AgentHeuristic<P>,
{
    let root = Trajectory::new(problem.initial_state());
    let Some(tail) = heuristic.complete_partial(problem, &root, &[]) else {
        return Ok(());
    };
    let Some(first) = tail.controls().first() else {
        return Ok(());
    };
    let comps = problem.decompose(first);
    for agent in 1..problem.agent_count() {
        let fixed = &comps[..agent];
        let resumed = heuristic
            .complete_partial(problem, &root, fixed)
            .filter(|t| t.controls().first().is_some_and(|u| problem.decompose(u).starts_with(fixed)));
        if resumed.is_none() {
            return Err(MultiagentError::IncompleteHeuristic { agent });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotTrace<K> {
    pub stage: usize,
    pub agent: usize,
    pub candidates: Vec<K>,
    pub chosen: Option<usize>,
    pub feasible: usize,
    pub heuristic_calls: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiagentOutcome<S, C, K> {
    pub trajectory: CompleteTrajectory<S, C>,
    pub cost: f64,
    pub baseline_cost: f64,
    pub controls: Vec<C>,
    /// One entry per slot.
    pub chain: Vec<f64>,
    /// Heuristic calls summed over the slots of each original stage.
    pub stage_calls: Vec<usize>,
    pub heuristic_calls: usize,
    pub slots: Vec<SlotTrace<K>>,
}

pub type AgentOutcome<P> =
    MultiagentOutcome<<P as Problem>::State, <P as Problem>::Control, <P as AgentDecomposition>::Component>;

/// Rollout over [`split_agents`]`(problem)`, reported in original form.
pub fn multiagent_rollout<P, H>(problem: &P, heuristic: &H, variant: Variant) -> Result<AgentOutcome<P>, MultiagentError>
where
    P: AgentDecomposition,
    H: AgentHeuristic<P>,
{
    let split = split_agents(problem)?;
    check_resumable(problem, heuristic)?;
    let out = rollout::run(&split, &SplitHeuristic(heuristic), variant)?;
    let m = split.agents;
    let mut stage_calls = vec![0; problem.horizon()];
    let slots = out
        .trace
        .into_iter()
        .map(|t| {
            stage_calls[t.stage / m] += t.heuristic_calls;
            SlotTrace {
                stage: t.stage / m,
                agent: t.stage % m,
                candidates: t.candidates,
                chosen: t.chosen,
                feasible: t.feasible,
                heuristic_calls: t.heuristic_calls,
            }
        })
        .collect();
    let trajectory = split.to_original_complete(&out.trajectory);
    Ok(MultiagentOutcome {
        controls: trajectory.controls().to_vec(),
        trajectory,
        cost: out.cost,
        baseline_cost: out.baseline_cost,
        chain: out.chain,
        stage_calls,
        heuristic_calls: out.heuristic_calls,
        slots,
    })
}
