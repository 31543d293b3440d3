//! Trajectories, the problem abstraction, and base heuristics.
//!
//! A [`Trajectory`] is the alternating sequence `(x_0, u_0, x_1, ..., u_{k-1}, x_k)`.
//! Partial trajectories are the state of the rollout reformulation; a
//! [`CompleteTrajectory`] covers the whole horizon and is what costs and the
//! feasibility predicate are defined on.
//!
//! The checkers at the bottom of this module test the two properties the
//! cost-improvement guarantees rest on (sequential consistency and sequential
//! improvement) empirically, on a set of probe trajectories.

use std::fmt::Debug;
use std::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrajectoryError {
    #[error("cannot extend a trajectory that already covers the horizon ({horizon} stages)")]
    StageOverflow { horizon: usize },
    #[error("control is not among the candidates at stage {stage}")]
    InvalidControl { stage: usize },
    #[error("completion starts at a different state than the prefix ends at")]
    Mismatch,
    #[error("joined length {got} differs from the horizon {horizon}")]
    LengthError { got: usize, horizon: usize },
    #[error("states and controls do not alternate ({states} states, {controls} controls)")]
    Shape { states: usize, controls: usize },
    #[error("stage {stage} violates the system equation")]
    SuccessorMismatch { stage: usize },
}

/// Alternating state/control sequence. Immutable once built; extension copies.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S, C> {
    states: Vec<S>,
    controls: Vec<C>,
}

impl<S: Clone, C: Clone> Trajectory<S, C> {
    /// The zero-length trajectory `(x_0)`.
    pub fn new(initial: S) -> Self {
        Self {
            states: vec![initial],
            controls: Vec::new(),
        }
    }

    /// Assembles a trajectory from raw parts. Only the alternation is checked;
    /// use [`Trajectory::validate`] to check the system equation.
    pub fn from_parts(states: Vec<S>, controls: Vec<C>) -> Result<Self, TrajectoryError> {
        if states.len() != controls.len() + 1 {
            return Err(TrajectoryError::Shape {
                states: states.len(),
                controls: controls.len(),
            });
        }
        Ok(Self { states, controls })
    }

    /// Number of controls, i.e. the stage index of the last state.
    pub fn len(&self) -> usize {
        self.controls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.controls.is_empty()
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn controls(&self) -> &[C] {
        &self.controls
    }

    pub fn first_state(&self) -> &S {
        &self.states[0]
    }

    pub fn last_state(&self) -> &S {
        &self.states[self.states.len() - 1]
    }

    /// The first `k` stages, `(x_0, ..., x_k)`.
    pub fn prefix(&self, k: usize) -> Self {
        let k = k.min(self.len());
        Self {
            states: self.states[..=k].to_vec(),
            controls: self.controls[..k].to_vec(),
        }
    }

    /// The tail starting at `x_k`, `(x_k, u_k, ..., x_end)`.
    pub fn tail_from(&self, k: usize) -> Self {
        let k = k.min(self.len());
        Self {
            states: self.states[k..].to_vec(),
            controls: self.controls[k..].to_vec(),
        }
    }

    pub(crate) fn push(&self, control: C, next: S) -> Self {
        let mut out = self.clone();
        out.controls.push(control);
        out.states.push(next);
        out
    }

    /// Checks `x_{t+1} = f_t(x_t, u_t)` along the trajectory, where the first
    /// state sits at stage `offset`.
    pub fn validate<P>(&self, problem: &P, offset: usize) -> Result<(), TrajectoryError>
    where
        P: Problem<State = S, Control = C> + ?Sized,
        S: PartialEq + Debug,
        C: PartialEq + Debug,
    {
        for (t, control) in self.controls.iter().enumerate() {
            let next = problem.successor(offset + t, &self.states[t], control);
            if next != self.states[t + 1] {
                return Err(TrajectoryError::SuccessorMismatch { stage: offset + t });
            }
        }
        Ok(())
    }
}

/// A trajectory spanning the full horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteTrajectory<S, C>(Trajectory<S, C>);

impl<S: Clone, C: Clone> CompleteTrajectory<S, C> {
    /// Wraps `trajectory` after checking that it spans exactly `horizon` stages.
    pub fn new(trajectory: Trajectory<S, C>, horizon: usize) -> Result<Self, TrajectoryError> {
        if trajectory.len() != horizon {
            return Err(TrajectoryError::LengthError {
                got: trajectory.len(),
                horizon,
            });
        }
        Ok(Self(trajectory))
    }

    pub fn into_inner(self) -> Trajectory<S, C> {
        self.0
    }

    pub fn as_trajectory(&self) -> &Trajectory<S, C> {
        &self.0
    }
}

impl<S, C> Deref for CompleteTrajectory<S, C> {
    type Target = Trajectory<S, C>;

    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

/// Partial trajectory of problem `P`.
pub type Traj<P> = Trajectory<<P as Problem>::State, <P as Problem>::Control>;
/// Complete trajectory of problem `P`.
pub type Complete<P> = CompleteTrajectory<<P as Problem>::State, <P as Problem>::Control>;

/// A constrained deterministic DP problem over trajectories.
///
/// `cost` and `feasible` must be pure. `candidates` is the raw control set
/// before any feasibility filtering; its order is the tie-break order used
/// everywhere downstream.
pub trait Problem {
    type State: Clone + PartialEq + Debug;
    type Control: Clone + PartialEq + Debug;

    fn horizon(&self) -> usize;
    fn initial_state(&self) -> Self::State;
    fn successor(&self, stage: usize, state: &Self::State, control: &Self::Control) -> Self::State;
    fn candidates(&self, stage: usize, prefix: &Traj<Self>) -> Vec<Self::Control>;
    fn cost(&self, trajectory: &Complete<Self>) -> f64;
    fn feasible(&self, trajectory: &Complete<Self>) -> bool;

    /// `Some(cost)` when the trajectory is feasible. Solvers go through this,
    /// so problems whose feasibility and cost share work can override it.
    fn evaluate(&self, trajectory: &Complete<Self>) -> Option<f64> {
        if self.feasible(trajectory) {
            Some(self.cost(trajectory))
        } else {
            None
        }
    }
}

/// Completion map `y_k -> R(y_k)`.
///
/// A returned completion starts at the last state of `prefix` and obeys the
/// system equation through the end of the horizon. `None` means the heuristic
/// failed to produce anything.
pub trait BaseHeuristic<P: Problem + ?Sized> {
    fn complete(&self, problem: &P, prefix: &Traj<P>) -> Option<Traj<P>>;
}

impl<P: Problem + ?Sized, H: BaseHeuristic<P> + ?Sized> BaseHeuristic<P> for &H {
    fn complete(&self, problem: &P, prefix: &Traj<P>) -> Option<Traj<P>> {
        (**self).complete(problem, prefix)
    }
}

/// Heuristic that follows a feedback policy `mu_k(x_k)` to the end of the horizon.
/// Policies are sequentially consistent by construction.
pub struct PolicyHeuristic<F> {
    policy: F,
}

impl<F> PolicyHeuristic<F> {
    pub fn new(policy: F) -> Self {
        Self { policy }
    }
}

impl<P, F> BaseHeuristic<P> for PolicyHeuristic<F>
where
    P: Problem,
    F: Fn(&P, usize, &P::State) -> Option<P::Control>,
{
    fn complete(&self, problem: &P, prefix: &Traj<P>) -> Option<Traj<P>> {
        let mut tail = Trajectory::new(prefix.last_state().clone());
        for stage in prefix.len()..problem.horizon() {
            let state = tail.last_state().clone();
            let control = (self.policy)(problem, stage, &state)?;
            let next = problem.successor(stage, &state, &control);
            tail = tail.push(control, next);
        }
        Some(tail)
    }
}

/// `y_{k+1} = (y_k, u, f_k(x_k, u))`.
pub fn extend<P: Problem + ?Sized>(
    problem: &P,
    prefix: &Traj<P>,
    control: &P::Control,
) -> Result<Traj<P>, TrajectoryError> {
    let stage = prefix.len();
    if stage >= problem.horizon() {
        return Err(TrajectoryError::StageOverflow {
            horizon: problem.horizon(),
        });
    }
    if !problem.candidates(stage, prefix).contains(control) {
        return Err(TrajectoryError::InvalidControl { stage });
    }
    Ok(step(problem, prefix, control))
}

/// Extension without the candidate-membership check; callers iterate candidates.
pub(crate) fn step<P: Problem + ?Sized>(problem: &P, prefix: &Traj<P>, control: &P::Control) -> Traj<P> {
    let stage = prefix.len();
    let next = problem.successor(stage, prefix.last_state(), control);
    prefix.push(control.clone(), next)
}

/// `y_k ∪ R(y_k)`: glues a completion onto a prefix.
pub fn join<P: Problem + ?Sized>(
    problem: &P,
    prefix: &Traj<P>,
    completion: &Traj<P>,
) -> Result<Complete<P>, TrajectoryError> {
    if completion.first_state() != prefix.last_state() {
        return Err(TrajectoryError::Mismatch);
    }
    let got = prefix.len() + completion.len();
    if got != problem.horizon() {
        return Err(TrajectoryError::LengthError {
            got,
            horizon: problem.horizon(),
        });
    }
    completion.validate(problem, prefix.len())?;
    let mut states = prefix.states.clone();
    states.extend_from_slice(&completion.states[1..]);
    let mut controls = prefix.controls.clone();
    controls.extend_from_slice(&completion.controls);
    CompleteTrajectory::new(Trajectory { states, controls }, problem.horizon())
}

/// Runs the heuristic from `prefix` and joins. `None` if the heuristic fails
/// or returns a malformed completion.
pub(crate) fn complete_with<P, H>(problem: &P, heuristic: &H, prefix: &Traj<P>) -> Option<Complete<P>>
where
    P: Problem + ?Sized,
    H: BaseHeuristic<P> + ?Sized,
{
    let tail = heuristic.complete(problem, prefix)?;
    join(problem, prefix, &tail).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyViolationKind {
    /// Resuming one step in produced a different tail.
    TailDiffers,
    /// Resuming one step in produced nothing.
    ResumeFailed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyViolation {
    pub probe: usize,
    pub stage: usize,
    pub kind: ConsistencyViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// Probes that had an interior resumption point and were actually compared.
    pub checked: usize,
    pub violations: Vec<ConsistencyViolation>,
    /// Probes whose own completion failed.
    pub heuristic_failures: Vec<usize>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Replays the heuristic one step into its own completion for every probe and
/// reports where the resumed tail differs.
pub fn check_sequential_consistency<P, H>(problem: &P, heuristic: &H, probes: &[Traj<P>]) -> ConsistencyReport
where
    P: Problem + ?Sized,
    H: BaseHeuristic<P> + ?Sized,
{
    let mut report = ConsistencyReport::default();
    for (i, probe) in probes.iter().enumerate() {
        let stage = probe.len();
        if stage >= problem.horizon() {
            continue;
        }
        let Some(tail) = heuristic.complete(problem, probe) else {
            report.heuristic_failures.push(i);
            continue;
        };
        if tail.is_empty() {
            report.heuristic_failures.push(i);
            continue;
        }
        report.checked += 1;
        let next = probe.push(tail.controls[0].clone(), tail.states[1].clone());
        let expected = tail.tail_from(1);
        match heuristic.complete(problem, &next) {
            None => report.violations.push(ConsistencyViolation {
                probe: i,
                stage,
                kind: ConsistencyViolationKind::ResumeFailed,
            }),
            Some(resumed) if resumed != expected => report.violations.push(ConsistencyViolation {
                probe: i,
                stage,
                kind: ConsistencyViolationKind::TailDiffers,
            }),
            Some(_) => {}
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq)]
pub enum ImprovementViolationKind {
    /// No one-step extension yields a feasible completion.
    EmptyFeasibleSet,
    /// The best feasible one-step extension costs more than the heuristic's own completion.
    CostIncrease { heuristic_cost: f64, best_cost: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementViolation {
    pub probe: usize,
    pub stage: usize,
    pub kind: ImprovementViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ImprovementReport {
    pub checked: usize,
    /// Probes whose own completion is infeasible; the property says nothing about them.
    pub not_applicable: Vec<usize>,
    pub violations: Vec<ImprovementViolation>,
    pub heuristic_failures: Vec<usize>,
}

impl ImprovementReport {
    pub fn is_improving(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For each probe with a feasible own completion, sweeps every candidate,
/// builds `T_k(y_k, u)` and checks that some feasible one costs no more.
pub fn check_sequential_improvement<P, H>(problem: &P, heuristic: &H, probes: &[Traj<P>]) -> ImprovementReport
where
    P: Problem + ?Sized,
    H: BaseHeuristic<P> + ?Sized,
{
    let mut report = ImprovementReport::default();
    for (i, probe) in probes.iter().enumerate() {
        let stage = probe.len();
        if stage >= problem.horizon() {
            continue;
        }
        let Some(own) = complete_with(problem, heuristic, probe) else {
            report.heuristic_failures.push(i);
            continue;
        };
        let Some(own_cost) = problem.evaluate(&own) else {
            report.not_applicable.push(i);
            continue;
        };
        report.checked += 1;
        let best = problem
            .candidates(stage, probe)
            .iter()
            .filter_map(|u| {
                let next = step(problem, probe, u);
                let t = complete_with(problem, heuristic, &next)?;
                problem.evaluate(&t)
            })
            .min_by(f64::total_cmp);
        match best {
            None => report.violations.push(ImprovementViolation {
                probe: i,
                stage,
                kind: ImprovementViolationKind::EmptyFeasibleSet,
            }),
            Some(best_cost) if best_cost > own_cost => report.violations.push(ImprovementViolation {
                probe: i,
                stage,
                kind: ImprovementViolationKind::CostIncrease {
                    heuristic_cost: own_cost,
                    best_cost,
                },
            }),
            Some(_) => {}
        }
    }
    report
}

/// Reachable probe trajectories from seeded random playouts.
///
/// Each playout starts at `x_0`, and at every stage either follows the
/// heuristic's next control or a uniformly drawn candidate, stopping at a
/// random depth in `0..horizon`.
pub fn random_probes<P, H>(problem: &P, heuristic: &H, count: usize, seed: u64) -> Vec<Traj<P>>
where
    P: Problem + ?Sized,
    H: BaseHeuristic<P> + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = problem.horizon();
    let mut probes = Vec::with_capacity(count);
    for _ in 0..count {
        let depth = if horizon == 0 { 0 } else { rng.random_range(0..horizon) };
        let mut y = Trajectory::new(problem.initial_state());
        for stage in 0..depth {
            let follow = rng.random_bool(0.5);
            let heuristic_next = if follow {
                heuristic
                    .complete(problem, &y)
                    .filter(|t| !t.is_empty())
                    .map(|t| t.controls[0].clone())
            } else {
                None
            };
            let control = match heuristic_next {
                Some(u) => u,
                None => {
                    let cands = problem.candidates(stage, &y);
                    if cands.is_empty() {
                        break;
                    }
                    cands[rng.random_range(0..cands.len())].clone()
                }
            };
            y = step(problem, &y, &control);
        }
        probes.push(y);
    }
    probes
}
