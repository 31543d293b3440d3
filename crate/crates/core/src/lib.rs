//! Constrained rollout for deterministic dynamic programming, the auction
//! algorithm for assignment problems, and rollout heuristics for
//! multidimensional assignment and facility location.
//!
//! The generic core is [`trajectory::Problem`]: a finite-horizon DP whose
//! cost and constraint are defined on complete trajectories. The
//! [`rollout`] module improves any [`trajectory::BaseHeuristic`] on such a
//! problem; [`multiagent`] unfolds product controls into one decision per
//! agent. [`auction`] solves 2-dimensional assignment with ε-scaling and is
//! the workhorse of [`multidim`] and [`discrete::facility`].

pub mod auction;
pub mod discrete;
pub mod gen;
pub mod io;
pub mod multiagent;
pub mod multidim;
pub mod rollout;
pub mod toy;
pub mod trajectory;

pub use rollout::{fortified_rollout, rollout, tree_rollout, RolloutError, RolloutOutcome, Variant};
pub use trajectory::{BaseHeuristic, CompleteTrajectory, PolicyHeuristic, Problem, Trajectory};
