//! Unstructured discrete optimization as a DP whose state is the tuple of
//! components fixed so far. Cost and constraint live on the terminal tuple only.

pub mod facility;

use std::sync::Arc;

use crate::trajectory::{Complete, Problem, Traj};

/// Terminal objective: `Some(G(u))` when `u` is in the constraint set.
pub trait DiscreteObjective {
    fn evaluate(&self, tuple: &[i64]) -> Option<f64>;
}

impl<O: DiscreteObjective + ?Sized> DiscreteObjective for &O {
    fn evaluate(&self, tuple: &[i64]) -> Option<f64> {
        (**self).evaluate(tuple)
    }
}

/// Objective assembled from separate cost and membership functions.
#[derive(Clone)]
pub struct FnObjective {
    cost: Arc<dyn Fn(&[i64]) -> f64 + Send + Sync>,
    feasible: Arc<dyn Fn(&[i64]) -> bool + Send + Sync>,
}

impl FnObjective {
    pub fn new(
        cost: impl Fn(&[i64]) -> f64 + Send + Sync + 'static,
        feasible: impl Fn(&[i64]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            cost: Arc::new(cost),
            feasible: Arc::new(feasible),
        }
    }
}

impl DiscreteObjective for FnObjective {
    fn evaluate(&self, tuple: &[i64]) -> Option<f64> {
        (self.feasible)(tuple).then(|| (self.cost)(tuple))
    }
}

/// DP form of a discrete problem over `values.len()` components.
pub struct DiscreteProblem<O> {
    values: Vec<Vec<i64>>,
    objective: O,
}

pub fn wrap_discrete<O: DiscreteObjective>(values: Vec<Vec<i64>>, objective: O) -> DiscreteProblem<O> {
    DiscreteProblem { values, objective }
}

impl<O> DiscreteProblem<O> {
    pub fn objective(&self) -> &O {
        &self.objective
    }

    pub fn values(&self) -> &[Vec<i64>] {
        &self.values
    }
}

impl<O: DiscreteObjective> Problem for DiscreteProblem<O> {
    type State = Vec<i64>;
    type Control = i64;

    fn horizon(&self) -> usize {
        self.values.len()
    }
    fn initial_state(&self) -> Vec<i64> {
        Vec::new()
    }
    fn successor(&self, _: usize, state: &Vec<i64>, control: &i64) -> Vec<i64> {
        let mut next = state.clone();
        next.push(*control);
        next
    }
    fn candidates(&self, stage: usize, _: &Traj<Self>) -> Vec<i64> {
        self.values[stage].clone()
    }
    fn cost(&self, t: &Complete<Self>) -> f64 {
        self.objective.evaluate(t.last_state()).unwrap_or(f64::INFINITY)
    }
    fn feasible(&self, t: &Complete<Self>) -> bool {
        self.objective.evaluate(t.last_state()).is_some()
    }
    fn evaluate(&self, t: &Complete<Self>) -> Option<f64> {
        self.objective.evaluate(t.last_state())
    }
}
