//! Forward auction for 2-dimensional assignment (benefit maximization).
//!
//! Arithmetic is exact: the solver works on a copy of the instance with
//! benefits multiplied by `n + 1`, so an integer ε of 1 on the scaled copy is
//! `1 / (n + 1) < 1 / n` in original units and the final assignment is optimal.
//! Prices in an [`AuctionResult`] are reported in those scaled units.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuctionError {
    #[error("benefit matrix has {got} entries, expected {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("{persons} persons but only {objects} objects")]
    TooFewObjects { persons: usize, objects: usize },
    #[error("mask pair ({person}, {object}) is out of range")]
    MaskOutOfRange { person: usize, object: usize },
    #[error("person {person} has no allowed object")]
    IsolatedPerson { person: usize },
    #[error("no assignment covers every person")]
    Infeasible,
    #[error("asymmetric instances must start from zero prices")]
    PriceInitError,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("price vector has {got} entries, expected {expected}")]
    PriceLength { got: usize, expected: usize },
}

/// Benefit matrix `a_ij` with an optional sparsity mask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment2DInstance {
    persons: usize,
    objects: usize,
    benefits: Vec<i64>,
    /// Sorted allowed objects per person; `None` means dense.
    allowed: Option<Vec<Vec<usize>>>,
}

impl Assignment2DInstance {
    /// Validates shape and the existence of an assignment covering every person.
    pub fn new(
        persons: usize,
        objects: usize,
        benefits: Vec<i64>,
        mask: Option<&[(usize, usize)]>,
    ) -> Result<Self, AuctionError> {
        let inst = Self::new_trusted(persons, objects, benefits, mask)?;
        if !inst.has_perfect_matching() {
            return Err(AuctionError::Infeasible);
        }
        Ok(inst)
    }

    /// Like [`Assignment2DInstance::new`] but skips the matching check. The
    /// solver still detects infeasibility through its price ceiling.
    pub fn new_trusted(
        persons: usize,
        objects: usize,
        benefits: Vec<i64>,
        mask: Option<&[(usize, usize)]>,
    ) -> Result<Self, AuctionError> {
        if benefits.len() != persons * objects {
            return Err(AuctionError::Dimension {
                got: benefits.len(),
                expected: persons * objects,
            });
        }
        if objects < persons {
            return Err(AuctionError::TooFewObjects { persons, objects });
        }
        let allowed = match mask {
            None => None,
            Some(pairs) => {
                let mut lists = vec![Vec::new(); persons];
                for &(person, object) in pairs {
                    if person >= persons || object >= objects {
                        return Err(AuctionError::MaskOutOfRange { person, object });
                    }
                    lists[person].push(object);
                }
                for (person, list) in lists.iter_mut().enumerate() {
                    list.sort_unstable();
                    list.dedup();
                    if list.is_empty() {
                        return Err(AuctionError::IsolatedPerson { person });
                    }
                }
                Some(lists)
            }
        };
        Ok(Self {
            persons,
            objects,
            benefits,
            allowed,
        })
    }

    /// Square dense instance from rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, AuctionError> {
        let persons = rows.len();
        let objects = rows.first().map_or(0, Vec::len);
        Self::new(persons, objects, rows.concat(), None)
    }

    /// Minimization instance: benefits are the negated costs.
    pub fn from_costs(persons: usize, objects: usize, costs: &[i64]) -> Result<Self, AuctionError> {
        Self::new(persons, objects, costs.iter().map(|c| -c).collect(), None)
    }

    pub fn persons(&self) -> usize {
        self.persons
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn benefit(&self, person: usize, object: usize) -> i64 {
        self.benefits[person * self.objects + object]
    }

    pub fn benefits(&self) -> &[i64] {
        &self.benefits
    }

    pub fn is_allowed(&self, person: usize, object: usize) -> bool {
        match &self.allowed {
            None => object < self.objects,
            Some(lists) => lists[person].binary_search(&object).is_ok(),
        }
    }

    /// Allowed `(person, object)` pairs, or `None` for a dense instance.
    pub fn mask_pairs(&self) -> Option<Vec<(usize, usize)>> {
        self.allowed.as_ref().map(|lists| {
            lists
                .iter()
                .enumerate()
                .flat_map(|(i, l)| l.iter().map(move |&j| (i, j)))
                .collect()
        })
    }

    pub fn for_each_allowed(&self, person: usize, mut f: impl FnMut(usize, i64)) {
        let row = &self.benefits[person * self.objects..(person + 1) * self.objects];
        match &self.allowed {
            None => row.iter().enumerate().for_each(|(j, &a)| f(j, a)),
            Some(lists) => lists[person].iter().for_each(|&j| f(j, row[j])),
        }
    }

    /// `C = max |a_ij|` over allowed pairs.
    pub fn max_abs_benefit(&self) -> i64 {
        let mut c = 0;
        for i in 0..self.persons {
            self.for_each_allowed(i, |_, a| c = c.max(a.abs()));
        }
        c
    }

    /// Copy with every benefit multiplied by `factor`.
    pub fn scaled(&self, factor: i64) -> Self {
        Self {
            benefits: self.benefits.iter().map(|a| a * factor).collect(),
            ..self.clone()
        }
    }

    /// `sum_i a_{i, j_i}`.
    pub fn primal_value(&self, assignment: &[usize]) -> i64 {
        assignment.iter().enumerate().map(|(i, &j)| self.benefit(i, j)).sum()
    }

    fn has_perfect_matching(&self) -> bool {
        let mut owner = vec![usize::MAX; self.objects];
        (0..self.persons).all(|i| {
            let mut seen = vec![false; self.objects];
            self.augment(i, &mut owner, &mut seen)
        })
    }

    fn augment(&self, i: usize, owner: &mut [usize], seen: &mut [bool]) -> bool {
        let mut targets = Vec::new();
        self.for_each_allowed(i, |j, _| targets.push(j));
        for j in targets {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j] == usize::MAX || self.augment(owner[j], owner, seen) {
                owner[j] = i;
                return true;
            }
        }
        false
    }
}

/// Outcome of one bid, in the units of the instance it was computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bid {
    pub object: usize,
    /// Best value `v_i = max_j (a_ij - p_j)`.
    pub best_value: i64,
    /// Second-best value `w_i`, or the sentinel when only one object is allowed.
    pub second_value: i64,
    pub new_price: i64,
}

/// Stand-in for `w_i = -inf`: below any attainable value on this instance.
fn sentinel(instance: &Assignment2DInstance) -> i64 {
    -(2 * instance.persons as i64 * instance.max_abs_benefit() + 1)
}

/// Person `person` bids for its best object at `prices`, raising the price by
/// `v_i - w_i + eps`.
pub fn bid(instance: &Assignment2DInstance, prices: &[i64], person: usize, eps: i64) -> Result<Bid, AuctionError> {
    bid_with_sentinel(instance, prices, person, eps, sentinel(instance))
}

fn bid_with_sentinel(
    instance: &Assignment2DInstance,
    prices: &[i64],
    person: usize,
    eps: i64,
    floor: i64,
) -> Result<Bid, AuctionError> {
    let mut best: Option<(usize, i64)> = None;
    let mut second: Option<i64> = None;
    instance.for_each_allowed(person, |j, a| {
        let v = a - prices[j];
        match best {
            Some((_, b)) if v <= b => {
                if second.is_none_or(|s| v > s) {
                    second = Some(v);
                }
            }
            _ => {
                if let Some((_, b)) = best {
                    second = Some(b);
                }
                best = Some((j, v));
            }
        }
    });
    let (object, v) = best.ok_or(AuctionError::IsolatedPerson { person })?;
    let w = second.unwrap_or(floor).min(v);
    Ok(Bid {
        object,
        best_value: v,
        second_value: w,
        new_price: prices[object] + (v - w) + eps,
    })
}

/// Observed bid, in the solver's scaled units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BidEvent {
    pub person: usize,
    pub object: usize,
    pub old_price: i64,
    pub new_price: i64,
    pub displaced: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassStats {
    pub epsilon: i64,
    pub bids: usize,
    /// Scaled units.
    pub primal: i64,
    /// Scaled units.
    pub dual: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuctionResult {
    /// Object assigned to each person.
    pub assignment: Vec<usize>,
    /// Final prices in scaled units.
    pub prices: Vec<i64>,
    /// Benefits were multiplied by this before solving.
    pub scale: i64,
    /// Final ε in scaled units.
    pub epsilon: i64,
    /// Total bids across all passes.
    pub rounds: usize,
    /// `sum_i a_{i, j_i}` in original units.
    pub primal: i64,
    /// Dual value of the final prices in scaled units.
    pub dual_scaled: i64,
    pub passes: Vec<PassStats>,
}

impl AuctionResult {
    /// Dual value in original units.
    pub fn dual(&self) -> f64 {
        self.dual_scaled as f64 / self.scale as f64
    }

    /// Final ε in original units.
    pub fn epsilon_value(&self) -> f64 {
        self.epsilon as f64 / self.scale as f64
    }
}

/// Runs one auction pass at `eps` on `instance` as given (no scaling) from
/// `initial_prices`. Gauss–Seidel: the lowest-indexed unassigned person bids.
pub fn auction_solve(
    instance: &Assignment2DInstance,
    eps: i64,
    initial_prices: &[i64],
) -> Result<AuctionResult, AuctionError> {
    auction_solve_observed(instance, eps, initial_prices, |_| {})
}

pub fn auction_solve_observed(
    instance: &Assignment2DInstance,
    eps: i64,
    initial_prices: &[i64],
    mut observer: impl FnMut(&BidEvent),
) -> Result<AuctionResult, AuctionError> {
    check_prices(instance, initial_prices)?;
    let mut prices = initial_prices.to_vec();
    let stats = run_pass(instance, eps, &mut prices, &mut observer)?;
    let assignment = stats.1;
    Ok(AuctionResult {
        primal: instance.primal_value(&assignment),
        dual_scaled: stats.0.dual,
        assignment,
        prices,
        scale: 1,
        epsilon: eps,
        rounds: stats.0.bids,
        passes: vec![stats.0],
    })
}

fn check_prices(instance: &Assignment2DInstance, prices: &[i64]) -> Result<(), AuctionError> {
    if prices.len() != instance.objects {
        return Err(AuctionError::PriceLength {
            got: prices.len(),
            expected: instance.objects,
        });
    }
    Ok(())
}

fn run_pass(
    instance: &Assignment2DInstance,
    eps: i64,
    prices: &mut [i64],
    observer: &mut impl FnMut(&BidEvent),
) -> Result<(PassStats, Vec<usize>), AuctionError> {
    if eps <= 0 {
        return Err(AuctionError::NonPositiveEpsilon);
    }
    let n = instance.persons as i64;
    let c = instance.max_abs_benefit();
    let floor = sentinel(instance);
    let start_max = prices.iter().copied().max().unwrap_or(0);
    // No price of a feasible instance needs to pass this ceiling.
    let ceiling = start_max + (2 * n + 1) * (c + eps);

    let mut owner: Vec<Option<usize>> = vec![None; instance.objects];
    let mut assigned: Vec<Option<usize>> = vec![None; instance.persons];
    let mut unassigned: BTreeSet<usize> = (0..instance.persons).collect();
    let mut bids = 0;
    while let Some(person) = unassigned.pop_first() {
        let b = bid_with_sentinel(instance, prices, person, eps, floor)?;
        let old = prices[b.object];
        let new = b.new_price.min(ceiling);
        if new < old + eps {
            return Err(AuctionError::Infeasible);
        }
        prices[b.object] = new;
        bids += 1;
        let displaced = owner[b.object].replace(person);
        if let Some(prev) = displaced {
            assigned[prev] = None;
            unassigned.insert(prev);
        }
        assigned[person] = Some(b.object);
        observer(&BidEvent {
            person,
            object: b.object,
            old_price: old,
            new_price: new,
            displaced,
        });
    }
    let assignment: Vec<usize> = assigned.into_iter().map(|a| a.expect("loop ends with all assigned")).collect();
    let dual = dual_value(instance, prices)?;
    Ok((
        PassStats {
            epsilon: eps,
            bids,
            primal: instance.primal_value(&assignment),
            dual,
        },
        assignment,
    ))
}

/// ε schedule on the scaled instance, ending with 1.
pub fn epsilon_schedule(persons: usize, max_abs_benefit: i64) -> Vec<i64> {
    let scaled_c = (persons as i64 + 1) * max_abs_benefit;
    let mut eps = ((scaled_c + 3) / 4).max(1);
    let mut out = vec![eps];
    while eps > 1 {
        eps = ((eps + 3) / 4).max(1);
        out.push(eps);
    }
    out
}

/// ε-scaled auction. Cold starts run the full schedule from zero prices;
/// warm starts (scaled prices from an earlier solve of a same-size instance)
/// run only the final ε = 1 pass.
pub fn auction_scaled(
    instance: &Assignment2DInstance,
    warm_prices: Option<&[i64]>,
) -> Result<AuctionResult, AuctionError> {
    auction_scaled_observed(instance, warm_prices, |_| {})
}

pub fn auction_scaled_observed(
    instance: &Assignment2DInstance,
    warm_prices: Option<&[i64]>,
    mut observer: impl FnMut(&BidEvent),
) -> Result<AuctionResult, AuctionError> {
    if instance.objects > instance.persons {
        if warm_prices.is_some_and(|p| p.iter().any(|&x| x != 0)) {
            return Err(AuctionError::PriceInitError);
        }
        return asymmetric_inner(instance, &mut observer);
    }
    let scale = instance.persons as i64 + 1;
    let scaled = instance.scaled(scale);
    let (schedule, mut prices) = match warm_prices {
        Some(p) => {
            check_prices(instance, p)?;
            (vec![1], p.to_vec())
        }
        None => (
            epsilon_schedule(instance.persons, instance.max_abs_benefit()),
            vec![0; instance.objects],
        ),
    };
    let mut passes = Vec::with_capacity(schedule.len());
    let mut assignment = Vec::new();
    for eps in schedule {
        let (stats, a) = run_pass(&scaled, eps, &mut prices, &mut observer)?;
        passes.push(stats);
        assignment = a;
    }
    let last = passes.last().expect("schedule is nonempty").clone();
    Ok(AuctionResult {
        primal: instance.primal_value(&assignment),
        assignment,
        prices,
        scale,
        epsilon: last.epsilon,
        rounds: passes.iter().map(|p| p.bids).sum(),
        dual_scaled: last.dual,
        passes,
    })
}

/// Assignment with more objects than persons. Prices start at zero, which
/// keeps never-bid objects at price zero; one pass at final ε.
pub fn asymmetric_solve(
    instance: &Assignment2DInstance,
    initial_prices: Option<&[i64]>,
) -> Result<AuctionResult, AuctionError> {
    if initial_prices.is_some_and(|p| p.iter().any(|&x| x != 0)) {
        return Err(AuctionError::PriceInitError);
    }
    asymmetric_inner(instance, &mut |_| {})
}

fn asymmetric_inner(
    instance: &Assignment2DInstance,
    observer: &mut impl FnMut(&BidEvent),
) -> Result<AuctionResult, AuctionError> {
    let scale = instance.persons as i64 + 1;
    let scaled = instance.scaled(scale);
    let mut prices = vec![0; instance.objects];
    let (stats, assignment) = run_pass(&scaled, 1, &mut prices, observer)?;
    Ok(AuctionResult {
        primal: instance.primal_value(&assignment),
        assignment,
        prices,
        scale,
        epsilon: 1,
        rounds: stats.bids,
        dual_scaled: stats.dual,
        passes: vec![stats],
    })
}

/// `sum_j p_j + sum_i max_j (a_ij - p_j)` over allowed pairs, in the units of
/// `instance` and `prices`.
pub fn dual_value(instance: &Assignment2DInstance, prices: &[i64]) -> Result<i64, AuctionError> {
    let mut total: i64 = prices.iter().sum();
    for i in 0..instance.persons {
        let mut best = None;
        instance.for_each_allowed(i, |j, a| {
            let v = a - prices[j];
            if best.is_none_or(|b| v > b) {
                best = Some(v);
            }
        });
        total += best.ok_or(AuctionError::IsolatedPerson { person: i })?;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsCsReport {
    /// Persons whose assigned object is more than ε from their best value,
    /// or whose assignment is not allowed.
    pub violations: Vec<usize>,
}

impl EpsCsReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// ε-complementary slackness in the units of `instance` and `prices`:
/// `a_{i,j_i} - p_{j_i} >= max_j (a_ij - p_j) - eps` for every person.
pub fn verify_eps_cs_with(instance: &Assignment2DInstance, assignment: &[usize], prices: &[i64], eps: i64) -> EpsCsReport {
    let violations = assignment
        .iter()
        .enumerate()
        .filter(|&(i, &j)| {
            if j >= instance.objects || !instance.is_allowed(i, j) {
                return true;
            }
            let mut best = i64::MIN;
            instance.for_each_allowed(i, |k, a| best = best.max(a - prices[k]));
            instance.benefit(i, j) - prices[j] < best - eps
        })
        .map(|(i, _)| i)
        .collect();
    EpsCsReport { violations }
}

/// ε-CS of a solver result against its own scale and final ε.
pub fn verify_eps_cs(instance: &Assignment2DInstance, result: &AuctionResult) -> EpsCsReport {
    verify_eps_cs_with(&instance.scaled(result.scale), &result.assignment, &result.prices, result.epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(n: usize, v: i64) -> Assignment2DInstance {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { v } else { 0 }).collect()).collect();
        Assignment2DInstance::from_rows(&rows).unwrap()
    }

    #[test]
    fn bid_substitution() {
        let inst = diag(2, 10);
        let b = bid(&inst, &[0, 0], 0, 1).unwrap();
        assert_eq!(b.object, 0);
        assert_eq!(b.best_value, 10);
        assert_eq!(b.second_value, 0);
        assert_eq!(b.new_price, 11);
    }

    #[test]
    fn single_allowed_object_jumps() {
        let inst = Assignment2DInstance::new(2, 2, vec![5, 3, 4, 6], Some(&[(0, 1), (1, 0), (1, 1)])).unwrap();
        let b = bid(&inst, &[0, 0], 0, 1).unwrap();
        assert_eq!(b.object, 1);
        // w = -(2*2*6 + 1) = -25, increment = 3 + 25 + 1
        assert_eq!(b.second_value, -25);
        assert_eq!(b.new_price, 29);
    }

    #[test]
    fn isolated_person_rejected() {
        assert_eq!(
            Assignment2DInstance::new(2, 2, vec![0; 4], Some(&[(0, 0), (0, 1)])),
            Err(AuctionError::IsolatedPerson { person: 1 })
        );
    }

    #[test]
    fn infeasible_mask_rejected_at_construction() {
        assert_eq!(
            Assignment2DInstance::new(2, 2, vec![0; 4], Some(&[(0, 0), (1, 0)])),
            Err(AuctionError::Infeasible)
        );
    }

    #[test]
    fn infeasible_mask_detected_by_ceiling() {
        let inst = Assignment2DInstance::new_trusted(2, 2, vec![3, 0, 5, 0], Some(&[(0, 0), (1, 0)])).unwrap();
        assert_eq!(auction_scaled(&inst, None), Err(AuctionError::Infeasible));
    }

    #[test]
    fn trivial_one_by_one() {
        let inst = Assignment2DInstance::from_rows(&[vec![7]]).unwrap();
        let r = auction_scaled(&inst, None).unwrap();
        assert_eq!(r.assignment, vec![0]);
        assert_eq!(r.primal, 7);
        let r = auction_solve(&inst, 5, &[0]).unwrap();
        assert_eq!(r.primal, 7);
    }

    #[test]
    fn quarter_epsilon_on_diagonal() {
        // ε = 1/4 in original units via a scale-4 copy
        let inst = diag(3, 10);
        let r = auction_solve(&inst.scaled(4), 1, &[0; 3]).unwrap();
        assert_eq!(r.assignment, vec![0, 1, 2]);
        assert_eq!(inst.primal_value(&r.assignment), 30);
    }

    #[test]
    fn schedule_ends_at_one() {
        assert_eq!(epsilon_schedule(3, 100), vec![100, 25, 7, 2, 1]);
        assert_eq!(epsilon_schedule(1, 0), vec![1]);
        assert_eq!(epsilon_schedule(1, 2), vec![1]);
    }

    #[test]
    fn zero_prices_dual_is_row_maxima() {
        let inst = Assignment2DInstance::from_rows(&[vec![1, 5], vec![4, 2]]).unwrap();
        assert_eq!(dual_value(&inst, &[0, 0]).unwrap(), 9);
    }

    #[test]
    fn hand_built_violation() {
        let inst = Assignment2DInstance::from_rows(&[vec![10, 0], vec![0, 10]]).unwrap();
        let report = verify_eps_cs_with(&inst, &[1, 0], &[0, 0], 1);
        assert_eq!(report.violations, vec![0, 1]);
        assert!(verify_eps_cs_with(&inst, &[0, 1], &[0, 0], 0).holds());
    }

    #[test]
    fn asymmetric_single_argmax() {
        let inst = Assignment2DInstance::new(1, 3, vec![2, 9, 4], None).unwrap();
        let r = asymmetric_solve(&inst, None).unwrap();
        assert_eq!(r.assignment, vec![1]);
        assert_eq!(r.primal, 9);
    }

    #[test]
    fn asymmetric_rejects_nonzero_prices() {
        let inst = Assignment2DInstance::new(1, 3, vec![2, 9, 4], None).unwrap();
        assert_eq!(asymmetric_solve(&inst, Some(&[0, 1, 0])), Err(AuctionError::PriceInitError));
    }

    #[test]
    fn warm_start_from_own_optimum_is_cheap() {
        let inst = Assignment2DInstance::from_rows(&[vec![3, 8, 1], vec![7, 2, 6], vec![4, 4, 9]]).unwrap();
        let cold = auction_scaled(&inst, None).unwrap();
        let warm = auction_scaled(&inst, Some(&cold.prices)).unwrap();
        assert_eq!(warm.primal, cold.primal);
        assert!(warm.rounds <= cold.rounds);
        assert!(verify_eps_cs(&inst, &warm).holds());
    }
}
