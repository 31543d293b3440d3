//! Adapters from library instance types to the plain-data oracle API.
#![allow(dead_code)]

use rolloutkit::auction::Assignment2DInstance;
use rolloutkit::discrete::facility::FacilityInstance;
use rolloutkit::multidim::MultiAssignInstance;
use rolloutkit_oracle::{self as oracle, OracleBudget, Orientation};

pub fn budget() -> OracleBudget {
    OracleBudget::default()
}

pub fn best_assignment(inst: &Assignment2DInstance) -> (i64, Vec<usize>) {
    oracle::exact_assignment_2d(
        inst.persons(),
        inst.objects(),
        inst.benefits(),
        &|i, j| inst.is_allowed(i, j),
        Orientation::Maximize,
        &mut budget(),
    )
    .expect("oracle-sized instance")
}

pub fn best_grouping(inst: &MultiAssignInstance) -> i64 {
    oracle::exact_assignment_nd(inst.layers(), inst.nodes(), &|t| inst.grouping_cost(t), &mut budget())
        .expect("oracle-sized instance")
        .0
}

pub fn best_transport(inst: &FacilityInstance, placements: &[bool]) -> Option<i64> {
    let open: Vec<i64> = inst
        .capacities
        .iter()
        .zip(placements)
        .map(|(&c, &o)| if o { c } else { 0 })
        .collect();
    oracle::exact_transportation(&inst.demands, &open, &inst.service_costs, &mut budget())
        .expect("oracle-sized instance")
        .map(|(cost, _)| cost)
}

pub fn best_facility(inst: &FacilityInstance) -> (Vec<bool>, i64) {
    let (p, c, _) = oracle::exact_facility(
        &inst.demands,
        &inst.capacities,
        &inst.placement_costs,
        &inst.service_costs,
        &mut budget(),
    )
    .expect("oracle-sized instance");
    (p, c)
}
