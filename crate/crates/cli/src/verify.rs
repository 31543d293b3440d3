use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use rolloutkit::auction::{dual_value, verify_eps_cs_with};
use rolloutkit::discrete::facility::{FacilityInstance, TransportationSolution};
use rolloutkit::io::{
    from_json, AuctionResultFile, Assign2dFile, DpResultFile, FacilityResultFile, InstanceBody, MultiAssignFile,
    MultiAssignResultFile, ResultFile,
};
use rolloutkit::multidim::MultiAssignSolution;
use rolloutkit::toy::ToyDp;
use rolloutkit::trajectory::{extend, CompleteTrajectory, Trajectory};
use rolloutkit::Problem;
use rolloutkit_oracle::{self as oracle, OracleError, Orientation};

use crate::report::oracle_budget;
use crate::solve::read_instance;

#[derive(Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    pub result: PathBuf,
}

/// Findings of one verification run.
#[derive(Default)]
struct Findings {
    lines: Vec<String>,
    violations: Vec<String>,
}

impl Findings {
    fn note(&mut self, line: String) {
        self.lines.push(line);
    }

    fn violate(&mut self, line: String) {
        self.violations.push(line);
    }

    /// Records the oracle comparison. `gap` is how far the result is from
    /// the optimum in the worsening direction.
    fn oracle(&mut self, found: Result<(i64, i64), OracleError>) {
        match found {
            Ok((optimum, gap)) => {
                self.note(format!("oracle optimum {optimum}"));
                self.note(format!("gap {gap}"));
                if gap < 0 {
                    self.violate(format!("result claims to beat the optimum by {}", -gap));
                }
            }
            Err(e) => self.note(format!("oracle skipped: {e}")),
        }
    }
}

pub fn run(args: &VerifyArgs) -> Result<()> {
    let instance = read_instance(&args.instance)?;
    let text = std::fs::read_to_string(&args.result).with_context(|| format!("reading {}", args.result.display()))?;
    let result: ResultFile = from_json(&text).with_context(|| format!("parsing {}", args.result.display()))?;
    let mut f = Findings::default();
    match (&instance.body, &result) {
        (InstanceBody::Assign2d(i), ResultFile::Assign2d(r)) => assign2d(i, r, &mut f)?,
        (
            InstanceBody::Assign3d(i) | InstanceBody::Assignnd(i) | InstanceBody::Separable3d(i) | InstanceBody::EpsSeparable3d(i),
            ResultFile::MultiAssign(r),
        ) => multi(i, r, &mut f)?,
        (InstanceBody::Facility(i), ResultFile::Facility(r)) => facility(i, r, &mut f)?,
        (InstanceBody::ToyDp(p), ResultFile::ToyDp(r)) => toy(p, r, &mut f)?,
        (i, _) => bail!("result kind does not match a {} instance", i.kind()),
    }
    for line in &f.lines {
        println!("  {line}");
    }
    if f.violations.is_empty() {
        println!("PASS");
        Ok(())
    } else {
        for v in &f.violations {
            println!("  violation: {v}");
        }
        println!("FAIL");
        bail!("{} violation(s)", f.violations.len())
    }
}

fn assign2d(file: &Assign2dFile, r: &AuctionResultFile, f: &mut Findings) -> Result<()> {
    let inst = file.to_instance()?;
    let (n, n_obj) = (inst.persons(), inst.objects());
    if r.assignment.len() != n || r.prices.len() != n_obj || r.scale < 1 || r.epsilon < 1 {
        f.violate("assignment, prices, scale, or epsilon have the wrong shape".into());
        return Ok(());
    }
    let mut taken = vec![false; n_obj];
    for (i, &j) in r.assignment.iter().enumerate() {
        if j >= n_obj || !inst.is_allowed(i, j) {
            f.violate(format!("person {i} holds a disallowed object {j}"));
            return Ok(());
        }
        if std::mem::replace(&mut taken[j], true) {
            f.violate(format!("object {j} is assigned twice"));
            return Ok(());
        }
    }
    let primal = inst.primal_value(&r.assignment);
    if primal != r.primal {
        f.violate(format!("recorded primal {} differs from recomputed {primal}", r.primal));
    }
    let scaled = inst.scaled(r.scale);
    let cs = verify_eps_cs_with(&scaled, &r.assignment, &r.prices, r.epsilon);
    if cs.holds() {
        f.note(format!("eps-CS holds at eps {}/{}", r.epsilon, r.scale));
    } else {
        f.violate(format!("eps-CS fails for persons {:?}", cs.violations));
    }
    let dual = dual_value(&scaled, &r.prices)?;
    if dual != r.dual {
        f.violate(format!("recorded dual {} differs from recomputed {dual}", r.dual));
    }
    let mut budget = oracle_budget()?;
    f.oracle(
        oracle::exact_assignment_2d(n, n_obj, inst.benefits(), &|i, j| inst.is_allowed(i, j), Orientation::Maximize, &mut budget)
            .map(|(v, _)| (v, v - primal)),
    );
    Ok(())
}

fn multi(file: &MultiAssignFile, r: &MultiAssignResultFile, f: &mut Findings) -> Result<()> {
    let inst = file.to_instance()?;
    let solution = MultiAssignSolution {
        groupings: r.groupings.clone(),
        cost: r.cost,
    };
    if let Err(e) = solution.validate(&inst) {
        f.violate(format!("partition: {e}"));
        return Ok(());
    }
    f.note("partition valid".into());
    let mut budget = oracle_budget()?;
    f.oracle(
        oracle::exact_assignment_nd(inst.layers(), inst.nodes(), &|t| inst.grouping_cost(t), &mut budget)
            .map(|(v, _)| (v, r.cost - v)),
    );
    Ok(())
}

fn facility(inst: &FacilityInstance, r: &FacilityResultFile, f: &mut Findings) -> Result<()> {
    inst.validate()?;
    if r.placements.len() != inst.locations() || r.flows.len() != inst.clients() * inst.locations() {
        f.violate("placements or flows have the wrong shape".into());
        return Ok(());
    }
    let service: i64 = r.flows.iter().zip(&inst.service_costs).map(|(x, c)| x * c).sum();
    let flows = TransportationSolution {
        flows: r.flows.clone(),
        cost: service,
    };
    match flows.check(inst, &r.placements) {
        Ok(()) => f.note("demand conservation and capacity hold".into()),
        Err(e) => f.violate(e.to_string()),
    }
    let total = inst.placement_cost(&r.placements) + service;
    if total != r.cost {
        f.violate(format!("recorded cost {} differs from recomputed {total}", r.cost));
    }
    let mut budget = oracle_budget()?;
    f.oracle(
        oracle::exact_facility(&inst.demands, &inst.capacities, &inst.placement_costs, &inst.service_costs, &mut budget)
            .map(|(_, v, _)| (v, r.cost - v)),
    );
    Ok(())
}

fn toy(p: &ToyDp, r: &DpResultFile, f: &mut Findings) -> Result<()> {
    if r.controls.len() != p.horizon() {
        f.violate(format!("{} controls for horizon {}", r.controls.len(), p.horizon()));
        return Ok(());
    }
    let mut y = Trajectory::new(p.initial_state());
    for (k, u) in r.controls.iter().enumerate() {
        match extend(p, &y, u) {
            Ok(next) => y = next,
            Err(e) => {
                f.violate(format!("stage {k}: {e}"));
                return Ok(());
            }
        }
    }
    let t = CompleteTrajectory::new(y, p.horizon())?;
    if !p.feasible(&t) {
        f.violate("trajectory is infeasible".into());
    }
    let cost = p.cost(&t);
    if cost != r.cost {
        f.violate(format!("recorded cost {} differs from recomputed {cost}", r.cost));
    }
    let mut budget = oracle_budget()?;
    // DP costs are integral sums, so the rounding is exact
    f.oracle(oracle::exact_dp(p, &mut budget).map(|(_, v)| (v as i64, (cost - v) as i64)));
    Ok(())
}
