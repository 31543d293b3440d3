use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use rolloutkit::auction::{auction_scaled, auction_solve, AuctionResult};
use rolloutkit::discrete::facility::facility_rollout;
use rolloutkit::io::{
    from_json, to_json, AuctionResultFile, DpResultFile, FacilityResultFile, InstanceBody, InstanceFile,
    MultiAssignResultFile, ResultFile,
};
use rolloutkit::multidim::{enforced_separation_nd, rollout_nd, RolloutOptions};
use rolloutkit::rollout::run as run_rollout;
use rolloutkit::toy::ToyPolicy;
use rolloutkit::{Problem, Variant};
use rolloutkit_oracle::{self as oracle, OracleError, Orientation};

use crate::report::{oracle_budget, Counts, InstanceDescriptor, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// ε-scaled auction (assign2d).
    AuctionScaled,
    /// Single auction pass at `--epsilon` (assign2d).
    Auction,
    /// Enforced separation heuristic (multidimensional kinds).
    Separation,
    /// Rollout (multidimensional kinds, facility, toy-dp).
    Rollout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Plain,
    Fortified,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    FirstCandidate,
    Myopic,
    Lightest,
}

impl From<HeuristicArg> for ToyPolicy {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::FirstCandidate => ToyPolicy::FirstCandidate,
            HeuristicArg::Myopic => ToyPolicy::Myopic,
            HeuristicArg::Lightest => ToyPolicy::Lightest,
        }
    }
}

#[derive(Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Rollout variant (toy-dp).
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Node expansions for `--variant tree`; defaults to twice the horizon.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Fixed ε for a single unscaled auction pass (assign2d).
    #[arg(long)]
    pub epsilon: Option<i64>,
    /// Cold-start every 2D auction (multidimensional rollout).
    #[arg(long)]
    pub no_warm_start: bool,
    /// Transportation caching (facility).
    #[arg(long, value_enum)]
    pub cache: Option<Switch>,
    /// Base heuristic (toy-dp).
    #[arg(long, value_enum)]
    pub heuristic: Option<HeuristicArg>,
    /// Compare against the brute-force oracle within `ROLLOUTKIT_BUDGET`.
    #[arg(long)]
    pub verify: bool,
    /// Write the run report JSON here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the result file here.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Print the report JSON instead of the table.
    #[arg(long)]
    pub json: bool,
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

struct Solved {
    report: RunReport,
    result: ResultFile,
    /// Set when `--verify` finds a disagreement with the oracle.
    mismatch: Option<String>,
}

pub fn run(args: &SolveArgs) -> Result<()> {
    let file = read_instance(&args.instance)?;
    let started = Instant::now();
    let mut solved = match &file.body {
        InstanceBody::Assign2d(_) => solve_assign2d(args, &file)?,
        InstanceBody::Assign3d(_) | InstanceBody::Assignnd(_) | InstanceBody::Separable3d(_) | InstanceBody::EpsSeparable3d(_) => {
            solve_multi(args, &file)?
        }
        InstanceBody::Facility(_) => solve_facility(args, &file)?,
        InstanceBody::ToyDp(_) => solve_toy(args, &file)?,
    };
    solved.report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    solved.report.seed = file.seed;
    let json = serde_json::to_string_pretty(&solved.report)?;
    if let Some(p) = &args.report {
        crate::emit(Some(p), &json)?;
    }
    if args.json {
        crate::print_out(&json)?;
    } else {
        crate::print_out(solved.report.table().trim_end())?;
    }
    if let Some(p) = &args.out {
        crate::emit(Some(p), &to_json(&solved.result)?)?;
    }
    if let Some(m) = solved.mismatch {
        bail!("verification failed: {m}");
    }
    Ok(())
}

fn reject(flag: &str, present: bool, kind: &str) -> Result<()> {
    if present {
        bail!("{flag} does not apply to {kind} instances");
    }
    Ok(())
}

fn descriptor(file: &InstanceFile, size: String) -> InstanceDescriptor {
    InstanceDescriptor {
        kind: file.body.kind(),
        size,
    }
}

/// Runs an oracle, turning a budget overrun into a note.
fn with_oracle<T>(f: impl FnOnce(&mut oracle::OracleBudget) -> Result<T, OracleError>) -> Result<std::result::Result<T, String>> {
    let mut budget = oracle_budget()?;
    match f(&mut budget) {
        Ok(v) => Ok(Ok(v)),
        Err(e @ OracleError::BudgetExceeded(_)) => Ok(Err(format!("skipped: {e}"))),
        Err(e) => Ok(Err(e.to_string())),
    }
}

fn solve_assign2d(args: &SolveArgs, file: &InstanceFile) -> Result<Solved> {
    let InstanceBody::Assign2d(body) = &file.body else { unreachable!() };
    reject("--variant", args.variant.is_some(), "assign2d")?;
    reject("--cache", args.cache.is_some(), "assign2d")?;
    reject("--heuristic", args.heuristic.is_some(), "assign2d")?;
    reject("--no-warm-start", args.no_warm_start, "assign2d")?;
    let inst = body.to_instance()?;
    let method = args.method.unwrap_or(if args.epsilon.is_some() { Method::Auction } else { Method::AuctionScaled });
    let (r, solver): (AuctionResult, String) = match (method, args.epsilon) {
        (Method::AuctionScaled, None) => (auction_scaled(&inst, None)?, "auction-scaled".into()),
        (Method::Auction, Some(eps)) => (auction_solve(&inst, eps, &vec![0; inst.objects()])?, format!("auction eps={eps}")),
        (Method::Auction, None) => bail!("--method auction needs --epsilon"),
        (Method::AuctionScaled, Some(_)) => bail!("--epsilon selects a single pass; drop --method auction-scaled"),
        (m, _) => bail!("method {m:?} does not apply to assign2d instances"),
    };
    let mut report = RunReport {
        instance: descriptor(file, format!("n={} n_obj={}", inst.persons(), inst.objects())),
        solver,
        cost: r.primal as f64,
        baseline_cost: None,
        oracle_cost: None,
        oracle_note: None,
        counts: Counts {
            auction_2d_solves: Some(1),
            auction_rounds: Some(r.rounds),
            ..Counts::default()
        },
        wall_time_ms: 0.0,
        seed: None,
    };
    let mut mismatch = None;
    if args.verify {
        let found = with_oracle(|b| {
            oracle::exact_assignment_2d(
                inst.persons(),
                inst.objects(),
                inst.benefits(),
                &|i, j| inst.is_allowed(i, j),
                Orientation::Maximize,
                b,
            )
        })?;
        match found {
            Ok((value, _)) => {
                report.oracle_cost = Some(value as f64);
                // within n·ε of optimal, ε in original units
                let n = inst.persons() as i64;
                if r.primal > value || (value - r.primal) * r.scale > n * r.epsilon {
                    mismatch = Some(format!("primal {} vs oracle {value}", r.primal));
                }
            }
            Err(note) => report.oracle_note = Some(note),
        }
    }
    Ok(Solved {
        report,
        result: ResultFile::Assign2d(AuctionResultFile::from(&r)),
        mismatch,
    })
}

fn solve_multi(args: &SolveArgs, file: &InstanceFile) -> Result<Solved> {
    let body = match &file.body {
        InstanceBody::Assign3d(b) | InstanceBody::Assignnd(b) | InstanceBody::Separable3d(b) | InstanceBody::EpsSeparable3d(b) => b,
        _ => unreachable!(),
    };
    let kind = file.body.kind();
    reject("--variant", args.variant.is_some(), kind)?;
    reject("--epsilon", args.epsilon.is_some(), kind)?;
    reject("--cache", args.cache.is_some(), kind)?;
    reject("--heuristic", args.heuristic.is_some(), kind)?;
    let inst = body.to_instance()?;
    let size = format!("layers={} m={}", inst.layers(), inst.nodes());
    let (solution, report) = match args.method.unwrap_or(Method::Rollout) {
        Method::Separation => {
            reject("--no-warm-start", args.no_warm_start, "separation")?;
            let es = enforced_separation_nd(&inst)?;
            let report = RunReport {
                instance: descriptor(file, size),
                solver: "enforced-separation".into(),
                cost: es.solution.cost as f64,
                baseline_cost: None,
                oracle_cost: None,
                oracle_note: None,
                counts: Counts {
                    auction_2d_solves: Some(es.solves),
                    auction_rounds: Some(es.auction_rounds),
                    ..Counts::default()
                },
                wall_time_ms: 0.0,
                seed: None,
            };
            (es.solution, report)
        }
        Method::Rollout => {
            let opts = RolloutOptions {
                warm_start: !args.no_warm_start,
                ..RolloutOptions::default()
            };
            let r = rollout_nd(&inst, opts)?;
            let report = RunReport {
                instance: descriptor(file, size),
                solver: if opts.warm_start { "rollout" } else { "rollout cold-start" }.into(),
                cost: r.solution.cost as f64,
                baseline_cost: Some(r.heuristic.cost as f64),
                oracle_cost: None,
                oracle_note: None,
                counts: Counts {
                    auction_2d_solves: Some(r.ledger.total()),
                    rollout_phase_solves: Some(r.ledger.rollout_phase()),
                    ledger: Some(r.ledger),
                    auction_rounds: Some(r.auction_rounds),
                    ..Counts::default()
                },
                wall_time_ms: 0.0,
                seed: None,
            };
            (r.solution, report)
        }
        m => bail!("method {m:?} does not apply to {kind} instances"),
    };
    let mut report = report;
    let mut mismatch = None;
    if args.verify {
        match with_oracle(|b| oracle::exact_assignment_nd(inst.layers(), inst.nodes(), &|t| inst.grouping_cost(t), b))? {
            Ok((value, _)) => {
                report.oracle_cost = Some(value as f64);
                if solution.cost < value {
                    mismatch = Some(format!("cost {} below oracle optimum {value}", solution.cost));
                }
            }
            Err(note) => report.oracle_note = Some(note),
        }
    }
    Ok(Solved {
        report,
        result: ResultFile::MultiAssign(MultiAssignResultFile {
            groupings: solution.groupings,
            cost: solution.cost,
        }),
        mismatch,
    })
}

fn solve_facility(args: &SolveArgs, file: &InstanceFile) -> Result<Solved> {
    let InstanceBody::Facility(inst) = &file.body else { unreachable!() };
    reject("--variant", args.variant.is_some(), "facility")?;
    reject("--epsilon", args.epsilon.is_some(), "facility")?;
    reject("--heuristic", args.heuristic.is_some(), "facility")?;
    reject("--no-warm-start", args.no_warm_start, "facility")?;
    if let Some(m) = args.method.filter(|&m| m != Method::Rollout) {
        bail!("method {m:?} does not apply to facility instances");
    }
    let cache = args.cache.unwrap_or(Switch::On) == Switch::On;
    let out = facility_rollout(inst, cache)?;
    let mut report = RunReport {
        instance: descriptor(file, format!("clients={} locations={}", inst.clients(), inst.locations())),
        solver: format!("fortified rollout, cache {}", if cache { "on" } else { "off" }),
        cost: out.cost as f64,
        baseline_cost: Some(out.baseline_cost as f64),
        oracle_cost: None,
        oracle_note: None,
        counts: Counts {
            transport_solves: Some(out.transport_solves),
            ..Counts::default()
        },
        wall_time_ms: 0.0,
        seed: None,
    };
    let mut mismatch = None;
    if args.verify {
        let found = with_oracle(|b| {
            oracle::exact_facility(&inst.demands, &inst.capacities, &inst.placement_costs, &inst.service_costs, b)
        })?;
        match found {
            Ok((_, value, _)) => {
                report.oracle_cost = Some(value as f64);
                if out.cost < value {
                    mismatch = Some(format!("cost {} below oracle optimum {value}", out.cost));
                }
            }
            Err(note) => report.oracle_note = Some(note),
        }
    }
    Ok(Solved {
        report,
        result: ResultFile::Facility(FacilityResultFile {
            placements: out.placements,
            flows: out.flows.flows,
            cost: out.cost,
            transport_solves: out.transport_solves,
        }),
        mismatch,
    })
}

fn solve_toy(args: &SolveArgs, file: &InstanceFile) -> Result<Solved> {
    let InstanceBody::ToyDp(p) = &file.body else { unreachable!() };
    reject("--epsilon", args.epsilon.is_some(), "toy-dp")?;
    reject("--cache", args.cache.is_some(), "toy-dp")?;
    reject("--no-warm-start", args.no_warm_start, "toy-dp")?;
    if let Some(m) = args.method.filter(|&m| m != Method::Rollout) {
        bail!("method {m:?} does not apply to toy-dp instances");
    }
    let variant = match args.variant.unwrap_or(VariantArg::Plain) {
        VariantArg::Plain => Variant::Plain,
        VariantArg::Fortified => Variant::Fortified,
        VariantArg::Tree => Variant::Tree {
            budget: args.budget.unwrap_or(2 * p.horizon()),
        },
    };
    if args.budget.is_some() && !matches!(variant, Variant::Tree { .. }) {
        bail!("--budget needs --variant tree");
    }
    let h = ToyPolicy::from(args.heuristic.unwrap_or(HeuristicArg::Myopic));
    let out = run_rollout(p, &h, variant)?;
    let mut report = RunReport {
        instance: descriptor(file, format!("horizon={} states={}", p.horizon(), p.modulus)),
        solver: format!("{} rollout, {} heuristic", variant_name(variant), heuristic_name(h)),
        cost: out.cost,
        baseline_cost: Some(out.baseline_cost),
        oracle_cost: None,
        oracle_note: None,
        counts: Counts {
            heuristic_calls: Some(out.heuristic_calls),
            ..Counts::default()
        },
        wall_time_ms: 0.0,
        seed: None,
    };
    let mut mismatch = None;
    if args.verify {
        match with_oracle(|b| oracle::exact_dp(p, b))? {
            Ok((_, value)) => {
                report.oracle_cost = Some(value);
                if out.cost < value {
                    mismatch = Some(format!("cost {} below oracle optimum {value}", out.cost));
                }
            }
            Err(note) => report.oracle_note = Some(note),
        }
    }
    Ok(Solved {
        report,
        result: ResultFile::ToyDp(DpResultFile {
            controls: out.controls.clone(),
            cost: out.cost,
        }),
        mismatch,
    })
}

fn variant_name(v: Variant) -> String {
    match v {
        Variant::Plain => "plain".into(),
        Variant::Fortified => "fortified".into(),
        Variant::Tree { budget } => format!("tree (budget {budget})"),
    }
}

fn heuristic_name(h: ToyPolicy) -> &'static str {
    match h {
        ToyPolicy::FirstCandidate => "first-candidate",
        ToyPolicy::Myopic => "myopic",
        ToyPolicy::Lightest => "lightest",
    }
}
