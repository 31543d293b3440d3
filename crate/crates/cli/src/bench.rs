use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use rand::Rng;
use rolloutkit::auction::{auction_scaled, Assignment2DInstance};
use rolloutkit::discrete::facility::facility_rollout;
use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit::multidim::{rollout_3d, RolloutOptions};
use serde::Serialize;

/// Sub-stream for benchmark perturbations, clear of the instance and solver streams.
const PERTURBATION_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Bench {
    /// Warm versus cold auction rounds after one-entry perturbations.
    WarmStart,
    /// 2D-solve ledger of three-layer rollout.
    Ledger3d,
    /// Transportation solves with and without caching.
    Facility,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub bench: Bench,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instance size (`n` for warm-start).
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Perturbations (warm-start) or instances per size (other benches).
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// Node counts for ledger3d.
    #[arg(long, value_delimiter = ',', default_value = "3,4")]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub clients: usize,
    #[arg(long, default_value_t = 3)]
    pub locations: usize,
    /// Write the benchmark JSON here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

pub fn run(args: &BenchArgs) -> Result<()> {
    if args.trials == 0 {
        bail!("bad parameters: need at least one trial");
    }
    let json = match args.bench {
        Bench::WarmStart => serde_json::to_string_pretty(&warm_start(args)?)?,
        Bench::Ledger3d => serde_json::to_string_pretty(&ledger3d(args)?)?,
        Bench::Facility => serde_json::to_string_pretty(&facility(args)?)?,
    };
    if let Some(p) = &args.report {
        crate::emit(Some(p), &json)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct WarmStartReport {
    n: usize,
    perturbations: usize,
    median_ratio: f64,
    min_ratio: f64,
    max_ratio: f64,
    warm_no_worse: usize,
    mean_warm_rounds: f64,
    mean_cold_rounds: f64,
    seed: u64,
}

fn warm_start(args: &BenchArgs) -> Result<WarmStartReport> {
    let n = args.n;
    if n == 0 {
        bail!("bad parameters: need n >= 1");
    }
    let base = gen::assign2d(&mut gen::rng(args.seed, INSTANCE_STREAM), n, n, 100)?;
    let solved = auction_scaled(&base, None)?;
    let mut rng = gen::rng(args.seed, PERTURBATION_STREAM);
    let mut ratios = Vec::with_capacity(args.trials);
    let (mut warm_total, mut cold_total, mut no_worse) = (0, 0, 0);
    for _ in 0..args.trials {
        let mut benefits = base.benefits().to_vec();
        let entry = rng.random_range(0..n * n);
        benefits[entry] = rng.random_range(-100..=100);
        let perturbed = Assignment2DInstance::new(n, n, benefits, None)?;
        let warm = auction_scaled(&perturbed, Some(&solved.prices))?;
        let cold = auction_scaled(&perturbed, None)?;
        if warm.primal != cold.primal {
            bail!("warm and cold solves disagree: {} vs {}", warm.primal, cold.primal);
        }
        warm_total += warm.rounds;
        cold_total += cold.rounds;
        no_worse += usize::from(warm.rounds <= cold.rounds);
        ratios.push(warm.rounds as f64 / cold.rounds.max(1) as f64);
    }
    ratios.sort_by(f64::total_cmp);
    let mid = ratios.len() / 2;
    let median = if ratios.len() % 2 == 0 { (ratios[mid - 1] + ratios[mid]) / 2.0 } else { ratios[mid] };
    let trials = args.trials as f64;
    let report = WarmStartReport {
        n,
        perturbations: args.trials,
        median_ratio: median,
        min_ratio: ratios[0],
        max_ratio: ratios[ratios.len() - 1],
        warm_no_worse: no_worse,
        mean_warm_rounds: warm_total as f64 / trials,
        mean_cold_rounds: cold_total as f64 / trials,
        seed: args.seed,
    };
    println!("warm-start reoptimization, n = {n}, {} perturbations", args.trials);
    println!("  median warm/cold round ratio  {:.3}", report.median_ratio);
    println!("  range                         {:.3} .. {:.3}", report.min_ratio, report.max_ratio);
    println!("  warm no worse than cold       {no_worse}/{}", args.trials);
    println!("  mean rounds warm / cold       {:.1} / {:.1}", report.mean_warm_rounds, report.mean_cold_rounds);
    Ok(report)
}

#[derive(Serialize)]
struct LedgerRow {
    m: usize,
    instances: usize,
    initial: usize,
    sweep: usize,
    final_pass: usize,
    rollout_phase: usize,
    closed_form: usize,
    consistent: bool,
}

fn ledger3d(args: &BenchArgs) -> Result<Vec<LedgerRow>> {
    let mut rows = Vec::new();
    println!("{:>3} {:>8} {:>6} {:>6} {:>14} {:>8}", "m", "initial", "sweep", "final", "rollout phase", "m^2+1");
    for &m in &args.m {
        if !(1..=12).contains(&m) {
            bail!("bad parameters: m must be in 1..=12");
        }
        let mut first = None;
        let mut consistent = true;
        for t in 0..args.trials {
            let inst = gen::assign_nd(&mut gen::rng(args.seed + t as u64, INSTANCE_STREAM), 3, m, 50);
            let ledger = rollout_3d(&inst, RolloutOptions::default())?.ledger;
            consistent &= *first.get_or_insert(ledger) == ledger;
        }
        let l = first.expect("at least one trial");
        let row = LedgerRow {
            m,
            instances: args.trials,
            initial: l.initial,
            sweep: l.sweep,
            final_pass: l.final_pass,
            rollout_phase: l.rollout_phase(),
            closed_form: m * m + 1,
            consistent,
        };
        println!(
            "{:>3} {:>8} {:>6} {:>6} {:>14} {:>8}{}",
            m,
            row.initial,
            row.sweep,
            row.final_pass,
            row.rollout_phase,
            row.closed_form,
            if consistent { "" } else { "  (varies by instance)" }
        );
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Serialize)]
struct FacilityBench {
    clients: usize,
    locations: usize,
    instances: usize,
    max_posed_with_cache: usize,
    max_solves_with_cache: usize,
    solves_without_cache: Vec<usize>,
    rollout_beats_all_open: usize,
}

fn facility(args: &BenchArgs) -> Result<FacilityBench> {
    if args.clients == 0 || args.locations == 0 || 7 * args.clients > 9 * args.locations {
        bail!("bad parameters: need clients >= 1 and 7 * clients <= 9 * locations");
    }
    let mut report = FacilityBench {
        clients: args.clients,
        locations: args.locations,
        instances: args.trials,
        max_posed_with_cache: 0,
        max_solves_with_cache: 0,
        solves_without_cache: Vec::new(),
        rollout_beats_all_open: 0,
    };
    for t in 0..args.trials {
        let inst = gen::facility(&mut gen::rng(args.seed + t as u64, INSTANCE_STREAM), args.clients, args.locations);
        let cached = facility_rollout(&inst, true)?;
        let uncached = facility_rollout(&inst, false)?;
        report.max_posed_with_cache = report.max_posed_with_cache.max(cached.sub_solves.len());
        report.max_solves_with_cache = report.max_solves_with_cache.max(cached.transport_solves);
        if !report.solves_without_cache.contains(&uncached.transport_solves) {
            report.solves_without_cache.push(uncached.transport_solves);
        }
        report.rollout_beats_all_open += usize::from(cached.cost < cached.baseline_cost);
    }
    let n = args.locations;
    println!("facility rollout, {} clients, {n} locations, {} instances", args.clients, args.trials);
    println!("  problems posed with cache (incl. all-open)  max {} (N+1 = {})", report.max_posed_with_cache, n + 1);
    println!("  solves beyond all-open, cache on            max {}", report.max_solves_with_cache);
    println!("  solves beyond all-open, cache off           {:?} (2N = {})", report.solves_without_cache, 2 * n);
    println!("  rollout strictly beats all-open             {}/{}", report.rollout_beats_all_open, args.trials);
    Ok(report)
}
