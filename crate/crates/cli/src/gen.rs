use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit::io::{to_json, Assign2dFile, InstanceBody, InstanceFile, MultiAssignFile};
use rolloutkit::toy::{ToyDp, ToyPolicy};

use crate::Kind;

/// Largest dense tensor the generator will write.
const MAX_TENSOR_ENTRIES: usize = 10_000_000;

#[derive(Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Persons (assign2d).
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Objects (assign2d); defaults to `n`.
    #[arg(long)]
    pub n_obj: Option<usize>,
    /// Probability that a pair is allowed (square assign2d only).
    #[arg(long)]
    pub density: Option<f64>,
    /// Nodes per layer (multidimensional kinds).
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// Layers (assignnd).
    #[arg(long, default_value_t = 4)]
    pub layers: usize,
    /// Largest absolute benefit or cost.
    #[arg(long)]
    pub max_cost: Option<i64>,
    /// Perturbation bound (eps-separable3d).
    #[arg(long, default_value_t = 1)]
    pub eps: i64,
    /// Clients (facility).
    #[arg(long, default_value_t = 2)]
    pub clients: usize,
    /// Candidate locations (facility).
    #[arg(long, default_value_t = 3)]
    pub locations: usize,
    /// Stages (toy-dp).
    #[arg(long, default_value_t = 4)]
    pub horizon: usize,
    /// Largest control count per stage (toy-dp).
    #[arg(long, default_value_t = 3)]
    pub branching: usize,
    /// State count (toy-dp).
    #[arg(long, default_value_t = 6)]
    pub modulus: u32,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &GenArgs) -> Result<()> {
    let body = build(args)?;
    let file = InstanceFile {
        seed: Some(args.seed),
        body,
    };
    crate::emit(args.out.as_ref(), &to_json(&file)?)
}

fn build(args: &GenArgs) -> Result<InstanceBody> {
    let mut rng = gen::rng(args.seed, INSTANCE_STREAM);
    let multi = |layers: usize, max_cost: i64| -> Result<MultiAssignFile> {
        check_tensor(layers, args.m)?;
        let inst = gen::assign_nd(&mut gen::rng(args.seed, INSTANCE_STREAM), layers, args.m, max_cost);
        Ok(MultiAssignFile::from_instance(&inst, None)?)
    };
    Ok(match args.kind {
        Kind::Assign2d => {
            let n_obj = args.n_obj.unwrap_or(args.n);
            if args.n == 0 || n_obj < args.n {
                bail!("bad parameters: need 1 <= n <= n-obj");
            }
            let max_abs = args.max_cost.unwrap_or(100);
            check_max(max_abs)?;
            let inst = match args.density {
                Some(d) if !(d > 0.0 && d <= 1.0) => bail!("bad parameters: density must be in (0, 1]"),
                Some(_) if n_obj != args.n => bail!("bad parameters: masks need a square instance"),
                Some(d) => gen::assign2d_masked(&mut rng, args.n, max_abs, d),
                None => gen::assign2d(&mut rng, args.n, n_obj, max_abs)?,
            };
            InstanceBody::Assign2d(Assign2dFile::from_instance(&inst))
        }
        Kind::Assign3d => InstanceBody::Assign3d(multi(3, args.max_cost.unwrap_or(50))?),
        Kind::Assignnd => {
            if args.layers < 3 {
                bail!("bad parameters: need at least 3 layers");
            }
            InstanceBody::Assignnd(multi(args.layers, args.max_cost.unwrap_or(50))?)
        }
        Kind::Separable3d | Kind::EpsSeparable3d => {
            check_tensor(3, args.m)?;
            let max_cost = args.max_cost.unwrap_or(50);
            check_max(max_cost)?;
            let eps = if args.kind == Kind::Separable3d { 0 } else { args.eps };
            if eps < 0 {
                bail!("bad parameters: eps must be nonnegative");
            }
            let (inst, truth) = gen::eps_separable3d(&mut rng, args.m, max_cost, eps);
            let file = MultiAssignFile::from_instance(&inst, Some(truth))?;
            if args.kind == Kind::Separable3d {
                InstanceBody::Separable3d(file)
            } else {
                InstanceBody::EpsSeparable3d(file)
            }
        }
        Kind::Facility => {
            if args.clients == 0 || args.locations == 0 {
                bail!("bad parameters: need at least one client and one location");
            }
            // keeps the rejection sampler's acceptance rate reasonable
            if 7 * args.clients > 9 * args.locations {
                bail!("bad parameters: too many clients for {} locations", args.locations);
            }
            InstanceBody::Facility(gen::facility(&mut rng, args.clients, args.locations))
        }
        Kind::ToyDp => {
            if args.horizon == 0 || args.branching == 0 || args.branching > 255 || args.modulus == 0 {
                bail!("bad parameters: need horizon, branching in 1..=255, and modulus at least 1");
            }
            let mut p = ToyDp::generate(&mut rng, args.horizon, args.branching, args.modulus);
            p.ensure_feasible(&ToyPolicy::Myopic);
            InstanceBody::ToyDp(p)
        }
    })
}

fn check_tensor(layers: usize, m: usize) -> Result<()> {
    if m == 0 {
        bail!("bad parameters: need m >= 1");
    }
    match m.checked_pow(layers as u32) {
        Some(entries) if entries <= MAX_TENSOR_ENTRIES => Ok(()),
        _ => bail!("bad parameters: m^layers exceeds {MAX_TENSOR_ENTRIES} entries"),
    }
}

fn check_max(max: i64) -> Result<()> {
    if !(0..=1_000_000_000).contains(&max) {
        bail!("bad parameters: max-cost must be in 0..=1e9");
    }
    Ok(())
}
