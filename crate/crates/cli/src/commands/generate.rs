use std::path::PathBuf;

use alwabp_core::instance::{
    generate, BaseInstance, GeneratorConfig, InfeasibilityDensity, Variability,
};
use anyhow::{Context, Result};
use clap::Args;

use super::Outcome;
use crate::inputs::{instance_name, INSTANCE_EXT};

#[derive(Args, Debug, Clone)]
pub struct GenerateArgs {
    /// Base lines: task count, one time per line, then `i j` edges.
    #[arg(required = true)]
    pub bases: Vec<PathBuf>,
    /// Worker counts to generate (repeatable).
    #[arg(long = "workers", short = 'm', required = true, value_delimiter = ',')]
    pub workers: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values = ["low", "high"])]
    pub variability: Vec<Variability>,
    #[arg(long, value_delimiter = ',', default_values = ["low", "high"])]
    pub density: Vec<InfeasibilityDensity>,
    /// Instances per factor combination.
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

/// File stem of one generated instance.
pub fn file_stem(
    base: &str,
    m: usize,
    v: Variability,
    d: InfeasibilityDensity,
    replicate: usize,
) -> String {
    format!("{base}_m{m}_var-{v}_inf-{d}_r{replicate:02}")
}

/// Cells are enumerated workers × variability × density × replicate, and
/// cell `k` of every base is drawn with seed `seed + k`.
pub fn run(args: &GenerateArgs) -> Result<Outcome> {
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let mut written = 0;
    for base_path in &args.bases {
        let base = BaseInstance::load(base_path)
            .with_context(|| format!("loading {}", base_path.display()))?;
        let base_name = instance_name(base_path);
        let mut cell = 0u64;
        for &m in &args.workers {
            for &v in &args.variability {
                for &d in &args.density {
                    for r in 1..=args.replicates {
                        let cfg = GeneratorConfig {
                            n_workers: m,
                            variability: v,
                            density: d,
                            seed: args.seed.wrapping_add(cell),
                        };
                        cell += 1;
                        let stem = file_stem(&base_name, m, v, d, r);
                        let inst = generate(&base, &cfg)
                            .with_context(|| format!("generating {stem}"))?
                            .with_name(stem.as_str());
                        let path = args.out.join(format!("{stem}.{INSTANCE_EXT}"));
                        inst.save(&path)?;
                        written += 1;
                    }
                }
            }
        }
    }
    eprintln!("wrote {written} instances to {}", args.out.display());
    Ok(Outcome::default())
}
