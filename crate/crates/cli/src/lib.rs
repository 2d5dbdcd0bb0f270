//! Command-line front end for the alwabp solver kit: lower bounds,
//! priority-rule heuristics, the genetic algorithm, instance generation
//! and LP export, with CSV reports and deviations from best known values.

pub mod bkv;
pub mod commands;
pub mod inputs;
pub mod report;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::{bounds, construct, export_lp, generate, hga, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "alwabp",
    version,
    about = "Assembly line worker assignment and balancing (type 2) solver kit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// LC1, LC2 and LC3 lower bounds.
    Bounds(bounds::BoundsArgs),
    /// Station-oriented heuristics under priority rules.
    Construct(construct::ConstructArgs),
    /// Hybrid genetic algorithm.
    Hga(hga::HgaArgs),
    /// Worker-dependent instances from base lines.
    Generate(generate::GenerateArgs),
    /// The mixed-integer model in LP format.
    ExportLp(export_lp::ExportLpArgs),
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(f)),
        None => Ok(f()),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Bounds(a) => with_jobs(a.common.jobs, || bounds::run(a))?,
        Command::Construct(a) => with_jobs(a.common.jobs, || construct::run(a))?,
        Command::Hga(a) => with_jobs(a.common.jobs, || hga::run(a))?,
        Command::Generate(a) => generate::run(a),
        Command::ExportLp(a) => export_lp::run(a),
    }
}
