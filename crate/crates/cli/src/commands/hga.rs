use std::path::{Path, PathBuf};

use alwabp_core::bounds::read_relax;
use alwabp_core::hga::{evolve, HgaRun};
use alwabp_core::{HgaParams, Instance, Time};
use anyhow::{bail, Result};
use clap::Args;
use rayon::prelude::*;

use super::{report_error, Common, Outcome};
use crate::bkv::BkvTable;
use crate::inputs::{expand, instance_name, load};
use crate::report::{deviation, opt, pct, seconds, sink, Stats, Stream};

#[derive(Args, Debug, Clone)]
pub struct HgaArgs {
    /// Instance files or directories of `.alwabp` files.
    #[arg(required = true)]
    pub instances: Vec<PathBuf>,
    /// Independent runs per instance, with seeds `seed, seed + 1, ...`.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Population size.
    #[arg(long, short = 'p', default_value_t = 100)]
    pub population: usize,
    /// Elite size; a fifth of the population when omitted.
    #[arg(long)]
    pub elite: Option<usize>,
    /// Immigrants per generation; a tenth of the population when omitted.
    #[arg(long)]
    pub immigrants: Option<usize>,
    /// Probability of inheriting an allele from the elite parent.
    #[arg(long, short = 'q', default_value_t = 0.5)]
    pub crossover: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    /// Generations without improvement before stopping.
    #[arg(long, default_value_t = 100)]
    pub max_stale: usize,
    /// Ignore `.relax` side files.
    #[arg(long)]
    pub no_relax: bool,
    /// `instance,cycle` CSV of best known values.
    #[arg(long, value_name = "FILE")]
    pub bkv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

impl HgaArgs {
    pub fn params(&self, seed: u64) -> HgaParams {
        let defaults = HgaParams::with_population(self.population);
        HgaParams {
            p_e: self.elite.unwrap_or(defaults.p_e),
            p_r: self.immigrants.unwrap_or(defaults.p_r),
            q: self.crossover,
            max_iters: self.max_iters,
            max_stale: self.max_stale,
            seed,
            ..defaults
        }
    }
}

/// Name of the incumbent log of one run.
pub fn log_file_name(instance: &str, seed: u64) -> String {
    format!("{instance}.seed{seed}.log.csv")
}

fn write_log(dir: &Path, instance: &str, seed: u64, run: &HgaRun) -> Result<()> {
    let mut log = sink(Some(dir), &log_file_name(instance, seed), Stream::Stderr)?;
    log.write_record(["iteration", "cycle", "norm_load", "elapsed_s", "population"])?;
    for e in &run.log {
        log.write_record([
            e.iteration.to_string(),
            e.fitness.cycle.to_string(),
            e.fitness.norm_load.to_string(),
            seconds(e.elapsed).to_string(),
            e.population.to_string(),
        ])?;
    }
    log.flush()?;
    Ok(())
}

struct Loaded {
    name: String,
    inst: Instance,
    relax: Option<f64>,
}

pub fn run(args: &HgaArgs) -> Result<Outcome> {
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    args.params(args.seed).validate()?;
    let bkv = args.bkv.as_deref().map(BkvTable::load).transpose()?;
    let paths = expand(&args.instances)?;

    let mut failures = 0;
    let mut loaded = Vec::new();
    for path in &paths {
        let result = load(path).and_then(|inst| {
            let relax = if args.no_relax {
                None
            } else {
                read_relax(path)?
            };
            Ok(Loaded {
                name: instance_name(path),
                inst,
                relax,
            })
        });
        match result {
            Ok(l) => loaded.push(l),
            Err(err) => {
                report_error(&err);
                failures += 1;
            }
        }
    }

    let jobs: Vec<(usize, u64)> = (0..loaded.len())
        .flat_map(|k| (0..args.seeds).map(move |j| (k, args.seed + j)))
        .collect();
    let runs: Vec<Result<HgaRun>> = jobs
        .par_iter()
        .map(|&(k, seed)| {
            let params = HgaParams {
                external_relax: loaded[k].relax,
                ..args.params(seed)
            };
            Ok(evolve(&loaded[k].inst, &params)?)
        })
        .collect();

    let out = args.common.out.as_deref();
    let mut per_run = out
        .map(|dir| sink(Some(dir), "hga_runs.csv", Stream::Stderr))
        .transpose()?;
    if let Some(w) = per_run.as_mut() {
        w.write_record([
            "instance",
            "seed",
            "cycle",
            "norm_load",
            "bkv",
            "deviation",
            "deviation_pct",
            "iterations",
            "elapsed_s",
            "time_to_best_s",
        ])?;
    }
    let mut summary = sink(out, "hga.csv", Stream::Stdout)?;
    summary.write_record([
        "instance",
        "runs",
        "bkv",
        "best_cycle",
        "avg_cycle",
        "best_dev",
        "avg_dev",
        "best_dev_pct",
        "avg_dev_pct",
        "avg_time_s",
        "avg_time_to_best_s",
    ])?;

    let mut runs = runs.into_iter();
    let mut seeds = jobs.iter();
    for l in &loaded {
        let bkv = bkv.as_ref().and_then(|t| t.get(&l.name));
        if bkv.is_none() && args.bkv.is_some() {
            eprintln!("warning: no best known value for {}", l.name);
        }
        let mut cycles: Vec<Time> = Vec::new();
        let mut times = Vec::new();
        let mut to_best = Vec::new();
        for _ in 0..args.seeds {
            let (_, seed) = *seeds.next().expect("one job per run");
            let run = match runs.next().expect("one result per job") {
                Ok(run) => run,
                Err(err) => {
                    eprintln!("error: {} (seed {seed}): {err:#}", l.name);
                    failures += 1;
                    continue;
                }
            };
            let fit = run.best.fitness;
            let (elapsed, ttb) = (
                seconds(run.log.last().map_or(run.time_to_best, |e| e.elapsed)),
                seconds(run.time_to_best),
            );
            if let Some(dir) = out {
                write_log(dir, &l.name, seed, &run)?;
            }
            if let Some(w) = per_run.as_mut() {
                let d = bkv.map(|b| deviation(fit.cycle, b));
                w.write_record([
                    l.name.clone(),
                    seed.to_string(),
                    fit.cycle.to_string(),
                    fit.norm_load.to_string(),
                    opt(bkv),
                    opt(d),
                    d.map(pct).unwrap_or_default(),
                    run.iterations.to_string(),
                    elapsed.to_string(),
                    ttb.to_string(),
                ])?;
            }
            cycles.push(fit.cycle);
            times.push(elapsed);
            to_best.push(ttb);
        }
        let Some(best) = cycles.iter().copied().min() else {
            continue;
        };
        let avg = cycles.iter().sum::<Time>() as f64 / cycles.len() as f64;
        let best_dev = bkv.map(|b| deviation(best, b));
        let avg_dev = bkv
            .and_then(|b| Stats::of(cycles.iter().map(|&c| deviation(c, b))))
            .map(|s| s.mean);
        summary.write_record([
            l.name.clone(),
            cycles.len().to_string(),
            opt(bkv),
            best.to_string(),
            avg.to_string(),
            opt(best_dev),
            opt(avg_dev),
            best_dev.map(pct).unwrap_or_default(),
            avg_dev.map(pct).unwrap_or_default(),
            opt(Stats::of(times).map(|s| s.mean)),
            opt(Stats::of(to_best).map(|s| s.mean)),
        ])?;
    }
    summary.flush()?;
    if let Some(mut w) = per_run {
        w.flush()?;
    }
    Ok(Outcome { failures })
}
