use std::path::PathBuf;

use alwabp_core::constructive::run_configs;
use alwabp_core::{Direction, RuleConfig, SearchOptions, TaskRule, Time, WorkerRule};
use anyhow::Result;
use clap::Args;
use rayon::prelude::*;

use super::{report_error, Common, Outcome};
use crate::bkv::BkvTable;
use crate::inputs::{expand, instance_name, load};
use crate::report::{deviation, opt, pct, seconds, sink, Stats, Stream};

#[derive(Args, Debug, Clone)]
pub struct ConstructArgs {
    /// Instance files or directories of `.alwabp` files.
    #[arg(required = true)]
    pub instances: Vec<PathBuf>,
    /// Task priority rules (repeatable or comma separated).
    #[arg(
        long = "task-rule",
        value_delimiter = ',',
        default_value = "MaxPW-",
        conflicts_with = "all_96"
    )]
    pub task_rules: Vec<TaskRule>,
    #[arg(
        long = "worker-rule",
        value_delimiter = ',',
        default_value = "MinRLB",
        conflicts_with = "all_96"
    )]
    pub worker_rules: Vec<WorkerRule>,
    #[arg(
        long = "direction",
        value_delimiter = ',',
        default_value = "forward",
        conflicts_with = "all_96"
    )]
    pub directions: Vec<Direction>,
    /// Every task rule × worker rule × direction.
    #[arg(long = "all-96")]
    pub all_96: bool,
    /// Reduce the instance at each tentative cycle time.
    #[arg(long)]
    pub preprocess: bool,
    /// `instance,cycle` CSV of best known values.
    #[arg(long, value_name = "FILE")]
    pub bkv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

impl ConstructArgs {
    pub fn configs(&self) -> Vec<RuleConfig> {
        if self.all_96 {
            return RuleConfig::all();
        }
        let mut out = Vec::new();
        for &t in &self.task_rules {
            for &w in &self.worker_rules {
                for &d in &self.directions {
                    out.push(RuleConfig::new(t, w, d));
                }
            }
        }
        out
    }
}

/// One configuration on one instance.
#[derive(Debug, Clone)]
struct Run {
    config: RuleConfig,
    cycle: Option<Time>,
    elapsed: f64,
}

struct InstanceRuns {
    name: String,
    bkv: Option<Time>,
    runs: Vec<Run>,
}

impl InstanceRuns {
    fn best(&self, keep: impl Fn(&RuleConfig) -> bool) -> (Option<Time>, f64) {
        let kept = self.runs.iter().filter(|r| keep(&r.config));
        let (mut best, mut time) = (None::<Time>, 0.0);
        for r in kept {
            time += r.elapsed;
            if let Some(c) = r.cycle {
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
        (best, (time * 1e6).round() / 1e6)
    }
}

/// Cycle found, best known value and seconds spent, for one instance.
type Sample = (Option<Time>, Option<Time>, f64);

const BEST_ALL: &str = "best-over-all";
const BEST_MIN_RLB: &str = "best-over-MinRLB";

pub fn run(args: &ConstructArgs) -> Result<Outcome> {
    let configs = args.configs();
    let bkv = args.bkv.as_deref().map(BkvTable::load).transpose()?;
    let opts = SearchOptions {
        use_preprocess: args.preprocess,
        start: None,
    };
    let paths = expand(&args.instances)?;
    let results: Vec<Result<InstanceRuns>> = paths
        .par_iter()
        .map(|path| {
            let inst = load(path)?;
            let name = instance_name(path);
            let runs = run_configs(&inst, &configs, &opts)
                .into_iter()
                .map(|r| Run {
                    config: r.config,
                    cycle: r.cycle(),
                    elapsed: seconds(r.elapsed),
                })
                .collect();
            Ok(InstanceRuns {
                bkv: bkv.as_ref().and_then(|t| t.get(&name)),
                name,
                runs,
            })
        })
        .collect();

    let mut failures = 0;
    let mut done = Vec::new();
    for result in results {
        match result {
            Ok(r) => {
                if bkv.is_some() && r.bkv.is_none() {
                    eprintln!("warning: no best known value for {}", r.name);
                }
                let failed = r.runs.iter().filter(|run| run.cycle.is_none()).count();
                if failed > 0 {
                    eprintln!(
                        "error: {}: no feasible line from {failed} of {} configurations",
                        r.name,
                        r.runs.len()
                    );
                    failures += 1;
                }
                done.push(r);
            }
            Err(err) => {
                report_error(&err);
                failures += 1;
            }
        }
    }

    let with_best = configs.len() > 1;
    let mut rows = sink(args.common.out.as_deref(), "construct.csv", Stream::Stdout)?;
    rows.write_record([
        "instance",
        "task_rule",
        "worker_rule",
        "direction",
        "cycle",
        "bkv",
        "deviation",
        "deviation_pct",
        "elapsed_s",
    ])?;
    for inst in &done {
        let dev = |c: Option<Time>| c.zip(inst.bkv).map(|(c, b)| deviation(c, b));
        for run in &inst.runs {
            let d = dev(run.cycle);
            rows.write_record([
                inst.name.clone(),
                run.config.task_rule.to_string(),
                run.config.worker_rule.to_string(),
                run.config.direction.to_string(),
                opt(run.cycle),
                opt(inst.bkv),
                opt(d),
                d.map(pct).unwrap_or_default(),
                run.elapsed.to_string(),
            ])?;
        }
        if with_best {
            let (best, time) = inst.best(|_| true);
            let d = dev(best);
            rows.write_record([
                inst.name.clone(),
                BEST_ALL.to_string(),
                String::new(),
                String::new(),
                opt(best),
                opt(inst.bkv),
                opt(d),
                d.map(pct).unwrap_or_default(),
                time.to_string(),
            ])?;
        }
    }
    rows.flush()?;

    let mut summary = sink(
        args.common.out.as_deref(),
        "construct_summary.csv",
        Stream::Stderr,
    )?;
    summary.write_record([
        "method",
        "instances",
        "av_dev",
        "max_dev",
        "av_dev_pct",
        "max_dev_pct",
        "av_time_s",
        "max_time_s",
    ])?;
    let mut methods: Vec<(String, Vec<Sample>)> = configs
        .iter()
        .enumerate()
        .map(|(k, config)| {
            let per_instance = done
                .iter()
                .map(|i| (i.runs[k].cycle, i.bkv, i.runs[k].elapsed))
                .collect();
            (config.to_string(), per_instance)
        })
        .collect();
    if with_best {
        let all = done
            .iter()
            .map(|i| {
                let (c, t) = i.best(|_| true);
                (c, i.bkv, t)
            })
            .collect();
        methods.push((BEST_ALL.to_string(), all));
    }
    if args.all_96 {
        let rlb = done
            .iter()
            .map(|i| {
                let (c, t) = i.best(|cfg| cfg.worker_rule == WorkerRule::MinRlb);
                (c, i.bkv, t)
            })
            .collect();
        methods.push((BEST_MIN_RLB.to_string(), rlb));
    }
    for (method, per_instance) in methods {
        let devs = Stats::of(
            per_instance
                .iter()
                .filter_map(|&(c, b, _)| Some(deviation(c?, b?))),
        );
        let times = Stats::of(per_instance.iter().filter(|r| r.0.is_some()).map(|r| r.2));
        summary.write_record([
            method,
            devs.map_or(0, |s| s.count).to_string(),
            opt(devs.map(|s| s.mean)),
            opt(devs.map(|s| s.max)),
            devs.map(|s| pct(s.mean)).unwrap_or_default(),
            devs.map(|s| pct(s.max)).unwrap_or_default(),
            opt(times.map(|s| s.mean)),
            opt(times.map(|s| s.max)),
        ])?;
    }
    summary.flush()?;
    Ok(Outcome { failures })
}
