use std::path::PathBuf;

use alwabp_core::bounds::read_relax;
use alwabp_core::BoundsReport;
use anyhow::Result;
use clap::Args;
use rayon::prelude::*;

use super::{report_error, Common, Outcome};
use crate::inputs::{expand, instance_name, load};
use crate::report::{opt, sink, Stream};

#[derive(Args, Debug, Clone)]
pub struct BoundsArgs {
    /// Instance files or directories of `.alwabp` files.
    #[arg(required = true)]
    pub instances: Vec<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

pub const BOUND_NAMES: [&str; 3] = ["LC1", "LC2", "LC3"];

/// Names of the bounds attaining the largest of LC1, LC2, LC3.
pub fn argmax(report: &BoundsReport) -> Vec<&'static str> {
    let values = [report.lc1, report.lc2, report.lc3];
    let top = values.iter().copied().max().unwrap_or(0);
    BOUND_NAMES
        .iter()
        .zip(values)
        .filter(|&(_, v)| v == top)
        .map(|(&name, _)| name)
        .collect()
}

pub fn run(args: &BoundsArgs) -> Result<Outcome> {
    let paths = expand(&args.instances)?;
    let results: Vec<Result<(String, usize, usize, BoundsReport)>> = paths
        .par_iter()
        .map(|path| {
            let inst = load(path)?;
            let relax = read_relax(path)?;
            let report = BoundsReport::compute(&inst, relax);
            Ok((
                instance_name(path),
                inst.n_tasks(),
                inst.n_workers(),
                report,
            ))
        })
        .collect();

    let mut rows = sink(args.common.out.as_deref(), "bounds.csv", Stream::Stdout)?;
    rows.write_record([
        "instance",
        "n_tasks",
        "n_workers",
        "lc1",
        "lc2",
        "lc3",
        "relax",
        "best",
        "argmax",
    ])?;
    let mut tally = [0usize; 3];
    let mut failures = 0;
    for result in results {
        match result {
            Ok((name, n, m, report)) => {
                let top = argmax(&report);
                for (k, bound) in BOUND_NAMES.iter().enumerate() {
                    tally[k] += usize::from(top.contains(bound));
                }
                rows.write_record([
                    name,
                    n.to_string(),
                    m.to_string(),
                    report.lc1.to_string(),
                    report.lc2.to_string(),
                    report.lc3.to_string(),
                    opt(report.external_relax),
                    report.best.to_string(),
                    top.join("|"),
                ])?;
            }
            Err(err) => {
                report_error(&err);
                failures += 1;
            }
        }
    }
    rows.flush()?;

    let solved = paths.len() - failures;
    eprintln!(
        "bound attaining the maximum over {solved} instances: LC1 {}, LC2 {}, LC3 {}",
        tally[0], tally[1], tally[2]
    );
    if let Some(dir) = args.common.out.as_deref() {
        let mut out = sink(Some(dir), "bounds_tally.csv", Stream::Stderr)?;
        out.write_record(["bound", "count", "instances"])?;
        for (name, count) in BOUND_NAMES.iter().zip(tally) {
            out.write_record([name.to_string(), count.to_string(), solved.to_string()])?;
        }
        out.flush()?;
    }
    Ok(Outcome { failures })
}
