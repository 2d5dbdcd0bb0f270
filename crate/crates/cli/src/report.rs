//! Deviation statistics and CSV plumbing shared by the batch commands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use alwabp_core::Time;
use anyhow::{Context, Result};

/// Relative deviation `(cycle - bkv) / bkv`; negative when the BKV is
/// improved.
pub fn deviation(cycle: Time, bkv: Time) -> f64 {
    (cycle as f64 - bkv as f64) / bkv as f64
}

/// Seconds rounded to microseconds, so the printed value is the one the
/// aggregates are computed from.
pub fn seconds(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e6
}

pub fn pct(dev: f64) -> String {
    format!("{:.1}", 100.0 * dev)
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

/// Mean and maximum of a sample; `None` when empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub max: f64,
    pub count: usize,
}

impl Stats {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Stats> {
        let mut count = 0;
        let mut sum = 0.0;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            count += 1;
            sum += v;
            max = max.max(v);
        }
        (count > 0).then(|| Stats {
            mean: sum / count as f64,
            max,
            count,
        })
    }
}

/// A CSV destination: a file in the output directory, or a standard
/// stream when no directory was given.
pub fn sink(
    out_dir: Option<&Path>,
    file: &str,
    fallback: Stream,
) -> Result<csv::Writer<Box<dyn Write>>> {
    let w: Box<dyn Write> = match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(file);
            Box::new(BufWriter::new(
                File::create(&path).with_context(|| format!("creating {}", path.display()))?,
            ))
        }
        None => match fallback {
            Stream::Stdout => Box::new(io::stdout().lock()),
            Stream::Stderr => Box::new(io::stderr().lock()),
        },
    };
    Ok(csv::WriterBuilder::new().from_writer(w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Stdout,
    Stderr,
}
