pub mod bounds;
pub mod construct;
pub mod export_lp;
pub mod generate;
pub mod hga;

use std::path::PathBuf;

use clap::Args;

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Directory for CSV reports (standard output when omitted).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads; all cores when omitted.
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
}

/// How a batch went: the number of instances or runs that failed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Outcome {
    pub failures: usize,
}

/// Load errors already name the file in their context.
pub(crate) fn report_error(err: &anyhow::Error) {
    eprintln!("error: {err:#}");
}
