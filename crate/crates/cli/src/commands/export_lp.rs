use std::path::PathBuf;

use alwabp_core::bounds::export_lp;
use anyhow::{Context, Result};
use clap::Args;

use super::Outcome;
use crate::inputs::{instance_name, load};

#[derive(Args, Debug, Clone)]
pub struct ExportLpArgs {
    pub instance: PathBuf,
    /// Output file, or a directory to write `<instance>.lp` into; standard
    /// output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Export the linear relaxation instead of the binary model.
    #[arg(long)]
    pub relaxed: bool,
}

pub fn run(args: &ExportLpArgs) -> Result<Outcome> {
    let inst = load(&args.instance)?;
    let (text, stats) = export_lp(&inst, args.relaxed);
    match &args.out {
        Some(out) => {
            let path = if out.is_dir() {
                let suffix = if args.relaxed { ".relaxed.lp" } else { ".lp" };
                out.join(format!("{}{suffix}", instance_name(&args.instance)))
            } else {
                out.clone()
            };
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    eprintln!(
        "{} variables ({} x, {} y, c), {} rows",
        stats.variables(),
        stats.x_vars,
        stats.y_vars,
        stats.rows()
    );
    Ok(Outcome::default())
}
