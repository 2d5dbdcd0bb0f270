use std::fs;
use std::path::{Path, PathBuf};

use alwabp_core::Instance;
use anyhow::{Context, Result};

/// Extension of instance files picked up from directories.
pub const INSTANCE_EXT: &str = "alwabp";

/// Expands directories into the instance files they contain (sorted by
/// name); files are kept as given.
pub fn expand(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(path)
                .with_context(|| format!("reading directory {}", path.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == INSTANCE_EXT))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(path.clone());
        }
    }
    Ok(out)
}

/// Instance name used in reports: the file stem.
pub fn instance_name(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

pub fn load(path: &Path) -> Result<Instance> {
    Instance::load(path).with_context(|| format!("loading {}", path.display()))
}
