//! Inputs shared by the criterion benches.

use alwabp_core::instance::{generate, GeneratorConfig, InfeasibilityDensity, Variability};
use alwabp_core::Instance;
use alwabp_testkit::random_base;

/// Line sizes as `(tasks, workers)`, smallest first.
pub const SIZES: [(usize, usize); 3] = [(25, 4), (70, 10), (150, 20)];

/// Generated line with low time variability and low infeasibility density.
pub fn line(n: usize, m: usize, seed: u64) -> Instance {
    let base = random_base(&format!("bench-{n}"), n, 30, seed);
    let cfg = GeneratorConfig {
        n_workers: m,
        variability: Variability::Low,
        density: InfeasibilityDensity::Low,
        seed,
    };
    generate(&base, &cfg)
        .expect("low density is always reachable")
        .with_name(format!("bench-{n}x{m}"))
}

/// One line per entry of [`SIZES`].
pub fn lines() -> Vec<Instance> {
    SIZES.iter().map(|&(n, m)| line(n, m, 7)).collect()
}
