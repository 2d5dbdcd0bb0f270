//! Test support for the ALWABP-2 crates.
//!
//! - [`oracle`]: exhaustive optimum for tiny instances
//! - [`lp`]: reader for LP files
//! - [`fixtures`]: seeded instance builders

pub mod fixtures;
pub mod lp;
pub mod oracle;

pub use fixtures::{random_base, random_instance, small_instances, tiny_a};
pub use oracle::{line_is_feasible, optimum, OracleResult};
