//! Solver kit for the assembly line worker assignment and balancing problem
//! with a fixed number of stations (ALWABP-2).
//!
//! Every station receives exactly one worker. Task times depend on the
//! worker and some worker/task pairs are infeasible. The goal is to
//! minimise the cycle time, the largest station load.
//!
//! The crate is split along the solver pipeline:
//!
//! - [`instance`]: data model, text format, transitive closure, generator
//! - [`solution`]: station assignments and the feasibility checker
//! - [`bounds`]: LC1/LC2/LC3, station windows, preprocessing, LP export
//! - [`constructive`]: station-oriented priority-rule heuristics
//! - [`localsearch`]: shift/swap/worker-swap descent
//! - [`hga`]: hybrid biased random-key genetic algorithm

pub mod bounds;
pub mod constructive;
mod error;
pub mod hga;
pub mod instance;
pub mod localsearch;
pub mod solution;

pub use bounds::BoundsReport;
pub use constructive::{
    Direction, PriorityMatrix, PrioritySource, RuleConfig, SearchOptions, TaskRule, WorkerRule,
};
pub use error::{Error, Result};
pub use hga::{Fitness, HgaParams};
pub use instance::{Closure, Instance};
pub use solution::{Solution, Station, Verdict, Violation};

/// Task times and cycle times, in integral time units.
pub type Time = u64;
