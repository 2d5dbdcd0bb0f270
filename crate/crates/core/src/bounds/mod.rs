//! Cycle-time lower bounds.
//!
//! All bounds replace task times by the minimum time over the workers,
//! `t⁻_i`, which turns SALBP-2 bounds into valid ALWABP-2 bounds.

mod lp;
mod preprocess;

use std::path::{Path, PathBuf};

pub use lp::{export_lp, write_lp, LpModelStats};
pub use preprocess::{preprocess, Reduction};

use crate::{Error, Instance, Result, Time};

/// `t⁻_i`, the fastest finite time of every task.
pub fn min_times(inst: &Instance) -> Vec<Time> {
    (0..inst.n_tasks())
        .map(|i| {
            (0..inst.n_workers())
                .filter_map(|w| inst.time(w, i))
                .min()
                .expect("validated instances have a capable worker per task")
        })
        .collect()
}

/// `max(max t⁻_i, ⌈Σ t⁻_i / m⌉)`.
pub fn lc1(inst: &Instance) -> Time {
    let t = min_times(inst);
    let m = inst.n_workers() as Time;
    let largest = t.iter().copied().max().unwrap_or(0);
    largest.max(t.iter().sum::<Time>().div_ceil(m))
}

/// With `t⁻` sorted non-increasingly (1-based), the largest
/// `Σ_{i=0..k} t⁻_{km+1-i}` over `1 ≤ k ≤ ⌊(n-1)/m⌋`; zero if that range
/// is empty. The `k+1` tasks summed cannot all sit at different stations.
pub fn lc2(inst: &Instance) -> Time {
    let mut t = min_times(inst);
    t.sort_unstable_by(|a, b| b.cmp(a));
    lc2_sorted(&t, inst.n_workers())
}

fn lc2_sorted(sorted_desc: &[Time], m: usize) -> Time {
    let n = sorted_desc.len();
    (1..=(n - 1) / m)
        .map(|k| (0..=k).map(|i| sorted_desc[k * m - i]).sum::<Time>())
        .max()
        .unwrap_or(0)
}

/// Earliest and latest feasible station (1-based) of every task for a
/// given cycle time. Windows with `earliest > latest` prove the cycle time
/// infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationWindow {
    pub earliest: Vec<i64>,
    pub latest: Vec<i64>,
}

impl StationWindow {
    pub fn is_consistent(&self) -> bool {
        self.earliest.iter().zip(&self.latest).all(|(e, l)| e <= l)
    }
}

/// Head and tail work of each task: `t⁻_i` plus all predecessors,
/// respectively all successors.
struct WindowSums {
    head: Vec<Time>,
    tail: Vec<Time>,
    m: i64,
}

impl WindowSums {
    fn new(inst: &Instance) -> Self {
        let t = min_times(inst);
        let closure = inst.closure();
        let sum = |set: &[usize]| set.iter().map(|&j| t[j]).sum::<Time>();
        WindowSums {
            head: (0..t.len())
                .map(|i| t[i] + sum(closure.pred_star(i)))
                .collect(),
            tail: (0..t.len())
                .map(|i| t[i] + sum(closure.succ_star(i)))
                .collect(),
            m: inst.n_workers() as i64,
        }
    }

    fn windows(&self, c: Time) -> StationWindow {
        StationWindow {
            earliest: self.head.iter().map(|&h| h.div_ceil(c) as i64).collect(),
            latest: self
                .tail
                .iter()
                .map(|&t| self.m + 1 - t.div_ceil(c) as i64)
                .collect(),
        }
    }

    fn consistent(&self, c: Time) -> bool {
        self.head
            .iter()
            .zip(&self.tail)
            .all(|(&h, &t)| h.div_ceil(c) as i64 <= self.m + 1 - t.div_ceil(c) as i64)
    }
}

/// `E_i(c) = ⌈(Σ_{P*_i} t⁻ + t⁻_i)/c⌉` and
/// `L_i(c) = m + 1 - ⌈(t⁻_i + Σ_{F*_i} t⁻)/c⌉`.
pub fn station_windows(inst: &Instance, c: Time) -> StationWindow {
    assert!(c >= 1, "cycle time must be positive");
    WindowSums::new(inst).windows(c)
}

/// Destructive improvement: the smallest `c ≥ c_start` at which every
/// station window is consistent.
pub fn lc3(inst: &Instance, c_start: Time) -> Time {
    let sums = WindowSums::new(inst);
    let mut c = c_start.max(1);
    while !sums.consistent(c) {
        c += 1;
    }
    c
}

/// All lower bounds of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub lc1: Time,
    pub lc2: Time,
    pub lc3: Time,
    /// Optimum of the LP relaxation, solved externally.
    pub external_relax: Option<f64>,
    /// Largest bound, the relaxation rounded up.
    pub best: Time,
}

impl BoundsReport {
    /// LC3 is searched upwards from `max(LC1, LC2)`.
    pub fn compute(inst: &Instance, external_relax: Option<f64>) -> Self {
        let lc1 = lc1(inst);
        let lc2 = lc2(inst);
        let lc3 = lc3(inst, lc1.max(lc2));
        let relax_ceil = external_relax.map(ceil_bound).unwrap_or(0);
        BoundsReport {
            lc1,
            lc2,
            lc3,
            external_relax,
            best: lc1.max(lc2).max(lc3).max(relax_ceil),
        }
    }
}

/// Rounds an LP value up, absorbing solver round-off just above an integer.
fn ceil_bound(value: f64) -> Time {
    if value <= 0.0 {
        return 0;
    }
    (value - 1e-6).ceil().max(0.0) as Time
}

/// Side file holding the relaxation value of `instance_path`:
/// the same path with extension `relax`.
pub fn relax_path(instance_path: &Path) -> PathBuf {
    instance_path.with_extension("relax")
}

/// Reads the relaxation side file if present.
pub fn read_relax(instance_path: &Path) -> Result<Option<f64>> {
    let path = relax_path(instance_path);
    let text = match std::fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(path, e)),
    };
    let token = text
        .split('#')
        .next()
        .unwrap_or("")
        .split_whitespace()
        .next()
        .ok_or_else(|| Error::parse(1, format!("{}: empty relaxation file", path.display())))?;
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(Error::parse(
            1,
            format!("{}: invalid relaxation value `{token}`", path.display()),
        )),
    }
}
