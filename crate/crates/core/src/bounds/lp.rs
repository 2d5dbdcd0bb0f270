//! Export of the ALWABP-2 mixed-integer model in LP file format, for
//! solving it or its linear relaxation with an external solver.
//!
//! Variables: `x_s{s}_w{w}_i{i}` (task `i` done by worker `w` at station
//! `s`), `y_s{s}_w{w}` (worker `w` staffs station `s`) and the cycle time
//! `c`. All ids are 1-based. Pairs infeasible for a worker get no `x`
//! variable at all.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Instance, Result};

const TERMS_PER_LINE: usize = 8;

/// Variable and row counts of an exported model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LpModelStats {
    pub x_vars: usize,
    pub y_vars: usize,
    /// Every task assigned exactly once.
    pub task_rows: usize,
    /// Every worker at exactly one station.
    pub worker_rows: usize,
    /// Every station staffed by exactly one worker.
    pub station_rows: usize,
    /// One per immediate precedence relation.
    pub precedence_rows: usize,
    /// Station load at most `c`.
    pub load_rows: usize,
    /// Tasks only with the worker staffing the station.
    pub link_rows: usize,
}

impl LpModelStats {
    /// Includes the cycle time variable.
    pub fn variables(&self) -> usize {
        self.x_vars + self.y_vars + 1
    }

    pub fn rows(&self) -> usize {
        self.task_rows
            + self.worker_rows
            + self.station_rows
            + self.precedence_rows
            + self.load_rows
            + self.link_rows
    }
}

fn x(s: usize, w: usize, i: usize) -> String {
    format!("x_s{}_w{}_i{}", s + 1, w + 1, i + 1)
}

fn y(s: usize, w: usize) -> String {
    format!("y_s{}_w{}", s + 1, w + 1)
}

/// Writes `name: terms sense rhs`, wrapping long rows.
fn row(out: &mut String, name: &str, terms: &[(i64, String)], sense: &str, rhs: i64) {
    let _ = write!(out, " {name}:");
    for (k, (coef, var)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if *coef < 0 { "-" } else { "+" };
        let mag = coef.unsigned_abs();
        if k == 0 && *coef >= 0 {
            out.push(' ');
        } else {
            let _ = write!(out, " {sign} ");
        }
        if mag != 1 {
            let _ = write!(out, "{mag} ");
        }
        out.push_str(var);
    }
    let _ = writeln!(out, " {sense} {rhs}");
}

/// Renders the model; `relaxed` replaces the binaries by `[0, 1]` bounds.
pub fn export_lp(inst: &Instance, relaxed: bool) -> (String, LpModelStats) {
    let n = inst.n_tasks();
    let m = inst.n_workers();
    let stations = 0..m;
    let mut stats = LpModelStats::default();
    let mut out = String::new();

    let _ = writeln!(
        out,
        "\\ {} model for {}: {n} tasks, {m} workers",
        if relaxed {
            "LP relaxation of the"
        } else {
            "ALWABP-2"
        },
        inst.name()
    );
    out.push_str("Minimize\n obj: c\nSubject To\n");

    for i in 0..n {
        let terms: Vec<(i64, String)> = stations
            .clone()
            .flat_map(|s| inst.capable_workers(i).map(move |w| (1, x(s, w, i))))
            .collect();
        row(&mut out, &format!("task_i{}", i + 1), &terms, "=", 1);
        stats.task_rows += 1;
    }
    for w in 0..m {
        let terms: Vec<(i64, String)> = stations.clone().map(|s| (1, y(s, w))).collect();
        row(&mut out, &format!("worker_w{}", w + 1), &terms, "=", 1);
        stats.worker_rows += 1;
    }
    for s in stations.clone() {
        let terms: Vec<(i64, String)> = (0..m).map(|w| (1, y(s, w))).collect();
        row(&mut out, &format!("station_s{}", s + 1), &terms, "=", 1);
        stats.station_rows += 1;
    }

    let closure = inst.closure();
    for j in 0..n {
        for &i in closure.pred(j) {
            let mut terms = Vec::new();
            for (task, sign) in [(i, 1i64), (j, -1i64)] {
                for s in stations.clone() {
                    for w in inst.capable_workers(task) {
                        terms.push((sign * (s as i64 + 1), x(s, w, task)));
                    }
                }
            }
            row(
                &mut out,
                &format!("prec_i{}_i{}", i + 1, j + 1),
                &terms,
                "<=",
                0,
            );
            stats.precedence_rows += 1;
        }
    }

    for s in stations.clone() {
        let mut terms: Vec<(i64, String)> = Vec::new();
        for w in 0..m {
            for i in 0..n {
                if let Some(t) = inst.time(w, i) {
                    terms.push((t as i64, x(s, w, i)));
                }
            }
        }
        terms.push((-1, "c".to_string()));
        row(&mut out, &format!("load_s{}", s + 1), &terms, "<=", 0);
        stats.load_rows += 1;
    }

    for w in 0..m {
        for s in stations.clone() {
            let mut terms: Vec<(i64, String)> = (0..n)
                .filter(|&i| inst.is_capable(w, i))
                .map(|i| (1, x(s, w, i)))
                .collect();
            terms.push((-(n as i64), y(s, w)));
            row(
                &mut out,
                &format!("link_s{}_w{}", s + 1, w + 1),
                &terms,
                "<=",
                0,
            );
            stats.link_rows += 1;
        }
    }

    let mut vars: Vec<String> = Vec::new();
    for s in stations.clone() {
        for w in 0..m {
            for i in (0..n).filter(|&i| inst.is_capable(w, i)) {
                vars.push(x(s, w, i));
                stats.x_vars += 1;
            }
        }
    }
    for s in stations {
        for w in 0..m {
            vars.push(y(s, w));
            stats.y_vars += 1;
        }
    }

    out.push_str("Bounds\n c >= 0\n");
    if relaxed {
        for v in &vars {
            let _ = writeln!(out, " 0 <= {v} <= 1");
        }
    } else {
        out.push_str("Binary\n");
        for chunk in vars.chunks(TERMS_PER_LINE) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    (out, stats)
}

pub fn write_lp(inst: &Instance, path: impl AsRef<Path>, relaxed: bool) -> Result<LpModelStats> {
    let path = path.as_ref();
    let (text, stats) = export_lp(inst, relaxed);
    std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
    Ok(stats)
}
