//! Station assignments and their feasibility check.

use std::fmt;

use crate::{Direction, Instance, Time};

/// One station: its worker and the tasks it executes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Station {
    pub worker: usize,
    pub tasks: Vec<usize>,
}

impl Station {
    pub fn new(worker: usize, mut tasks: Vec<usize>) -> Self {
        tasks.sort_unstable();
        Station { worker, tasks }
    }

    /// Load of the station, `None` if the worker cannot execute some task.
    pub fn load(&self, inst: &Instance) -> Option<Time> {
        self.tasks.iter().map(|&i| inst.time(self.worker, i)).sum()
    }
}

/// A complete line: stations in line order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    pub stations: Vec<Station>,
    pub loads: Vec<Time>,
    pub cycle: Time,
    pub direction: Direction,
}

impl Solution {
    /// Computes loads and cycle time. Returns `None` if a station holds a
    /// task its worker cannot execute.
    pub fn evaluate(inst: &Instance, stations: Vec<Station>, direction: Direction) -> Option<Self> {
        let loads = stations
            .iter()
            .map(|s| s.load(inst))
            .collect::<Option<Vec<_>>>()?;
        let cycle = loads.iter().copied().max().unwrap_or(0);
        Some(Solution {
            stations,
            loads,
            cycle,
            direction,
        })
    }

    /// Number of stations whose load equals the cycle time.
    pub fn critical_count(&self) -> usize {
        self.loads.iter().filter(|&&l| l == self.cycle).count()
    }

    /// Sum of all executed task times.
    pub fn total_time(&self) -> Time {
        self.loads.iter().sum()
    }

    /// Station index of every task; `None` for unassigned tasks.
    pub fn station_of(&self, n_tasks: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n_tasks];
        for (s, station) in self.stations.iter().enumerate() {
            for &i in &station.tasks {
                if i < n_tasks {
                    out[i] = Some(s);
                }
            }
        }
        out
    }

    pub fn validate(&self, inst: &Instance) -> Verdict {
        validate_solution(inst, self)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c={}", self.cycle)?;
        for (station, load) in self.stations.iter().zip(&self.loads) {
            let tasks: Vec<String> = station.tasks.iter().map(|i| (i + 1).to_string()).collect();
            write!(
                f,
                " | w{}: {{{}}} ({load})",
                station.worker + 1,
                tasks.join(",")
            )?;
        }
        Ok(())
    }
}

/// A violated model constraint. Ids are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    StationCount {
        expected: usize,
        found: usize,
    },
    UnknownWorker {
        station: usize,
        worker: usize,
    },
    WorkerReused {
        worker: usize,
    },
    WorkerUnused {
        worker: usize,
    },
    UnknownTask {
        station: usize,
        task: usize,
    },
    TaskUnassigned {
        task: usize,
    },
    TaskRepeated {
        task: usize,
    },
    Precedence {
        pred: usize,
        succ: usize,
    },
    Incapable {
        worker: usize,
        task: usize,
    },
    LoadMismatch {
        station: usize,
        reported: Time,
        actual: Time,
    },
    CycleMismatch {
        reported: Time,
        actual: Time,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the task partition, the worker/station bijection, precedence
/// (a predecessor sits at the same or an earlier station), capability, and
/// that the reported loads and cycle time match the assignment.
pub fn validate_solution(inst: &Instance, sol: &Solution) -> Verdict {
    let n = inst.n_tasks();
    let m = inst.n_workers();
    let mut violations = Vec::new();

    if sol.stations.len() != m {
        violations.push(Violation::StationCount {
            expected: m,
            found: sol.stations.len(),
        });
    }

    let mut worker_uses = vec![0usize; m];
    let mut station_of: Vec<Option<usize>> = vec![None; n];
    for (s, station) in sol.stations.iter().enumerate() {
        let w = station.worker;
        if w >= m {
            violations.push(Violation::UnknownWorker {
                station: s,
                worker: w,
            });
        } else {
            worker_uses[w] += 1;
            if worker_uses[w] == 2 {
                violations.push(Violation::WorkerReused { worker: w });
            }
        }
        for &i in &station.tasks {
            if i >= n {
                violations.push(Violation::UnknownTask {
                    station: s,
                    task: i,
                });
                continue;
            }
            if station_of[i].is_some() {
                violations.push(Violation::TaskRepeated { task: i });
            } else {
                station_of[i] = Some(s);
            }
            if w < m && !inst.is_capable(w, i) {
                violations.push(Violation::Incapable { worker: w, task: i });
            }
        }
    }
    for (w, &uses) in worker_uses.iter().enumerate() {
        if uses == 0 {
            violations.push(Violation::WorkerUnused { worker: w });
        }
    }
    for (i, s) in station_of.iter().enumerate() {
        if s.is_none() {
            violations.push(Violation::TaskUnassigned { task: i });
        }
    }
    for &(i, j) in inst.edges() {
        if let (Some(si), Some(sj)) = (station_of[i], station_of[j]) {
            if si > sj {
                violations.push(Violation::Precedence { pred: i, succ: j });
            }
        }
    }

    let mut actual_cycle = 0;
    for (s, station) in sol.stations.iter().enumerate() {
        let actual: Time = if station.worker < m {
            station
                .tasks
                .iter()
                .filter(|&&i| i < n)
                .filter_map(|&i| inst.time(station.worker, i))
                .sum()
        } else {
            0
        };
        actual_cycle = actual_cycle.max(actual);
        let reported = sol.loads.get(s).copied();
        if reported != Some(actual) {
            violations.push(Violation::LoadMismatch {
                station: s,
                reported: reported.unwrap_or(0),
                actual,
            });
        }
    }
    if sol.cycle != actual_cycle {
        violations.push(Violation::CycleMismatch {
            reported: sol.cycle,
            actual: actual_cycle,
        });
    }

    Verdict { violations }
}
