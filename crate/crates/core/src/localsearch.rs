//! First-improvement descent over four move types: shifting a task to
//! another station, swapping two tasks between stations, a non-improving
//! shift followed by a second shift, and swapping the workers of two
//! stations. A move is accepted only if the result is feasible and lowers
//! `(cycle time, number of stations at the cycle time)` lexicographically.

use crate::solution::{Solution, Station};
use crate::{Instance, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shift {
    pub task: usize,
    pub from: usize,
    pub to: usize,
}

/// A local search move. Stations are 0-based line positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Shift(Shift),
    Swap { a: usize, b: usize },
    DoubleShift(Shift, Shift),
    WorkerSwap { a: usize, b: usize },
}

/// Number of stations whose load equals the cycle time.
pub fn critical_count(sol: &Solution) -> usize {
    sol.critical_count()
}

type Key = (Time, usize);

struct Line<'a> {
    inst: &'a Instance,
    worker: Vec<usize>,
    station_of: Vec<usize>,
    loads: Vec<Time>,
}

impl<'a> Line<'a> {
    fn new(inst: &'a Instance, sol: &Solution) -> Self {
        let mut station_of = vec![usize::MAX; inst.n_tasks()];
        for (s, st) in sol.stations.iter().enumerate() {
            for &i in &st.tasks {
                station_of[i] = s;
            }
        }
        Line {
            inst,
            worker: sol.stations.iter().map(|s| s.worker).collect(),
            station_of,
            loads: sol.loads.clone(),
        }
    }

    fn key(&self) -> Key {
        key_of(self.loads.iter().copied())
    }

    /// Key with some station loads replaced.
    fn key_with(&self, changed: &[(usize, Time)]) -> Key {
        key_of(self.loads.iter().enumerate().map(|(s, &l)| {
            changed
                .iter()
                .find(|&&(c, _)| c == s)
                .map_or(l, |&(_, v)| v)
        }))
    }

    fn time(&self, station: usize, task: usize) -> Option<Time> {
        self.inst.time(self.worker[station], task)
    }

    /// Stations `task` may occupy given the stations of its neighbours.
    fn window(&self, task: usize) -> (usize, usize) {
        let closure = self.inst.closure();
        let lo = closure
            .pred(task)
            .iter()
            .map(|&p| self.station_of[p])
            .max()
            .unwrap_or(0);
        let hi = closure
            .succ(task)
            .iter()
            .map(|&s| self.station_of[s])
            .min()
            .unwrap_or(self.loads.len() - 1);
        (lo, hi)
    }

    fn tasks_at(&self, station: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.station_of.len()).filter(move |&i| self.station_of[i] == station)
    }

    /// Key after the shift, or `None` if it is infeasible.
    fn eval_shift(&self, sh: Shift) -> Option<Key> {
        let t_to = self.time(sh.to, sh.task)?;
        let t_from = self
            .time(sh.from, sh.task)
            .expect("current assignment is feasible");
        Some(self.key_with(&[
            (sh.from, self.loads[sh.from] - t_from),
            (sh.to, self.loads[sh.to] + t_to),
        ]))
    }

    fn apply_shift(&mut self, sh: Shift) {
        let t_from = self.time(sh.from, sh.task).expect("feasible shift");
        let t_to = self.time(sh.to, sh.task).expect("feasible shift");
        self.loads[sh.from] -= t_from;
        self.loads[sh.to] += t_to;
        self.station_of[sh.task] = sh.to;
    }

    fn shifts(&self) -> Vec<Shift> {
        let m = self.loads.len();
        let mut out = Vec::new();
        for from in 0..m {
            for task in self.tasks_at(from) {
                let (lo, hi) = self.window(task);
                for to in lo..=hi.min(m - 1) {
                    if to != from {
                        out.push(Shift { task, from, to });
                    }
                }
            }
        }
        out
    }

    /// Station of `x` once `a` and `b` have traded places.
    fn swapped_station(&self, x: usize, a: usize, b: usize) -> usize {
        if x == a {
            self.station_of[b]
        } else if x == b {
            self.station_of[a]
        } else {
            self.station_of[x]
        }
    }

    fn eval_swap(&self, a: usize, b: usize) -> Option<Key> {
        let (sa, sb) = (self.station_of[a], self.station_of[b]);
        let a_there = self.time(sb, a)?;
        let b_there = self.time(sa, b)?;
        let closure = self.inst.closure();
        for x in [a, b] {
            let sx = self.swapped_station(x, a, b);
            let preds_ok = closure
                .pred(x)
                .iter()
                .all(|&p| self.swapped_station(p, a, b) <= sx);
            let succs_ok = closure
                .succ(x)
                .iter()
                .all(|&s| self.swapped_station(s, a, b) >= sx);
            if !(preds_ok && succs_ok) {
                return None;
            }
        }
        let a_here = self.time(sa, a).expect("feasible");
        let b_here = self.time(sb, b).expect("feasible");
        Some(self.key_with(&[
            (sa, self.loads[sa] - a_here + b_there),
            (sb, self.loads[sb] - b_here + a_there),
        ]))
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (sa, sb) = (self.station_of[a], self.station_of[b]);
        self.loads[sa] = self.loads[sa] - self.time(sa, a).unwrap() + self.time(sa, b).unwrap();
        self.loads[sb] = self.loads[sb] - self.time(sb, b).unwrap() + self.time(sb, a).unwrap();
        self.station_of[a] = sb;
        self.station_of[b] = sa;
    }

    fn worker_swap_loads(&self, a: usize, b: usize) -> Option<(Time, Time)> {
        let (wa, wb) = (self.worker[a], self.worker[b]);
        let load = |station: usize, worker: usize| -> Option<Time> {
            self.tasks_at(station)
                .map(|i| self.inst.time(worker, i))
                .sum()
        };
        Some((load(a, wb)?, load(b, wa)?))
    }

    fn try_shift(&mut self, current: Key) -> Option<Move> {
        let found = self
            .shifts()
            .into_iter()
            .find(|&sh| self.eval_shift(sh).is_some_and(|k| k < current))?;
        self.apply_shift(found);
        Some(Move::Shift(found))
    }

    fn try_swap(&mut self, current: Key) -> Option<Move> {
        let m = self.loads.len();
        let by_station: Vec<Vec<usize>> = (0..m).map(|s| self.tasks_at(s).collect()).collect();
        for (sa, tasks_a) in by_station.iter().enumerate() {
            for &a in tasks_a {
                for tasks_b in &by_station[sa + 1..] {
                    for &b in tasks_b {
                        if self.eval_swap(a, b).is_some_and(|k| k < current) {
                            self.apply_swap(a, b);
                            return Some(Move::Swap { a, b });
                        }
                    }
                }
            }
        }
        None
    }

    fn try_double_shift(&mut self, current: Key) -> Option<Move> {
        for first in self.shifts() {
            if !self.eval_shift(first).is_some_and(|k| k >= current) {
                continue;
            }
            self.apply_shift(first);
            let second = self
                .shifts()
                .into_iter()
                .find(|&sh| self.eval_shift(sh).is_some_and(|k| k < current));
            if let Some(second) = second {
                self.apply_shift(second);
                return Some(Move::DoubleShift(first, second));
            }
            self.apply_shift(Shift {
                task: first.task,
                from: first.to,
                to: first.from,
            });
        }
        None
    }

    fn try_worker_swap(&mut self, current: Key) -> Option<Move> {
        let m = self.loads.len();
        for a in 0..m {
            for b in a + 1..m {
                let Some((la, lb)) = self.worker_swap_loads(a, b) else {
                    continue;
                };
                if self.key_with(&[(a, la), (b, lb)]) < current {
                    self.worker.swap(a, b);
                    self.loads[a] = la;
                    self.loads[b] = lb;
                    return Some(Move::WorkerSwap { a, b });
                }
            }
        }
        None
    }

    /// Applies the first improving move in neighbourhood order.
    fn step(&mut self) -> Option<Move> {
        let current = self.key();
        self.try_shift(current)
            .or_else(|| self.try_swap(current))
            .or_else(|| self.try_double_shift(current))
            .or_else(|| self.try_worker_swap(current))
    }

    fn into_solution(self, sol: &Solution) -> Solution {
        let stations = self
            .worker
            .iter()
            .enumerate()
            .map(|(s, &w)| Station::new(w, self.tasks_at(s).collect()))
            .collect();
        Solution::evaluate(self.inst, stations, sol.direction).expect("moves keep capability")
    }
}

fn key_of(loads: impl Iterator<Item = Time>) -> Key {
    let mut cycle = 0;
    let mut count = 0;
    for l in loads {
        if l > cycle {
            cycle = l;
            count = 1;
        } else if l == cycle {
            count += 1;
        }
    }
    (cycle, count)
}

/// Descends until no move improves; returns the moves applied in order.
pub fn improve_with_trace(inst: &Instance, sol: &Solution) -> (Solution, Vec<Move>) {
    debug_assert!(
        sol.validate(inst).is_feasible(),
        "local search needs a feasible start"
    );
    let mut line = Line::new(inst, sol);
    let mut moves = Vec::new();
    while let Some(mv) = line.step() {
        moves.push(mv);
    }
    (line.into_solution(sol), moves)
}

pub fn improve(inst: &Instance, sol: &Solution) -> Solution {
    improve_with_trace(inst, sol).0
}
