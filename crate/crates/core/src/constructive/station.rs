//! Filling a single station: the tasks a worker would take, and how
//! candidate workers are compared.

use std::cmp::Ordering;

use super::rules::{rule_key, task_key, TaskKey, TaskStats};
use super::{PrioritySource, WorkerRule};
use crate::{Instance, Time};

/// State of the line while stations are being opened.
pub(crate) struct LineState<'a> {
    pub inst: &'a Instance,
    pub cbar: Time,
    /// `U`: tasks not yet placed at an earlier station.
    pub unassigned: Vec<bool>,
    /// `U_w`: workers not yet placed, ascending.
    pub available: Vec<usize>,
}

impl<'a> LineState<'a> {
    pub fn new(inst: &'a Instance, cbar: Time) -> Self {
        LineState {
            inst,
            cbar,
            unassigned: vec![true; inst.n_tasks()],
            available: (0..inst.n_workers()).collect(),
        }
    }

    pub fn remaining(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.unassigned.len()).filter(|&i| self.unassigned[i])
    }
}

/// A worker's proposal for the current station.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub worker: usize,
    pub tasks: Vec<usize>,
    pub load: Time,
    pub rlb: f64,
    pub bwa: f64,
}

/// Per-station data shared by all candidate workers.
pub(crate) struct StationView<'s, 'a> {
    state: &'s LineState<'a>,
    stats: Option<TaskStats>,
    /// Tasks in `U`, ascending.
    remaining: Vec<usize>,
    /// Unplaced immediate predecessors of each task in `U`.
    missing: Vec<usize>,
    /// Priorities of worker-independent rules, by task id.
    shared_keys: Option<Vec<f64>>,
    /// Fastest and second fastest `(time, worker)` among available workers.
    fastest: Vec<[(Time, usize); 2]>,
}

const NONE: (Time, usize) = (Time::MAX, usize::MAX);

impl<'s, 'a> StationView<'s, 'a> {
    pub fn new(state: &'s LineState<'a>, source: PrioritySource<'_>) -> Self {
        let inst = state.inst;
        let remaining: Vec<usize> = state.remaining().collect();
        let stats = match source {
            PrioritySource::Rule(rule) => Some(TaskStats::new(
                inst,
                &remaining,
                &state.available,
                state.cbar,
                Some(rule),
            )),
            PrioritySource::Matrix(_) => None,
        };
        let closure = inst.closure();
        let mut missing = vec![0; inst.n_tasks()];
        for &i in &remaining {
            missing[i] = closure
                .pred(i)
                .iter()
                .filter(|&&p| state.unassigned[p])
                .count();
        }
        let shared_keys = match (source, &stats) {
            (PrioritySource::Rule(rule), Some(stats)) if !rule.is_worker_dependent() => {
                let mut keys = vec![0.0; inst.n_tasks()];
                for &i in &remaining {
                    keys[i] = rule_key(inst, stats, &state.available, rule, usize::MAX, i);
                }
                Some(keys)
            }
            _ => None,
        };
        let mut fastest = vec![[NONE; 2]; inst.n_tasks()];
        for &i in &remaining {
            fastest[i] = {
                let mut best = [NONE; 2];
                for &w in &state.available {
                    if let Some(t) = inst.time(w, i) {
                        if (t, w) < best[0] {
                            best[1] = best[0];
                            best[0] = (t, w);
                        } else if (t, w) < best[1] {
                            best[1] = (t, w);
                        }
                    }
                }
                best
            };
        }
        StationView {
            state,
            stats,
            remaining,
            missing,
            shared_keys,
            fastest,
        }
    }

    /// Greedy maximal load for `worker`: repeatedly take the most urgent
    /// available task that fits, until nothing fits.
    pub fn load_tasks(&self, worker: usize, source: PrioritySource<'_>) -> (Vec<usize>, Time) {
        let state = self.state;
        let inst = state.inst;
        let closure = inst.closure();
        let mut order: Vec<TaskKey> = Vec::with_capacity(self.remaining.len());
        order.extend(
            self.remaining
                .iter()
                .copied()
                .filter(|&i| inst.time(worker, i).is_some_and(|t| t <= state.cbar))
                .map(|i| {
                    let key = match (source, &self.shared_keys) {
                        (_, Some(keys)) => keys[i],
                        (PrioritySource::Rule(rule), None) => rule_key(
                            inst,
                            self.stats.as_ref().expect("rule statistics"),
                            &state.available,
                            rule,
                            worker,
                            i,
                        ),
                        (PrioritySource::Matrix(p), None) => p.get(worker, i),
                    };
                    task_key(inst, worker, i, key)
                }),
        );
        order.sort_unstable();

        let mut missing = self.missing.clone();
        let mut tasks = Vec::new();
        let mut load = 0;
        loop {
            let mut pick = None;
            // Tasks that no longer fit never will: the load only grows.
            order.retain(|&(_, _, t, i)| {
                if load + t > state.cbar {
                    return false;
                }
                if pick.is_none() && missing[i] == 0 {
                    pick = Some((i, t));
                    return false;
                }
                true
            });
            let Some((i, t)) = pick else { break };
            for &s in closure.succ(i) {
                missing[s] = missing[s].saturating_sub(1);
            }
            tasks.push(i);
            load += t;
        }
        (tasks, load)
    }

    /// Minimum time of `task` over the available workers other than `worker`.
    fn min_without(&self, task: usize, worker: usize) -> Option<Time> {
        let [first, second] = self.fastest[task];
        let pick = if first.1 == worker { second } else { first };
        (pick != NONE).then_some(pick.0)
    }

    pub fn candidate(
        &self,
        worker: usize,
        source: PrioritySource<'_>,
        rule: WorkerRule,
    ) -> Candidate {
        let (tasks, load) = self.load_tasks(worker, source);
        let state = self.state;
        let mut in_t = vec![false; state.unassigned.len()];
        for &i in &tasks {
            in_t[i] = true;
        }
        let rest: Vec<usize> = self
            .remaining
            .iter()
            .copied()
            .filter(|&i| !in_t[i])
            .collect();
        let others = state.available.len() - 1;

        let rlb = if rest.is_empty() {
            0.0
        } else if others == 0 {
            f64::INFINITY
        } else {
            rest.iter()
                .map(|&i| self.min_without(i, worker))
                .sum::<Option<Time>>()
                .map_or(f64::INFINITY, |s| s as f64 / others as f64)
        };
        let bwa = if rule == WorkerRule::MinBwa {
            let workers: Vec<usize> = state
                .available
                .iter()
                .copied()
                .filter(|&w| w != worker)
                .collect();
            bwa_cycle(state.inst, &rest, &workers).map_or(f64::INFINITY, |c| c as f64)
        } else {
            0.0
        };
        Candidate {
            worker,
            tasks,
            load,
            rlb,
            bwa,
        }
    }
}

/// Best worker assignment cycle: tasks, given in ascending id order, each go to a
/// fastest worker, the least loaded one among ties (then the lowest id).
/// `None` if some task has no capable worker in `workers`.
pub fn bwa_cycle(inst: &Instance, tasks: &[usize], workers: &[usize]) -> Option<Time> {
    debug_assert!(tasks.windows(2).all(|w| w[0] < w[1]));
    let mut load = vec![0 as Time; workers.len()];
    for &i in tasks {
        let fastest = workers.iter().filter_map(|&w| inst.time(w, i)).min()?;
        let (slot, _) = workers
            .iter()
            .enumerate()
            .filter(|&(_, &w)| inst.time(w, i) == Some(fastest))
            .min_by_key(|&(k, &w)| (load[k], w))
            .expect("some worker attains the minimum");
        load[slot] += fastest;
    }
    Some(load.into_iter().max().unwrap_or(0))
}

/// Worker preference: the rule's score, then the secondary rule (MinRLB
/// for MaxTasks and MinBWA, MaxTasks for MinRLB), then the smaller idle
/// time, then the lower worker id. `Less` means `a` is preferred.
pub(crate) fn compare_candidates(
    rule: WorkerRule,
    cbar: Time,
    a: &Candidate,
    b: &Candidate,
) -> Ordering {
    let by_tasks = || b.tasks.len().cmp(&a.tasks.len());
    let by_rlb = || a.rlb.total_cmp(&b.rlb);
    let primary = match rule {
        WorkerRule::MaxTasks => by_tasks().then_with(by_rlb),
        WorkerRule::MinBwa => a.bwa.total_cmp(&b.bwa).then_with(by_rlb),
        WorkerRule::MinRlb => by_rlb().then_with(by_tasks),
    };
    primary
        .then_with(|| (cbar - a.load).cmp(&(cbar - b.load)))
        .then_with(|| a.worker.cmp(&b.worker))
}
