use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::{Error, Instance, Result, Time};

/// Task priority rules. Rules marked `(w)` depend on the worker being
/// considered for the station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskRule {
    /// Descending number of followers `|F*_i|`.
    MaxF,
    /// Descending number of immediate followers `|F_i|`.
    MaxIF,
    /// Descending minimum time `t⁻_i`.
    MaxTimeMin,
    /// Descending maximum time `t⁺_i`.
    MaxTimeMax,
    /// Descending mean time.
    MaxTimeAvg,
    MinTimeMin,
    MinTimeMax,
    MinTimeAvg,
    /// Descending positional weight over minimum times.
    MaxPwMin,
    MaxPwMax,
    MaxPwAvg,
    /// Ascending `t_wi - t⁻_i`.
    MinD,
    /// Ascending `t_wi / t⁻_i`.
    MinR,
    /// Descending `|F*_i| / t_wi`.
    MaxFTime,
    /// Descending `|F_i| / t_wi`.
    MaxIFTime,
    /// Ascending number of workers strictly faster than `w` on the task.
    MinRank,
}

impl TaskRule {
    pub const ALL: [TaskRule; 16] = [
        TaskRule::MaxF,
        TaskRule::MaxIF,
        TaskRule::MaxTimeMin,
        TaskRule::MaxTimeMax,
        TaskRule::MaxTimeAvg,
        TaskRule::MinTimeMin,
        TaskRule::MinTimeMax,
        TaskRule::MinTimeAvg,
        TaskRule::MaxPwMin,
        TaskRule::MaxPwMax,
        TaskRule::MaxPwAvg,
        TaskRule::MinD,
        TaskRule::MinR,
        TaskRule::MaxFTime,
        TaskRule::MaxIFTime,
        TaskRule::MinRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskRule::MaxF => "MaxF",
            TaskRule::MaxIF => "MaxIF",
            TaskRule::MaxTimeMin => "MaxTime-",
            TaskRule::MaxTimeMax => "MaxTime+",
            TaskRule::MaxTimeAvg => "MaxTimeAvg",
            TaskRule::MinTimeMin => "MinTime-",
            TaskRule::MinTimeMax => "MinTime+",
            TaskRule::MinTimeAvg => "MinTimeAvg",
            TaskRule::MaxPwMin => "MaxPW-",
            TaskRule::MaxPwMax => "MaxPW+",
            TaskRule::MaxPwAvg => "MaxPWAvg",
            TaskRule::MinD => "MinD(w)",
            TaskRule::MinR => "MinR(w)",
            TaskRule::MaxFTime => "MaxFTime(w)",
            TaskRule::MaxIFTime => "MaxIFTime(w)",
            TaskRule::MinRank => "MinRank(w)",
        }
    }

    pub fn is_worker_dependent(self) -> bool {
        matches!(
            self,
            TaskRule::MinD
                | TaskRule::MinR
                | TaskRule::MaxFTime
                | TaskRule::MaxIFTime
                | TaskRule::MinRank
        )
    }

    fn needs_positional_weights(self) -> bool {
        matches!(
            self,
            TaskRule::MaxPwMin | TaskRule::MaxPwMax | TaskRule::MaxPwAvg
        )
    }
}

/// Worker selection rules for a station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WorkerRule {
    /// Descending number of tasks the worker would take.
    MaxTasks,
    /// Ascending best-worker-assignment cycle of what remains.
    MinBwa,
    /// Ascending restricted lower bound of what remains.
    MinRlb,
}

impl WorkerRule {
    pub const ALL: [WorkerRule; 3] = [WorkerRule::MaxTasks, WorkerRule::MinBwa, WorkerRule::MinRlb];

    pub fn name(self) -> &'static str {
        match self {
            WorkerRule::MaxTasks => "MaxTasks",
            WorkerRule::MinBwa => "MinBWA",
            WorkerRule::MinRlb => "MinRLB",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Stations filled along the precedence graph.
    Forward,
    /// Stations filled on the reversed graph, reported in line order.
    Backward,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::Forward, Direction::Backward];

    pub fn name(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

fn normalize(s: &str) -> String {
    s.trim()
        .trim_end_matches("(w)")
        .trim_end_matches("(W)")
        .to_ascii_lowercase()
}

impl FromStr for TaskRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let want = normalize(s);
        let alias = match want.as_str() {
            "maxtimemin" => "maxtime-",
            "maxtimemax" => "maxtime+",
            "mintimemin" => "mintime-",
            "mintimemax" => "mintime+",
            "maxpwmin" => "maxpw-",
            "maxpwmax" => "maxpw+",
            other => other,
        };
        TaskRule::ALL
            .into_iter()
            .find(|r| normalize(r.name()) == alias)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown task rule `{s}`")))
    }
}

impl FromStr for WorkerRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WorkerRule::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown worker rule `{s}`")))
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "forward" | "fwd" | "f" => Ok(Direction::Forward),
            "backward" | "bwd" | "b" => Ok(Direction::Backward),
            _ => Err(Error::InvalidParameter(format!("unknown direction `{s}`"))),
        }
    }
}

macro_rules! display_via_name {
    ($($ty:ty),*) => {$(
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    )*};
}

display_via_name!(TaskRule, WorkerRule, Direction);

/// One heuristic: task rule, worker rule and direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleConfig {
    pub task_rule: TaskRule,
    pub worker_rule: WorkerRule,
    pub direction: Direction,
}

impl RuleConfig {
    pub fn new(task_rule: TaskRule, worker_rule: WorkerRule, direction: Direction) -> Self {
        RuleConfig {
            task_rule,
            worker_rule,
            direction,
        }
    }

    /// All 96 combinations, direction-major then worker rule then task rule.
    pub fn all() -> Vec<RuleConfig> {
        Direction::ALL
            .into_iter()
            .flat_map(|d| {
                WorkerRule::ALL.into_iter().flat_map(move |wr| {
                    TaskRule::ALL
                        .into_iter()
                        .map(move |tr| RuleConfig::new(tr, wr, d))
                })
            })
            .collect()
    }
}

impl fmt::Display for RuleConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}",
            self.task_rule, self.worker_rule, self.direction
        )
    }
}

/// Explicit priorities `p_wi ∈ [0, 1]`, larger is more urgent.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorityMatrix {
    n_workers: usize,
    n_tasks: usize,
    values: Vec<f64>,
}

impl PriorityMatrix {
    pub fn new(n_workers: usize, n_tasks: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n_workers * n_tasks {
            return Err(Error::InvalidParameter(format!(
                "priority matrix needs {} values, got {}",
                n_workers * n_tasks,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidParameter(format!(
                "priority {v} outside [0, 1]"
            )));
        }
        Ok(PriorityMatrix {
            n_workers,
            n_tasks,
            values,
        })
    }

    pub fn constant(n_workers: usize, n_tasks: usize, value: f64) -> Self {
        Self::new(n_workers, n_tasks, vec![value; n_workers * n_tasks])
            .expect("constant priority in range")
    }

    pub fn random<R: Rng + ?Sized>(n_workers: usize, n_tasks: usize, rng: &mut R) -> Self {
        let values = (0..n_workers * n_tasks).map(|_| rng.gen::<f64>()).collect();
        PriorityMatrix {
            n_workers,
            n_tasks,
            values,
        }
    }

    pub fn n_workers(&self) -> usize {
        self.n_workers
    }

    pub fn n_tasks(&self) -> usize {
        self.n_tasks
    }

    #[inline]
    pub fn get(&self, worker: usize, task: usize) -> f64 {
        self.values[worker * self.n_tasks + task]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

/// Where task priorities come from.
#[derive(Debug, Clone, Copy)]
pub enum PrioritySource<'a> {
    Rule(TaskRule),
    Matrix(&'a PriorityMatrix),
}

/// Worker-set statistics of every task, recomputed whenever the set of
/// available workers changes. Infeasible times count as `c̄` in the
/// maximum and the mean; a task nobody in the set can do gets `c̄` as its
/// minimum. Means are kept as sums: the divisor is common to all tasks.
/// Only `tasks` are filled in; they must be closed under successors.
pub(crate) struct TaskStats {
    pub min: Vec<Time>,
    pub max: Vec<Time>,
    pub sum: Vec<Time>,
    pw: Option<[Vec<Time>; 3]>,
}

impl TaskStats {
    pub fn new(
        inst: &Instance,
        tasks: &[usize],
        workers: &[usize],
        cbar: Time,
        rule: Option<TaskRule>,
    ) -> Self {
        let n = inst.n_tasks();
        let mut min = vec![Time::MAX; n];
        let mut max = vec![0; n];
        let mut sum = vec![0; n];
        for &i in tasks {
            for &w in workers {
                let t = inst.time(w, i);
                if let Some(t) = t {
                    min[i] = min[i].min(t);
                }
                let t = t.unwrap_or(cbar);
                max[i] = max[i].max(t);
                sum[i] += t;
            }
            if min[i] == Time::MAX {
                min[i] = cbar;
            }
        }
        let pw = rule.filter(|r| r.needs_positional_weights()).map(|_| {
            let closure = inst.closure();
            let weight = |base: &[Time]| -> Vec<Time> {
                let mut pw = vec![0; n];
                for &i in tasks {
                    pw[i] = base[i] + closure.succ_star(i).iter().map(|&h| base[h]).sum::<Time>();
                }
                pw
            };
            [weight(&min), weight(&max), weight(&sum)]
        });
        TaskStats { min, max, sum, pw }
    }

    fn pw(&self, k: usize, task: usize) -> Time {
        self.pw.as_ref().expect("positional weights requested")[k][task]
    }
}

/// Priority of `task` for `worker` under `rule`; larger is more urgent.
pub(crate) fn rule_key(
    inst: &Instance,
    stats: &TaskStats,
    workers: &[usize],
    rule: TaskRule,
    worker: usize,
    task: usize,
) -> f64 {
    let closure = inst.closure();
    let followers = closure.succ_star(task).len() as f64;
    let immediate = closure.succ(task).len() as f64;
    match rule {
        TaskRule::MaxF => followers,
        TaskRule::MaxIF => immediate,
        TaskRule::MaxTimeMin => stats.min[task] as f64,
        TaskRule::MaxTimeMax => stats.max[task] as f64,
        TaskRule::MaxTimeAvg => stats.sum[task] as f64,
        TaskRule::MinTimeMin => -(stats.min[task] as f64),
        TaskRule::MinTimeMax => -(stats.max[task] as f64),
        TaskRule::MinTimeAvg => -(stats.sum[task] as f64),
        TaskRule::MaxPwMin => stats.pw(0, task) as f64,
        TaskRule::MaxPwMax => stats.pw(1, task) as f64,
        TaskRule::MaxPwAvg => stats.pw(2, task) as f64,
        TaskRule::MinD
        | TaskRule::MinR
        | TaskRule::MaxFTime
        | TaskRule::MaxIFTime
        | TaskRule::MinRank => {
            let Some(own) = inst.time(worker, task) else {
                return f64::NEG_INFINITY;
            };
            let best = stats.min[task];
            match rule {
                TaskRule::MinD => -(own as f64 - best as f64),
                TaskRule::MinR => -(own as f64 / best as f64),
                TaskRule::MaxFTime => followers / own as f64,
                TaskRule::MaxIFTime => immediate / own as f64,
                _ => {
                    let faster = workers
                        .iter()
                        .filter(|&&v| inst.time(v, task).is_some_and(|t| t < own))
                        .count();
                    -(faster as f64)
                }
            }
        }
    }
}

/// Sort key giving the task order for one worker: priority (larger
/// first), then more immediate followers, then the worker's own time
/// (shorter first, infeasible last), then id.
pub(crate) type TaskKey = (u64, usize, Time, usize);

pub(crate) fn task_key(inst: &Instance, worker: usize, task: usize, priority: f64) -> TaskKey {
    // Bit pattern ordered like `f64::total_cmp`, inverted for descending.
    let bits = priority.to_bits();
    let ordered = if bits >> 63 == 1 {
        !bits
    } else {
        bits | 1 << 63
    };
    (
        !ordered,
        usize::MAX - inst.closure().succ(task).len(),
        inst.time(worker, task).unwrap_or(Time::MAX),
        task,
    )
}

/// Encodes a rule as a priority matrix: each worker's row ranks all tasks
/// by the rule over the full worker set, and `p_wi = (n - rank_i) / n`.
pub fn rule_matrix(inst: &Instance, rule: TaskRule, cbar: Time) -> PriorityMatrix {
    let n = inst.n_tasks();
    let m = inst.n_workers();
    let workers: Vec<usize> = (0..m).collect();
    let all: Vec<usize> = (0..n).collect();
    let stats = TaskStats::new(inst, &all, &workers, cbar, Some(rule));
    let mut values = vec![0.0; m * n];
    for w in 0..m {
        let mut keyed: Vec<TaskKey> = (0..n)
            .map(|i| task_key(inst, w, i, rule_key(inst, &stats, &workers, rule, w, i)))
            .collect();
        keyed.sort_unstable();
        for (rank, &(_, _, _, i)) in keyed.iter().enumerate() {
            values[w * n + i] = (n - rank) as f64 / n as f64;
        }
    }
    PriorityMatrix {
        n_workers: m,
        n_tasks: n,
        values,
    }
}
