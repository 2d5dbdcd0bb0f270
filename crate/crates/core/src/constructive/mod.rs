//! Station-oriented construction.
//!
//! Stations are opened one after another. For every still unplaced worker
//! the procedure computes the tasks the worker would take under the task
//! priorities, then commits the worker preferred by the worker rule. A
//! tentative cycle time succeeds if no task is left once every worker is
//! placed; the lower-bound search raises the tentative cycle time one unit
//! at a time until that happens.

mod rules;
mod station;

use std::time::{Duration, Instant};

pub use rules::{
    rule_matrix, Direction, PriorityMatrix, PrioritySource, RuleConfig, TaskRule, WorkerRule,
};
pub use station::bwa_cycle;

use station::{compare_candidates, LineState, StationView};

use crate::bounds::{lc1, preprocess};
use crate::solution::{Solution, Station};
use crate::{Error, Instance, Result, Time};

/// Tasks `worker` would take at the next station, given the tasks still
/// unassigned and the workers still available.
pub fn station_load_tasks(
    inst: &Instance,
    unassigned: &[usize],
    available: &[usize],
    worker: usize,
    cbar: Time,
    source: PrioritySource<'_>,
) -> Vec<usize> {
    let state = line_state(inst, unassigned, available, cbar);
    StationView::new(&state, source)
        .load_tasks(worker, source)
        .0
}

/// Score of `worker` under `rule` if it took `tasks`: the task count for
/// MaxTasks (larger is better), the remaining bound for MinRLB and MinBWA
/// (smaller is better, infinite if the rest cannot be covered).
pub fn score_worker(
    inst: &Instance,
    unassigned: &[usize],
    available: &[usize],
    worker: usize,
    tasks: &[usize],
    rule: WorkerRule,
) -> f64 {
    let state = line_state(inst, unassigned, available, Time::MAX);
    let in_t: Vec<bool> = (0..inst.n_tasks()).map(|i| tasks.contains(&i)).collect();
    let rest: Vec<usize> = state.remaining().filter(|&i| !in_t[i]).collect();
    let others: Vec<usize> = available.iter().copied().filter(|&w| w != worker).collect();
    match rule {
        WorkerRule::MaxTasks => tasks.len() as f64,
        WorkerRule::MinBwa => bwa_cycle(inst, &rest, &others).map_or(f64::INFINITY, |c| c as f64),
        WorkerRule::MinRlb => {
            if rest.is_empty() {
                return 0.0;
            }
            if others.is_empty() {
                return f64::INFINITY;
            }
            rest.iter()
                .map(|&i| others.iter().filter_map(|&w| inst.time(w, i)).min())
                .sum::<Option<Time>>()
                .map_or(f64::INFINITY, |s| s as f64 / others.len() as f64)
        }
    }
}

fn line_state<'a>(
    inst: &'a Instance,
    unassigned: &[usize],
    available: &[usize],
    cbar: Time,
) -> LineState<'a> {
    let mut state = LineState::new(inst, cbar);
    state.unassigned = vec![false; inst.n_tasks()];
    for &i in unassigned {
        state.unassigned[i] = true;
    }
    state.available = available.to_vec();
    state.available.sort_unstable();
    state
}

/// One forward pass at tentative cycle time `cbar`.
fn assemble_forward(
    inst: &Instance,
    cbar: Time,
    source: PrioritySource<'_>,
    worker_rule: WorkerRule,
) -> Option<Vec<Station>> {
    let mut state = LineState::new(inst, cbar);
    let mut stations = Vec::with_capacity(inst.n_workers());
    while !state.available.is_empty() {
        let view = StationView::new(&state, source);
        let best = state
            .available
            .iter()
            .map(|&w| view.candidate(w, source, worker_rule))
            .min_by(|a, b| compare_candidates(worker_rule, cbar, a, b))
            .expect("a worker is available");
        for &i in &best.tasks {
            state.unassigned[i] = false;
        }
        state.available.retain(|&w| w != best.worker);
        stations.push(Station::new(best.worker, best.tasks));
    }
    let complete = state.remaining().next().is_none();
    complete.then_some(stations)
}

/// Runs the station-oriented procedure at `cbar`. `reversed` must be
/// `inst.reverse()`; a backward run fills stations on it and reports them
/// in line order.
pub(crate) fn assemble_on(
    inst: &Instance,
    reversed: &Instance,
    cbar: Time,
    source: PrioritySource<'_>,
    worker_rule: WorkerRule,
    direction: Direction,
) -> Option<Solution> {
    let stations = match direction {
        Direction::Forward => assemble_forward(inst, cbar, source, worker_rule)?,
        Direction::Backward => {
            let mut stations = assemble_forward(reversed, cbar, source, worker_rule)?;
            stations.reverse();
            stations
        }
    };
    Some(Solution::evaluate(inst, stations, direction).expect("stations only hold capable pairs"))
}

/// Assembles a full line at tentative cycle time `cbar`.
pub fn assemble(
    inst: &Instance,
    cbar: Time,
    source: PrioritySource<'_>,
    worker_rule: WorkerRule,
    direction: Direction,
) -> Result<Solution> {
    if cbar == 0 {
        return Err(Error::InfeasibleAt(cbar));
    }
    let reversed;
    let reversed_ref = match direction {
        Direction::Forward => inst,
        Direction::Backward => {
            reversed = inst.reverse();
            &reversed
        }
    };
    assemble_on(inst, reversed_ref, cbar, source, worker_rule, direction)
        .ok_or(Error::InfeasibleAt(cbar))
}

/// Largest tentative cycle time the search tries: every task at its
/// slowest finite time.
pub fn search_ceiling(inst: &Instance) -> Time {
    (0..inst.n_tasks())
        .map(|i| {
            (0..inst.n_workers())
                .filter_map(|w| inst.time(w, i))
                .max()
                .unwrap_or(0)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchOptions {
    /// Reduce the instance at every tentative cycle time and skip cycle
    /// times the reduction proves infeasible.
    pub use_preprocess: bool,
    /// First tentative cycle time; LC1 when unset.
    pub start: Option<Time>,
}

/// Lower-bound search: tries every integer cycle time from the start bound
/// upwards and returns the first assembled line. At each cycle time the
/// directions are tried in the given order.
pub fn solve_with(
    inst: &Instance,
    source: PrioritySource<'_>,
    worker_rule: WorkerRule,
    directions: &[Direction],
    opts: &SearchOptions,
) -> Result<Solution> {
    let ceiling = search_ceiling(inst);
    let start = opts.start.unwrap_or_else(|| lc1(inst)).max(1);
    let needs_reverse = directions.contains(&Direction::Backward);
    let reversed = (needs_reverse && !opts.use_preprocess).then(|| inst.reverse());

    for cbar in start..=ceiling.max(start) {
        let solved = if opts.use_preprocess {
            let reduced = match preprocess(inst, cbar) {
                Ok(r) => r.instance,
                Err(Error::CycleInfeasible(_)) => continue,
                Err(e) => return Err(e),
            };
            let reduced_rev = needs_reverse.then(|| reduced.reverse());
            let rev = reduced_rev.as_ref().unwrap_or(&reduced);
            directions
                .iter()
                .find_map(|&d| assemble_on(&reduced, rev, cbar, source, worker_rule, d))
        } else {
            let rev = reversed.as_ref().unwrap_or(inst);
            directions
                .iter()
                .find_map(|&d| assemble_on(inst, rev, cbar, source, worker_rule, d))
        };
        if let Some(sol) = solved {
            // Reduced instances keep the finite times, so loads carry over.
            return Ok(Solution::evaluate(inst, sol.stations, sol.direction)
                .expect("reduction only removes pairs"));
        }
    }
    Err(Error::NoFeasibleAssignment(ceiling))
}

/// Lower-bound search for one rule configuration.
pub fn solve(inst: &Instance, config: RuleConfig, opts: &SearchOptions) -> Result<Solution> {
    solve_with(
        inst,
        PrioritySource::Rule(config.task_rule),
        config.worker_rule,
        &[config.direction],
        opts,
    )
}

/// Outcome of one configuration in [`run_all_96`].
#[derive(Debug, Clone)]
pub struct RuleRun {
    pub config: RuleConfig,
    pub solution: Option<Solution>,
    pub elapsed: Duration,
}

impl RuleRun {
    pub fn cycle(&self) -> Option<Time> {
        self.solution.as_ref().map(|s| s.cycle)
    }
}

/// Runs every configuration in `configs` on `inst`.
pub fn run_configs(inst: &Instance, configs: &[RuleConfig], opts: &SearchOptions) -> Vec<RuleRun> {
    configs
        .iter()
        .map(|&config| {
            let start = Instant::now();
            let solution = solve(inst, config, opts).ok();
            RuleRun {
                config,
                solution,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

/// All 96 rule combinations on one instance.
#[derive(Debug, Clone)]
pub struct AllRules {
    pub runs: Vec<RuleRun>,
}

impl AllRules {
    /// Best cycle over every configuration.
    pub fn best_overall(&self) -> Option<Time> {
        self.runs.iter().filter_map(RuleRun::cycle).min()
    }

    /// Best cycle over the 32 MinRLB configurations.
    pub fn best_min_rlb(&self) -> Option<Time> {
        self.runs
            .iter()
            .filter(|r| r.config.worker_rule == WorkerRule::MinRlb)
            .filter_map(RuleRun::cycle)
            .min()
    }

    pub fn total_elapsed(&self) -> Duration {
        self.runs.iter().map(|r| r.elapsed).sum()
    }
}

pub fn run_all_96(inst: &Instance, opts: &SearchOptions) -> AllRules {
    AllRules {
        runs: run_configs(inst, &RuleConfig::all(), opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::tiny_a;

    fn pw_rlb(direction: Direction) -> RuleConfig {
        RuleConfig::new(TaskRule::MaxPwMin, WorkerRule::MinRlb, direction)
    }

    #[test]
    fn tiny_a_trace() {
        let inst = tiny_a();
        let sol = assemble(
            &inst,
            2,
            PrioritySource::Rule(TaskRule::MaxPwMin),
            WorkerRule::MinRlb,
            Direction::Forward,
        )
        .unwrap();
        assert_eq!(
            sol.stations,
            vec![Station::new(0, vec![0]), Station::new(1, vec![1, 2])]
        );
        assert_eq!(sol.cycle, 2);
    }

    #[test]
    fn below_lc1_is_infeasible() {
        let inst = tiny_a();
        for config in RuleConfig::all() {
            let r = assemble(
                &inst,
                1,
                PrioritySource::Rule(config.task_rule),
                config.worker_rule,
                config.direction,
            );
            assert!(matches!(r, Err(Error::InfeasibleAt(1))));
        }
    }

    #[test]
    fn generous_cycle_is_feasible() {
        let inst = tiny_a();
        for config in RuleConfig::all() {
            let sol = assemble(
                &inst,
                9,
                PrioritySource::Rule(config.task_rule),
                config.worker_rule,
                config.direction,
            )
            .unwrap();
            assert!(sol.validate(&inst).is_feasible());
            assert!(sol.cycle <= 9);
        }
    }

    #[test]
    fn search_finds_lc1_on_tiny_a() {
        let inst = tiny_a();
        let sol = solve(&inst, pw_rlb(Direction::Forward), &SearchOptions::default()).unwrap();
        assert_eq!(sol.cycle, 2);
        let with_pre = SearchOptions {
            use_preprocess: true,
            ..Default::default()
        };
        assert_eq!(
            solve(&inst, pw_rlb(Direction::Backward), &with_pre)
                .unwrap()
                .cycle,
            2
        );
    }

    #[test]
    fn single_worker_chain() {
        let inst = Instance::new(
            "c",
            3,
            vec![(0, 1), (1, 2)],
            vec![vec![Some(2), Some(5), Some(4)]],
        )
        .unwrap();
        let sol = solve(&inst, pw_rlb(Direction::Forward), &SearchOptions::default()).unwrap();
        assert_eq!(sol.cycle, 11);
        assert_eq!(search_ceiling(&inst), 11);
    }

    #[test]
    fn backward_equals_forward_on_reverse() {
        let inst = tiny_a();
        for config in RuleConfig::all()
            .into_iter()
            .filter(|c| c.direction == Direction::Backward)
        {
            let back = solve(&inst, config, &SearchOptions::default()).unwrap();
            let fwd = solve(
                &inst.reverse(),
                RuleConfig {
                    direction: Direction::Forward,
                    ..config
                },
                &SearchOptions::default(),
            )
            .unwrap();
            assert_eq!(back.cycle, fwd.cycle);
            let mut flipped = fwd.stations.clone();
            flipped.reverse();
            assert_eq!(back.stations, flipped);
            assert!(back.validate(&inst).is_feasible());
        }
    }

    #[test]
    fn all_96_on_tiny_a() {
        let all = run_all_96(&tiny_a(), &SearchOptions::default());
        assert_eq!(all.runs.len(), 96);
        assert!(all.runs.iter().all(|r| r.cycle() == Some(2)));
        assert_eq!(all.best_overall(), Some(2));
        assert_eq!(all.best_min_rlb(), Some(2));
    }

    #[test]
    fn public_station_helpers() {
        let inst = tiny_a();
        let pw = PrioritySource::Rule(TaskRule::MaxPwMin);
        assert_eq!(
            station_load_tasks(&inst, &[0, 1, 2], &[0, 1], 0, 2, pw),
            vec![0]
        );
        assert!(station_load_tasks(&inst, &[0, 1, 2], &[0, 1], 1, 2, pw).is_empty());
        assert_eq!(
            station_load_tasks(&inst, &[0, 1, 2], &[0], 0, 9, pw).len(),
            3
        );
        assert_eq!(
            score_worker(&inst, &[0, 1, 2], &[0, 1], 0, &[0], WorkerRule::MinRlb),
            2.0
        );
        assert_eq!(
            score_worker(&inst, &[0, 1, 2], &[0, 1], 1, &[], WorkerRule::MinRlb),
            9.0
        );
        assert_eq!(
            score_worker(&inst, &[0, 1, 2], &[0, 1], 0, &[0], WorkerRule::MaxTasks),
            1.0
        );
        assert_eq!(
            score_worker(&inst, &[0, 1, 2], &[0, 1], 1, &[], WorkerRule::MaxTasks),
            0.0
        );
        assert_eq!(
            score_worker(&inst, &[0, 1, 2], &[0, 1], 0, &[0], WorkerRule::MinBwa),
            2.0
        );
        assert_eq!(
            score_worker(&inst, &[1, 2], &[1], 1, &[1, 2], WorkerRule::MinRlb),
            0.0
        );
        assert!(score_worker(&inst, &[1, 2], &[1], 1, &[1], WorkerRule::MinRlb).is_infinite());
    }

    #[test]
    fn constant_matrix_is_deterministic() {
        let inst = tiny_a();
        let p = PriorityMatrix::constant(2, 3, 0.5);
        let a = solve_with(
            &inst,
            PrioritySource::Matrix(&p),
            WorkerRule::MinRlb,
            &Direction::ALL,
            &SearchOptions::default(),
        )
        .unwrap();
        let b = solve_with(
            &inst,
            PrioritySource::Matrix(&p),
            WorkerRule::MinRlb,
            &Direction::ALL,
            &SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cycle, 2);
    }
}
