//! Exact optimum by enumeration: every worker order, and for each, every
//! precedence-feasible placement of tasks onto stations. Only meant for
//! instances with at most 8 tasks and 4 workers.

use alwabp_core::{Instance, Time};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub cycle: Time,
    /// Worker at each station, in line order.
    pub workers: Vec<usize>,
    /// Station index of each task.
    pub station_of: Vec<usize>,
}

impl OracleResult {
    /// Station contents as `(worker, tasks)` in line order.
    pub fn stations(&self) -> Vec<(usize, Vec<usize>)> {
        self.workers
            .iter()
            .enumerate()
            .map(|(s, &w)| {
                let tasks = (0..self.station_of.len())
                    .filter(|&i| self.station_of[i] == s)
                    .collect();
                (w, tasks)
            })
            .collect()
    }
}

/// Kahn's algorithm on the raw edge list, smallest id first.
fn topological_order(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut indegree = vec![0; n];
    for &(_, j) in edges {
        indegree[j] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut done = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .find(|&i| !done[i] && indegree[i] == 0)
            .expect("precedence graph is acyclic");
        done[next] = true;
        order.push(next);
        for &(i, j) in edges {
            if i == next {
                indegree[j] -= 1;
            }
        }
    }
    order
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

struct Search<'a> {
    inst: &'a Instance,
    order: Vec<usize>,
    preds: Vec<Vec<usize>>,
    workers: Vec<usize>,
    loads: Vec<Time>,
    station_of: Vec<usize>,
    best: Option<OracleResult>,
}

impl Search<'_> {
    fn bound(&self) -> Time {
        self.best.as_ref().map_or(Time::MAX, |b| b.cycle)
    }

    fn place(&mut self, depth: usize) {
        if depth == self.order.len() {
            let cycle = self.loads.iter().copied().max().unwrap_or(0);
            if cycle < self.bound() {
                self.best = Some(OracleResult {
                    cycle,
                    workers: self.workers.clone(),
                    station_of: self.station_of.clone(),
                });
            }
            return;
        }
        let i = self.order[depth];
        let first = self.preds[i]
            .iter()
            .map(|&p| self.station_of[p])
            .max()
            .unwrap_or(0);
        for s in first..self.workers.len() {
            let Some(t) = self.inst.time(self.workers[s], i) else {
                continue;
            };
            if self.loads[s] + t >= self.bound() {
                continue;
            }
            self.loads[s] += t;
            self.station_of[i] = s;
            self.place(depth + 1);
            self.loads[s] -= t;
        }
    }
}

/// Minimum cycle time over all feasible lines, or `None` if no line
/// respects precedences and capabilities.
pub fn optimum(inst: &Instance) -> Option<OracleResult> {
    let n = inst.n_tasks();
    let m = inst.n_workers();
    assert!(
        n <= 10 && m <= 5,
        "oracle is exponential; got {n} tasks, {m} workers"
    );
    let mut preds = vec![Vec::new(); n];
    for &(i, j) in inst.edges() {
        preds[j].push(i);
    }
    let mut search = Search {
        inst,
        order: topological_order(n, inst.edges()),
        preds,
        workers: Vec::new(),
        loads: vec![0; m],
        station_of: vec![0; n],
        best: None,
    };
    for workers in permutations(m) {
        search.workers = workers;
        search.place(0);
    }
    search.best
}

/// Checks a line from first principles: every worker staffs exactly one
/// station, every task sits at exactly one station whose worker can do it,
/// no task precedes its predecessors, and no station exceeds `cycle`.
pub fn line_is_feasible(
    inst: &Instance,
    stations: &[(usize, Vec<usize>)],
    cycle: Time,
) -> Result<(), String> {
    let (n, m) = (inst.n_tasks(), inst.n_workers());
    if stations.len() != m {
        return Err(format!("{} stations for {m} workers", stations.len()));
    }
    let mut seen_worker = vec![false; m];
    let mut station_of = vec![None; n];
    for (s, (w, tasks)) in stations.iter().enumerate() {
        if *w >= m || std::mem::replace(&mut seen_worker[*w], true) {
            return Err(format!("worker {w} unknown or used twice"));
        }
        let mut load = 0;
        for &i in tasks {
            if i >= n || station_of[i].replace(s).is_some() {
                return Err(format!("task {i} unknown or placed twice"));
            }
            load += inst
                .time(*w, i)
                .ok_or_else(|| format!("worker {w} cannot do task {i}"))?;
        }
        if load > cycle {
            return Err(format!("station {s} load {load} exceeds {cycle}"));
        }
    }
    let station_of: Vec<usize> = station_of
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| format!("task {i} unassigned")))
        .collect::<Result<_, _>>()?;
    for &(i, j) in inst.edges() {
        if station_of[i] > station_of[j] {
            return Err(format!("task {i} placed after its successor {j}"));
        }
    }
    Ok(())
}
