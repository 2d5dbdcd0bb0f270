//! Instance data model and the canonical text format.
//!
//! The format is line oriented, `#` starts a comment:
//!
//! ```text
//! # n_tasks n_workers
//! 3 2
//! # precedence edges, 1-based, i before j
//! 1 2
//! 1 3
//! # one row per worker: a positive time or Inf per task
//! 2 3 4
//! 5 1 1
//! ```
//!
//! The last `n_workers` data lines are the time matrix; every data line in
//! between the header and the matrix is an edge.

mod closure;
mod generate;

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

pub use closure::Closure;
pub use generate::{generate, BaseInstance, GeneratorConfig, InfeasibilityDensity, Variability};

use crate::{Error, Result, Time};

/// An ALWABP-2 instance. Stations and workers are equally many.
///
/// Ids are 0-based in the API and 1-based in files. A `None` time marks a
/// worker that cannot execute the task.
#[derive(Debug, Clone)]
pub struct Instance {
    name: String,
    n_tasks: usize,
    n_workers: usize,
    edges: Vec<(usize, usize)>,
    times: Vec<Option<Time>>,
    closure: OnceLock<Closure>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.n_tasks == other.n_tasks
            && self.n_workers == other.n_workers
            && self.edges == other.edges
            && self.times == other.times
    }
}

impl Eq for Instance {}

impl Instance {
    /// Builds and validates an instance. `times[w][i]` is the time of task
    /// `i` for worker `w`.
    pub fn new(
        name: impl Into<String>,
        n_tasks: usize,
        edges: Vec<(usize, usize)>,
        times: Vec<Vec<Option<Time>>>,
    ) -> Result<Self> {
        let n_workers = times.len();
        if n_tasks == 0 {
            return Err(Error::InvalidInstance("no tasks".into()));
        }
        if n_workers == 0 {
            return Err(Error::InvalidInstance("no workers".into()));
        }
        for (w, row) in times.iter().enumerate() {
            if row.len() != n_tasks {
                return Err(Error::InvalidInstance(format!(
                    "worker {} has {} times, expected {n_tasks}",
                    w + 1,
                    row.len()
                )));
            }
            if let Some(i) = row.iter().position(|t| *t == Some(0)) {
                return Err(Error::InvalidInstance(format!(
                    "zero time for worker {} on task {}",
                    w + 1,
                    i + 1
                )));
            }
        }
        for &(i, j) in &edges {
            if i >= n_tasks || j >= n_tasks {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) out of range",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::PrecedenceCycle(i));
            }
        }
        let inst = Instance {
            name: name.into(),
            n_tasks,
            n_workers,
            edges,
            times: times.into_iter().flatten().collect(),
            closure: OnceLock::new(),
        };
        inst.topological_order()?;
        if let Some(i) = (0..n_tasks).find(|&i| inst.capable_workers(i).next().is_none()) {
            return Err(Error::NoCapableWorker(i));
        }
        Ok(inst)
    }

    /// Reads an instance from the canonical text format. The instance is
    /// named after the file stem.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::parse(&name, &text)
    }

    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let lines = data_lines(text);
        let Some((header_line, header)) = lines.first() else {
            return Err(Error::parse(1, "empty instance file"));
        };
        let [n_tasks, n_workers] = header[..] else {
            return Err(Error::parse(*header_line, "expected `n_tasks n_workers`"));
        };
        let n_tasks = parse_count(*header_line, n_tasks)?;
        let n_workers = parse_count(*header_line, n_workers)?;
        if lines.len() < 1 + n_workers {
            return Err(Error::parse(
                lines.last().map_or(1, |l| l.0),
                format!("expected {n_workers} time rows"),
            ));
        }
        let (edge_lines, row_lines) = lines[1..].split_at(lines.len() - 1 - n_workers);

        let mut edges = Vec::with_capacity(edge_lines.len());
        for (line, tokens) in edge_lines {
            let [i, j] = tokens[..] else {
                return Err(Error::parse(*line, "expected an edge `i j`"));
            };
            let i = parse_id(*line, i, n_tasks)?;
            let j = parse_id(*line, j, n_tasks)?;
            edges.push((i, j));
        }

        let mut times = Vec::with_capacity(n_workers);
        for (line, tokens) in row_lines {
            if tokens.len() != n_tasks {
                return Err(Error::parse(
                    *line,
                    format!("expected {n_tasks} times, found {}", tokens.len()),
                ));
            }
            let row = tokens
                .iter()
                .map(|tok| parse_time(*line, tok))
                .collect::<Result<Vec<_>>>()?;
            times.push(row);
        }
        Self::new(name, n_tasks, edges, times)
    }

    /// Renders the instance in the canonical text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.name);
        let _ = writeln!(out, "{} {}", self.n_tasks, self.n_workers);
        for &(i, j) in &self.edges {
            let _ = writeln!(out, "{} {}", i + 1, j + 1);
        }
        for w in 0..self.n_workers {
            let row: Vec<String> = self
                .row(w)
                .iter()
                .map(|t| t.map_or_else(|| "Inf".to_string(), |t| t.to_string()))
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n_tasks(&self) -> usize {
        self.n_tasks
    }

    /// Number of workers, which is also the number of stations.
    pub fn n_workers(&self) -> usize {
        self.n_workers
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn time(&self, worker: usize, task: usize) -> Option<Time> {
        self.times[worker * self.n_tasks + task]
    }

    #[inline]
    pub fn is_capable(&self, worker: usize, task: usize) -> bool {
        self.time(worker, task).is_some()
    }

    pub fn row(&self, worker: usize) -> &[Option<Time>] {
        &self.times[worker * self.n_tasks..(worker + 1) * self.n_tasks]
    }

    pub fn capable_workers(&self, task: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_workers).filter(move |&w| self.is_capable(w, task))
    }

    /// Tasks worker `w` cannot execute.
    pub fn infeasible_tasks(&self, worker: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_tasks).filter(move |&i| !self.is_capable(worker, i))
    }

    pub fn infeasible_count(&self) -> usize {
        self.times.iter().filter(|t| t.is_none()).count()
    }

    pub fn closure(&self) -> &Closure {
        self.closure.get_or_init(|| Closure::new(self))
    }

    /// The same instance with every precedence edge flipped.
    pub fn reverse(&self) -> Instance {
        Instance {
            name: self.name.clone(),
            n_tasks: self.n_tasks,
            n_workers: self.n_workers,
            edges: self.edges.iter().map(|&(i, j)| (j, i)).collect(),
            times: self.times.clone(),
            closure: OnceLock::new(),
        }
    }

    /// Copy with `task` made infeasible for `worker`; the closure is kept.
    #[cfg(test)]
    pub(crate) fn without_pair(&self, worker: usize, task: usize) -> Instance {
        let mut out = self.clone();
        out.times[worker * self.n_tasks + task] = None;
        out
    }

    pub(crate) fn set_infeasible(&mut self, worker: usize, task: usize) {
        self.times[worker * self.n_tasks + task] = None;
    }

    /// Kahn's algorithm, smallest ready id first.
    fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.n_tasks;
        let mut indegree = vec![0usize; n];
        let mut succ = vec![Vec::new(); n];
        for &(i, j) in &self.edges {
            indegree[j] += 1;
            succ[i].push(j);
        }
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
            .filter(|&i| indegree[i] == 0)
            .map(std::cmp::Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(i)) = ready.pop() {
            order.push(i);
            for &j in &succ[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(std::cmp::Reverse(j));
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(Error::PrecedenceCycle(stuck));
        }
        Ok(order)
    }
}

type DataLine<'a> = (usize, Vec<&'a str>);

/// Non-empty lines with comments stripped, tagged with 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> Vec<DataLine<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(idx, line)| {
            let body = line.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            (!tokens.is_empty()).then_some((idx + 1, tokens))
        })
        .collect()
}

pub(crate) fn parse_count(line: usize, tok: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("invalid count `{tok}`")))
}

fn parse_id(line: usize, tok: &str, n: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(id) if (1..=n).contains(&id) => Ok(id - 1),
        _ => Err(Error::parse(line, format!("invalid task id `{tok}`"))),
    }
}

fn parse_time(line: usize, tok: &str) -> Result<Option<Time>> {
    if tok.eq_ignore_ascii_case("inf") {
        return Ok(None);
    }
    match tok.parse::<Time>() {
        Ok(0) => Err(Error::parse(line, "task times must be positive")),
        Ok(t) => Ok(Some(t)),
        Err(_) => Err(Error::parse(line, format!("invalid time `{tok}`"))),
    }
}
