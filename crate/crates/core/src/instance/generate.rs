//! Factorial instance generator: worker-dependent times are drawn around
//! the task times of a single-worker base line, then a fixed share of
//! worker/task pairs is made infeasible.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{data_lines, parse_count, Instance};
use crate::{Error, Result, Time};

/// Retry budget for the orphan-avoiding infeasibility marking.
const MAX_MARK_RETRIES: usize = 10_000;

/// A single-worker base line: task times `t_i` and precedence edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseInstance {
    pub name: String,
    pub times: Vec<Time>,
    pub edges: Vec<(usize, usize)>,
}

impl BaseInstance {
    /// Validates times and acyclicity.
    pub fn new(
        name: impl Into<String>,
        times: Vec<Time>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let name = name.into();
        let row = times.iter().map(|&t| Some(t)).collect();
        Instance::new(name.clone(), times.len(), edges.clone(), vec![row])?;
        Ok(BaseInstance { name, times, edges })
    }

    /// Format: `n_tasks`, then one time per line, then edges `i j` (1-based).
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let lines = data_lines(text);
        let Some((line, header)) = lines.first() else {
            return Err(Error::parse(1, "empty base file"));
        };
        let [n] = header[..] else {
            return Err(Error::parse(*line, "expected `n_tasks`"));
        };
        let n = parse_count(*line, n)?;
        if lines.len() < 1 + n {
            return Err(Error::parse(*line, format!("expected {n} task times")));
        }
        let mut times = Vec::with_capacity(n);
        for (line, tokens) in &lines[1..=n] {
            match tokens[..] {
                [tok] => match tok.parse::<Time>() {
                    Ok(t) if t > 0 => times.push(t),
                    _ => return Err(Error::parse(*line, format!("invalid task time `{tok}`"))),
                },
                _ => return Err(Error::parse(*line, "expected one task time")),
            }
        }
        let mut edges = Vec::new();
        for (line, tokens) in &lines[1 + n..] {
            let [i, j] = tokens[..] else {
                return Err(Error::parse(*line, "expected an edge `i j`"));
            };
            let parse = |tok: &str| match tok.parse::<usize>() {
                Ok(id) if (1..=n).contains(&id) => Ok(id - 1),
                _ => Err(Error::parse(*line, format!("invalid task id `{tok}`"))),
            };
            edges.push((parse(i)?, parse(j)?));
        }
        Self::new(name, times, edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::parse(&name, &text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.times.len());
        for t in &self.times {
            out.push_str(&format!("{t}\n"));
        }
        for &(i, j) in &self.edges {
            out.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variability {
    /// Times uniform in `[1, t_i]`.
    Low,
    /// Times uniform in `[1, 3 t_i]`.
    High,
}

impl Variability {
    pub fn upper(self, base: Time) -> Time {
        match self {
            Variability::Low => base,
            Variability::High => 3 * base,
        }
    }
}

/// Share of infeasible worker/task pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfeasibilityDensity {
    /// No infeasible pairs; not a factor level, used for calibration runs.
    None,
    /// 10%.
    Low,
    /// 20%.
    High,
}

impl InfeasibilityDensity {
    pub fn percent(self) -> usize {
        match self {
            InfeasibilityDensity::None => 0,
            InfeasibilityDensity::Low => 10,
            InfeasibilityDensity::High => 20,
        }
    }

    /// Number of cells to mark: `round(density * cells)`, halves rounded up.
    pub fn cell_count(self, cells: usize) -> usize {
        (self.percent() * cells + 50) / 100
    }
}

macro_rules! level_names {
    ($ty:ident { $($variant:ident => $name:literal),* $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $name),* })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok($ty::$variant),)*
                    _ => Err(Error::InvalidParameter(format!(
                        "unknown {} level `{s}`", stringify!($ty)
                    ))),
                }
            }
        }
    };
}

level_names!(Variability { Low => "low", High => "high" });
level_names!(InfeasibilityDensity { None => "none", Low => "low", High => "high" });

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub n_workers: usize,
    pub variability: Variability,
    pub density: InfeasibilityDensity,
    pub seed: u64,
}

/// Draws a worker-dependent instance from a base line.
///
/// Times are drawn worker by worker, task by task. Exactly
/// `density.cell_count(m * n)` distinct cells are then made infeasible,
/// uniformly without replacement among cells whose task keeps at least one
/// other capable worker.
pub fn generate(base: &BaseInstance, cfg: &GeneratorConfig) -> Result<Instance> {
    let n = base.times.len();
    let m = cfg.n_workers;
    if m == 0 {
        return Err(Error::InvalidParameter(
            "at least one worker is required".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut times: Vec<Vec<Option<Time>>> = (0..m)
        .map(|_| {
            base.times
                .iter()
                .map(|&t| Some(rng.gen_range(1..=cfg.variability.upper(t))))
                .collect()
        })
        .collect();

    let wanted = cfg.density.cell_count(m * n);
    let mut capable = vec![m; n];
    let mut candidates: Vec<(usize, usize)> =
        (0..m).flat_map(|w| (0..n).map(move |i| (w, i))).collect();
    let mut marked = 0;
    let mut retries = 0;
    while marked < wanted {
        if candidates.is_empty() || retries > MAX_MARK_RETRIES {
            return Err(Error::DensityInfeasible { wanted });
        }
        let (w, i) = candidates.swap_remove(rng.gen_range(0..candidates.len()));
        // Capability only shrinks, so a rejected cell never becomes valid.
        if capable[i] == 1 {
            retries += 1;
            continue;
        }
        times[w][i] = None;
        capable[i] -= 1;
        marked += 1;
    }

    let name = format!("{}-{}", base.name, cfg.seed);
    Instance::new(name, n, base.edges.clone(), times)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(times: Vec<Time>) -> BaseInstance {
        BaseInstance::new("b", times, vec![]).unwrap()
    }

    fn cfg(
        m: usize,
        variability: Variability,
        density: InfeasibilityDensity,
        seed: u64,
    ) -> GeneratorConfig {
        GeneratorConfig {
            n_workers: m,
            variability,
            density,
            seed,
        }
    }

    #[test]
    fn low_variability_stays_in_range() {
        let inst = generate(
            &base(vec![10, 10]),
            &cfg(2, Variability::Low, InfeasibilityDensity::None, 7),
        )
        .unwrap();
        for w in 0..2 {
            for i in 0..2 {
                let t = inst.time(w, i).unwrap();
                assert!((1..=10).contains(&t));
            }
        }
    }

    #[test]
    fn high_variability_reaches_above_base() {
        let inst = generate(
            &base(vec![10; 50]),
            &cfg(4, Variability::High, InfeasibilityDensity::None, 1),
        )
        .unwrap();
        let times: Vec<Time> = (0..4)
            .flat_map(|w| inst.row(w).iter().map(|t| t.unwrap()))
            .collect();
        assert!(times.iter().all(|t| (1..=30).contains(t)));
        assert!(times.iter().any(|&t| t > 10));
    }

    #[test]
    fn exact_infeasible_count() {
        let inst = generate(
            &base(vec![5; 10]),
            &cfg(2, Variability::Low, InfeasibilityDensity::Low, 3),
        )
        .unwrap();
        assert_eq!(inst.infeasible_count(), 2);
        let inst = generate(
            &base(vec![5; 10]),
            &cfg(3, Variability::Low, InfeasibilityDensity::High, 3),
        )
        .unwrap();
        assert_eq!(inst.infeasible_count(), 6);
    }

    #[test]
    fn deterministic_in_seed() {
        let b = base(vec![3, 8, 2, 9, 4]);
        let c = cfg(3, Variability::High, InfeasibilityDensity::High, 99);
        assert_eq!(generate(&b, &c).unwrap(), generate(&b, &c).unwrap());
        let other = generate(&b, &GeneratorConfig { seed: 100, ..c }).unwrap();
        assert_ne!(generate(&b, &c).unwrap().to_text(), other.to_text());
    }

    #[test]
    fn single_worker_cannot_lose_cells() {
        let err = generate(
            &base(vec![1; 10]),
            &cfg(1, Variability::Low, InfeasibilityDensity::Low, 0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DensityInfeasible { wanted: 1 }));
    }

    #[test]
    fn base_format() {
        let b = BaseInstance::parse("b", "3\n4\n5\n6\n1 2\n2 3\n").unwrap();
        assert_eq!(b.times, vec![4, 5, 6]);
        assert_eq!(b.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(BaseInstance::parse("b", &b.to_text()).unwrap(), b);
        assert!(BaseInstance::parse("b", "2\n4\n").is_err());
        assert!(BaseInstance::parse("b", "2\n4\n0\n").is_err());
        assert!(BaseInstance::parse("b", "2\n1\n1\n1 2\n2 1\n").is_err());
    }

    #[test]
    fn level_names_parse() {
        assert_eq!("HIGH".parse::<Variability>().unwrap(), Variability::High);
        assert_eq!("low".parse::<InfeasibilityDensity>().unwrap().percent(), 10);
        assert!("mid".parse::<Variability>().is_err());
    }
}
