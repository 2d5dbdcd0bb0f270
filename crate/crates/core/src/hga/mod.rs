//! Hybrid biased random-key genetic algorithm.
//!
//! A chromosome is a worker × task priority matrix. It is decoded by the
//! station-oriented construction with MinRLB as worker rule, trying both
//! directions at every tentative cycle time, and the line found is
//! improved by local search. Each generation copies the elite unchanged.
//! Offspring come from one elite and one non-elite parent; random
//! immigrants fill the remaining slots.

mod decode;

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use decode::{decode, Decoder};

use crate::constructive::rule_matrix;
use crate::{Error, Instance, PriorityMatrix, Result, Solution, TaskRule, Time};

/// Priorities `p_wi` in `[0, 1]`, larger is more urgent.
pub type Chromosome = PriorityMatrix;

/// Cycle time, then normalised load `l = total time / (m * c)`; smaller is
/// better on both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fitness {
    pub cycle: Time,
    pub norm_load: f64,
}

impl Fitness {
    /// Rank of a chromosome the decoder could not turn into a line.
    pub const UNDECODED: Fitness = Fitness {
        cycle: Time::MAX,
        norm_load: f64::INFINITY,
    };

    pub fn of(inst: &Instance, sol: &Solution) -> Self {
        let denom = (inst.n_workers() as u64 * sol.cycle) as f64;
        Fitness {
            cycle: sol.cycle,
            norm_load: sol.total_time() as f64 / denom,
        }
    }
}

impl Eq for Fitness {}

impl PartialOrd for Fitness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fitness {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cycle
            .cmp(&other.cycle)
            .then_with(|| self.norm_load.total_cmp(&other.norm_load))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HgaParams {
    /// Population size.
    pub p: usize,
    /// Elite individuals copied unchanged.
    pub p_e: usize,
    /// Random immigrants per generation.
    pub p_r: usize,
    /// Probability that a child takes an allele from its elite parent.
    pub q: f64,
    pub max_iters: usize,
    /// Stop after this many generations without a better incumbent.
    pub max_stale: usize,
    pub seed: u64,
    /// Optimum of the LP relaxation, if known; raises the decode start.
    pub external_relax: Option<f64>,
}

impl Default for HgaParams {
    fn default() -> Self {
        HgaParams::with_population(100)
    }
}

impl HgaParams {
    /// Defaults with elite and immigrant counts at 20% and 10% of `p`.
    pub fn with_population(p: usize) -> Self {
        HgaParams {
            p,
            p_e: (p / 5).max(1),
            p_r: p / 10,
            q: 0.5,
            max_iters: 200,
            max_stale: 100,
            seed: 0,
            external_relax: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_e == 0 {
            return Err(Error::InvalidParameter(
                "elite count must be at least 1".into(),
            ));
        }
        if self.p_e + self.p_r >= self.p {
            return Err(Error::InvalidParameter(format!(
                "elite ({}) plus immigrants ({}) must be below the population size ({})",
                self.p_e, self.p_r, self.p
            )));
        }
        if !(0.5..=1.0).contains(&self.q) {
            return Err(Error::InvalidParameter(format!(
                "crossover probability {} not in [0.5, 1]",
                self.q
            )));
        }
        Ok(())
    }

    fn offspring(&self) -> usize {
        self.p - self.p_e - self.p_r
    }
}

/// A decoded chromosome. `solution` is `None`, and the fitness
/// [`Fitness::UNDECODED`], when no tentative cycle time yields a line.
#[derive(Debug, Clone)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub solution: Option<Solution>,
    pub fitness: Fitness,
}

/// Child taking each allele from `a` with probability `q`, else from `b`.
pub fn crossover<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    q: f64,
    rng: &mut R,
) -> Chromosome {
    let mut child = b.clone();
    for (c, &x) in child.values_mut().iter_mut().zip(a.values()) {
        if rng.gen_bool(q) {
            *c = x;
        }
    }
    child
}

fn decode_all(decoder: &Decoder<'_>, chromosomes: Vec<Chromosome>) -> Result<Vec<Individual>> {
    chromosomes
        .into_par_iter()
        .map(|chromosome| {
            let (solution, fitness) = match decoder.decode(&chromosome) {
                Ok((sol, fit)) => (Some(sol), fit),
                Err(Error::NoFeasibleAssignment(_)) => (None, Fitness::UNDECODED),
                Err(e) => return Err(e),
            };
            Ok(Individual {
                chromosome,
                solution,
                fitness,
            })
        })
        .collect()
}

/// The 16 rules as matrices, then random individuals up to `p`; decoded,
/// sorted and cut to the `p` best. Fails if no individual decodes.
pub fn seed_population(
    decoder: &Decoder<'_>,
    params: &HgaParams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Individual>> {
    let inst = decoder.instance();
    let (m, n) = (inst.n_workers(), inst.n_tasks());
    let mut chromosomes: Vec<Chromosome> = TaskRule::ALL
        .iter()
        .map(|&rule| rule_matrix(inst, rule, decoder.start()))
        .collect();
    while chromosomes.len() < params.p {
        chromosomes.push(PriorityMatrix::random(m, n, rng));
    }
    let mut population = decode_all(decoder, chromosomes)?;
    population.sort_by_key(|i| i.fitness);
    population.truncate(params.p);
    if population[0].solution.is_none() {
        return Err(Error::NoFeasibleAssignment(decoder.ceiling()));
    }
    Ok(population)
}

/// Incumbent after one generation.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    /// 0 for the initial population.
    pub iteration: usize,
    pub fitness: Fitness,
    pub elapsed: Duration,
    pub population: usize,
}

#[derive(Debug, Clone)]
pub struct HgaRun {
    /// Incumbent; always decoded.
    pub best: Individual,
    pub log: Vec<LogEntry>,
    /// Elapsed time when the final incumbent was first found.
    pub time_to_best: Duration,
    pub iterations: usize,
}

impl HgaRun {
    pub fn solution(&self) -> &Solution {
        self.best.solution.as_ref().expect("incumbent is decoded")
    }
}

/// Runs the genetic algorithm until `max_iters` generations or
/// `max_stale` generations without improvement.
pub fn evolve(inst: &Instance, params: &HgaParams) -> Result<HgaRun> {
    params.validate()?;
    let started = Instant::now();
    let decoder = Decoder::new(inst, params.external_relax);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (m, n) = (inst.n_workers(), inst.n_tasks());

    let mut population = seed_population(&decoder, params, &mut rng)?;
    let mut best = population[0].clone();
    let mut time_to_best = started.elapsed();
    let mut log = vec![LogEntry {
        iteration: 0,
        fitness: best.fitness,
        elapsed: time_to_best,
        population: population.len(),
    }];
    let mut stale = 0;
    let mut iteration = 0;

    while iteration < params.max_iters && stale < params.max_stale {
        iteration += 1;
        let (elite, rest) = population.split_at(params.p_e);
        let generation_seed: u64 = rng.gen();
        let children: Vec<Chromosome> = (0..params.offspring())
            .into_par_iter()
            .map(|k| {
                let mut child_rng = ChaCha8Rng::seed_from_u64(generation_seed);
                child_rng.set_stream(k as u64);
                let a = elite.choose(&mut child_rng).expect("non-empty elite");
                let b = rest
                    .choose(&mut child_rng)
                    .expect("non-elite individuals exist");
                crossover(&a.chromosome, &b.chromosome, params.q, &mut child_rng)
            })
            .collect();
        let immigrants: Vec<Chromosome> = (0..params.p_r)
            .map(|_| PriorityMatrix::random(m, n, &mut rng))
            .collect();

        let mut fresh = children;
        fresh.extend(immigrants);
        let mut next: Vec<Individual> = population[..params.p_e].to_vec();
        next.extend(decode_all(&decoder, fresh)?);
        next.sort_by_key(|i| i.fitness);
        population = next;

        if population[0].fitness < best.fitness {
            best = population[0].clone();
            time_to_best = started.elapsed();
            stale = 0;
        } else {
            stale += 1;
        }
        log.push(LogEntry {
            iteration,
            fitness: best.fitness,
            elapsed: started.elapsed(),
            population: population.len(),
        });
    }

    Ok(HgaRun {
        best,
        log,
        time_to_best,
        iterations: iteration,
    })
}
