use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::Fitness;
use crate::bounds::preprocess;
use crate::constructive::{assemble_on, search_ceiling};
use crate::localsearch::improve;
use crate::{
    BoundsReport, Direction, Error, Instance, PriorityMatrix, PrioritySource, Result, Solution,
    Time, WorkerRule,
};

const DIRECTIONS: [Direction; 2] = [Direction::Forward, Direction::Backward];

/// Reduced instance and its reverse at one tentative cycle time, or `None`
/// when preprocessing proves the cycle time infeasible.
type Reduced = Option<Arc<(Instance, Instance)>>;

/// Maps chromosomes to solutions. Preprocessed instances depend only on
/// the tentative cycle time, so they are computed once and shared.
pub struct Decoder<'a> {
    inst: &'a Instance,
    start: Time,
    ceiling: Time,
    reduced: Mutex<HashMap<Time, Reduced>>,
}

impl<'a> Decoder<'a> {
    /// Starts every search at the best available bound.
    pub fn new(inst: &'a Instance, external_relax: Option<f64>) -> Self {
        let start = BoundsReport::compute(inst, external_relax).best.max(1);
        Decoder {
            inst,
            start,
            ceiling: search_ceiling(inst).max(start),
            reduced: Mutex::new(HashMap::new()),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    /// First tentative cycle time of every decode.
    pub fn start(&self) -> Time {
        self.start
    }

    /// Last tentative cycle time tried before a decode gives up.
    pub fn ceiling(&self) -> Time {
        self.ceiling
    }

    fn reduced_at(&self, cbar: Time) -> Result<Reduced> {
        if let Some(hit) = self.reduced.lock().expect("cache lock").get(&cbar) {
            return Ok(hit.clone());
        }
        let entry = match preprocess(self.inst, cbar) {
            Ok(r) => {
                let rev = r.instance.reverse();
                Some(Arc::new((r.instance, rev)))
            }
            Err(Error::CycleInfeasible(_)) => None,
            Err(e) => return Err(e),
        };
        self.reduced
            .lock()
            .expect("cache lock")
            .insert(cbar, entry.clone());
        Ok(entry)
    }

    /// Constructive solution for the matrix, without local search.
    pub fn decode_raw(&self, chrom: &PriorityMatrix) -> Result<Solution> {
        let source = PrioritySource::Matrix(chrom);
        for cbar in self.start..=self.ceiling {
            let Some(pair) = self.reduced_at(cbar)? else {
                continue;
            };
            let (reduced, reversed) = &*pair;
            let found = DIRECTIONS
                .iter()
                .find_map(|&d| assemble_on(reduced, reversed, cbar, source, WorkerRule::MinRlb, d));
            if let Some(sol) = found {
                return Ok(Solution::evaluate(self.inst, sol.stations, sol.direction)
                    .expect("reduction only removes pairs"));
            }
        }
        Err(Error::NoFeasibleAssignment(self.ceiling))
    }

    /// Constructive solution improved by local search, and its fitness.
    pub fn decode(&self, chrom: &PriorityMatrix) -> Result<(Solution, Fitness)> {
        let raw = self.decode_raw(chrom)?;
        let sol = improve(self.inst, &raw);
        let fitness = Fitness::of(self.inst, &sol);
        Ok((sol, fitness))
    }
}

/// One-off decode; [`Decoder`] is cheaper when decoding many chromosomes.
pub fn decode(
    inst: &Instance,
    chrom: &PriorityMatrix,
    external_relax: Option<f64>,
) -> Result<(Solution, Fitness)> {
    Decoder::new(inst, external_relax).decode(chrom)
}
