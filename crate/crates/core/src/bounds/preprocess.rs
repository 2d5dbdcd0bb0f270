use crate::{Error, Instance, Result, Time};

/// A reduced copy of an instance for one cycle time.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub instance: Instance,
    /// Worker/task pairs newly marked infeasible.
    pub new_infeasible: usize,
}

/// Removes worker/task pairs that cannot appear in any solution with cycle
/// time `c`.
///
/// If task `i` has a single capable worker `w`, then `w` can only take
/// another task `k` if it also executes everything between `i` and `k`,
/// all at one station: `Σ_{j ∈ R(i,k)} t_wj ≤ c` with
/// `R(i,k) = {i, k} ∪ (F*_i ∩ P*_k) ∪ (F*_k ∩ P*_i)`. A task in `R(i,k)`
/// that `w` cannot execute rules the pair out as well. The rule is applied
/// until nothing changes.
///
/// Fails with [`Error::CycleInfeasible`] when a task loses its last worker.
pub fn preprocess(inst: &Instance, c: Time) -> Result<Reduction> {
    assert!(c >= 1, "cycle time must be positive");
    let n = inst.n_tasks();
    let mut reduced = inst.clone();
    let mut new_infeasible = 0;

    loop {
        let mut changed = false;
        for i in 0..n {
            let capable: Vec<usize> = reduced.capable_workers(i).collect();
            let [w] = capable[..] else {
                continue;
            };
            let targets: Vec<usize> = (0..n)
                .filter(|&k| k != i && reduced.is_capable(w, k))
                .collect();
            for k in targets {
                if chain_fits(&reduced, w, i, k, c) {
                    continue;
                }
                reduced.set_infeasible(w, k);
                new_infeasible += 1;
                changed = true;
                if reduced.capable_workers(k).next().is_none() {
                    return Err(Error::CycleInfeasible(c));
                }
            }
        }
        if !changed {
            break;
        }
    }

    Ok(Reduction {
        instance: reduced,
        new_infeasible,
    })
}

fn chain_fits(inst: &Instance, w: usize, i: usize, k: usize, c: Time) -> bool {
    let closure = inst.closure();
    let mut total: Time = 0;
    let between = (0..inst.n_tasks()).filter(|&j| {
        j == i
            || j == k
            || (closure.precedes(i, j) && closure.precedes(j, k))
            || (closure.precedes(k, j) && closure.precedes(j, i))
    });
    for j in between {
        match inst.time(w, j) {
            Some(t) => total += t,
            None => return false,
        }
        if total > c {
            return false;
        }
    }
    true
}
