//! Seeded instance builders.

use alwabp_core::instance::BaseInstance;
use alwabp_core::{Instance, Time};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle;

/// Two tasks after a common first one; w1 is fast on the first task, w2
/// on the other two. Optimum 2.
pub fn tiny_a() -> Instance {
    Instance::new(
        "tiny-A",
        3,
        vec![(0, 1), (0, 2)],
        vec![
            vec![Some(2), Some(3), Some(4)],
            vec![Some(5), Some(1), Some(1)],
        ],
    )
    .expect("valid fixture")
}

/// Random edges consistent with a shuffled task order, each present with
/// probability `density`.
fn random_edges<R: Rng>(rng: &mut R, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                edges.push((order[a], order[b]));
            }
        }
    }
    edges
}

/// Instance with times in `1..=9`, roughly a fifth of the pairs
/// infeasible, and every task kept executable by some worker.
pub fn random_instance<R: Rng>(rng: &mut R, name: &str, n: usize, m: usize) -> Instance {
    let density = rng.gen_range(0.0..0.6);
    let edges = random_edges(rng, n, density);
    let mut times: Vec<Vec<Option<Time>>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| (!rng.gen_bool(0.2)).then(|| rng.gen_range(1..=9)))
                .collect()
        })
        .collect();
    for i in 0..n {
        if times.iter().all(|row| row[i].is_none()) {
            let w = rng.gen_range(0..m);
            times[w][i] = Some(rng.gen_range(1..=9));
        }
    }
    Instance::new(name, n, edges, times).expect("builder keeps instances valid")
}

/// `count` instances with 2 to 8 tasks and 1 to 4 workers, each with at
/// least one feasible line.
pub fn small_instances(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=4);
        let inst = random_instance(&mut rng, &format!("small-{}", out.len()), n, m);
        if oracle::optimum(&inst).is_some() {
            out.push(inst);
        }
    }
    out
}

/// Base line with times in `1..=max_time`; every task after the first has
/// up to two predecessors among the ten tasks before it.
pub fn random_base(name: &str, n: usize, max_time: Time, seed: u64) -> BaseInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let times = (0..n).map(|_| rng.gen_range(1..=max_time)).collect();
    let mut edges = Vec::new();
    for j in 1..n {
        let lo = j.saturating_sub(10);
        let mut preds: Vec<usize> = (0..rng.gen_range(0..=2))
            .map(|_| rng.gen_range(lo..j))
            .collect();
        preds.sort_unstable();
        preds.dedup();
        edges.extend(preds.into_iter().map(|i| (i, j)));
    }
    BaseInstance::new(name, times, edges).expect("forward edges are acyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instances_are_reproducible_and_in_range() {
        let a = small_instances(20, 5);
        assert_eq!(a, small_instances(20, 5));
        assert!(a
            .iter()
            .all(|i| (2..=8).contains(&i.n_tasks()) && (1..=4).contains(&i.n_workers())));
    }

    #[test]
    fn base_has_requested_size() {
        let base = random_base("b", 75, 30, 1);
        let inst = alwabp_core::instance::generate(
            &base,
            &alwabp_core::instance::GeneratorConfig {
                n_workers: 19,
                variability: alwabp_core::instance::Variability::Low,
                density: alwabp_core::instance::InfeasibilityDensity::Low,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!((inst.n_tasks(), inst.n_workers()), (75, 19));
    }
}
