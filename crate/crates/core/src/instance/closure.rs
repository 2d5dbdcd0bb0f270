use super::Instance;

/// Immediate and transitive precedence sets of an instance.
#[derive(Debug, Clone)]
pub struct Closure {
    n: usize,
    pred: Vec<Vec<usize>>,
    succ: Vec<Vec<usize>>,
    pred_star: Vec<Vec<usize>>,
    succ_star: Vec<Vec<usize>>,
    // reach[i * n + j]: j is a transitive successor of i
    reach: Vec<bool>,
    topo: Vec<usize>,
}

impl Closure {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.n_tasks();
        let mut pred = vec![Vec::new(); n];
        let mut succ = vec![Vec::new(); n];
        for &(i, j) in inst.edges() {
            succ[i].push(j);
            pred[j].push(i);
        }
        for list in pred.iter_mut().chain(succ.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        let topo = inst
            .topological_order()
            .expect("instances are validated acyclic");

        let mut reach = vec![false; n * n];
        for &i in topo.iter().rev() {
            for &j in &succ[i] {
                reach[i * n + j] = true;
                for k in 0..n {
                    if reach[j * n + k] {
                        reach[i * n + k] = true;
                    }
                }
            }
        }
        let succ_star: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| reach[i * n + j]).collect())
            .collect();
        let pred_star: Vec<Vec<usize>> = (0..n)
            .map(|j| (0..n).filter(|&i| reach[i * n + j]).collect())
            .collect();

        Closure {
            n,
            pred,
            succ,
            pred_star,
            succ_star,
            reach,
            topo,
        }
    }

    /// Immediate predecessors `P_i`.
    pub fn pred(&self, task: usize) -> &[usize] {
        &self.pred[task]
    }

    /// Immediate successors `F_i`.
    pub fn succ(&self, task: usize) -> &[usize] {
        &self.succ[task]
    }

    /// All predecessors `P*_i`.
    pub fn pred_star(&self, task: usize) -> &[usize] {
        &self.pred_star[task]
    }

    /// All successors `F*_i`.
    pub fn succ_star(&self, task: usize) -> &[usize] {
        &self.succ_star[task]
    }

    /// True if there is a path from `a` to `b`.
    #[inline]
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.reach[a * self.n + b]
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Number of pairs in the transitive closure.
    pub fn closure_size(&self) -> usize {
        self.reach.iter().filter(|&&r| r).count()
    }

    /// `2|E*| / (n(n-1))`; zero for a single task.
    pub fn order_strength(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        2.0 * self.closure_size() as f64 / (self.n * (self.n - 1)) as f64
    }
}
