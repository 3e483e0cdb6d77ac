//! Label propagation: every node starts with a unique label and repeatedly
//! adopts the weighted-majority label among its neighbors, in seeded-random
//! order, until a full pass changes nothing.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Partition;
use crate::graph::Graph;

/// Passes before giving up on convergence.
const MAX_ITERATIONS: usize = 100;

/// Convergence record of one propagation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpaReport {
    pub iterations: usize,
    pub converged: bool,
}

/// Label propagation, deterministic given the seed. Majority ties are
/// broken uniformly at random from the tied set.
pub fn lpa(g: &Graph, seed: u64) -> Partition {
    lpa_with_report(g, seed).0
}

pub fn lpa_with_report(g: &Graph, seed: u64) -> (Partition, LpaReport) {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();

    let mut weight_of = vec![0.0f64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut report = LpaReport {
        iterations: 0,
        converged: n == 0,
    };
    for iter in 1..=MAX_ITERATIONS {
        report.iterations = iter;
        order.shuffle(&mut rng);
        let mut changed = false;
        for &node in &order {
            touched.clear();
            for (nbr, w) in g.neighbors(node) {
                let l = labels[nbr];
                if weight_of[l] == 0.0 {
                    touched.push(l);
                }
                weight_of[l] += w;
            }
            if touched.is_empty() {
                continue; // isolates keep their own label
            }
            touched.sort_unstable();
            let max_w = touched
                .iter()
                .map(|&l| weight_of[l])
                .fold(f64::NEG_INFINITY, f64::max);
            let tied: Vec<usize> = touched
                .iter()
                .copied()
                .filter(|&l| weight_of[l] == max_w)
                .collect();
            let chosen = if tied.len() == 1 {
                tied[0]
            } else {
                tied[rng.random_range(0..tied.len())]
            };
            if chosen != labels[node] {
                labels[node] = chosen;
                changed = true;
            }
            for &l in &touched {
                weight_of[l] = 0.0;
            }
        }
        if !changed {
            report.converged = true;
            break;
        }
    }
    (Partition::from_labels(&labels), report)
}
