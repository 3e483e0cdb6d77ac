//! Greedy multi-level modularity optimization: seeded local moves followed
//! by community aggregation, repeated until no move improves the score.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{modularity, Partition};
use crate::graph::Graph;

/// Gains at or below this are not worth a move; keeps the phase trace
/// monotone beyond float accumulation noise.
const MIN_GAIN: f64 = 1e-12;

/// Local-move passes per level before forcing aggregation.
const MAX_PASSES: usize = 50;

/// A detection run with the modularity recorded after the initial state and
/// after every local-move phase (non-decreasing).
#[derive(Debug, Clone)]
pub struct LouvainRun {
    pub partition: Partition,
    pub phase_modularity: Vec<f64>,
}

/// Working graph for one aggregation level. Intra-community weight folded
/// into a node lives in `self_weight`, not the adjacency rows.
struct LevelGraph {
    adj: Vec<Vec<(usize, f64)>>,
    self_weight: Vec<f64>,
    strength: Vec<f64>,
    two_m: f64,
}

impl LevelGraph {
    fn from_graph(g: &Graph) -> Self {
        let n = g.node_count();
        let mut adj = Vec::with_capacity(n);
        let mut strength = Vec::with_capacity(n);
        for i in 0..n {
            let row: Vec<(usize, f64)> = g.neighbors(i).collect();
            strength.push(row.iter().map(|(_, w)| w).sum());
            adj.push(row);
        }
        let two_m = strength.iter().sum();
        LevelGraph {
            adj,
            self_weight: vec![0.0; n],
            strength,
            two_m,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapses communities into super-nodes, keeping 2m constant.
    /// Surviving labels are renumbered in ascending order.
    fn aggregate(&self, comm: &[usize]) -> (LevelGraph, Vec<usize>) {
        let mut labels: Vec<usize> = comm.to_vec();
        labels.sort_unstable();
        labels.dedup();
        let mut dense = vec![usize::MAX; self.len()];
        for (new, &old) in labels.iter().enumerate() {
            dense[old] = new;
        }
        let k = labels.len();
        let mut self_weight = vec![0.0; k];
        let mut rows: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        for i in 0..self.len() {
            let ci = dense[comm[i]];
            self_weight[ci] += self.self_weight[i];
            for &(j, w) in &self.adj[i] {
                let cj = dense[comm[j]];
                if ci == cj {
                    if i < j {
                        self_weight[ci] += w;
                    }
                } else {
                    *rows[ci].entry(cj).or_insert(0.0) += w;
                }
            }
        }
        let mut adj = Vec::with_capacity(k);
        let mut strength = vec![0.0; k];
        for (c, row) in rows.into_iter().enumerate() {
            let flat: Vec<(usize, f64)> = row.into_iter().collect();
            strength[c] = 2.0 * self_weight[c] + flat.iter().map(|(_, w)| w).sum::<f64>();
            adj.push(flat);
        }
        let next = LevelGraph {
            adj,
            self_weight,
            strength,
            two_m: self.two_m,
        };
        (next, dense)
    }
}

/// One level of local moves. Each node joins the neighboring community with
/// the largest positive gain; ties go to the smallest community label.
/// Returns whether any node moved.
fn local_move(level: &LevelGraph, comm: &mut [usize], rng: &mut ChaCha8Rng) -> bool {
    let n = level.len();
    let two_m = level.two_m;
    if two_m == 0.0 {
        return false;
    }
    let mut comm_strength = vec![0.0; n];
    for i in 0..n {
        comm_strength[comm[i]] += level.strength[i];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut w_comm = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;
    for _ in 0..MAX_PASSES {
        let mut moves = 0usize;
        for &node in &order {
            let cur = comm[node];
            let k_i = level.strength[node];
            touched.clear();
            for &(nbr, w) in &level.adj[node] {
                let c = comm[nbr];
                if w_comm[c] == 0.0 {
                    touched.push(c);
                }
                w_comm[c] += w;
            }
            if touched.is_empty() {
                continue;
            }
            comm_strength[cur] -= k_i;
            // score differences are proportional to the modularity gain
            let score = |c: usize| w_comm[c] / two_m - k_i * comm_strength[c] / (two_m * two_m);
            let mut best = cur;
            let mut best_score = score(cur);
            touched.sort_unstable();
            for &cand in &touched {
                if cand == cur {
                    continue;
                }
                let s = score(cand);
                if s > best_score + MIN_GAIN {
                    best = cand;
                    best_score = s;
                }
            }
            comm_strength[best] += k_i;
            if best != cur {
                comm[node] = best;
                moves += 1;
                moved_any = true;
            }
            for &c in &touched {
                w_comm[c] = 0.0;
            }
        }
        if moves == 0 {
            break;
        }
    }
    moved_any
}

/// Multi-level detection with the per-phase modularity trace.
pub fn louvain_with_phases(g: &Graph, seed: u64) -> LouvainRun {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = LevelGraph::from_graph(g);
    let mut comm: Vec<usize> = (0..n).collect();
    // original node -> current super-node
    let mut node_to_level: Vec<usize> = (0..n).collect();
    let flatten = |comm: &[usize], node_to_level: &[usize]| -> Vec<usize> {
        node_to_level.iter().map(|&v| comm[v]).collect()
    };
    let score = |labels: &[usize]| {
        modularity(g, &Partition::from_labels(labels)).expect("labels cover graph")
    };

    let mut phase_modularity = vec![score(&flatten(&comm, &node_to_level))];
    loop {
        let moved = local_move(&level, &mut comm, &mut rng);
        if !moved {
            break;
        }
        phase_modularity.push(score(&flatten(&comm, &node_to_level)));
        let before = level.len();
        let (next, dense) = level.aggregate(&comm);
        for v in node_to_level.iter_mut() {
            *v = dense[comm[*v]];
        }
        let stalled = next.len() == before;
        level = next;
        comm = (0..level.len()).collect();
        if stalled {
            break;
        }
    }
    LouvainRun {
        partition: Partition::from_labels(&flatten(&comm, &node_to_level)),
        phase_modularity,
    }
}

/// Greedy multi-level modularity optimization, deterministic given the seed.
pub fn louvain(g: &Graph, seed: u64) -> Partition {
    louvain_with_phases(g, seed).partition
}
