//! Exhaustive modularity maximization over all set partitions, guarded to
//! tiny graphs. This is the independent yardstick the detectors are tested
//! against.

use super::{modularity, DetectError, Partition};
use crate::graph::Graph;

const MAX_NODES: usize = 10;

/// Enumerates every set partition of the nodes (restricted growth strings)
/// and returns a modularity maximizer with its score. Ties keep the first
/// partition in enumeration order. Refused for n > 10.
pub fn brute_force_best_partition(g: &Graph) -> Result<(Partition, f64), DetectError> {
    let n = g.node_count();
    if n > MAX_NODES {
        return Err(DetectError::TooLargeForBruteForce(n));
    }
    if n == 0 {
        return Ok((Partition::from_labels(&[]), 0.0));
    }
    let mut labels = vec![0usize; n];
    let mut best_labels = labels.clone();
    let mut best_q = f64::NEG_INFINITY;
    search(g, &mut labels, 1, 1, &mut best_labels, &mut best_q);
    Ok((Partition::from_labels(&best_labels), best_q))
}

/// Depth-first over restricted growth strings: position `i` may take any
/// label in `[0, used]`, where `used` labels appear in the prefix.
fn search(
    g: &Graph,
    labels: &mut Vec<usize>,
    i: usize,
    used: usize,
    best_labels: &mut Vec<usize>,
    best_q: &mut f64,
) {
    if i == labels.len() {
        let q = modularity(g, &Partition::from_labels(labels)).expect("labels cover graph");
        if q > *best_q {
            *best_q = q;
            best_labels.clone_from(labels);
        }
        return;
    }
    for label in 0..=used {
        labels[i] = label;
        let next_used = used.max(label + 1);
        search(g, labels, i + 1, next_used, best_labels, best_q);
    }
    labels[i] = 0;
}
