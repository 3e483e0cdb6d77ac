//! Community detection: the modularity score, the multi-level and
//! label-propagation detectors, the weight-grid sweep, and an exhaustive
//! small-graph oracle.

mod louvain;
mod lpa;
mod oracle;
mod sweep;

pub use louvain::{louvain, louvain_with_phases, LouvainRun};
pub use lpa::{lpa, lpa_with_report, LpaReport};
pub use oracle::brute_force_best_partition;
pub use sweep::{sweep_detect, Detector, SweepEntry, SweepResult};

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq)]
pub enum DetectError {
    #[error("partition covers {partition} nodes but graph has {graph}")]
    SizeMismatch { partition: usize, graph: usize },
    #[error("exhaustive search refused for n = {0} (limit 10)")]
    TooLargeForBruteForce(usize),
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("grid point {index} ({alphas}): {source}")]
    AtGridPoint {
        index: usize,
        alphas: String,
        source: crate::fusion::FusionError,
    },
    #[error("partition file line {line}: {message}")]
    BadPartitionFile { line: usize, message: String },
    #[error("partition file does not cover user `{0}`")]
    MissingUser(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<io::Error> for DetectError {
    fn from(e: io::Error) -> Self {
        DetectError::Io(e.to_string())
    }
}

/// Node-to-community assignment with dense labels in `[0, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    communities: usize,
}

impl Partition {
    /// Canonicalizes arbitrary labels to dense ones, numbered by first
    /// appearance.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        let mut assignment = Vec::with_capacity(raw.len());
        for &label in raw {
            let next = relabel.len();
            let dense = *relabel.entry(label).or_insert(next);
            assignment.push(dense);
        }
        Partition {
            assignment,
            communities: relabel.len(),
        }
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            communities: n,
        }
    }

    /// All nodes in one community (none for the empty graph).
    pub fn all_in_one(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            communities: if n == 0 { 0 } else { 1 },
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn label(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn labels(&self) -> &[usize] {
        &self.assignment
    }

    /// Number of distinct communities.
    pub fn community_count(&self) -> usize {
        self.communities
    }

    /// True when the two partitions group nodes identically, ignoring label
    /// names.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        self.len() == other.len()
            && Partition::from_labels(&self.assignment).assignment
                == Partition::from_labels(&other.assignment).assignment
    }
}

fn check_cover(g: &Graph, p: &Partition) -> Result<(), DetectError> {
    if p.len() != g.node_count() {
        return Err(DetectError::SizeMismatch {
            partition: p.len(),
            graph: g.node_count(),
        });
    }
    Ok(())
}

/// Modularity of a partition: observed intra-community weight minus its
/// degree-based expectation, over ordered pairs, normalized by the total
/// weight. Zero on an edgeless graph.
///
/// The total weight is taken as half the strength sum so that the
/// all-in-one partition scores exactly zero.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64, DetectError> {
    check_cover(g, p)?;
    let n = g.node_count();
    let c = p.community_count();
    let mut two_m = 0.0;
    let mut deg = vec![0.0; c];
    let mut intra = vec![0.0; c];
    for i in 0..n {
        let label = p.label(i);
        let mut strength = 0.0;
        let mut within = 0.0;
        for (j, w) in g.neighbors(i) {
            strength += w;
            if p.label(j) == label {
                within += w;
            }
        }
        two_m += strength;
        deg[label] += strength;
        intra[label] += within;
    }
    if two_m == 0.0 {
        return Ok(0.0);
    }
    let mut q = 0.0;
    for label in 0..c {
        let frac = deg[label] / two_m;
        q += intra[label] / two_m - frac * frac;
    }
    Ok(q)
}

/// Community, isolate, and modularity summary of a partitioned graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterStats {
    pub clusters: usize,
    pub isolates: usize,
    pub modularity: f64,
}

pub fn cluster_stats(g: &Graph, p: &Partition) -> Result<ClusterStats, DetectError> {
    Ok(ClusterStats {
        clusters: p.community_count(),
        isolates: g.isolate_count(),
        modularity: modularity(g, p)?,
    })
}

/// Writes `user_id<TAB>community_label`, sorted by user id.
pub fn write_partition<W: Write>(g: &Graph, p: &Partition, mut out: W) -> Result<(), DetectError> {
    check_cover(g, p)?;
    let mut rows: Vec<(&str, usize)> = (0..g.node_count())
        .map(|i| (g.user(i), p.label(i)))
        .collect();
    rows.sort_by_key(|(u, _)| *u);
    for (user, label) in rows {
        writeln!(out, "{user}\t{label}")?;
    }
    Ok(())
}

/// Reads a partition file back onto `g`'s node universe. Every node of the
/// graph must be covered; unknown users and duplicate rows are errors.
/// Labels are re-densified by first appearance in node-index order.
pub fn read_partition<R: BufRead>(g: &Graph, reader: R) -> Result<Partition, DetectError> {
    let mut by_user: HashMap<String, usize> = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        let (user, label) = match (parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(l), None) => (u, l),
            _ => {
                return Err(DetectError::BadPartitionFile {
                    line: idx + 1,
                    message: "expected `user<TAB>label`".into(),
                })
            }
        };
        let label: usize = label.parse().map_err(|_| DetectError::BadPartitionFile {
            line: idx + 1,
            message: format!("invalid label `{label}`"),
        })?;
        if g.node_id(user).is_none() {
            return Err(DetectError::BadPartitionFile {
                line: idx + 1,
                message: format!("unknown user `{user}`"),
            });
        }
        if by_user.insert(user.to_string(), label).is_some() {
            return Err(DetectError::BadPartitionFile {
                line: idx + 1,
                message: format!("duplicate user `{user}`"),
            });
        }
    }
    let mut raw = Vec::with_capacity(g.node_count());
    for i in 0..g.node_count() {
        match by_user.get(g.user(i)) {
            Some(&label) => raw.push(label),
            None => return Err(DetectError::MissingUser(g.user(i).to_string())),
        }
    }
    Ok(Partition::from_labels(&raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{barbell, random_graph, triangle};

    #[test]
    fn all_in_one_is_exactly_zero() {
        let g = barbell();
        let q = modularity(&g, &Partition::all_in_one(6)).unwrap();
        assert_eq!(q, 0.0);
    }

    #[test]
    fn triangle_singletons() {
        let g = triangle();
        let q = modularity(&g, &Partition::singletons(3)).unwrap();
        assert!((q - (-1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn barbell_two_triangles() {
        let g = barbell();
        // nodes a,b,c = 0,1,2 and d,e,f = 3,4,5 by insertion order
        let p = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        let q = modularity(&g, &p).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let g = triangle();
        assert_eq!(
            modularity(&g, &Partition::singletons(2)),
            Err(DetectError::SizeMismatch {
                partition: 2,
                graph: 3
            })
        );
    }

    #[test]
    fn edgeless_graph_scores_zero() {
        let g = crate::graph::Graph::with_users(["a", "b", "c"]).unwrap();
        assert_eq!(modularity(&g, &Partition::singletons(3)).unwrap(), 0.0);
    }

    #[test]
    fn cluster_stats_barbell() {
        let g = barbell();
        let p = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        let stats = cluster_stats(&g, &p).unwrap();
        assert_eq!(stats.clusters, 2);
        assert_eq!(stats.isolates, 0);
        assert!((stats.modularity - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn cluster_stats_edgeless_singletons() {
        let g = crate::graph::Graph::with_users(["a", "b", "c"]).unwrap();
        let stats = cluster_stats(&g, &Partition::singletons(3)).unwrap();
        assert_eq!((stats.clusters, stats.isolates), (3, 3));
        assert_eq!(stats.modularity, 0.0);
    }

    #[test]
    fn cluster_stats_triangle_one_community() {
        let g = triangle();
        let stats = cluster_stats(&g, &Partition::all_in_one(3)).unwrap();
        assert_eq!((stats.clusters, stats.isolates), (1, 0));
        assert_eq!(stats.modularity, 0.0);
    }

    #[test]
    fn partition_roundtrip_through_file() {
        let g = barbell();
        let p = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        let mut buf = Vec::new();
        write_partition(&g, &p, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("a\t0\n"));
        let back = read_partition(&g, buf.as_slice()).unwrap();
        assert!(back.same_grouping(&p));
    }

    #[test]
    fn read_partition_rejects_gaps_and_strangers() {
        let g = triangle();
        assert!(matches!(
            read_partition(&g, "a\t0\nb\t0\n".as_bytes()),
            Err(DetectError::MissingUser(_))
        ));
        assert!(matches!(
            read_partition(&g, "a\t0\nb\t0\nc\t0\nzz\t1\n".as_bytes()),
            Err(DetectError::BadPartitionFile { .. })
        ));
    }

    #[test]
    fn from_labels_densifies() {
        let p = Partition::from_labels(&[7, 7, 3, 9, 3]);
        assert_eq!(p.labels(), &[0, 0, 1, 2, 1]);
        assert_eq!(p.community_count(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn all_in_one_zero_and_range_on_random_inputs(seed in 0u64..200, n in 2usize..9, labels in prop::collection::vec(0usize..4, 8)) {
                let g = random_graph(n, 0.5, true, seed);
                if g.total_weight() > 0.0 {
                    prop_assert_eq!(modularity(&g, &Partition::all_in_one(n)).unwrap(), 0.0);
                }
                let p = Partition::from_labels(&labels[..n]);
                let q = modularity(&g, &p).unwrap();
                prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&q));
            }

            #[test]
            fn scale_invariance(seed in 0u64..50, c in prop::sample::select(vec![0.5f64, 2.0, 10.0]), labels in prop::collection::vec(0usize..3, 7)) {
                let g = random_graph(7, 0.5, true, seed);
                let mut scaled = crate::graph::Graph::with_users(g.users().map(str::to_string)).unwrap();
                for (a, b, w) in g.edge_triples() {
                    scaled.add_edge(&a, &b, w * c).unwrap();
                }
                let p = Partition::from_labels(&labels);
                let q1 = modularity(&g, &p).unwrap();
                let q2 = modularity(&scaled, &p).unwrap();
                prop_assert!((q1 - q2).abs() < 1e-12);
            }
        }
    }
}
