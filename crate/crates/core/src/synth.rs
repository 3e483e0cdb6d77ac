//! Planted-partition multi-view generator and partition scoring.
//!
//! Each view draws independent Bernoulli edges (probability `p_in` inside a
//! planted community, `p_out` across), then masks a seeded-random fraction
//! of nodes per view by deleting their edges in that view only. Masking
//! models users present on a page but inactive in one interaction modality,
//! so the node universe stays fixed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thiserror::Error;

use crate::detect::Partition;
use crate::graph::Graph;
use crate::views::{make_viewset, ViewError, ViewSet};

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("probability {name} = {value} outside [0, 1]")]
    BadProbability { name: &'static str, value: f64 },
    #[error("inactive fraction {0} outside [0, 1)")]
    BadInactiveFraction(f64),
    #[error("need at least 2 views, got {0}")]
    TooFewViews(usize),
    #[error("expected {views} inactive fractions, got {got}")]
    InactiveLengthMismatch { views: usize, got: usize },
    #[error("complementary masking needs {needed} inactive nodes but only {n} exist")]
    ComplementaryOverflow { needed: usize, n: usize },
    #[error("partitions cover {a} and {b} nodes")]
    SizeMismatch { a: usize, b: usize },
    #[error(transparent)]
    View(#[from] ViewError),
}

impl From<crate::graph::GraphError> for SynthError {
    fn from(e: crate::graph::GraphError) -> Self {
        SynthError::View(ViewError::Graph(e))
    }
}

/// Parameters of one planted-partition multi-view instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSpec {
    pub n: usize,
    pub k_communities: usize,
    pub p_in: f64,
    pub p_out: f64,
    /// One fraction per view; that share of nodes loses all edges in the view.
    pub inactive_fraction: Vec<f64>,
    pub views: usize,
    /// Draw the per-view inactive sets disjointly instead of independently.
    pub complementary_inactive: bool,
    pub seed: u64,
}

impl PlantedSpec {
    /// Validates ranges; returns non-fatal warnings (e.g. undetectable
    /// structure when `p_in <= p_out`).
    pub fn validate(&self) -> Result<Vec<String>, SynthError> {
        for (name, value) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(SynthError::BadProbability { name, value });
            }
        }
        if self.views < 2 {
            return Err(SynthError::TooFewViews(self.views));
        }
        if self.inactive_fraction.len() != self.views {
            return Err(SynthError::InactiveLengthMismatch {
                views: self.views,
                got: self.inactive_fraction.len(),
            });
        }
        for &f in &self.inactive_fraction {
            if !(0.0..1.0).contains(&f) {
                return Err(SynthError::BadInactiveFraction(f));
            }
        }
        if self.complementary_inactive {
            let needed: usize = self
                .inactive_fraction
                .iter()
                .map(|f| (f * self.n as f64).ceil() as usize)
                .sum();
            if needed > self.n {
                return Err(SynthError::ComplementaryOverflow { needed, n: self.n });
            }
        }
        let mut warnings = Vec::new();
        if self.p_in <= self.p_out && self.n > 0 {
            warnings.push(format!(
                "p_in = {} <= p_out = {}: planted structure is not detectable",
                self.p_in, self.p_out
            ));
        }
        Ok(warnings)
    }
}

fn user_id(i: usize, n: usize) -> String {
    let width = n.saturating_sub(1).to_string().len().max(1);
    format!("u{i:0width$}")
}

/// Generates the views and the ground-truth partition, deterministic given
/// the seed. Communities are contiguous node blocks of near-equal size.
pub fn generate(spec: &PlantedSpec) -> Result<(ViewSet, Partition), SynthError> {
    spec.validate()?;
    let n = spec.n;
    let k = spec.k_communities.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    // block assignment: node i belongs to block i*k/n
    let community = |i: usize| -> usize { (i * k).checked_div(n).map_or(0, |b| b.min(k - 1)) };

    let mut graphs = Vec::with_capacity(spec.views);
    let mut masked_pool: Vec<usize> = (0..n).collect();
    for view in 0..spec.views {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let p = if community(i) == community(j) {
                    spec.p_in
                } else {
                    spec.p_out
                };
                if rng.random::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        let count = (spec.inactive_fraction[view] * n as f64).ceil() as usize;
        let inactive: Vec<usize> = if spec.complementary_inactive {
            masked_pool.shuffle(&mut rng);
            let taken: Vec<usize> = masked_pool[..count].to_vec();
            masked_pool.drain(..count);
            taken
        } else {
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(&mut rng);
            all.truncate(count);
            all
        };
        let mut is_inactive = vec![false; n];
        for &i in &inactive {
            is_inactive[i] = true;
        }
        let mut g = Graph::with_users((0..n).map(|i| user_id(i, n)))?;
        for (i, j) in edges {
            if !is_inactive[i] && !is_inactive[j] {
                g.add_edge_between(i, j, 1.0)?;
            }
        }
        graphs.push(g);
    }
    let labels = (1..=spec.views).map(|v| format!("view{v}")).collect();
    let vs = make_viewset(graphs, labels)?;
    let truth = Partition::from_labels(&(0..n).map(community).collect::<Vec<_>>());
    Ok((vs, truth))
}

/// Normalized mutual information with arithmetic-mean normalization:
/// `2 * MI / (H(a) + H(b))`. 1 for identical partitions up to relabeling,
/// 0 against a constant partition.
pub fn partition_similarity(a: &Partition, b: &Partition) -> Result<f64, SynthError> {
    if a.len() != b.len() {
        return Err(SynthError::SizeMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    let n = a.len();
    if n == 0 || a.same_grouping(b) {
        return Ok(1.0); // relabel invariance, exactly
    }
    let ca = a.community_count();
    let cb = b.community_count();
    if ca == 1 && cb == 1 {
        return Ok(1.0); // both constant: structurally identical
    }
    let mut joint = vec![vec![0usize; cb]; ca];
    let mut count_a = vec![0usize; ca];
    let mut count_b = vec![0usize; cb];
    for i in 0..n {
        joint[a.label(i)][b.label(i)] += 1;
        count_a[a.label(i)] += 1;
        count_b[b.label(i)] += 1;
    }
    let nf = n as f64;
    let entropy = |counts: &[usize]| -> f64 {
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / nf;
                -p * p.ln()
            })
            .sum()
    };
    let h_a = entropy(&count_a);
    let h_b = entropy(&count_b);
    let mut mi = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = c as f64 / nf;
            let pa = count_a[i] as f64 / nf;
            let pb = count_b[j] as f64 / nf;
            mi += p * (p / (pa * pb)).ln();
        }
    }
    let mi = mi.max(0.0);
    if h_a + h_b == 0.0 {
        return Ok(1.0);
    }
    Ok((2.0 * mi / (h_a + h_b)).clamp(0.0, 1.0))
}
