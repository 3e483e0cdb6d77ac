//! Convex combination of view graphs into one weighted graph, and the
//! simplex grids the parameter sweep walks.

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::views::ViewSet;

/// Combined weights below this are dropped to keep the fused graph sparse.
const WEIGHT_FLOOR: f64 = 1e-12;

/// Tolerance on the simplex sum constraint.
const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum FusionError {
    #[error("alpha {0} outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("alphas sum to {0}, expected 1")]
    NotASimplexPoint(f64),
    #[error("weight vector has empty alphas")]
    Empty,
    #[error("{alphas} alphas for {views} views")]
    ViewCountMismatch { alphas: usize, views: usize },
    #[error("alpha grid requires k >= 2 views, got {0}")]
    TooFewViews(usize),
    #[error("invalid grid step {0}: must lie in (0, 1] and evenly divide 1")]
    InvalidStep(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One per-view weight each in [0, 1], summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    alphas: Vec<f64>,
}

impl WeightVector {
    pub fn new(alphas: Vec<f64>) -> Result<Self, FusionError> {
        if alphas.is_empty() {
            return Err(FusionError::Empty);
        }
        for &a in &alphas {
            if !a.is_finite() || !(0.0..=1.0).contains(&a) {
                return Err(FusionError::AlphaOutOfRange(a));
            }
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(FusionError::NotASimplexPoint(sum));
        }
        Ok(WeightVector { alphas })
    }

    /// Two-view vector (alpha, 1 - alpha).
    pub fn pair(alpha: f64) -> Result<Self, FusionError> {
        if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
            return Err(FusionError::AlphaOutOfRange(alpha));
        }
        WeightVector::new(vec![alpha, 1.0 - alpha])
    }

    /// Equal weight 1/k per view, the single-shot default.
    pub fn uniform(k: usize) -> Result<Self, FusionError> {
        if k == 0 {
            return Err(FusionError::Empty);
        }
        WeightVector::new(vec![1.0 / k as f64; k])
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Comma-joined alphas with 6 decimal digits, e.g. `0.200000,0.800000`.
    pub fn display(&self) -> String {
        self.alphas
            .iter()
            .map(|a| format!("{a:.6}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Entrywise convex combination of the views: weight(i,j) = sum over views
/// of alpha_v * X_v(i,j). The node universe is preserved; views with zero
/// alpha contribute nothing.
pub fn fuse(vs: &ViewSet, w: &WeightVector) -> Result<Graph, FusionError> {
    if w.len() != vs.k() {
        return Err(FusionError::ViewCountMismatch {
            alphas: w.len(),
            views: vs.k(),
        });
    }
    let n = vs.node_count();
    let mut acc: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); n];
    for (view, &alpha) in vs.views().iter().zip(w.alphas()) {
        if alpha == 0.0 {
            continue;
        }
        for (i, row) in acc.iter_mut().enumerate() {
            for (j, x) in view.neighbors(i) {
                if i < j {
                    *row.entry(j).or_insert(0.0) += alpha * x;
                }
            }
        }
    }
    let mut fused = Graph::with_users(vs.universe().map(str::to_string))?;
    for (i, row) in acc.iter().enumerate() {
        for (&j, &weight) in row {
            if weight >= WEIGHT_FLOOR {
                fused.add_edge_between(i, j, weight)?;
            }
        }
    }
    Ok(fused)
}

/// All simplex lattice points for k views whose coordinates are multiples
/// of `step`. With `include_endpoints` false, points touching 0 or 1 in any
/// coordinate are dropped (which may empty the grid).
///
/// `step` must lie in (0, 1] and evenly divide 1.
pub fn alpha_grid(
    k: usize,
    step: f64,
    include_endpoints: bool,
) -> Result<Vec<WeightVector>, FusionError> {
    if k < 2 {
        return Err(FusionError::TooFewViews(k));
    }
    if !step.is_finite() || step <= 0.0 || step > 1.0 {
        return Err(FusionError::InvalidStep(step));
    }
    let levels = (1.0 / step).round() as u64;
    if levels == 0 || (levels as f64 * step - 1.0).abs() > SIMPLEX_TOL {
        return Err(FusionError::InvalidStep(step));
    }
    let mut grid = Vec::new();
    let mut prefix = Vec::with_capacity(k);
    enumerate_compositions(levels, k, &mut prefix, &mut grid);
    let to_alpha = |m: u64| m as f64 / levels as f64;
    let mut out = Vec::with_capacity(grid.len());
    for comp in grid {
        if !include_endpoints && comp.iter().any(|&m| m == 0 || m == levels) {
            continue;
        }
        let alphas: Vec<f64> = comp.iter().map(|&m| to_alpha(m)).collect();
        out.push(WeightVector::new(alphas)?);
    }
    Ok(out)
}

/// Compositions of `remaining` into `slots` nonnegative parts, lexicographic.
fn enumerate_compositions(
    remaining: u64,
    slots: usize,
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if slots == 1 {
        prefix.push(remaining);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for m in 0..=remaining {
        prefix.push(m);
        enumerate_compositions(remaining - m, slots - 1, prefix, out);
        prefix.pop();
    }
}
