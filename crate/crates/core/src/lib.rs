//! Multi-view community detection over social-page interaction logs.
//!
//! The pipeline: parse event logs into per-page datasets ([`ingest`]),
//! build one interaction graph per activity view ([`views`]), combine the
//! views into a weighted graph by convex combination ([`fusion`]), and find
//! the modularity-maximizing community structure, optionally sweeping the
//! combination weights ([`detect`]). [`synth`] supplies planted-partition
//! instances with known ground truth for benchmarking.

pub mod detect;
pub mod fusion;
pub mod graph;
pub mod ingest;
pub mod synth;
pub mod views;

pub use detect::{
    brute_force_best_partition, cluster_stats, louvain, lpa, modularity, sweep_detect,
    ClusterStats, DetectError, Detector, Partition, SweepResult,
};
pub use fusion::{alpha_grid, fuse, FusionError, WeightVector};
pub use graph::{DegreeProfile, Graph, GraphError, NodeId};
pub use ingest::{
    active_users, common_users, dataset_stats, parse_events, popular_content,
    ActivityFilterConfig, IngestError, InteractionEvent, PageDataset,
};
pub use synth::{generate, partition_similarity, PlantedSpec, SynthError};
pub use views::{
    build_colike_view, build_comment_view, build_mutual_comment_like_view, build_post_view,
    make_viewset, ViewError, ViewSet,
};

#[cfg(test)]
pub(crate) mod testutil;
