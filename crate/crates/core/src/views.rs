//! Per-view interaction graphs built from page datasets.
//!
//! Every builder emits a binary graph: weight 1 when the view's predicate
//! holds for a pair, no entry otherwise. Multiplicity of shared likes is
//! discarded at view level; the fused graph reintroduces real weights.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::ingest::PageDataset;

#[derive(Debug, Error, PartialEq)]
pub enum ViewError {
    #[error("view requires a nonempty user set")]
    EmptyUserSet,
    #[error("make_viewset requires at least one graph")]
    NoGraphs,
    #[error("got {graphs} graphs but {labels} labels")]
    LabelCountMismatch { graphs: usize, labels: usize },
    #[error("duplicate view label `{0}`")]
    DuplicateLabel(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Knobs for view construction.
#[derive(Debug, Clone, Default)]
pub struct ViewBuildOptions {
    /// Posts/comments with more distinct likers than this are skipped and
    /// reported instead of enumerating C(L,2) pairs. None = no cap.
    pub max_likers_per_item: Option<usize>,
}

/// Items the cap excluded from pair enumeration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ViewBuildReport {
    pub skipped: Vec<SkippedItem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedItem {
    pub page_id: String,
    pub item_id: String,
    pub likers: usize,
}

/// k graphs over one shared node universe, one label per view.
#[derive(Debug, Clone)]
pub struct ViewSet {
    views: Vec<Graph>,
    labels: Vec<String>,
}

impl ViewSet {
    pub fn views(&self) -> &[Graph] {
        &self.views
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of views k.
    pub fn k(&self) -> usize {
        self.views.len()
    }

    /// Size of the shared node universe.
    pub fn node_count(&self) -> usize {
        self.views[0].node_count()
    }

    /// The shared universe in node-index order (identical across views).
    pub fn universe(&self) -> impl Iterator<Item = &str> {
        self.views[0].users()
    }
}

/// Re-indexes the graphs onto the union of their users (sorted), so every
/// view covers the same node universe. Users missing from a view become
/// isolates there.
pub fn make_viewset(graphs: Vec<Graph>, labels: Vec<String>) -> Result<ViewSet, ViewError> {
    if graphs.is_empty() {
        return Err(ViewError::NoGraphs);
    }
    if graphs.len() != labels.len() {
        return Err(ViewError::LabelCountMismatch {
            graphs: graphs.len(),
            labels: labels.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for l in &labels {
        if !seen.insert(l.clone()) {
            return Err(ViewError::DuplicateLabel(l.clone()));
        }
    }
    let universe: BTreeSet<String> = graphs
        .iter()
        .flat_map(|g| g.users().map(str::to_string))
        .collect();
    let mut views = Vec::with_capacity(graphs.len());
    for g in &graphs {
        let mut v = Graph::with_users(universe.iter().cloned())?;
        for (a, b, w) in g.edge_triples() {
            v.add_edge(&a, &b, w)?;
        }
        views.push(v);
    }
    Ok(ViewSet { views, labels })
}

/// Node universe for a single-dataset view: the restriction set when given,
/// otherwise every actor of the dataset.
fn view_nodes(d: &PageDataset, users: Option<&BTreeSet<String>>) -> BTreeSet<String> {
    match users {
        Some(u) => u.clone(),
        None => d.actors().clone(),
    }
}

fn in_scope(users: Option<&BTreeSet<String>>, id: &str) -> bool {
    users.is_none_or(|u| u.contains(id))
}

/// Connects all pairs among `members` with weight 1, once.
fn link_pairs(g: &mut Graph, members: &[&str]) {
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if g.weight(a, b).is_none() {
                g.add_edge(a, b, 1.0).expect("distinct members");
            }
        }
    }
}

/// Edge between every pair of users that liked the same post.
pub fn build_post_view(d: &PageDataset, users: Option<&BTreeSet<String>>) -> Graph {
    build_post_view_with(d, users, &ViewBuildOptions::default()).0
}

pub fn build_post_view_with(
    d: &PageDataset,
    users: Option<&BTreeSet<String>>,
    opts: &ViewBuildOptions,
) -> (Graph, ViewBuildReport) {
    let mut g = Graph::with_users(view_nodes(d, users)).expect("sorted distinct users");
    let mut report = ViewBuildReport::default();
    for (post, likers) in d.post_likers() {
        let members: Vec<&str> = likers
            .iter()
            .map(String::as_str)
            .filter(|u| in_scope(users, u))
            .collect();
        if exceeds_cap(opts, members.len()) {
            report.skipped.push(SkippedItem {
                page_id: d.page_id().to_string(),
                item_id: post.clone(),
                likers: members.len(),
            });
            continue;
        }
        link_pairs(&mut g, &members);
    }
    (g, report)
}

/// Edge when one user liked the other's comment, or both liked the same
/// comment.
pub fn build_comment_view(d: &PageDataset, users: Option<&BTreeSet<String>>) -> Graph {
    build_comment_view_with(d, users, &ViewBuildOptions::default()).0
}

pub fn build_comment_view_with(
    d: &PageDataset,
    users: Option<&BTreeSet<String>>,
    opts: &ViewBuildOptions,
) -> (Graph, ViewBuildReport) {
    let mut g = Graph::with_users(view_nodes(d, users)).expect("sorted distinct users");
    let mut report = ViewBuildReport::default();
    for (cid, likers) in d.comment_likers() {
        let members: Vec<&str> = likers
            .iter()
            .map(String::as_str)
            .filter(|u| in_scope(users, u))
            .collect();
        if exceeds_cap(opts, members.len()) {
            report.skipped.push(SkippedItem {
                page_id: d.page_id().to_string(),
                item_id: cid.clone(),
                likers: members.len(),
            });
            continue;
        }
        if let Some(author) = d.comment_authors().get(cid) {
            if in_scope(users, author) {
                for liker in &members {
                    if *liker != author && g.weight(liker, author).is_none() {
                        g.add_edge(liker, author, 1.0).expect("distinct users");
                    }
                }
            }
        }
        link_pairs(&mut g, &members);
    }
    (g, report)
}

/// Multi-page view: edge when a pair co-liked any post or any comment on
/// any of the supplied pages. Author likes do not count here.
pub fn build_colike_view(
    datasets: &[PageDataset],
    users: &BTreeSet<String>,
) -> Result<Graph, ViewError> {
    build_colike_view_with(datasets, users, &ViewBuildOptions::default()).map(|(g, _)| g)
}

pub fn build_colike_view_with(
    datasets: &[PageDataset],
    users: &BTreeSet<String>,
    opts: &ViewBuildOptions,
) -> Result<(Graph, ViewBuildReport), ViewError> {
    if users.is_empty() {
        return Err(ViewError::EmptyUserSet);
    }
    let mut g = Graph::with_users(users.iter().cloned())?;
    let mut report = ViewBuildReport::default();
    for d in datasets {
        let groups = d.post_likers().iter().chain(d.comment_likers().iter());
        for (item, likers) in groups {
            let members: Vec<&str> = likers
                .iter()
                .map(String::as_str)
                .filter(|u| users.contains(*u))
                .collect();
            if exceeds_cap(opts, members.len()) {
                report.skipped.push(SkippedItem {
                    page_id: d.page_id().to_string(),
                    item_id: item.clone(),
                    likers: members.len(),
                });
                continue;
            }
            link_pairs(&mut g, &members);
        }
    }
    Ok((g, report))
}

/// Multi-page view: edge when one user liked a comment the other authored,
/// on any of the supplied pages.
pub fn build_mutual_comment_like_view(
    datasets: &[PageDataset],
    users: &BTreeSet<String>,
) -> Result<Graph, ViewError> {
    if users.is_empty() {
        return Err(ViewError::EmptyUserSet);
    }
    let mut g = Graph::with_users(users.iter().cloned())?;
    for d in datasets {
        for (cid, likers) in d.comment_likers() {
            let Some(author) = d.comment_authors().get(cid) else {
                continue;
            };
            if !users.contains(author) {
                continue;
            }
            for liker in likers {
                if liker != author
                    && users.contains(liker)
                    && g.weight(liker, author).is_none()
                {
                    g.add_edge(liker, author, 1.0)?;
                }
            }
        }
    }
    Ok(g)
}

fn exceeds_cap(opts: &ViewBuildOptions, likers: usize) -> bool {
    opts.max_likers_per_item.is_some_and(|cap| likers > cap)
}
