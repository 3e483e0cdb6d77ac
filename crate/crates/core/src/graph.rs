//! Sparse weighted undirected graph over a dense node index.
//!
//! Nodes are user ids mapped to contiguous indices in `[0, n)`. Each
//! unordered pair is stored once logically (mirrored in both adjacency
//! rows), weights are strictly positive, and self-loops are rejected.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{self, Write};

use thiserror::Error;

/// Dense node index, bijective with a user id through the graph's node map.
pub type NodeId = usize;

/// Errors from graph construction and queries.
#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("self-loop rejected for user `{0}`")]
    SelfLoop(String),
    #[error("edge weight must be positive and finite, got {0}")]
    InvalidWeight(f64),
    #[error("unknown user `{0}`")]
    UnknownUser(String),
    #[error("duplicate user `{0}` in node list")]
    DuplicateUser(String),
}

/// Per-node strength (sum of incident weights) plus the total weight m.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProfile {
    pub strengths: Vec<f64>,
    pub total_weight: f64,
}

/// Sparse symmetric weighted graph with a user-id ↔ node-index map.
///
/// Construction is single-writer; a finished graph is immutable and safe
/// to share across threads for reads.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    users: Vec<String>,
    index: HashMap<String, NodeId>,
    adj: Vec<BTreeMap<NodeId, f64>>,
    total_weight: f64,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pre-registers a node universe; edges may only be added between them
    /// afterwards via [`Graph::add_edge`] or [`Graph::add_edge_between`].
    pub fn with_users<I, S>(users: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut g = Self::new();
        for u in users {
            let u = u.into();
            if g.index.contains_key(&u) {
                return Err(GraphError::DuplicateUser(u));
            }
            g.push_node(u);
        }
        Ok(g)
    }

    fn push_node(&mut self, user: String) -> NodeId {
        let id = self.users.len();
        self.index.insert(user.clone(), id);
        self.users.push(user);
        self.adj.push(BTreeMap::new());
        id
    }

    /// Returns the node id for `user`, registering it if unseen.
    pub fn ensure_node(&mut self, user: &str) -> NodeId {
        match self.index.get(user) {
            Some(&id) => id,
            None => self.push_node(user.to_string()),
        }
    }

    /// Adds `w` to the weight of the unordered pair `{u, v}`, extending the
    /// node map for unseen users. Repeated calls accumulate.
    pub fn add_edge(&mut self, u: &str, v: &str, w: f64) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u.to_string()));
        }
        let a = self.ensure_node(u);
        let b = self.ensure_node(v);
        self.add_edge_between(a, b, w)
    }

    /// Index-addressed variant of [`Graph::add_edge`]; both ids must already exist.
    pub fn add_edge_between(&mut self, a: NodeId, b: NodeId, w: f64) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(self.users[a].clone()));
        }
        if w <= 0.0 || !w.is_finite() {
            return Err(GraphError::InvalidWeight(w));
        }
        let fresh = !self.adj[a].contains_key(&b);
        *self.adj[a].entry(b).or_insert(0.0) += w;
        *self.adj[b].entry(a).or_insert(0.0) += w;
        if fresh {
            self.edge_count += 1;
        }
        self.total_weight += w;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.users.len()
    }

    /// Number of stored unordered pairs.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Total weight m: the sum over unordered pairs. Equals the edge count
    /// on 0/1 graphs.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn node_id(&self, user: &str) -> Option<NodeId> {
        self.index.get(user).copied()
    }

    pub fn user(&self, id: NodeId) -> &str {
        &self.users[id]
    }

    /// Users in node-index order.
    pub fn users(&self) -> impl Iterator<Item = &str> {
        self.users.iter().map(String::as_str)
    }

    pub fn contains_user(&self, user: &str) -> bool {
        self.index.contains_key(user)
    }

    /// Neighbors of `id` with edge weights, in ascending index order.
    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.adj[id].iter().map(|(&j, &w)| (j, w))
    }

    pub fn weight(&self, u: &str, v: &str) -> Option<f64> {
        let a = self.node_id(u)?;
        let b = self.node_id(v)?;
        self.adj[a].get(&b).copied()
    }

    /// Weighted strength of a node: the sum of its incident edge weights.
    pub fn strength(&self, id: NodeId) -> f64 {
        self.adj[id].values().sum()
    }

    /// All node strengths, indexed by node id.
    pub fn strengths(&self) -> Vec<f64> {
        (0..self.node_count()).map(|i| self.strength(i)).collect()
    }

    /// Strengths together with the total weight; the strength sum is twice
    /// the total weight.
    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile {
            strengths: self.strengths(),
            total_weight: self.total_weight,
        }
    }

    /// Users with zero strength.
    pub fn isolates(&self) -> BTreeSet<String> {
        self.adj
            .iter()
            .enumerate()
            .filter(|(_, nbrs)| nbrs.is_empty())
            .map(|(i, _)| self.users[i].clone())
            .collect()
    }

    pub fn isolate_count(&self) -> usize {
        self.adj.iter().filter(|nbrs| nbrs.is_empty()).count()
    }

    /// Histogram of node strength -> node count. Integer strengths bucket
    /// exactly; fractional strengths bucket by floor.
    pub fn degree_distribution(&self) -> BTreeMap<u64, usize> {
        let mut hist = BTreeMap::new();
        for i in 0..self.node_count() {
            *hist.entry(self.strength(i).floor() as u64).or_insert(0) += 1;
        }
        hist
    }

    /// Restriction to `users`: node set becomes exactly `users` with a fresh
    /// dense index, keeping every surviving pair's weight bit-exact.
    pub fn induced_subgraph(&self, users: &BTreeSet<String>) -> Result<Graph, GraphError> {
        for u in users {
            if !self.contains_user(u) {
                return Err(GraphError::UnknownUser(u.clone()));
            }
        }
        let mut sub = Graph::with_users(users.iter().cloned())?;
        for u in users {
            let old = self.index[u];
            let new_u = sub.index[u];
            for (&old_v, &w) in &self.adj[old] {
                if old_v <= old {
                    continue; // each pair once
                }
                let v_user = &self.users[old_v];
                if let Some(&new_v) = sub.index.get(v_user) {
                    sub.add_edge_between(new_u, new_v, w)?;
                }
            }
        }
        Ok(sub)
    }

    /// Unordered pairs as `(user_a, user_b, weight)` with `a < b`
    /// lexicographically, sorted by `(a, b)`.
    pub fn edge_triples(&self) -> Vec<(String, String, f64)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (i, nbrs) in self.adj.iter().enumerate() {
            for (&j, &w) in nbrs {
                if j <= i {
                    continue;
                }
                let (a, b) = if self.users[i] < self.users[j] {
                    (self.users[i].clone(), self.users[j].clone())
                } else {
                    (self.users[j].clone(), self.users[i].clone())
                };
                out.push((a, b, w));
            }
        }
        out.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        out
    }

    /// Writes one line per unordered pair: `a<TAB>b<TAB>weight`, sorted by
    /// `(a, b)`, weights with 6 decimal digits.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (a, b, w) in self.edge_triples() {
            writeln!(out, "{a}\t{b}\t{w:.6}")?;
        }
        Ok(())
    }
}
