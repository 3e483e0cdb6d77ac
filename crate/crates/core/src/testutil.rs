//! Shared fixtures for unit tests.

use crate::graph::Graph;
use crate::ingest::{EventKind, InteractionEvent};

pub(crate) fn post_like(page: &str, post: &str, actor: &str) -> InteractionEvent {
    InteractionEvent {
        kind: EventKind::PostLike,
        page_id: page.into(),
        post_id: post.into(),
        comment_id: None,
        actor_id: actor.into(),
        author_id: None,
        timestamp: 0,
    }
}

pub(crate) fn comment(page: &str, post: &str, cid: &str, actor: &str) -> InteractionEvent {
    InteractionEvent {
        kind: EventKind::Comment,
        page_id: page.into(),
        post_id: post.into(),
        comment_id: Some(cid.into()),
        actor_id: actor.into(),
        author_id: Some(actor.into()),
        timestamp: 0,
    }
}

pub(crate) fn comment_like(page: &str, post: &str, cid: &str, actor: &str) -> InteractionEvent {
    InteractionEvent {
        kind: EventKind::CommentLike,
        page_id: page.into(),
        post_id: post.into(),
        comment_id: Some(cid.into()),
        actor_id: actor.into(),
        author_id: None,
        timestamp: 0,
    }
}

/// Triangle on {a, b, c}, unit weights.
pub(crate) fn triangle() -> Graph {
    let mut g = Graph::new();
    g.add_edge("a", "b", 1.0).unwrap();
    g.add_edge("b", "c", 1.0).unwrap();
    g.add_edge("a", "c", 1.0).unwrap();
    g
}

/// Two triangles {a,b,c} and {d,e,f} joined by the bridge (c,d).
pub(crate) fn barbell() -> Graph {
    let mut g = Graph::new();
    for (u, v) in [
        ("a", "b"),
        ("b", "c"),
        ("a", "c"),
        ("d", "e"),
        ("e", "f"),
        ("d", "f"),
        ("c", "d"),
    ] {
        g.add_edge(u, v, 1.0).unwrap();
    }
    g
}

/// Seeded random graph on `n` nodes; each pair drawn with probability `p`,
/// with weights in (0, 2] when `weighted`, else 1.
pub(crate) fn random_graph(n: usize, p: f64, weighted: bool, seed: u64) -> Graph {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::with_users((0..n).map(|i| format!("u{i:03}"))).unwrap();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                let w = if weighted {
                    rng.random_range(0.01..2.0)
                } else {
                    1.0
                };
                g.add_edge_between(i, j, w).unwrap();
            }
        }
    }
    g
}
