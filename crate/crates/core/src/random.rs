//! Seeded random generation of small graphs.
//!
//! A random graph is a quotient of a coproduct of representables by a few
//! random identifications, which reaches every finite presheaf.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bridge::{Hypergraph, PowerGraph, ReflexiveFGraph};
use crate::graph::{representable, Representable, XMGraph};
use crate::limits::{coproduct, initial, quotient};
use crate::theory::Theory;

const MAX_ATTEMPTS: usize = 2_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random graph with at most `max_v` vertices and `max_a` arcs.
pub fn random_graph(
    theory: &Arc<Theory>,
    rng: &mut impl Rng,
    max_v: usize,
    max_a: usize,
) -> XMGraph {
    let rep_a = Arc::new(representable(theory, Representable::A));
    let rep_v = Arc::new(representable(theory, Representable::V));
    for _ in 0..MAX_ATTEMPTS {
        let arcs = rng.gen_range(0..=3usize);
        let verts = rng.gen_range(0..=max_v);
        let mut g = Arc::new(initial(theory));
        for _ in 0..arcs {
            g = coproduct(&g, &rep_a).expect("same theory").graph;
        }
        for _ in 0..verts {
            g = coproduct(&g, &rep_v).expect("same theory").graph;
        }
        let mut vertex_pairs = Vec::new();
        let mut arc_pairs = Vec::new();
        for _ in 0..rng.gen_range(0..=3usize) {
            if g.arc_count() > 0 && rng.gen_bool(0.5) {
                arc_pairs.push((
                    rng.gen_range(0..g.arc_count()),
                    rng.gen_range(0..g.arc_count()),
                ));
            } else if g.vertex_count() > 0 {
                vertex_pairs.push((
                    rng.gen_range(0..g.vertex_count()),
                    rng.gen_range(0..g.vertex_count()),
                ));
            }
        }
        let (q, _) =
            quotient(&g, &vertex_pairs, &arc_pairs).expect("quotients of valid graphs are valid");
        if q.vertex_count() <= max_v && q.arc_count() <= max_a {
            return Arc::unwrap_or_clone(q);
        }
    }
    initial(theory)
}

/// `count` random graphs from a fixed seed.
pub fn small_graphs(
    theory: &Arc<Theory>,
    max_v: usize,
    max_a: usize,
    seed: u64,
    count: usize,
) -> Vec<XMGraph> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| random_graph(theory, &mut r, max_v, max_a))
        .collect()
}

/// A hypergraph with up to `max_v` vertices and `max_e` nonempty edges of
/// size at most `max_edge`.
pub fn random_hypergraph(
    rng: &mut impl Rng,
    max_v: usize,
    max_e: usize,
    max_edge: usize,
) -> Hypergraph {
    let n_v = rng.gen_range(1..=max_v.max(1));
    let edges = (0..rng.gen_range(0..=max_e))
        .map(|_| {
            let size = rng.gen_range(1..=max_edge.min(n_v).max(1));
            rand::seq::index::sample(rng, n_v, size).into_vec()
        })
        .collect();
    Hypergraph::new(n_v, edges).expect("edges drawn from the vertex range")
}

/// A `k`-uniform hypergraph (requires `max_v ≥ k`).
pub fn random_uniform_hypergraph(
    rng: &mut impl Rng,
    k: usize,
    max_v: usize,
    max_e: usize,
) -> Hypergraph {
    let n_v = rng.gen_range(k.max(1)..=max_v.max(k).max(1));
    let edges = (0..rng.gen_range(0..=max_e))
        .map(|_| rand::seq::index::sample(rng, n_v, k).into_vec())
        .collect();
    Hypergraph::new(n_v, edges).expect("edges drawn from the vertex range")
}

pub fn random_power_graph(
    rng: &mut impl Rng,
    arity: usize,
    max_v: usize,
    max_e: usize,
) -> PowerGraph {
    let n_v = rng.gen_range(1..=max_v.max(1));
    let edges = (0..rng.gen_range(0..=max_e))
        .map(|_| (0..arity).map(|_| rng.gen_range(0..n_v)).collect())
        .collect();
    PowerGraph::new(arity, n_v, edges).expect("edges drawn from the vertex range")
}

/// Vertices `0..n` followed by up to `max_e` non-vertex parts.
pub fn random_rf_graph(
    rng: &mut impl Rng,
    arity: usize,
    max_v: usize,
    max_e: usize,
) -> ReflexiveFGraph {
    let n_v = rng.gen_range(1..=max_v.max(1));
    let edges = (0..rng.gen_range(0..=max_e))
        .map(|_| (0..arity).map(|_| rng.gen_range(0..n_v)).collect())
        .collect();
    ReflexiveFGraph::with_edges(arity, n_v, edges).expect("edges drawn from the vertex range")
}
