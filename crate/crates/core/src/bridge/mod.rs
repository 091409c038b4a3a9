//! Comma categories of hypergraphs, power graphs and reflexive power graphs,
//! with their nerve and realization functors.

mod certificate;
mod hyper;
mod power;
mod rpower;

pub use certificate::{obstruction_certificate, ObstructionCase, ObstructionCertificate};
pub use hyper::{AdjunctionCheck, Hypergraph};
pub use power::PowerGraph;
pub use rpower::{rf_coequalizer, rf_coproduct, ReflexiveFGraph, RfMorphism};

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use crate::catalog::assemble;
use crate::error::{Error, Result};
use crate::graph::{arc_orbits, GraphMorphism, XMGraph};
use crate::theory::Theory;

/// Which comma category a bridge operation targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Hyper,
    Power,
    ReflexivePower,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::Hyper, Flavor::Power, Flavor::ReflexivePower];

    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Hyper => "hyper",
            Flavor::Power => "power",
            Flavor::ReflexivePower => "rpower",
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Flavor::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| {
                Error::invalid(
                    "flavor",
                    format!("unknown flavor `{s}` (hyper, power, rpower)"),
                )
            })
    }
}

/// All multisets of size `arity` over `0..n`, as sorted tuples in
/// lexicographic order.
pub fn multiset_power(n: usize, arity: usize) -> Vec<Vec<usize>> {
    (0..n).combinations_with_replacement(arity).collect()
}

/// The induced map on multisets: apply `f` pointwise and re-sort.
pub fn multiset_map(f: &[usize], multiset: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = multiset.iter().map(|&v| f[v]).collect();
    out.sort_unstable();
    out
}

/// The induced map on subsets: pointwise image, sorted and deduplicated.
pub fn image_map(f: &[usize], set: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = set.iter().map(|&v| f[v]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// An arc of a nerve: a morphism out of the arc interpretation, given by
/// the edge (or part) it hits and its vertex assignment `X → vertices`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NerveArc {
    pub edge: usize,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Nerve {
    pub graph: Arc<XMGraph>,
    /// Nerve vertex `i` is the part `vertex_parts[i]` (identity for the
    /// non-reflexive flavors).
    pub vertex_parts: Vec<usize>,
    pub arcs: Vec<NerveArc>,
    index: HashMap<NerveArc, usize>,
}

impl Nerve {
    pub fn arc_of(&self, arc: &NerveArc) -> Option<usize> {
        self.index.get(arc).copied()
    }

    /// Builds the nerve graph from sorted arcs. Units act by precomposition
    /// `(e, f).σ = (e, f ∘ σ)`; fixed elements send `(e, f)` to the loop at
    /// `f(y)`.
    fn build(
        theory: &Arc<Theory>,
        vertex_parts: Vec<usize>,
        arcs: Vec<NerveArc>,
        loop_edge: Option<&dyn Fn(usize) -> usize>,
    ) -> Result<Nerve> {
        let t = &**theory;
        let index: HashMap<NerveArc, usize> = arcs
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        let n_v = vertex_parts.len();
        let loops = loop_edge.map(|edge_of| {
            (0..n_v)
                .map(|v| {
                    index[&NerveArc {
                        edge: edge_of(v),
                        map: vec![v; t.x_len()],
                    }]
                })
                .collect::<Vec<_>>()
        });
        let inc = arcs.iter().map(|a| a.map.clone()).collect();
        let unit_act = |a: usize, m: usize| {
            let arc = &arcs[a];
            let moved = NerveArc {
                edge: arc.edge,
                map: (0..t.x_len()).map(|x| arc.map[t.act_x(x, m)]).collect(),
            };
            index[&moved]
        };
        let vnames = vertex_parts.iter().map(|p| p.to_string()).collect();
        let anames = arcs
            .iter()
            .map(|a| {
                if arcs.iter().filter(|b| b.edge == a.edge).count() == 1 {
                    a.edge.to_string()
                } else {
                    let map: Vec<String> =
                        a.map.iter().map(|&v| vertex_parts[v].to_string()).collect();
                    format!("{}:{}", a.edge, map.join(""))
                }
            })
            .collect();
        let graph =
            assemble(theory, n_v, inc, unit_act, loops)?.with_names(Some(vnames), Some(anames))?;
        Ok(Nerve {
            graph: Arc::new(graph),
            vertex_parts,
            arcs,
            index,
        })
    }
}

/// All maps `X → support` (as vertex indices) whose induced value equals
/// `target`.
fn maps_onto(
    x_len: usize,
    support: &[usize],
    target: &[usize],
    value: fn(&[usize]) -> Vec<usize>,
) -> Vec<Vec<usize>> {
    if x_len == 0 {
        return if value(&[]) == target {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    (0..x_len)
        .map(|_| support.iter().copied())
        .multi_cartesian_product()
        .filter(|m| value(m) == target)
        .collect()
}

fn sorted_values(m: &[usize]) -> Vec<usize> {
    let mut v = m.to_vec();
    v.sort_unstable();
    v
}

fn set_values(m: &[usize]) -> Vec<usize> {
    let mut v = sorted_values(m);
    v.dedup();
    v
}

/// Edges of a realization: arc orbits under the units, and for each arc its
/// orbit index.
fn orbit_quotient(g: &XMGraph) -> (Vec<Vec<usize>>, Vec<usize>) {
    let orbits = arc_orbits(g);
    let mut class = vec![0; g.arc_count()];
    for (i, orbit) in orbits.iter().enumerate() {
        for &a in orbit {
            class[a] = i;
        }
    }
    (orbits, class)
}

fn require_symmetric(g: &XMGraph, reflexive: bool) -> Result<()> {
    let want = if reflexive {
        crate::algebra::MonoidKind::ReflexiveSymmetric
    } else {
        crate::algebra::MonoidKind::Symmetric
    };
    if g.theory().kind() == Some(want) {
        Ok(())
    } else {
        Err(Error::TheoryMismatch(format!(
            "expected a {want} graph, got {}",
            g.theory().label()
        )))
    }
}

/// A morphism between hypergraphs or power graphs: vertex and edge tables
/// making the incidence square commute.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeMorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

/// Unit or counit data with per-component bijectivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub vertex_map: Vec<usize>,
    pub arc_map: Vec<usize>,
    pub vertices_bijective: bool,
    pub arcs_bijective: bool,
}

impl Comparison {
    fn new(vertex_map: Vec<usize>, n_v: usize, arc_map: Vec<usize>, n_a: usize) -> Self {
        let bij = |m: &[usize], n: usize| m.len() == n && m.iter().copied().sorted().eq(0..n);
        Comparison {
            vertices_bijective: bij(&vertex_map, n_v),
            arcs_bijective: bij(&arc_map, n_a),
            vertex_map,
            arc_map,
        }
    }

    pub fn is_iso(&self) -> bool {
        self.vertices_bijective && self.arcs_bijective
    }

    pub fn arcs_surjective(&self, n_a: usize) -> bool {
        let mut hit = vec![false; n_a];
        self.arc_map.iter().for_each(|&a| hit[a] = true);
        hit.into_iter().all(|h| h)
    }
}

/// Morphisms between two edge-labelled comma objects: vertex tables first,
/// then each edge independently among targets with the right induced
/// incidence.
fn comma_homs(
    src: (usize, &[Vec<usize>]),
    dst: (usize, &[Vec<usize>]),
    apply: fn(&[usize], &[usize]) -> Vec<usize>,
    budget: u64,
) -> Result<Vec<EdgeMorphism>> {
    let (sv, se) = src;
    let (dv, de) = dst;
    let mut by_value: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for (i, e) in de.iter().enumerate() {
        by_value.entry(e.as_slice()).or_default().push(i);
    }
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let vertex_tables: Box<dyn Iterator<Item = Vec<usize>>> = if sv == 0 {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new((0..sv).map(|_| 0..dv).multi_cartesian_product())
    };
    let empty = Vec::new();
    for vmap in vertex_tables {
        nodes += 1;
        let cands: Vec<&Vec<usize>> = se
            .iter()
            .map(|e| by_value.get(apply(&vmap, e).as_slice()).unwrap_or(&empty))
            .collect();
        if cands.iter().any(|c| c.is_empty()) {
            continue;
        }
        if se.is_empty() {
            out.push(EdgeMorphism {
                vertex_map: vmap,
                edge_map: Vec::new(),
            });
            continue;
        }
        for emap in cands
            .iter()
            .map(|c| c.iter().copied())
            .multi_cartesian_product()
        {
            nodes += 1;
            if nodes > budget {
                return Err(Error::Capacity(format!(
                    "comma-category search exceeded {budget} nodes"
                )));
            }
            out.push(EdgeMorphism {
                vertex_map: vmap.clone(),
                edge_map: emap,
            });
        }
        if nodes > budget {
            return Err(Error::Capacity(format!(
                "comma-category search exceeded {budget} nodes"
            )));
        }
    }
    Ok(out)
}

/// Nerve of a hypergraph or power graph over `X` of size `x_len`.
fn comma_nerve(
    theory: &Arc<Theory>,
    n_v: usize,
    edges: &[Vec<usize>],
    value: fn(&[usize]) -> Vec<usize>,
) -> Result<Nerve> {
    let nx = theory.x_len();
    let mut arcs = Vec::new();
    for (e, target) in edges.iter().enumerate() {
        let support = set_values(target);
        for map in maps_onto(nx, &support, target, value) {
            arcs.push(NerveArc { edge: e, map });
        }
    }
    Nerve::build(theory, (0..n_v).collect(), arcs, None)
}

/// `N(f)` for a comma morphism `f`: `v ↦ f(v)`, `(e, g) ↦ (f(e), f ∘ g)`.
fn comma_nerve_map(f: &EdgeMorphism, src: &Nerve, dst: &Nerve) -> Result<GraphMorphism> {
    let a = src
        .arcs
        .iter()
        .map(|arc| {
            dst.arc_of(&NerveArc {
                edge: f.edge_map[arc.edge],
                map: arc.map.iter().map(|&v| f.vertex_map[v]).collect(),
            })
            .ok_or_else(|| Error::invalid("morphism", "image arc missing from the target nerve"))
        })
        .collect::<Result<_>>()?;
    GraphMorphism::new(
        src.graph.clone(),
        dst.graph.clone(),
        f.vertex_map.clone(),
        a,
    )
}

pub(crate) fn default_budget() -> u64 {
    crate::graph::search_budget()
}
