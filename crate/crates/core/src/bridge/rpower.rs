use std::sync::Arc;

use itertools::Itertools;

use super::hyper::AdjunctionCheck;
use super::{
    default_budget, maps_onto, multiset_map, orbit_quotient, require_symmetric, sorted_values,
    Comparison, Nerve, NerveArc,
};
use crate::algebra::MonoidKind;
use crate::error::{Error, Result};
use crate::graph::{enumerate_homs, GraphMorphism, XMGraph};
use crate::theory::Theory;

/// A reflexive power graph: parts, a subset of them marked as vertices, and
/// for every part a multiset of `arity` vertices. Vertices are degenerate
/// edges `(v, …, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflexiveFGraph {
    arity: usize,
    is_vertex: Vec<bool>,
    inc: Vec<Vec<usize>>,
}

/// A parts map preserving vertices and incidence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RfMorphism {
    pub parts: Vec<usize>,
}

impl ReflexiveFGraph {
    pub fn new(arity: usize, is_vertex: Vec<bool>, inc: Vec<Vec<usize>>) -> Result<Self> {
        let n = is_vertex.len();
        if inc.len() != n {
            return Err(Error::invalid(
                "reflexive power graph",
                "one incidence entry per part is required",
            ));
        }
        let inc: Vec<Vec<usize>> = inc.iter().map(|m| sorted_values(m)).collect();
        for (p, m) in inc.iter().enumerate() {
            if m.len() != arity {
                return Err(Error::invalid(
                    "reflexive power graph",
                    format!(
                        "part {p} has {} incident vertices, expected {arity}",
                        m.len()
                    ),
                ));
            }
            if let Some(&w) = m.iter().find(|&&w| w >= n || !is_vertex[w]) {
                return Err(Error::invalid(
                    "reflexive power graph",
                    format!("part {p} is incident to {w}, which is not a vertex"),
                ));
            }
            if is_vertex[p] && m.iter().any(|&w| w != p) {
                return Err(Error::invalid(
                    "reflexive power graph",
                    format!("vertex {p} must be its own degenerate edge"),
                ));
            }
        }
        Ok(Self {
            arity,
            is_vertex,
            inc,
        })
    }

    /// Vertices `0..n_vertices` followed by one part per edge.
    pub fn with_edges(arity: usize, n_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut is_vertex = vec![true; n_vertices];
        is_vertex.extend(std::iter::repeat_n(false, edges.len()));
        let mut inc: Vec<Vec<usize>> = (0..n_vertices).map(|v| vec![v; arity]).collect();
        inc.extend(edges);
        Self::new(arity, is_vertex, inc)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn part_count(&self) -> usize {
        self.is_vertex.len()
    }

    pub fn is_vertex(&self, p: usize) -> bool {
        self.is_vertex[p]
    }

    pub fn vertex_parts(&self) -> Vec<usize> {
        (0..self.part_count())
            .filter(|&p| self.is_vertex[p])
            .collect()
    }

    pub fn inc(&self, p: usize) -> &[usize] {
        &self.inc[p]
    }

    pub fn interpretation_vertex(arity: usize) -> Self {
        Self {
            arity,
            is_vertex: vec![true],
            inc: vec![vec![0; arity]],
        }
    }

    /// The image of `A`: parts `M_A ≅ 1 ⊔ X`, listed as `⊤` (the class of
    /// the units) followed by the constants, which are the vertices.
    pub fn interpretation_arc(arity: usize) -> Self {
        let mut is_vertex = vec![false];
        is_vertex.extend(std::iter::repeat_n(true, arity));
        let mut inc = vec![(1..=arity).collect::<Vec<_>>()];
        inc.extend((1..=arity).map(|p| vec![p; arity]));
        Self {
            arity,
            is_vertex,
            inc,
        }
    }

    fn require_arity(&self, other: &ReflexiveFGraph) -> Result<()> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(Error::TheoryMismatch(format!(
                "reflexive power graphs of arity {} and {}",
                self.arity, other.arity
            )))
        }
    }

    pub fn is_morphism(&self, other: &ReflexiveFGraph, f: &RfMorphism) -> bool {
        f.parts.len() == self.part_count()
            && f.parts.iter().all(|&q| q < other.part_count())
            && (0..self.part_count()).all(|p| {
                (!self.is_vertex[p] || other.is_vertex[f.parts[p]])
                    && other.inc[f.parts[p]] == multiset_map(&f.parts, &self.inc[p])
            })
    }

    /// All morphisms, vertices first; every other part then maps
    /// independently to any part with the induced incidence.
    pub fn homs(&self, other: &ReflexiveFGraph) -> Result<Vec<RfMorphism>> {
        self.require_arity(other)?;
        let budget = default_budget();
        let (sv, tv) = (self.vertex_parts(), other.vertex_parts());
        let edges: Vec<usize> = (0..self.part_count())
            .filter(|&p| !self.is_vertex[p])
            .collect();
        let vertex_tables: Box<dyn Iterator<Item = Vec<usize>>> = if sv.is_empty() {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(
                sv.iter()
                    .map(|_| tv.iter().copied())
                    .multi_cartesian_product(),
            )
        };
        let mut out = Vec::new();
        let mut nodes = 0u64;
        for vt in vertex_tables {
            nodes += 1;
            let mut parts = vec![usize::MAX; self.part_count()];
            for (&p, &q) in sv.iter().zip(&vt) {
                parts[p] = q;
            }
            let cands: Vec<Vec<usize>> = edges
                .iter()
                .map(|&e| {
                    let want = multiset_map(&parts, &self.inc[e]);
                    (0..other.part_count())
                        .filter(|&q| other.inc[q] == want)
                        .collect()
                })
                .collect();
            if cands.iter().any(Vec::is_empty) {
                continue;
            }
            let choices: Box<dyn Iterator<Item = Vec<usize>>> = if edges.is_empty() {
                Box::new(std::iter::once(Vec::new()))
            } else {
                Box::new(cands.into_iter().multi_cartesian_product())
            };
            for choice in choices {
                nodes += 1;
                if nodes > budget {
                    return Err(Error::Capacity(format!(
                        "comma-category search exceeded {budget} nodes"
                    )));
                }
                let mut full = parts.clone();
                for (&e, &q) in edges.iter().zip(&choice) {
                    full[e] = q;
                }
                out.push(RfMorphism { parts: full });
            }
        }
        out.sort();
        Ok(out)
    }

    /// Position of every vertex part among the vertex parts.
    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.part_count()];
        for (i, p) in self.vertex_parts().into_iter().enumerate() {
            pos[p] = i;
        }
        pos
    }

    /// Arcs are pairs `(p, g : X → V)` with `multiset(g) = ∂(p)`; the
    /// distinguished loop of `v` is `(v, const_v)`.
    pub fn nerve(&self) -> Result<Nerve> {
        let t = Theory::standard(MonoidKind::ReflexiveSymmetric, self.arity)?;
        let pos = self.positions();
        let vertex_parts = self.vertex_parts();
        let mut arcs = Vec::new();
        for p in 0..self.part_count() {
            let target: Vec<usize> = self.inc[p].iter().map(|&w| pos[w]).collect();
            let mut support = target.clone();
            support.dedup();
            for map in maps_onto(self.arity, &support, &target, super::sorted_values) {
                arcs.push(NerveArc { edge: p, map });
            }
        }
        let vp = vertex_parts.clone();
        Nerve::build(&t, vertex_parts, arcs, Some(&move |v| vp[v]))
    }

    pub fn nerve_map(f: &RfMorphism, src: &Nerve, dst: &Nerve) -> Result<GraphMorphism> {
        let mut pos = std::collections::HashMap::new();
        for (i, &p) in dst.vertex_parts.iter().enumerate() {
            pos.insert(p, i);
        }
        let vmap: Vec<usize> = src
            .vertex_parts
            .iter()
            .map(|p| {
                pos.get(&f.parts[*p])
                    .copied()
                    .ok_or_else(|| Error::invalid("morphism", "vertex sent to a non-vertex"))
            })
            .collect::<Result<_>>()?;
        let amap = src
            .arcs
            .iter()
            .map(|arc| {
                dst.arc_of(&NerveArc {
                    edge: f.parts[arc.edge],
                    map: arc.map.iter().map(|&v| vmap[v]).collect(),
                })
                .ok_or_else(|| {
                    Error::invalid("morphism", "image arc missing from the target nerve")
                })
            })
            .collect::<Result<_>>()?;
        GraphMorphism::new(src.graph.clone(), dst.graph.clone(), vmap, amap)
    }

    /// Parts are arc orbits; vertex parts are the orbits of distinguished
    /// loops. Also returns the part of every arc.
    pub fn realize(g: &XMGraph) -> Result<(ReflexiveFGraph, Vec<usize>)> {
        require_symmetric(g, true)?;
        let (orbits, class) = orbit_quotient(g);
        let is_vertex = orbits.iter().map(|o| g.is_distinguished(o[0])).collect();
        let inc = orbits
            .iter()
            .map(|o| {
                g.profile(o[0])
                    .iter()
                    .map(|&v| class[g.loops()[v]])
                    .collect()
            })
            .collect();
        Ok((
            ReflexiveFGraph::new(g.theory().x_len(), is_vertex, inc)?,
            class,
        ))
    }

    pub fn unit(g: &XMGraph) -> Result<Comparison> {
        let (r, class) = Self::realize(g)?;
        let n = r.nerve()?;
        let pos = r.positions();
        let vmap: Vec<usize> = (0..g.vertex_count())
            .map(|v| pos[class[g.loops()[v]]])
            .collect();
        let amap = (0..g.arc_count())
            .map(|a| {
                n.arc_of(&NerveArc {
                    edge: class[a],
                    map: g.profile(a).iter().map(|&v| vmap[v]).collect(),
                })
                .ok_or_else(|| {
                    Error::invalid("unit", "arc missing from the nerve of its realization")
                })
            })
            .collect::<Result<_>>()?;
        Ok(Comparison::new(
            vmap,
            n.graph.vertex_count(),
            amap,
            n.graph.arc_count(),
        ))
    }

    /// `ε : R(N(R)) → R`, reported on vertex parts and on all parts.
    pub fn counit(&self) -> Result<Comparison> {
        let n = self.nerve()?;
        let (r, _) = Self::realize(&n.graph)?;
        let (orbits, _) = orbit_quotient(&n.graph);
        let parts: Vec<usize> = orbits.iter().map(|o| n.arcs[o[0]].edge).collect();
        let pos = self.positions();
        let vmap = r.vertex_parts().iter().map(|&p| pos[parts[p]]).collect();
        Ok(Comparison::new(
            vmap,
            self.vertex_parts().len(),
            parts,
            self.part_count(),
        ))
    }

    pub fn is_fixed_point(&self) -> Result<bool> {
        Ok(self.counit()?.is_iso())
    }

    pub fn adjunction_check(g: &Arc<XMGraph>, r: &ReflexiveFGraph) -> Result<AdjunctionCheck> {
        let (rg, class) = Self::realize(g)?;
        let n = r.nerve()?;
        let left = rg.homs(r)?;
        let right = enumerate_homs(g, &n.graph)?;
        let pos_dst = r.positions();
        let transposes = left
            .iter()
            .map(|phi| {
                let vmap: Vec<usize> = (0..g.vertex_count())
                    .map(|v| pos_dst[phi.parts[class[g.loops()[v]]]])
                    .collect();
                let amap = (0..g.arc_count())
                    .map(|a| {
                        n.arc_of(&NerveArc {
                            edge: phi.parts[class[a]],
                            map: g.profile(a).iter().map(|&v| vmap[v]).collect(),
                        })
                        .ok_or_else(|| {
                            Error::invalid("morphism", "transposed arc missing from the nerve")
                        })
                    })
                    .collect::<Result<_>>()?;
                GraphMorphism::new(g.clone(), n.graph.clone(), vmap, amap)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AdjunctionCheck::new(left.len(), right, transposes))
    }

    pub fn nerve_fullness(&self, other: &ReflexiveFGraph) -> Result<AdjunctionCheck> {
        let (np, nq) = (self.nerve()?, other.nerve()?);
        let homs = self.homs(other)?;
        let images = homs
            .iter()
            .map(|f| Self::nerve_map(f, &np, &nq))
            .collect::<Result<Vec<_>>>()?;
        let right = enumerate_homs(&np.graph, &nq.graph)?;
        Ok(AdjunctionCheck::new(homs.len(), right, images))
    }
}

/// Disjoint union of parts; the parts of `b` follow those of `a`.
pub fn rf_coproduct(a: &ReflexiveFGraph, b: &ReflexiveFGraph) -> Result<ReflexiveFGraph> {
    a.require_arity(b)?;
    let off = a.part_count();
    let mut is_vertex = a.is_vertex.clone();
    is_vertex.extend(&b.is_vertex);
    let mut inc = a.inc.clone();
    inc.extend(b.inc.iter().map(|m| m.iter().map(|w| w + off).collect()));
    ReflexiveFGraph::new(a.arity, is_vertex, inc)
}

/// Coequalizer of `f, g : src → dst`: parts of `dst` modulo the equivalence
/// generated by `f(p) ~ g(p)`, with the classes containing a vertex as
/// vertices. Returns the quotient and the class of every part of `dst`.
pub fn rf_coequalizer(
    src: &ReflexiveFGraph,
    dst: &ReflexiveFGraph,
    f: &RfMorphism,
    g: &RfMorphism,
) -> Result<(ReflexiveFGraph, Vec<usize>)> {
    if !src.is_morphism(dst, f) || !src.is_morphism(dst, g) {
        return Err(Error::NotComposable(
            "coequalizer needs a parallel pair of morphisms".into(),
        ));
    }
    let n = dst.part_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for p in 0..src.part_count() {
        let (a, b) = (find(&mut parent, f.parts[p]), find(&mut parent, g.parts[p]));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for p in 0..n {
        let r = find(&mut parent, p);
        if class[r] == usize::MAX {
            class[r] = reps.len();
            reps.push(r);
        }
        class[p] = class[r];
    }
    let mut is_vertex = vec![false; reps.len()];
    for p in 0..n {
        if dst.is_vertex[p] {
            is_vertex[class[p]] = true;
        }
    }
    let inc = (0..reps.len())
        .map(|c| {
            // a vertex class takes its incidence from a vertex member
            let member = (0..n)
                .find(|&p| class[p] == c && (dst.is_vertex[p] || !is_vertex[c]))
                .expect("nonempty class");
            dst.inc[member].iter().map(|&w| class[w]).collect()
        })
        .collect();
    Ok((ReflexiveFGraph::new(dst.arity, is_vertex, inc)?, class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        arc_orbits, classify_arcs, find_isomorphism, representable, ArcKind, Representable,
    };
    use crate::random;

    fn srx2() -> Arc<Theory> {
        Theory::standard(MonoidKind::ReflexiveSymmetric, 2).unwrap()
    }

    #[test]
    fn interpretation_nerves_are_representable() {
        let n = ReflexiveFGraph::interpretation_arc(2).nerve().unwrap();
        assert_eq!((n.graph.vertex_count(), n.graph.arc_count()), (2, 4));
        let a = Arc::new(representable(&srx2(), Representable::A));
        assert!(find_isomorphism(&n.graph, &a).unwrap().is_some());
        let n = ReflexiveFGraph::interpretation_vertex(2).nerve().unwrap();
        assert!(n.graph.same_data(&representable(&srx2(), Representable::V)));
    }

    #[test]
    fn realize_reflexive_loops() {
        let (r, _) =
            ReflexiveFGraph::realize(&crate::catalog::loops_reflexive(2).unwrap()).unwrap();
        assert_eq!(r.part_count(), 2);
        assert_eq!(r.vertex_parts(), [0]);
        assert_eq!(r.inc(1), [0, 0]);
    }

    #[test]
    fn coproduct_and_coequalizer() {
        let v = ReflexiveFGraph::interpretation_vertex(2);
        let vv = rf_coproduct(&v, &v).unwrap();
        assert_eq!((vv.part_count(), vv.vertex_parts().len()), (2, 2));

        let edge = ReflexiveFGraph::with_edges(2, 2, vec![vec![0, 1]]).unwrap();
        let f = RfMorphism { parts: vec![0] };
        let g = RfMorphism { parts: vec![1] };
        let (q, class) = rf_coequalizer(&v, &edge, &f, &g).unwrap();
        assert_eq!(q.part_count(), 2);
        assert_eq!(q.inc(class[2]), [0, 0]);
        let (same, _) = rf_coequalizer(&v, &edge, &f, &f).unwrap();
        assert_eq!(same, edge);
        assert!(rf_coequalizer(&v, &edge, &f, &RfMorphism { parts: vec![2] }).is_err());
    }

    #[test]
    fn nerves_have_only_fixed_loops() {
        let mut rng = random::rng(3);
        for _ in 0..30 {
            let r = random::random_rf_graph(&mut rng, 2, 3, 3);
            let n = r.nerve().unwrap();
            for orbit in arc_orbits(&n.graph) {
                if n.graph.is_loop(orbit[0]) {
                    assert_eq!(orbit.len(), 1);
                }
            }
            assert!(classify_arcs(&n.graph)
                .iter()
                .all(|c| c.kind != ArcKind::UnfixedLoop));
            assert!(r.is_fixed_point().unwrap());
        }
    }

    #[test]
    fn unit_properties_and_adjunction() {
        let t = srx2();
        let mut rng = random::rng(21);
        for _ in 0..15 {
            let g = Arc::new(random::random_graph(&t, &mut rng, 3, 4));
            let u = ReflexiveFGraph::unit(&g).unwrap();
            assert!(u.vertices_bijective);
            let r = random::random_rf_graph(&mut rng, 2, 2, 2);
            assert!(ReflexiveFGraph::adjunction_check(&g, &r).unwrap().passed());
            let s = random::random_rf_graph(&mut rng, 2, 2, 2);
            assert!(r.nerve_fullness(&s).unwrap().passed());
        }
    }
}
