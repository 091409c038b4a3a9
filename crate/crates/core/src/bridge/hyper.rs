use std::sync::Arc;

use super::{
    comma_homs, comma_nerve, comma_nerve_map, default_budget, image_map, orbit_quotient,
    require_symmetric, set_values, Comparison, EdgeMorphism, Nerve, NerveArc,
};
use crate::algebra::MonoidKind;
use crate::error::{Error, Result};
use crate::graph::{enumerate_homs, GraphMorphism, XMGraph};
use crate::theory::Theory;

/// A hypergraph: each edge is a set of vertices (possibly empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n_v: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Edges are normalized to sorted, duplicate-free vertex lists.
    pub fn new(n_v: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let edges: Vec<Vec<usize>> = edges.iter().map(|e| set_values(e)).collect();
        if let Some((e, _)) = edges
            .iter()
            .enumerate()
            .find(|(_, e)| e.iter().any(|&v| v >= n_v))
        {
            return Err(Error::invalid(
                "hypergraph",
                format!("edge {e} refers to a vertex outside 0..{n_v}"),
            ));
        }
        Ok(Self { n_v, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n_v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Cardinality of each edge.
    pub fn uniformity_profile(&self) -> Vec<usize> {
        self.edges.iter().map(Vec::len).collect()
    }

    pub fn is_k_uniform(&self, k: usize) -> bool {
        self.edges.iter().all(|e| e.len() == k)
    }

    /// The image of `V`: one vertex, no edges.
    pub fn interpretation_vertex() -> Self {
        Self {
            n_v: 1,
            edges: Vec::new(),
        }
    }

    /// The image of `A`: the vertices `X` and one edge containing all of them.
    pub fn interpretation_arc(x_len: usize) -> Self {
        Self {
            n_v: x_len,
            edges: vec![(0..x_len).collect()],
        }
    }

    pub fn homs(&self, other: &Hypergraph) -> Result<Vec<EdgeMorphism>> {
        comma_homs(
            (self.n_v, &self.edges),
            (other.n_v, &other.edges),
            image_map,
            default_budget(),
        )
    }

    /// Arcs are pairs `(β, f : X → V)` with `image(f) = φ(β)`.
    pub fn nerve(&self, x_len: usize) -> Result<Nerve> {
        let t = Theory::standard(MonoidKind::Symmetric, x_len)?;
        comma_nerve(&t, self.n_v, &self.edges, set_values)
    }

    pub fn nerve_map(f: &EdgeMorphism, src: &Nerve, dst: &Nerve) -> Result<GraphMorphism> {
        comma_nerve_map(f, src, dst)
    }

    /// Edges are arc orbits, each incident to the image of its profile.
    /// Also returns the orbit index of every arc.
    pub fn realize(g: &XMGraph) -> Result<(Hypergraph, Vec<usize>)> {
        require_symmetric(g, false)?;
        let (orbits, class) = orbit_quotient(g);
        let edges = orbits.iter().map(|o| set_values(g.profile(o[0]))).collect();
        Ok((Hypergraph::new(g.vertex_count(), edges)?, class))
    }

    /// `η_G : G → N(R(G))`.
    pub fn unit(g: &XMGraph) -> Result<Comparison> {
        let (r, class) = Self::realize(g)?;
        let n = r.nerve(g.theory().x_len())?;
        unit_from(g, &n, &class)
    }

    /// `ε_H : R(N(H)) → H`.
    pub fn counit(&self, x_len: usize) -> Result<Comparison> {
        let n = self.nerve(x_len)?;
        let (r, _) = Self::realize(&n.graph)?;
        let (orbits, _) = orbit_quotient(&n.graph);
        let edge_map = orbits.iter().map(|o| n.arcs[o[0]].edge).collect();
        debug_assert_eq!(r.vertex_count(), self.n_v);
        Ok(Comparison::new(
            (0..self.n_v).collect(),
            self.n_v,
            edge_map,
            self.edges.len(),
        ))
    }

    pub fn is_fixed_point(&self, x_len: usize) -> Result<bool> {
        Ok(self.counit(x_len)?.is_iso())
    }

    /// Both sides of `hom(R(G), H) ≅ hom(G, N(H))`, with injectivity of the
    /// transpose.
    pub fn adjunction_check(g: &Arc<XMGraph>, h: &Hypergraph) -> Result<AdjunctionCheck> {
        let (r, class) = Self::realize(g)?;
        let n = h.nerve(g.theory().x_len())?;
        let left = r.homs(h)?;
        let right = enumerate_homs(g, &n.graph)?;
        let transposes = left
            .iter()
            .map(|phi| transpose(g, &class, phi, &n))
            .collect::<Result<Vec<_>>>()?;
        Ok(AdjunctionCheck::new(left.len(), right, transposes))
    }
}

pub(super) fn unit_from(g: &XMGraph, n: &Nerve, class: &[usize]) -> Result<Comparison> {
    let arc_map = (0..g.arc_count())
        .map(|a| {
            n.arc_of(&NerveArc {
                edge: class[a],
                map: g.profile(a).to_vec(),
            })
            .ok_or_else(|| {
                Error::invalid(
                    "unit",
                    "arc profile missing from the nerve of its realization",
                )
            })
        })
        .collect::<Result<_>>()?;
    Ok(Comparison::new(
        (0..g.vertex_count()).collect(),
        n.graph.vertex_count(),
        arc_map,
        n.graph.arc_count(),
    ))
}

/// The transpose `G → N(H)` of `φ : R(G) → H`.
pub(super) fn transpose(
    g: &Arc<XMGraph>,
    class: &[usize],
    phi: &EdgeMorphism,
    n: &Nerve,
) -> Result<GraphMorphism> {
    let a = (0..g.arc_count())
        .map(|a| {
            n.arc_of(&NerveArc {
                edge: phi.edge_map[class[a]],
                map: g.profile(a).iter().map(|&v| phi.vertex_map[v]).collect(),
            })
            .ok_or_else(|| Error::invalid("morphism", "transposed arc missing from the nerve"))
        })
        .collect::<Result<_>>()?;
    GraphMorphism::new(g.clone(), n.graph.clone(), phi.vertex_map.clone(), a)
}

/// Outcome of comparing the two hom-sets of an adjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionCheck {
    pub left: usize,
    pub right: usize,
    pub transpose_injective: bool,
    pub transpose_surjective: bool,
}

impl AdjunctionCheck {
    pub(super) fn new(
        left: usize,
        right: Vec<GraphMorphism>,
        transposes: Vec<GraphMorphism>,
    ) -> Self {
        let key = |f: &GraphMorphism| (f.vertex_map().to_vec(), f.arc_map().to_vec());
        let mut images: Vec<_> = transposes.iter().map(key).collect();
        images.sort();
        let n_images = images.len();
        images.dedup();
        let injective = images.len() == n_images;
        let right_keys: std::collections::HashSet<_> = right.iter().map(key).collect();
        let surjective = right_keys.iter().all(|k| images.binary_search(k).is_ok());
        AdjunctionCheck {
            left,
            right: right.len(),
            transpose_injective: injective,
            transpose_surjective: surjective,
        }
    }

    pub fn passed(&self) -> bool {
        self.left == self.right && self.transpose_injective && self.transpose_surjective
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{classify_arcs, representable, ArcKind, Representable};

    #[test]
    fn uniformity() {
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(h.uniformity_profile(), [2, 3]);
        assert!(!h.is_k_uniform(2));
        assert!(Hypergraph::new(2, vec![vec![1, 0]])
            .unwrap()
            .is_k_uniform(2));
        assert_eq!(
            Hypergraph::new(2, vec![vec![]])
                .unwrap()
                .uniformity_profile(),
            [0]
        );
        assert!(Hypergraph::new(2, vec![vec![2]]).is_err());
    }

    #[test]
    fn nerve_arc_counts() {
        let two = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(two.nerve(2).unwrap().graph.arc_count(), 2);
        let three = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(three.nerve(2).unwrap().graph.arc_count(), 0);
        let one = Hypergraph::new(1, vec![vec![0]]).unwrap();
        let n = one.nerve(2).unwrap();
        assert_eq!(n.graph.arc_count(), 1);
        assert_eq!(classify_arcs(&n.graph)[0].kind, ArcKind::FixedLoop);
    }

    #[test]
    fn realizations() {
        let t = Theory::standard(MonoidKind::Symmetric, 2).unwrap();
        let (r, _) = Hypergraph::realize(&representable(&t, Representable::A)).unwrap();
        assert_eq!(r.edges(), [vec![0, 1]]);
        let (r, _) = Hypergraph::realize(&crate::catalog::loops_symmetric(2).unwrap()).unwrap();
        assert_eq!(r.edges(), [vec![0], vec![0]]);
        let (r, _) = Hypergraph::realize(&crate::limits::initial(&t)).unwrap();
        assert_eq!((r.vertex_count(), r.edge_count()), (0, 0));
        let wrong = Theory::standard(MonoidKind::Oriented, 2).unwrap();
        assert!(Hypergraph::realize(&representable(&wrong, Representable::A)).is_err());
    }

    #[test]
    fn counit_and_fixed_points() {
        let two = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        assert!(two.counit(2).unwrap().is_iso());
        let three = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(!three.counit(2).unwrap().is_iso());
        let single = Hypergraph::new(1, vec![vec![0]]).unwrap();
        assert!(single.is_fixed_point(2).unwrap());
    }

    #[test]
    fn unit_fails_on_unfixed_loops() {
        let l = crate::expo::exponential(
            &Arc::new(crate::catalog::loops_symmetric(2).unwrap()),
            &Arc::new(representable(
                &Theory::standard(MonoidKind::Symmetric, 2).unwrap(),
                Representable::A,
            )),
        )
        .unwrap();
        let unit = Hypergraph::unit(&l.graph).unwrap();
        assert!(unit.vertices_bijective);
        assert!(!unit.arcs_bijective);
    }

    #[test]
    fn homs_from_the_vertex_pick_vertices() {
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(
            Hypergraph::interpretation_vertex().homs(&h).unwrap().len(),
            3
        );
        assert_eq!(
            Hypergraph::interpretation_arc(2).homs(&h).unwrap().len(),
            2 + 1
        );
    }
}
