use std::sync::Arc;

use super::hyper::{transpose, unit_from, AdjunctionCheck};
use super::{
    comma_homs, comma_nerve, comma_nerve_map, default_budget, multiset_map, orbit_quotient,
    require_symmetric, sorted_values, Comparison, EdgeMorphism, Nerve,
};
use crate::algebra::MonoidKind;
use crate::error::{Error, Result};
use crate::graph::{enumerate_homs, GraphMorphism, XMGraph};
use crate::theory::Theory;

/// A power graph: each edge is a multiset of exactly `arity` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerGraph {
    arity: usize,
    n_v: usize,
    edges: Vec<Vec<usize>>,
}

impl PowerGraph {
    /// Edges are normalized to sorted vertex lists with multiplicity.
    pub fn new(arity: usize, n_v: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let edges: Vec<Vec<usize>> = edges.iter().map(|e| sorted_values(e)).collect();
        for (i, e) in edges.iter().enumerate() {
            if e.len() != arity {
                return Err(Error::invalid(
                    "power graph",
                    format!("edge {i} has {} entries, expected {arity}", e.len()),
                ));
            }
            if e.iter().any(|&v| v >= n_v) {
                return Err(Error::invalid(
                    "power graph",
                    format!("edge {i} refers to a vertex outside 0..{n_v}"),
                ));
            }
        }
        Ok(Self { arity, n_v, edges })
    }

    pub fn arity(&self) -> usize {
        self.arity
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

    pub fn interpretation_vertex(arity: usize) -> Self {
        Self {
            arity,
            n_v: 1,
            edges: Vec::new(),
        }
    }

    /// The image of `A`: vertices `X` and the single edge `(x)_{x∈X}`.
    pub fn interpretation_arc(arity: usize) -> Self {
        Self {
            arity,
            n_v: arity,
            edges: vec![(0..arity).collect()],
        }
    }

    fn require_arity(&self, other: &PowerGraph) -> Result<()> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(Error::TheoryMismatch(format!(
                "power graphs of arity {} and {}",
                self.arity, other.arity
            )))
        }
    }

    pub fn homs(&self, other: &PowerGraph) -> Result<Vec<EdgeMorphism>> {
        self.require_arity(other)?;
        comma_homs(
            (self.n_v, &self.edges),
            (other.n_v, &other.edges),
            multiset_map,
            default_budget(),
        )
    }

    /// Arcs are pairs `(e, g : X → V)` with `multiset(g) = φ(e)`.
    pub fn nerve(&self) -> Result<Nerve> {
        let t = Theory::standard(MonoidKind::Symmetric, self.arity)?;
        comma_nerve(&t, self.n_v, &self.edges, sorted_values)
    }

    pub fn nerve_map(f: &EdgeMorphism, src: &Nerve, dst: &Nerve) -> Result<GraphMorphism> {
        comma_nerve_map(f, src, dst)
    }

    /// Edges are arc orbits, each with the multiset of its profile.
    pub fn realize(g: &XMGraph) -> Result<(PowerGraph, Vec<usize>)> {
        require_symmetric(g, false)?;
        let (orbits, class) = orbit_quotient(g);
        let edges = orbits
            .iter()
            .map(|o| sorted_values(g.profile(o[0])))
            .collect();
        Ok((
            PowerGraph::new(g.theory().x_len(), g.vertex_count(), edges)?,
            class,
        ))
    }

    pub fn unit(g: &XMGraph) -> Result<Comparison> {
        let (r, class) = Self::realize(g)?;
        unit_from(g, &r.nerve()?, &class)
    }

    pub fn counit(&self) -> Result<Comparison> {
        let n = self.nerve()?;
        let (orbits, _) = orbit_quotient(&n.graph);
        let edge_map = orbits.iter().map(|o| n.arcs[o[0]].edge).collect();
        Ok(Comparison::new(
            (0..self.n_v).collect(),
            self.n_v,
            edge_map,
            self.edges.len(),
        ))
    }

    pub fn is_fixed_point(&self) -> Result<bool> {
        Ok(self.counit()?.is_iso())
    }

    pub fn adjunction_check(g: &Arc<XMGraph>, p: &PowerGraph) -> Result<AdjunctionCheck> {
        let (r, class) = Self::realize(g)?;
        let n = p.nerve()?;
        let left = r.homs(p)?;
        let right = enumerate_homs(g, &n.graph)?;
        let transposes = left
            .iter()
            .map(|phi| transpose(g, &class, phi, &n))
            .collect::<Result<Vec<_>>>()?;
        Ok(AdjunctionCheck::new(left.len(), right, transposes))
    }

    /// Hom-set sizes on both sides of the nerve and injectivity of
    /// `f ↦ N(f)`.
    pub fn nerve_fullness(&self, other: &PowerGraph) -> Result<AdjunctionCheck> {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{arc_orbits, classify_arcs, representable, ArcKind, Representable};
    use crate::random;

    #[test]
    fn nerve_counts() {
        let ab = PowerGraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(ab.nerve().unwrap().graph.arc_count(), 2);
        let aa = PowerGraph::new(2, 1, vec![vec![0, 0]]).unwrap();
        let n = aa.nerve().unwrap();
        assert_eq!(n.graph.arc_count(), 1);
        assert_eq!(classify_arcs(&n.graph)[0].kind, ArcKind::FixedLoop);
        assert!(PowerGraph::new(2, 2, vec![vec![0]]).is_err());
    }

    #[test]
    fn realize_loops() {
        let (r, _) = PowerGraph::realize(&crate::catalog::loops_symmetric(2).unwrap()).unwrap();
        assert_eq!(r.edges(), [vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn arc_interpretation_nerve_is_representable() {
        for n in 1..=3 {
            let t = Theory::standard(MonoidKind::Symmetric, n).unwrap();
            let nerve = PowerGraph::interpretation_arc(n).nerve().unwrap();
            let a = Arc::new(representable(&t, Representable::A));
            assert!(crate::graph::find_isomorphism(&nerve.graph, &a)
                .unwrap()
                .is_some());
        }
    }

    #[test]
    fn unit_is_bijective_on_vertices_and_onto_arcs() {
        let t = Theory::standard(MonoidKind::Symmetric, 2).unwrap();
        for g in random::small_graphs(&t, 3, 4, 31, 30) {
            let u = PowerGraph::unit(&g).unwrap();
            let n = PowerGraph::realize(&g).unwrap().0.nerve().unwrap();
            assert!(u.vertices_bijective);
            assert!(u.arcs_surjective(n.graph.arc_count()));
        }
    }

    #[test]
    fn nerves_have_only_fixed_loops() {
        let mut rng = random::rng(8);
        for _ in 0..30 {
            let p = random::random_power_graph(&mut rng, 2, 3, 4);
            let n = p.nerve().unwrap();
            for orbit in arc_orbits(&n.graph) {
                if n.graph.is_loop(orbit[0]) {
                    assert_eq!(orbit.len(), 1);
                }
            }
        }
    }

    #[test]
    fn adjunction_and_fullness() {
        let t = Theory::standard(MonoidKind::Symmetric, 2).unwrap();
        let mut rng = random::rng(12);
        for _ in 0..15 {
            let g = Arc::new(random::random_graph(&t, &mut rng, 3, 4));
            let p = random::random_power_graph(&mut rng, 2, 3, 3);
            assert!(PowerGraph::adjunction_check(&g, &p).unwrap().passed());
            let q = random::random_power_graph(&mut rng, 2, 3, 3);
            assert!(p.nerve_fullness(&q).unwrap().passed());
        }
    }
}
