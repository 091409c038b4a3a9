//! Finite limits and colimits, computed pointwise.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{require_same_theory, GraphMorphism, XMGraph};
use crate::theory::Theory;

/// One vertex with a single loop fixed by all of `M` (distinguished when
/// reflexive).
pub fn terminal(theory: &Arc<Theory>) -> XMGraph {
    let loops = if theory.is_reflexive() {
        vec![0]
    } else {
        Vec::new()
    };
    XMGraph::from_flat(
        theory.clone(),
        1,
        1,
        vec![0; theory.x_len()],
        vec![0; theory.m_len()],
        loops,
    )
    .expect("terminal presheaf is valid")
}

pub fn initial(theory: &Arc<Theory>) -> XMGraph {
    XMGraph::from_flat(theory.clone(), 0, 0, Vec::new(), Vec::new(), Vec::new())
        .expect("empty presheaf is valid")
}

/// The unique morphism `g → 1`.
pub fn to_terminal(g: &Arc<XMGraph>) -> GraphMorphism {
    let one = Arc::new(terminal(g.theory()));
    GraphMorphism::new_unchecked(
        g.clone(),
        one,
        vec![0; g.vertex_count()],
        vec![0; g.arc_count()],
    )
}

/// `G × H` with cells indexed as `i * |H| + j`.
#[derive(Clone, Debug)]
pub struct Product {
    pub graph: Arc<XMGraph>,
    pub left: Arc<XMGraph>,
    pub right: Arc<XMGraph>,
}

impl Product {
    pub fn vertex(&self, i: usize, j: usize) -> usize {
        i * self.right.vertex_count() + j
    }

    pub fn arc(&self, i: usize, j: usize) -> usize {
        i * self.right.arc_count() + j
    }

    pub fn split_vertex(&self, p: usize) -> (usize, usize) {
        let n = self.right.vertex_count();
        (p / n, p % n)
    }

    pub fn split_arc(&self, p: usize) -> (usize, usize) {
        let n = self.right.arc_count();
        (p / n, p % n)
    }

    pub fn proj_left(&self) -> GraphMorphism {
        let v = (0..self.graph.vertex_count())
            .map(|p| self.split_vertex(p).0)
            .collect();
        let a = (0..self.graph.arc_count())
            .map(|p| self.split_arc(p).0)
            .collect();
        GraphMorphism::new_unchecked(self.graph.clone(), self.left.clone(), v, a)
    }

    pub fn proj_right(&self) -> GraphMorphism {
        let v = (0..self.graph.vertex_count())
            .map(|p| self.split_vertex(p).1)
            .collect();
        let a = (0..self.graph.arc_count())
            .map(|p| self.split_arc(p).1)
            .collect();
        GraphMorphism::new_unchecked(self.graph.clone(), self.right.clone(), v, a)
    }

    /// `⟨f, g⟩ : K → G × H`.
    pub fn pair(&self, f: &GraphMorphism, g: &GraphMorphism) -> Result<GraphMorphism> {
        if !f.src().same_data(g.src())
            || !f.dst().same_data(&self.left)
            || !g.dst().same_data(&self.right)
        {
            return Err(Error::NotComposable(
                "pairing needs a cone over the product's factors".into(),
            ));
        }
        let v = f
            .vertex_map()
            .iter()
            .zip(g.vertex_map())
            .map(|(&i, &j)| self.vertex(i, j))
            .collect();
        let a = f
            .arc_map()
            .iter()
            .zip(g.arc_map())
            .map(|(&i, &j)| self.arc(i, j))
            .collect();
        GraphMorphism::new(f.src().clone(), self.graph.clone(), v, a)
    }
}

pub fn product(g: &Arc<XMGraph>, h: &Arc<XMGraph>) -> Result<Product> {
    require_same_theory(g, h)?;
    let t = g.theory();
    let (gv, hv, ga, ha) = (
        g.vertex_count(),
        h.vertex_count(),
        g.arc_count(),
        h.arc_count(),
    );
    let mut inc = Vec::with_capacity(ga * ha * t.x_len());
    let mut act = Vec::with_capacity(ga * ha * t.m_len());
    for i in 0..ga {
        for j in 0..ha {
            inc.extend((0..t.x_len()).map(|x| g.inc(i, x) * hv + h.inc(j, x)));
            act.extend((0..t.m_len()).map(|m| g.act(i, m) * ha + h.act(j, m)));
        }
    }
    let loops = if t.is_reflexive() {
        (0..gv)
            .flat_map(|i| (0..hv).map(move |j| (i, j)))
            .map(|(i, j)| g.loops()[i] * ha + h.loops()[j])
            .collect()
    } else {
        Vec::new()
    };
    let graph = XMGraph::from_flat(t.clone(), gv * hv, ga * ha, inc, act, loops)?;
    Ok(Product {
        graph: Arc::new(graph),
        left: g.clone(),
        right: h.clone(),
    })
}

/// `f × g : A × B → C × D` between the given products.
pub fn product_map(
    f: &GraphMorphism,
    g: &GraphMorphism,
    dom: &Product,
    cod: &Product,
) -> Result<GraphMorphism> {
    let p1 = dom.proj_left().then(f)?;
    let p2 = dom.proj_right().then(g)?;
    cod.pair(&p1, &p2)
}

/// `G ⊔ H`: the cells of `H` follow those of `G`.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub graph: Arc<XMGraph>,
    pub left: Arc<XMGraph>,
    pub right: Arc<XMGraph>,
}

impl Coproduct {
    pub fn inj_left(&self) -> GraphMorphism {
        GraphMorphism::new_unchecked(
            self.left.clone(),
            self.graph.clone(),
            (0..self.left.vertex_count()).collect(),
            (0..self.left.arc_count()).collect(),
        )
    }

    pub fn inj_right(&self) -> GraphMorphism {
        let (ov, oa) = (self.left.vertex_count(), self.left.arc_count());
        GraphMorphism::new_unchecked(
            self.right.clone(),
            self.graph.clone(),
            (0..self.right.vertex_count()).map(|v| v + ov).collect(),
            (0..self.right.arc_count()).map(|a| a + oa).collect(),
        )
    }

    /// `[f, g] : G ⊔ H → K`.
    pub fn copair(&self, f: &GraphMorphism, g: &GraphMorphism) -> Result<GraphMorphism> {
        if !f.dst().same_data(g.dst())
            || !f.src().same_data(&self.left)
            || !g.src().same_data(&self.right)
        {
            return Err(Error::NotComposable(
                "copairing needs a cocone under the coproduct's summands".into(),
            ));
        }
        let v = f
            .vertex_map()
            .iter()
            .chain(g.vertex_map())
            .copied()
            .collect();
        let a = f.arc_map().iter().chain(g.arc_map()).copied().collect();
        GraphMorphism::new(self.graph.clone(), f.dst().clone(), v, a)
    }
}

pub fn coproduct(g: &Arc<XMGraph>, h: &Arc<XMGraph>) -> Result<Coproduct> {
    require_same_theory(g, h)?;
    let t = g.theory();
    let (ov, oa) = (g.vertex_count(), g.arc_count());
    let mut inc: Vec<usize> = (0..oa).flat_map(|a| g.profile(a).to_vec()).collect();
    inc.extend(
        (0..h.arc_count()).flat_map(|a| h.profile(a).iter().map(|v| v + ov).collect::<Vec<_>>()),
    );
    let mut act: Vec<usize> = (0..oa)
        .flat_map(|a| (0..t.m_len()).map(move |m| g.act(a, m)))
        .collect();
    act.extend((0..h.arc_count()).flat_map(|a| (0..t.m_len()).map(move |m| h.act(a, m) + oa)));
    let mut loops = g.loops().to_vec();
    loops.extend(h.loops().iter().map(|a| a + oa));
    let graph = XMGraph::from_flat(
        t.clone(),
        ov + h.vertex_count(),
        oa + h.arc_count(),
        inc,
        act,
        loops,
    )?;
    Ok(Coproduct {
        graph: Arc::new(graph),
        left: g.clone(),
        right: h.clone(),
    })
}

fn require_parallel(f: &GraphMorphism, g: &GraphMorphism) -> Result<()> {
    if f.src().same_data(g.src()) && f.dst().same_data(g.dst()) {
        Ok(())
    } else {
        Err(Error::NotComposable(
            "equalizers and coequalizers need a parallel pair".into(),
        ))
    }
}

/// The subgraph on which `f` and `g` agree, with its inclusion.
pub fn equalizer(f: &GraphMorphism, g: &GraphMorphism) -> Result<(Arc<XMGraph>, GraphMorphism)> {
    require_parallel(f, g)?;
    let src = f.src();
    let t = src.theory();
    let vs: Vec<usize> = (0..src.vertex_count())
        .filter(|&v| f.vertex_map()[v] == g.vertex_map()[v])
        .collect();
    let arcs: Vec<usize> = (0..src.arc_count())
        .filter(|&a| f.arc_map()[a] == g.arc_map()[a])
        .collect();
    let mut v_index = vec![usize::MAX; src.vertex_count()];
    for (i, &v) in vs.iter().enumerate() {
        v_index[v] = i;
    }
    let mut a_index = vec![usize::MAX; src.arc_count()];
    for (i, &a) in arcs.iter().enumerate() {
        a_index[a] = i;
    }
    let inc = arcs
        .iter()
        .flat_map(|&a| src.profile(a).iter().map(|&v| v_index[v]))
        .collect();
    let act = arcs
        .iter()
        .flat_map(|&a| (0..t.m_len()).map(move |m| src.act(a, m)))
        .map(|b| a_index[b])
        .collect();
    let loops = if t.is_reflexive() {
        vs.iter().map(|&v| a_index[src.loops()[v]]).collect()
    } else {
        Vec::new()
    };
    let graph = Arc::new(XMGraph::from_flat(
        t.clone(),
        vs.len(),
        arcs.len(),
        inc,
        act,
        loops,
    )?);
    let inclusion = GraphMorphism::new_unchecked(graph.clone(), src.clone(), vs, arcs);
    Ok((graph, inclusion))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            cur = std::mem::replace(&mut self.parent[cur], root);
        }
        root
    }

    /// Merges toward the smaller index; returns whether anything changed.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Class index per element, classes numbered by least member.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut class_of_root = vec![usize::MAX; n];
        let mut count = 0;
        let out = (0..n)
            .map(|x| {
                let r = self.find(x);
                if class_of_root[r] == usize::MAX {
                    class_of_root[r] = count;
                    count += 1;
                }
                class_of_root[r]
            })
            .collect();
        (out, count)
    }
}

/// Quotient of `g` by the least congruence containing the given vertex and
/// arc identifications. Returns the quotient and the projection.
pub fn quotient(
    g: &Arc<XMGraph>,
    vertex_pairs: &[(usize, usize)],
    arc_pairs: &[(usize, usize)],
) -> Result<(Arc<XMGraph>, GraphMorphism)> {
    let t = g.theory();
    let mut vs = UnionFind::new(g.vertex_count());
    let mut arcs = UnionFind::new(g.arc_count());
    for &(a, b) in vertex_pairs {
        vs.union(a, b);
    }
    for &(a, b) in arc_pairs {
        arcs.union(a, b);
    }
    loop {
        let mut changed = false;
        for a in 0..g.arc_count() {
            let r = arcs.find(a);
            if r == a {
                continue;
            }
            for m in 0..t.m_len() {
                changed |= arcs.union(g.act(a, m), g.act(r, m));
            }
            for x in 0..t.x_len() {
                changed |= vs.union(g.inc(a, x), g.inc(r, x));
            }
        }
        if t.is_reflexive() {
            for v in 0..g.vertex_count() {
                let r = vs.find(v);
                if r != v {
                    changed |= arcs.union(g.loops()[v], g.loops()[r]);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let (v_class, nv) = vs.classes();
    let (a_class, na) = arcs.classes();
    let mut rep_arc = vec![usize::MAX; na];
    for a in (0..g.arc_count()).rev() {
        rep_arc[a_class[a]] = a;
    }
    let mut rep_vertex = vec![usize::MAX; nv];
    for v in (0..g.vertex_count()).rev() {
        rep_vertex[v_class[v]] = v;
    }
    let inc = rep_arc
        .iter()
        .flat_map(|&a| g.profile(a).iter().map(|&v| v_class[v]))
        .collect();
    let act = rep_arc
        .iter()
        .flat_map(|&a| (0..t.m_len()).map(move |m| g.act(a, m)))
        .map(|b| a_class[b])
        .collect();
    let loops = if t.is_reflexive() {
        rep_vertex.iter().map(|&v| a_class[g.loops()[v]]).collect()
    } else {
        Vec::new()
    };
    let graph = Arc::new(XMGraph::from_flat(t.clone(), nv, na, inc, act, loops)?);
    let projection = GraphMorphism::new_unchecked(g.clone(), graph.clone(), v_class, a_class);
    Ok((graph, projection))
}

/// Coequalizer of a parallel pair `f, g : K → G`.
pub fn coequalizer(f: &GraphMorphism, g: &GraphMorphism) -> Result<(Arc<XMGraph>, GraphMorphism)> {
    require_parallel(f, g)?;
    let vertex_pairs: Vec<_> = f
        .vertex_map()
        .iter()
        .copied()
        .zip(g.vertex_map().iter().copied())
        .collect();
    let arc_pairs: Vec<_> = f
        .arc_map()
        .iter()
        .copied()
        .zip(g.arc_map().iter().copied())
        .collect();
    quotient(f.dst(), &vertex_pairs, &arc_pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MonoidKind;
    use crate::catalog;
    use crate::graph::{
        classify_arcs, enumerate_homs, representable, yoneda_vertex, ArcKind, Representable,
    };

    fn t(kind: MonoidKind) -> Arc<Theory> {
        Theory::standard(kind, 2).unwrap()
    }

    #[test]
    fn terminal_and_initial() {
        let one = terminal(&t(MonoidKind::Symmetric));
        assert_eq!((one.vertex_count(), one.arc_count()), (1, 1));
        assert_eq!(classify_arcs(&one)[0].kind, ArcKind::FixedLoop);
        let one = terminal(&t(MonoidKind::ReflexiveSymmetric));
        assert_eq!(classify_arcs(&one)[0].kind, ArcKind::DistinguishedLoop);
        let zero = initial(&t(MonoidKind::ReflexiveOriented));
        assert_eq!((zero.vertex_count(), zero.arc_count()), (0, 0));
    }

    #[test]
    fn product_counts() {
        let th = t(MonoidKind::Symmetric);
        let v = Arc::new(representable(&th, Representable::V));
        let a = Arc::new(representable(&th, Representable::A));
        let va = product(&v, &a).unwrap();
        assert_eq!((va.graph.vertex_count(), va.graph.arc_count()), (2, 0));
        let aa = product(&a, &a).unwrap();
        assert_eq!((aa.graph.vertex_count(), aa.graph.arc_count()), (4, 4));
        let l = Arc::new(catalog::loops_symmetric(2).unwrap());
        let ll = coproduct(&l, &l).unwrap();
        assert_eq!((ll.graph.vertex_count(), ll.graph.arc_count()), (2, 4));
    }

    #[test]
    fn coequalizer_glues_endpoints() {
        let th = t(MonoidKind::Oriented);
        let a = Arc::new(representable(&th, Representable::A));
        let s = yoneda_vertex(&a, 0);
        let tt = yoneda_vertex(&a, 1);
        let (q, proj) = coequalizer(&s, &tt).unwrap();
        assert_eq!((q.vertex_count(), q.arc_count()), (1, 1));
        assert!(q.is_loop(0));
        assert_eq!(proj.vertex_map(), [0, 0]);
    }

    #[test]
    fn equalizer_cases() {
        let th = t(MonoidKind::Symmetric);
        let a = Arc::new(representable(&th, Representable::A));
        let id = GraphMorphism::identity(&a);
        let (e, inc) = equalizer(&id, &id).unwrap();
        assert!(e.same_data(&a));
        assert!(inc.is_iso());

        let v = Arc::new(representable(&th, Representable::V));
        let (e, _) = equalizer(&yoneda_vertex(&a, 0), &yoneda_vertex(&a, 1)).unwrap();
        assert_eq!((e.vertex_count(), e.arc_count()), (0, 0));
        let _ = v;
    }

    #[test]
    fn non_parallel_pairs_rejected() {
        let th = t(MonoidKind::Symmetric);
        let a = Arc::new(representable(&th, Representable::A));
        let v = Arc::new(representable(&th, Representable::V));
        let f = GraphMorphism::identity(&a);
        let g = GraphMorphism::identity(&v);
        assert!(equalizer(&f, &g).is_err());
        assert!(coequalizer(&f, &g).is_err());
    }

    #[test]
    fn theory_mismatch_rejected() {
        let a = Arc::new(representable(&t(MonoidKind::Symmetric), Representable::A));
        let b = Arc::new(representable(&t(MonoidKind::Oriented), Representable::A));
        assert!(matches!(product(&a, &b), Err(Error::TheoryMismatch(_))));
        assert!(matches!(coproduct(&a, &b), Err(Error::TheoryMismatch(_))));
    }

    #[test]
    fn product_universal_property() {
        let th = t(MonoidKind::ReflexiveSymmetric);
        let graphs = crate::random::small_graphs(&th, 2, 4, 3, 6);
        for g in &graphs {
            for h in &graphs {
                let (g, h) = (Arc::new(g.clone()), Arc::new(h.clone()));
                let p = product(&g, &h).unwrap();
                let k = Arc::new(catalog::loops_reflexive(2).unwrap());
                for f1 in enumerate_homs(&k, &g).unwrap() {
                    for f2 in enumerate_homs(&k, &h).unwrap() {
                        let mediating: Vec<_> = enumerate_homs(&k, &p.graph)
                            .unwrap()
                            .into_iter()
                            .filter(|u| {
                                u.then(&p.proj_left()).unwrap() == f1
                                    && u.then(&p.proj_right()).unwrap() == f2
                            })
                            .collect();
                        assert_eq!(mediating.len(), 1);
                        assert_eq!(mediating[0], p.pair(&f1, &f2).unwrap());
                    }
                }
            }
        }
    }
}
