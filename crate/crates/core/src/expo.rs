//! Exponential objects `G^H`.
//!
//! Vertices are `hom(V̲ × H, G)`: plain vertex tables `H(V) → G(V)`, or
//! morphisms `H → G` in the reflexive case. Arcs are pairs
//! `((f_x)_{x∈X}, g)` with `g : H(A) → G(A)` and `g(α).x = f_x(α.x)`.
//! Such a pair pins down a morphism `A̲ × H → G` exactly when every element
//! of `M` is a unit or a fixed element; other theories go through
//! [`yoneda_exponential`], which enumerates `hom(A̲ × H, G)` directly.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{
    enumerate_homs, representable, require_same_theory, yoneda_arc, yoneda_vertex, GraphMorphism,
    Representable, XMGraph,
};
use crate::limits::{product, product_map, to_terminal, Product};

/// Arcs of `G` whose incidence is exactly `profile`.
pub fn matching_arcs(g: &XMGraph, profile: &[usize]) -> Vec<usize> {
    (0..g.arc_count())
        .filter(|&a| g.profile(a) == profile)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpOptions {
    pub max_vertices: u128,
    pub max_arcs: u128,
}

impl Default for ExpOptions {
    fn default() -> Self {
        Self {
            max_vertices: 1_000_000,
            max_arcs: 10_000_000,
        }
    }
}

/// A vertex of `G^H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpVertex {
    pub vertex_map: Vec<usize>,
    /// Present for reflexive theories, where vertices are morphisms `H → G`.
    pub arc_map: Option<Vec<usize>>,
}

/// An arc `((f_x)_{x∈X}, g)` of `G^H`; `family[x]` indexes a vertex of `G^H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentialArc {
    pub family: Vec<usize>,
    pub g: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Exponential {
    pub graph: Arc<XMGraph>,
    pub base: Arc<XMGraph>,
    pub exponent: Arc<XMGraph>,
    vertices: Vec<ExpVertex>,
    arcs: Vec<ExponentialArc>,
    vertex_index: HashMap<ExpVertex, usize>,
    arc_index: HashMap<ExponentialArc, usize>,
}

/// Names are only attached below this many arcs.
const NAMING_LIMIT: usize = 10_000;

pub fn exponential(g: &Arc<XMGraph>, h: &Arc<XMGraph>) -> Result<Exponential> {
    exponential_with(g, h, ExpOptions::default())
}

pub fn exponential_with(
    g: &Arc<XMGraph>,
    h: &Arc<XMGraph>,
    opts: ExpOptions,
) -> Result<Exponential> {
    require_same_theory(g, h)?;
    let t = g.theory().clone();
    if !t.units_and_fixed_cover() {
        return Err(Error::Unsupported(format!(
            "{} has elements that are neither units nor fixed; use the Yoneda construction",
            t.label()
        )));
    }
    let (nx, nm) = (t.x_len(), t.m_len());

    let predicted = (g.vertex_count() as u128).checked_pow(h.vertex_count() as u32);
    if predicted.is_none_or(|p| p > opts.max_vertices) {
        return Err(Error::Capacity(format!(
            "exponential would have up to {}^{} vertices",
            g.vertex_count(),
            h.vertex_count()
        )));
    }
    let vertices: Vec<ExpVertex> = if t.is_reflexive() {
        enumerate_homs(h, g)?
            .into_iter()
            .map(|k| ExpVertex {
                vertex_map: k.vertex_map().to_vec(),
                arc_map: Some(k.arc_map().to_vec()),
            })
            .collect()
    } else {
        tables(h.vertex_count(), g.vertex_count())
            .map(|vertex_map| ExpVertex {
                vertex_map,
                arc_map: None,
            })
            .collect()
    };
    let n_v = vertices.len();

    let mut by_profile: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for a in 0..g.arc_count() {
        by_profile.entry(g.profile(a)).or_default().push(a);
    }
    let empty = Vec::new();
    let families: Vec<Vec<usize>> = tables(nx, n_v).collect();
    let mut candidates_per_family = Vec::with_capacity(families.len());
    let mut total: u128 = 0;
    for family in &families {
        let cands: Vec<&Vec<usize>> = (0..h.arc_count())
            .map(|alpha| {
                let p: Vec<usize> = (0..nx)
                    .map(|x| vertices[family[x]].vertex_map[h.inc(alpha, x)])
                    .collect();
                by_profile.get(p.as_slice()).unwrap_or(&empty)
            })
            .collect();
        let count = cands
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128));
        total = count
            .and_then(|c| total.checked_add(c))
            .unwrap_or(u128::MAX);
        if total > opts.max_arcs {
            return Err(Error::Capacity(format!(
                "exponential would have more than {} arcs",
                opts.max_arcs
            )));
        }
        candidates_per_family.push(cands);
    }

    let mut arcs = Vec::with_capacity(total as usize);
    for (family, cands) in families.iter().zip(&candidates_per_family) {
        if cands.is_empty() {
            arcs.push(ExponentialArc {
                family: family.clone(),
                g: Vec::new(),
            });
            continue;
        }
        for g_table in cands
            .iter()
            .map(|c| c.iter().copied())
            .multi_cartesian_product()
        {
            arcs.push(ExponentialArc {
                family: family.clone(),
                g: g_table,
            });
        }
    }

    let vertex_index: HashMap<ExpVertex, usize> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let arc_index: HashMap<ExponentialArc, usize> = arcs
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, a)| (a, i))
        .collect();

    let inc: Vec<usize> = arcs.iter().flat_map(|a| a.family.iter().copied()).collect();
    let mut act = Vec::with_capacity(arcs.len() * nm);
    for arc in &arcs {
        for m in 0..nm {
            let image = match t.inverse(m) {
                Some(inv) => ExponentialArc {
                    family: (0..nx).map(|x| arc.family[t.act_x(x, m)]).collect(),
                    g: (0..h.arc_count())
                        .map(|alpha| g.act(arc.g[h.act(alpha, inv)], m))
                        .collect(),
                },
                None => {
                    let y = t
                        .fix_point_of(m)
                        .expect("non-units are fixed elements here");
                    let k = arc.family[y];
                    ExponentialArc {
                        family: vec![k; nx],
                        g: vertices[k]
                            .arc_map
                            .clone()
                            .expect("reflexive vertices carry arc maps"),
                    }
                }
            };
            act.push(arc_index[&image]);
        }
    }
    let loops = if t.is_reflexive() {
        vertices
            .iter()
            .enumerate()
            .map(|(k, v)| {
                arc_index[&ExponentialArc {
                    family: vec![k; nx],
                    g: v.arc_map.clone().expect("reflexive"),
                }]
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut graph = XMGraph::from_flat(t.clone(), n_v, arcs.len(), inc, act, loops)?;
    if arcs.len() <= NAMING_LIMIT {
        let vnames: Vec<String> = vertices.iter().map(|v| vertex_name(g, v)).collect();
        let anames = arcs.iter().map(|a| arc_name(g, &vnames, a)).collect();
        graph = graph.with_names(Some(vnames), Some(anames))?;
    }
    Ok(Exponential {
        graph: Arc::new(graph),
        base: g.clone(),
        exponent: h.clone(),
        vertices,
        arcs,
        vertex_index,
        arc_index,
    })
}

/// All functions `0..len → 0..range`, lexicographically.
fn tables(len: usize, range: usize) -> Box<dyn Iterator<Item = Vec<usize>>> {
    if len == 0 {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new((0..len).map(|_| 0..range).multi_cartesian_product())
    }
}

fn join_labels(labels: impl Iterator<Item = String>) -> String {
    let labels: Vec<String> = labels.collect();
    if labels.iter().all(|l| l.chars().count() == 1) {
        labels.concat()
    } else {
        labels.join(",")
    }
}

fn vertex_name(g: &XMGraph, v: &ExpVertex) -> String {
    match &v.arc_map {
        Some(a) => format!("<{}>", join_labels(a.iter().map(|&b| g.arc_label(b)))),
        None => format!(
            "<{}>",
            join_labels(v.vertex_map.iter().map(|&w| g.vertex_label(w)))
        ),
    }
}

fn arc_name(g: &XMGraph, vnames: &[String], a: &ExponentialArc) -> String {
    let mut body = join_labels(a.g.iter().map(|&b| g.arc_label(b)));
    if body.is_empty() {
        body = "()".into();
    }
    if vnames.len() == 1 {
        body
    } else {
        let fam: Vec<&str> = a.family.iter().map(|&k| vnames[k].as_str()).collect();
        format!("{}|{}", fam.join(""), body)
    }
}

impl Exponential {
    pub fn vertices(&self) -> &[ExpVertex] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[ExponentialArc] {
        &self.arcs
    }

    pub fn vertex_of(&self, v: &ExpVertex) -> Option<usize> {
        self.vertex_index.get(v).copied()
    }

    pub fn arc_of(&self, a: &ExponentialArc) -> Option<usize> {
        self.arc_index.get(a).copied()
    }

    /// Exponential vertex `k` as a morphism `H → G` (reflexive only).
    pub fn vertex_morphism(&self, k: usize) -> Option<GraphMorphism> {
        let v = &self.vertices[k];
        v.arc_map.as_ref().map(|a| {
            GraphMorphism::new_unchecked(
                self.exponent.clone(),
                self.base.clone(),
                v.vertex_map.clone(),
                a.clone(),
            )
        })
    }

    /// Arc count via the disjoint-union formula: for each family, the product
    /// over `α ∈ H(A)` of the number of `G`-arcs matching `f_x(α.x)`.
    pub fn disjoint_union_count(&self) -> u128 {
        let (g, h) = (&self.base, &self.exponent);
        let nx = g.theory().x_len();
        tables(nx, self.vertices.len())
            .map(|family| {
                (0..h.arc_count())
                    .map(|alpha| {
                        let p: Vec<usize> = (0..nx)
                            .map(|x| self.vertices[family[x]].vertex_map[h.inc(alpha, x)])
                            .collect();
                        matching_arcs(g, &p).len() as u128
                    })
                    .product::<u128>()
            })
            .sum()
    }

    /// Every arc satisfies `g(α).x = f_x(α.x)`.
    pub fn arcs_compatible(&self) -> bool {
        let (g, h) = (&self.base, &self.exponent);
        let nx = g.theory().x_len();
        self.arcs.iter().all(|arc| {
            (0..h.arc_count()).all(|alpha| {
                (0..nx).all(|x| {
                    g.inc(arc.g[alpha], x)
                        == self.vertices[arc.family[x]].vertex_map[h.inc(alpha, x)]
                })
            })
        })
    }

    /// `G^H × H` together with `ev : G^H × H → G`.
    pub fn eval_morphism(&self) -> Result<(Product, GraphMorphism)> {
        let p = product(&self.graph, &self.exponent)?;
        let v = (0..p.graph.vertex_count())
            .map(|c| {
                let (k, w) = p.split_vertex(c);
                self.vertices[k].vertex_map[w]
            })
            .collect();
        let a = (0..p.graph.arc_count())
            .map(|c| {
                let (phi, alpha) = p.split_arc(c);
                self.arcs[phi].g[alpha]
            })
            .collect();
        let ev = GraphMorphism::new(p.graph.clone(), self.base.clone(), v, a)?;
        Ok((p, ev))
    }

    fn check_product(&self, fh: &Product) -> Result<()> {
        if fh.right.same_data(&self.exponent) {
            Ok(())
        } else {
            Err(Error::NotComposable(
                "product's right factor is not the exponent".into(),
            ))
        }
    }

    /// The transpose `F → G^H` of `h : F × H → G`.
    pub fn curry(&self, h: &GraphMorphism, fh: &Product) -> Result<GraphMorphism> {
        self.check_product(fh)?;
        if !h.src().same_data(&fh.graph) || !h.dst().same_data(&self.base) {
            return Err(Error::NotComposable(
                "curry needs a morphism F × H → G".into(),
            ));
        }
        let f = &fh.left;
        let hx = &self.exponent;
        let t = f.theory();
        let nx = t.x_len();
        let vertex_at = |u: usize| -> Result<usize> {
            let vertex_map = (0..hx.vertex_count())
                .map(|w| h.vertex_map()[fh.vertex(u, w)])
                .collect();
            let arc_map = f.is_reflexive().then(|| {
                let l = f.loops()[u];
                (0..hx.arc_count())
                    .map(|alpha| h.arc_map()[fh.arc(l, alpha)])
                    .collect()
            });
            self.vertex_of(&ExpVertex {
                vertex_map,
                arc_map,
            })
            .ok_or_else(|| {
                Error::invalid("morphism", "curried vertex missing from the exponential")
            })
        };
        let v: Vec<usize> = (0..f.vertex_count())
            .map(vertex_at)
            .collect::<Result<_>>()?;
        let a = (0..f.arc_count())
            .map(|beta| {
                let arc = ExponentialArc {
                    family: (0..nx).map(|x| v[f.inc(beta, x)]).collect(),
                    g: (0..hx.arc_count())
                        .map(|alpha| h.arc_map()[fh.arc(beta, alpha)])
                        .collect(),
                };
                self.arc_of(&arc).ok_or_else(|| {
                    Error::invalid("morphism", "curried arc missing from the exponential")
                })
            })
            .collect::<Result<_>>()?;
        GraphMorphism::new(f.clone(), self.graph.clone(), v, a)
    }

    /// The transpose `F × H → G` of `k : F → G^H`, i.e. `ev ∘ (k × id)`.
    pub fn uncurry(&self, k: &GraphMorphism, fh: &Product) -> Result<GraphMorphism> {
        self.check_product(fh)?;
        if !k.src().same_data(&fh.left) || !k.dst().same_data(&self.graph) {
            return Err(Error::NotComposable(
                "uncurry needs a morphism F → G^H".into(),
            ));
        }
        let v = (0..fh.graph.vertex_count())
            .map(|c| {
                let (u, w) = fh.split_vertex(c);
                self.vertices[k.vertex_map()[u]].vertex_map[w]
            })
            .collect();
        let a = (0..fh.graph.arc_count())
            .map(|c| {
                let (beta, alpha) = fh.split_arc(c);
                self.arcs[k.arc_map()[beta]].g[alpha]
            })
            .collect();
        GraphMorphism::new(fh.graph.clone(), self.base.clone(), v, a)
    }
}

/// `G^H` computed as `hom(V̲ × H, G)` and `hom(A̲ × H, G)` with actions by
/// precomposition. Works for every theory.
#[derive(Clone, Debug)]
pub struct YonedaExponential {
    pub graph: Arc<XMGraph>,
    pub vertices: Vec<GraphMorphism>,
    pub arcs: Vec<GraphMorphism>,
}

pub fn yoneda_exponential(g: &Arc<XMGraph>, h: &Arc<XMGraph>) -> Result<YonedaExponential> {
    require_same_theory(g, h)?;
    let t = g.theory();
    let rep_v = Arc::new(representable(t, Representable::V));
    let rep_a = Arc::new(representable(t, Representable::A));
    let pv = product(&rep_v, h)?;
    let pa = product(&rep_a, h)?;
    let vertices = enumerate_homs(&pv.graph, g)?;
    let arcs = enumerate_homs(&pa.graph, g)?;
    let key = |f: &GraphMorphism| (f.vertex_map().to_vec(), f.arc_map().to_vec());
    let v_index: HashMap<_, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, f)| (key(f), i))
        .collect();
    let a_index: HashMap<_, usize> = arcs.iter().enumerate().map(|(i, f)| (key(f), i)).collect();
    let id_h = GraphMorphism::identity(h);

    let along_vertex: Vec<GraphMorphism> = (0..t.x_len())
        .map(|x| product_map(&yoneda_vertex(&rep_a, x), &id_h, &pv, &pa))
        .collect::<Result<_>>()?;
    let along_arc: Vec<GraphMorphism> = (0..t.m_len())
        .map(|m| product_map(&yoneda_arc(&rep_a, m), &id_h, &pa, &pa))
        .collect::<Result<_>>()?;
    let mut inc = Vec::with_capacity(arcs.len() * t.x_len());
    let mut act = Vec::with_capacity(arcs.len() * t.m_len());
    for phi in &arcs {
        for s in &along_vertex {
            inc.push(v_index[&key(&s.then(phi)?)]);
        }
        for s in &along_arc {
            act.push(a_index[&key(&s.then(phi)?)]);
        }
    }
    let loops = if t.is_reflexive() {
        // A̲ → V̲ is the map to the terminal graph.
        let ell = to_terminal(&rep_a);
        let ell = GraphMorphism::new(
            rep_a.clone(),
            rep_v.clone(),
            ell.vertex_map().to_vec(),
            ell.arc_map().to_vec(),
        )?;
        let s = product_map(&ell, &id_h, &pa, &pv)?;
        vertices
            .iter()
            .map(|k| Ok(a_index[&key(&s.then(k)?)]))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let graph = Arc::new(XMGraph::from_flat(
        t.clone(),
        vertices.len(),
        arcs.len(),
        inc,
        act,
        loops,
    )?);
    Ok(YonedaExponential {
        graph,
        vertices,
        arcs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MonoidKind;
    use crate::catalog;
    use crate::graph::{classify_arcs, count_homs, find_isomorphism, ArcKind};
    use crate::limits::{coproduct, terminal};
    use crate::random::small_graphs;
    use crate::theory::Theory;

    fn rep(kind: MonoidKind, n: usize, obj: Representable) -> Arc<XMGraph> {
        Arc::new(representable(&Theory::standard(kind, n).unwrap(), obj))
    }

    #[test]
    fn matching_arcs_cases() {
        let l = catalog::loops_symmetric(2).unwrap();
        assert_eq!(matching_arcs(&l, &[0, 0]), [0, 1]);
        let a = rep(MonoidKind::Symmetric, 2, Representable::A);
        assert_eq!(matching_arcs(&a, &[0, 1]), [0]);
        assert!(matching_arcs(&a, &[0, 0]).is_empty());
    }

    #[test]
    fn vertex_to_the_vertex_is_terminal() {
        for n in [2, 3] {
            let v = rep(MonoidKind::Symmetric, n, Representable::V);
            let e = exponential(&v, &v).unwrap();
            assert!(e.graph.same_data(&terminal(v.theory())));
        }
    }

    #[test]
    fn loops_to_the_arc() {
        let l = Arc::new(catalog::loops_symmetric(2).unwrap());
        let a = rep(MonoidKind::Symmetric, 2, Representable::A);
        let e = exponential(&l, &a).unwrap();
        assert_eq!((e.graph.vertex_count(), e.graph.arc_count()), (1, 4));
        let names: Vec<_> = (0..4).map(|i| e.graph.arc_label(i)).collect();
        assert_eq!(names, ["00", "01", "10", "11"]);
        let classes = classify_arcs(&e.graph);
        let orbits: Vec<_> = classes.iter().map(|c| (c.orbit.clone(), c.kind)).collect();
        assert_eq!(
            orbits,
            [
                (vec![0], ArcKind::FixedLoop),
                (vec![1, 2], ArcKind::UnfixedLoop),
                (vec![3], ArcKind::FixedLoop)
            ]
        );
        let (p, ev) = e.eval_morphism().unwrap();
        for phi in 0..4 {
            assert_eq!(ev.arc_map()[p.arc(phi, 0)], e.arcs()[phi].g[0]);
        }
    }

    #[test]
    fn reflexive_loops_to_the_arc() {
        let l = Arc::new(catalog::loops_reflexive(2).unwrap());
        let a = rep(MonoidKind::ReflexiveSymmetric, 2, Representable::A);
        let e = exponential(&l, &a).unwrap();
        assert_eq!((e.graph.vertex_count(), e.graph.arc_count()), (2, 64));
        assert!(e.arcs_compatible());
        assert_eq!(e.disjoint_union_count(), 64);
    }

    #[test]
    fn hereditary_is_routed_to_yoneda() {
        let a = rep(MonoidKind::Hereditary, 2, Representable::A);
        assert!(matches!(exponential(&a, &a), Err(Error::Unsupported(_))));
        let y = yoneda_exponential(&a, &a).unwrap();
        assert_eq!(y.graph.vertex_count(), 4);
    }

    #[test]
    fn capacity_guard() {
        let a = rep(MonoidKind::Symmetric, 3, Representable::A);
        let opts = ExpOptions {
            max_vertices: 10,
            max_arcs: 10,
        };
        assert!(matches!(
            exponential_with(&a, &a, opts),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn agrees_with_yoneda_route() {
        for kind in [
            MonoidKind::Oriented,
            MonoidKind::Symmetric,
            MonoidKind::ReflexiveSymmetric,
            MonoidKind::ReflexiveOriented,
        ] {
            let t = Theory::standard(kind, 2).unwrap();
            let gs = small_graphs(&t, 2, 3, 11, 5);
            for g in &gs {
                for h in &gs {
                    let (g, h) = (Arc::new(g.clone()), Arc::new(h.clone()));
                    let e = exponential(&g, &h).unwrap();
                    let y = yoneda_exponential(&g, &h).unwrap();
                    assert!(
                        find_isomorphism(&e.graph, &y.graph).unwrap().is_some(),
                        "{kind}"
                    );
                    assert_eq!(e.disjoint_union_count(), e.graph.arc_count() as u128);
                }
            }
        }
    }

    #[test]
    fn exponent_one_and_sums() {
        let t = Theory::standard(MonoidKind::Symmetric, 2).unwrap();
        let gs: Vec<_> = small_graphs(&t, 2, 3, 23, 4)
            .into_iter()
            .map(Arc::new)
            .collect();
        let one = Arc::new(terminal(&t));
        for g in &gs {
            let e = exponential(g, &one).unwrap();
            assert!(find_isomorphism(&e.graph, g).unwrap().is_some());
            for h in &gs {
                for k in &gs {
                    let sum = coproduct(h, k).unwrap().graph;
                    let lhs = exponential(g, &sum).unwrap().graph;
                    let rhs = product(
                        &exponential(g, h).unwrap().graph,
                        &exponential(g, k).unwrap().graph,
                    )
                    .unwrap()
                    .graph;
                    assert!(find_isomorphism(&lhs, &rhs).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn currying_roundtrip() {
        let t = Theory::standard(MonoidKind::ReflexiveSymmetric, 2).unwrap();
        let gs: Vec<_> = small_graphs(&t, 2, 3, 41, 4)
            .into_iter()
            .map(Arc::new)
            .collect();
        for f in &gs {
            for h in &gs {
                for g in &gs {
                    let e = exponential(g, h).unwrap();
                    let fh = product(f, h).unwrap();
                    let left = enumerate_homs(&fh.graph, g).unwrap();
                    assert_eq!(left.len(), count_homs(f, &e.graph).unwrap());
                    for u in &left {
                        assert_eq!(&e.uncurry(&e.curry(u, &fh).unwrap(), &fh).unwrap(), u);
                    }
                }
            }
        }
    }

    #[test]
    fn curry_of_eval_is_identity() {
        let l = Arc::new(catalog::loops_reflexive(2).unwrap());
        let a = rep(MonoidKind::ReflexiveSymmetric, 2, Representable::A);
        let e = exponential(&l, &a).unwrap();
        let (p, ev) = e.eval_morphism().unwrap();
        assert_eq!(e.curry(&ev, &p).unwrap(), GraphMorphism::identity(&e.graph));
    }
}
