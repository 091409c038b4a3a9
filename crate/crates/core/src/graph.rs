//! (Reflexive) (X,M)-graphs as finite presheaves and their morphisms.
//!
//! An arc `α` has an incidence `α.x` for every `x ∈ X` and an `M`-action
//! `α.m`. The action is contravariant in theory composition, so with the
//! diagrammatic monoid table it reads
//! `α.mul(a, b) = (α.b).a`, while incidence satisfies
//! `(α.m).x = α.(x.m)`. Reflexive graphs additionally carry a distinguished
//! loop `v.ℓ` for each vertex.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::theory::Theory;

/// Default node budget for homomorphism searches.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

static SEARCH_BUDGET: std::sync::atomic::AtomicU64 =
    std::sync::atomic::AtomicU64::new(DEFAULT_SEARCH_BUDGET);

/// Process-wide node budget used by searches that take no explicit options.
pub fn search_budget() -> u64 {
    SEARCH_BUDGET.load(std::sync::atomic::Ordering::Relaxed)
}

pub fn set_search_budget(budget: u64) {
    SEARCH_BUDGET.store(budget, std::sync::atomic::Ordering::Relaxed);
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XMGraph {
    theory: Arc<Theory>,
    n_v: usize,
    n_a: usize,
    inc: Vec<usize>,
    act: Vec<usize>,
    loops: Vec<usize>,
    vertex_names: Option<Vec<String>>,
    arc_names: Option<Vec<String>>,
}

impl XMGraph {
    /// Validates and builds a graph. `inc[α][x]` is the `x`-incidence of arc
    /// `α`, `act[α][m]` its `m`-partner, `loops[v]` the distinguished loop of
    /// `v` (required exactly for reflexive theories).
    pub fn new(
        theory: Arc<Theory>,
        n_v: usize,
        inc: Vec<Vec<usize>>,
        act: Vec<Vec<usize>>,
        loops: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n_a = inc.len();
        let (nx, nm) = (theory.x_len(), theory.m_len());
        if act.len() != n_a {
            return Err(Error::invalid(
                "graph",
                format!("{n_a} incidence rows but {} action rows", act.len()),
            ));
        }
        if let Some((a, row)) = inc.iter().enumerate().find(|(_, r)| r.len() != nx) {
            return Err(Error::invalid(
                "graph",
                format!("incidence row {a} has {} entries, expected {nx}", row.len()),
            ));
        }
        if let Some((a, row)) = act.iter().enumerate().find(|(_, r)| r.len() != nm) {
            return Err(Error::invalid(
                "graph",
                format!("action row {a} has {} entries, expected {nm}", row.len()),
            ));
        }
        let loops = match (theory.is_reflexive(), loops) {
            (true, Some(l)) => l,
            (true, None) => {
                return Err(Error::invalid(
                    "graph",
                    "reflexive graphs need a loop table",
                ))
            }
            (false, None) => Vec::new(),
            (false, Some(_)) => {
                return Err(Error::invalid(
                    "graph",
                    "loop table given for a non-reflexive theory",
                ))
            }
        };
        Self::from_flat(
            theory,
            n_v,
            n_a,
            inc.into_iter().flatten().collect(),
            act.into_iter().flatten().collect(),
            loops,
        )
    }

    pub(crate) fn from_flat(
        theory: Arc<Theory>,
        n_v: usize,
        n_a: usize,
        inc: Vec<usize>,
        act: Vec<usize>,
        loops: Vec<usize>,
    ) -> Result<Self> {
        let g = Self {
            theory,
            n_v,
            n_a,
            inc,
            act,
            loops,
            vertex_names: None,
            arc_names: None,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_names(
        mut self,
        vertex_names: Option<Vec<String>>,
        arc_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if vertex_names.as_ref().is_some_and(|n| n.len() != self.n_v) {
            return Err(Error::invalid(
                "graph",
                "vertex name count does not match vertex count",
            ));
        }
        if arc_names.as_ref().is_some_and(|n| n.len() != self.n_a) {
            return Err(Error::invalid(
                "graph",
                "arc name count does not match arc count",
            ));
        }
        self.vertex_names = vertex_names;
        self.arc_names = arc_names;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let t = &*self.theory;
        let (nx, nm) = (t.x_len(), t.m_len());
        if self.inc.len() != self.n_a * nx || self.act.len() != self.n_a * nm {
            return Err(Error::invalid(
                "graph",
                "table sizes do not match arc count",
            ));
        }
        if let Some(&v) = self.inc.iter().find(|&&v| v >= self.n_v) {
            return Err(Error::invalid(
                "graph",
                format!("incidence refers to vertex {v} of {}", self.n_v),
            ));
        }
        if let Some(&a) = self.act.iter().find(|&&a| a >= self.n_a) {
            return Err(Error::invalid(
                "graph",
                format!("action refers to arc {a} of {}", self.n_a),
            ));
        }
        if t.is_reflexive() {
            if self.loops.len() != self.n_v {
                return Err(Error::invalid(
                    "graph",
                    "loop table must have one entry per vertex",
                ));
            }
            if let Some(&a) = self.loops.iter().find(|&&a| a >= self.n_a) {
                return Err(Error::invalid(
                    "graph",
                    format!("loop table refers to arc {a} of {}", self.n_a),
                ));
            }
        }
        let id = t.identity();
        for a in 0..self.n_a {
            if self.act(a, id) != a {
                return Err(Error::law(
                    "action unit",
                    format!("arc {a}: {a}.id = {}", self.act(a, id)),
                ));
            }
            for m in 0..nm {
                for x in 0..nx {
                    let lhs = self.inc(self.act(a, m), x);
                    let rhs = self.inc(a, t.act_x(x, m));
                    if lhs != rhs {
                        return Err(Error::law(
                            "incidence compatibility ∂(α.m)(x) = ∂(α)(x.m)",
                            format!(
                                "(α, m, x) = ({a}, {}, {}): {lhs} != {rhs}",
                                t.monoid().name(m),
                                t.xset().name(x)
                            ),
                        ));
                    }
                }
                for n in 0..nm {
                    let lhs = self.act(a, t.mul(m, n));
                    let rhs = self.act(self.act(a, n), m);
                    if lhs != rhs {
                        return Err(Error::law(
                            "action composition α.(m;n) = (α.n).m",
                            format!(
                                "(α, m, n) = ({a}, {}, {})",
                                t.monoid().name(m),
                                t.monoid().name(n)
                            ),
                        ));
                    }
                }
            }
        }
        if t.is_reflexive() {
            for v in 0..self.n_v {
                let l = self.loops[v];
                if let Some(x) = (0..nx).find(|&x| self.inc(l, x) != v) {
                    return Err(Error::law(
                        "distinguished loop incidence",
                        format!(
                            "vertex {v}: loop {l} has {}-incidence {}",
                            t.xset().name(x),
                            self.inc(l, x)
                        ),
                    ));
                }
                if let Some(m) = (0..nm).find(|&m| self.act(l, m) != l) {
                    return Err(Error::law(
                        "distinguished loop fixed",
                        format!("vertex {v}: loop {l} moved by {}", t.monoid().name(m)),
                    ));
                }
            }
            for a in 0..self.n_a {
                for x in 0..nx {
                    let lhs = self.loops[self.inc(a, x)];
                    let rhs = self.act(a, t.fix_elem(x));
                    if lhs != rhs {
                        return Err(Error::law(
                            "reflexive incidence (α.x).ℓ = α.x_ℓ",
                            format!("(α, x) = ({a}, {}): {lhs} != {rhs}", t.xset().name(x)),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn theory(&self) -> &Arc<Theory> {
        &self.theory
    }

    pub fn vertex_count(&self) -> usize {
        self.n_v
    }

    pub fn arc_count(&self) -> usize {
        self.n_a
    }

    pub fn is_reflexive(&self) -> bool {
        self.theory.is_reflexive()
    }

    #[inline]
    pub fn inc(&self, arc: usize, x: usize) -> usize {
        self.inc[arc * self.theory.x_len() + x]
    }

    #[inline]
    pub fn act(&self, arc: usize, m: usize) -> usize {
        self.act[arc * self.theory.m_len() + m]
    }

    /// The `X`-indexed incidence of an arc.
    pub fn profile(&self, arc: usize) -> &[usize] {
        let nx = self.theory.x_len();
        &self.inc[arc * nx..(arc + 1) * nx]
    }

    /// Distinguished loop of `v`; `None` for non-reflexive graphs.
    pub fn loop_at(&self, v: usize) -> Option<usize> {
        self.loops.get(v).copied()
    }

    pub fn loops(&self) -> &[usize] {
        &self.loops
    }

    pub fn is_loop(&self, arc: usize) -> bool {
        let p = self.profile(arc);
        p.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_distinguished(&self, arc: usize) -> bool {
        self.is_reflexive() && self.n_v > 0 && {
            let p = self.profile(arc);
            match p.first() {
                Some(&v) => self.loops[v] == arc,
                None => self.loops.contains(&arc),
            }
        }
    }

    pub fn inc_table(&self) -> Vec<Vec<usize>> {
        chunk(&self.inc, self.theory.x_len(), self.n_a)
    }

    pub fn act_table(&self) -> Vec<Vec<usize>> {
        chunk(&self.act, self.theory.m_len(), self.n_a)
    }

    pub fn vertex_names(&self) -> Option<&[String]> {
        self.vertex_names.as_deref()
    }

    pub fn arc_names(&self) -> Option<&[String]> {
        self.arc_names.as_deref()
    }

    pub fn vertex_label(&self, v: usize) -> String {
        match &self.vertex_names {
            Some(n) => n[v].clone(),
            None => format!("v{v}"),
        }
    }

    pub fn arc_label(&self, a: usize) -> String {
        match &self.arc_names {
            Some(n) => n[a].clone(),
            None => format!("a{a}"),
        }
    }

    /// Same presheaf data, ignoring display names.
    pub fn same_data(&self, other: &XMGraph) -> bool {
        same_theory(&self.theory, &other.theory)
            && self.n_v == other.n_v
            && self.n_a == other.n_a
            && self.inc == other.inc
            && self.act == other.act
            && self.loops == other.loops
    }

    /// Exhaustive count of compatibility-law failures (zero for any graph
    /// that passed construction).
    pub fn compatibility_violations(&self) -> usize {
        let t = &*self.theory;
        let mut bad = 0;
        for a in 0..self.n_a {
            for m in 0..t.m_len() {
                for x in 0..t.x_len() {
                    if self.inc(self.act(a, m), x) != self.inc(a, t.act_x(x, m)) {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }
}

impl fmt::Display for XMGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} graph: {} vertices, {} arcs",
            self.theory.label(),
            self.n_v,
            self.n_a
        )
    }
}

fn chunk(flat: &[usize], width: usize, rows: usize) -> Vec<Vec<usize>> {
    if width == 0 {
        return vec![Vec::new(); rows];
    }
    flat.chunks(width).map(|c| c.to_vec()).collect()
}

pub(crate) fn same_theory(a: &Arc<Theory>, b: &Arc<Theory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn require_same_theory(a: &XMGraph, b: &XMGraph) -> Result<()> {
    if same_theory(&a.theory, &b.theory) {
        Ok(())
    } else {
        Err(Error::TheoryMismatch(format!(
            "{} vs {}",
            a.theory.label(),
            b.theory.label()
        )))
    }
}

/// Which representable presheaf to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representable {
    V,
    A,
}

/// The Yoneda presheaf `hom(-, V)` or `hom(-, A)`.
///
/// `A̲` has vertex set `X`, arc set `M`, `inc(k, x) = x.k` and
/// `k.m = mul(m, k)` (precomposition `k ∘ m`); reflexively its loops are the
/// fixed elements.
pub fn representable(theory: &Arc<Theory>, obj: Representable) -> XMGraph {
    let t = &**theory;
    let graph = match obj {
        Representable::V if t.is_reflexive() => XMGraph::from_flat(
            theory.clone(),
            1,
            1,
            vec![0; t.x_len()],
            vec![0; t.m_len()],
            vec![0],
        ),
        Representable::V => {
            XMGraph::from_flat(theory.clone(), 1, 0, Vec::new(), Vec::new(), Vec::new())
        }
        Representable::A => {
            let (nx, nm) = (t.x_len(), t.m_len());
            let inc = (0..nm)
                .flat_map(|k| (0..nx).map(move |x| t.act_x(x, k)))
                .collect();
            let act = (0..nm)
                .flat_map(|k| (0..nm).map(move |m| t.mul(m, k)))
                .collect();
            let loops = if t.is_reflexive() {
                t.fix_elems().to_vec()
            } else {
                Vec::new()
            };
            XMGraph::from_flat(theory.clone(), nx, nm, inc, act, loops)
        }
    };
    let graph = graph.expect("representables satisfy the presheaf laws");
    match obj {
        Representable::V => graph,
        Representable::A => {
            let vnames = t.xset().names().iter().map(|x| format!("v_{x}")).collect();
            let anames = t
                .monoid()
                .names()
                .iter()
                .map(|m| format!("a_{m}"))
                .collect();
            graph
                .with_names(Some(vnames), Some(anames))
                .expect("sizes match")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcKind {
    NonLoop,
    FixedLoop,
    UnfixedLoop,
    DistinguishedLoop,
}

impl ArcKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArcKind::NonLoop => "nonloop",
            ArcKind::FixedLoop => "fixed-loop",
            ArcKind::UnfixedLoop => "unfixed-loop",
            ArcKind::DistinguishedLoop => "distinguished-loop",
        }
    }
}

/// An orbit of arcs under the invertible elements of `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcClass {
    pub kind: ArcKind,
    pub orbit: Vec<usize>,
}

/// Partitions the arcs into orbits under the units of `M`, ordered by least
/// arc index.
pub fn arc_orbits(g: &XMGraph) -> Vec<Vec<usize>> {
    let units = g.theory.invertibles();
    let mut seen = vec![false; g.n_a];
    let mut orbits = Vec::new();
    for a in 0..g.n_a {
        if seen[a] {
            continue;
        }
        let mut orbit: Vec<usize> = units.iter().map(|&u| g.act(a, u)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &b in &orbit {
            seen[b] = true;
        }
        orbits.push(orbit);
    }
    orbits
}

pub fn classify_arcs(g: &XMGraph) -> Vec<ArcClass> {
    arc_orbits(g)
        .into_iter()
        .map(|orbit| {
            let rep = orbit[0];
            let kind = if !g.is_loop(rep) {
                ArcKind::NonLoop
            } else if g.is_distinguished(rep) {
                ArcKind::DistinguishedLoop
            } else if orbit.len() == 1 {
                ArcKind::FixedLoop
            } else {
                ArcKind::UnfixedLoop
            };
            ArcClass { kind, orbit }
        })
        .collect()
}

/// A natural transformation between graphs over the same theory.
#[derive(Clone, Debug)]
pub struct GraphMorphism {
    src: Arc<XMGraph>,
    dst: Arc<XMGraph>,
    v: Vec<usize>,
    a: Vec<usize>,
}

impl PartialEq for GraphMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
            && self.a == other.a
            && (Arc::ptr_eq(&self.src, &other.src) || self.src.same_data(&other.src))
            && (Arc::ptr_eq(&self.dst, &other.dst) || self.dst.same_data(&other.dst))
    }
}

impl Eq for GraphMorphism {}

impl GraphMorphism {
    pub fn new(src: Arc<XMGraph>, dst: Arc<XMGraph>, v: Vec<usize>, a: Vec<usize>) -> Result<Self> {
        require_same_theory(&src, &dst)?;
        if let Some(violation) = morphism_violation(&src, &dst, &v, &a) {
            return Err(violation);
        }
        Ok(Self { src, dst, v, a })
    }

    pub(crate) fn new_unchecked(
        src: Arc<XMGraph>,
        dst: Arc<XMGraph>,
        v: Vec<usize>,
        a: Vec<usize>,
    ) -> Self {
        debug_assert!(morphism_violation(&src, &dst, &v, &a).is_none());
        Self { src, dst, v, a }
    }

    pub fn identity(g: &Arc<XMGraph>) -> Self {
        Self {
            src: g.clone(),
            dst: g.clone(),
            v: (0..g.n_v).collect(),
            a: (0..g.n_a).collect(),
        }
    }

    pub fn src(&self) -> &Arc<XMGraph> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<XMGraph> {
        &self.dst
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.v
    }

    pub fn arc_map(&self) -> &[usize] {
        &self.a
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GraphMorphism) -> Result<GraphMorphism> {
        if !(Arc::ptr_eq(&self.dst, &next.src) || self.dst.same_data(&next.src)) {
            return Err(Error::NotComposable("codomain and domain differ".into()));
        }
        Ok(GraphMorphism {
            src: self.src.clone(),
            dst: next.dst.clone(),
            v: self.v.iter().map(|&v| next.v[v]).collect(),
            a: self.a.iter().map(|&a| next.a[a]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        is_injective(&self.v) && is_injective(&self.a)
    }

    pub fn is_surjective(&self) -> bool {
        is_surjective(&self.v, self.dst.n_v) && is_surjective(&self.a, self.dst.n_a)
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// `outer ∘ inner`.
pub fn compose(outer: &GraphMorphism, inner: &GraphMorphism) -> Result<GraphMorphism> {
    inner.then(outer)
}

pub(crate) fn is_injective(map: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::with_capacity(map.len());
    map.iter().all(|x| seen.insert(*x))
}

pub(crate) fn is_surjective(map: &[usize], codomain: usize) -> bool {
    let mut hit = vec![false; codomain];
    for &x in map {
        hit[x] = true;
    }
    hit.into_iter().all(|h| h)
}

/// First reason the tables fail to define a morphism `src → dst`, if any.
pub fn morphism_violation(src: &XMGraph, dst: &XMGraph, v: &[usize], a: &[usize]) -> Option<Error> {
    let t = &*src.theory;
    if v.len() != src.n_v || a.len() != src.n_a {
        return Some(Error::invalid(
            "morphism",
            "table lengths do not match the domain",
        ));
    }
    if v.iter().any(|&w| w >= dst.n_v) || a.iter().any(|&b| b >= dst.n_a) {
        return Some(Error::invalid("morphism", "image out of range"));
    }
    for alpha in 0..src.n_a {
        for x in 0..t.x_len() {
            if v[src.inc(alpha, x)] != dst.inc(a[alpha], x) {
                return Some(Error::law(
                    "morphism incidence",
                    format!("arc {alpha} at {}", t.xset().name(x)),
                ));
            }
        }
        for m in 0..t.m_len() {
            if a[src.act(alpha, m)] != dst.act(a[alpha], m) {
                return Some(Error::law(
                    "morphism action",
                    format!("arc {alpha} under {}", t.monoid().name(m)),
                ));
            }
        }
    }
    if t.is_reflexive() {
        for w in 0..src.n_v {
            if a[src.loops[w]] != dst.loops[v[w]] {
                return Some(Error::law("morphism loops", format!("vertex {w}")));
            }
        }
    }
    None
}

/// The morphism `V̲ → G` classifying vertex `v`.
pub fn yoneda_vertex(g: &Arc<XMGraph>, v: usize) -> GraphMorphism {
    let rep = Arc::new(representable(&g.theory, Representable::V));
    let arcs = if g.is_reflexive() {
        vec![g.loops[v]]
    } else {
        Vec::new()
    };
    GraphMorphism::new_unchecked(rep, g.clone(), vec![v], arcs)
}

/// The morphism `A̲ → G` classifying arc `alpha`: `x ↦ α.x`, `k ↦ α.k`.
pub fn yoneda_arc(g: &Arc<XMGraph>, alpha: usize) -> GraphMorphism {
    let t = &g.theory;
    let rep = Arc::new(representable(t, Representable::A));
    let v = (0..t.x_len()).map(|x| g.inc(alpha, x)).collect();
    let a = (0..t.m_len()).map(|k| g.act(alpha, k)).collect();
    GraphMorphism::new_unchecked(rep, g.clone(), v, a)
}

/// Tuning for [`enumerate_homs_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
    /// Stop after this many solutions.
    pub limit: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: search_budget(),
            limit: None,
        }
    }
}

/// All morphisms `g → h` in lexicographic order of (vertex table, arc table).
pub fn enumerate_homs(g: &Arc<XMGraph>, h: &Arc<XMGraph>) -> Result<Vec<GraphMorphism>> {
    enumerate_homs_with(g, h, SearchOptions::default())
}

pub fn enumerate_homs_with(
    g: &Arc<XMGraph>,
    h: &Arc<XMGraph>,
    opts: SearchOptions,
) -> Result<Vec<GraphMorphism>> {
    let mut out = Vec::new();
    for_each_hom(g, h, opts, |v, a| {
        out.push(GraphMorphism::new_unchecked(
            g.clone(),
            h.clone(),
            v.to_vec(),
            a.to_vec(),
        ));
        opts.limit.is_none_or(|l| out.len() < l)
    })?;
    Ok(out)
}

pub fn count_homs(g: &Arc<XMGraph>, h: &Arc<XMGraph>) -> Result<usize> {
    let mut n = 0usize;
    for_each_hom(g, h, SearchOptions::default(), |_, _| {
        n += 1;
        true
    })?;
    Ok(n)
}

/// Streams morphisms `g → h` as (vertex table, arc table) to `visit`, which
/// returns `false` to stop early.
///
/// Vertices are assigned first, in index order; a partial vertex assignment
/// is pruned as soon as some arc with fully assigned incidence has no
/// matching target arc. Arcs are then chosen in index order and each choice
/// is propagated along the arc's `M`-orbit.
pub fn for_each_hom(
    g: &XMGraph,
    h: &XMGraph,
    opts: SearchOptions,
    mut visit: impl FnMut(&[usize], &[usize]) -> bool,
) -> Result<()> {
    require_same_theory(g, h)?;
    let mut search = HomSearch::new(g, h, opts.budget, false);
    search.vertices(0, &mut visit)?;
    Ok(())
}

struct HomSearch<'a> {
    g: &'a XMGraph,
    h: &'a XMGraph,
    nm: usize,
    budget: u64,
    nodes: u64,
    v: Vec<usize>,
    a: Vec<usize>,
    /// arcs of g whose incidence is complete once vertex i is assigned
    arcs_closed_at: Vec<Vec<usize>>,
    /// target arcs grouped by incidence profile
    by_profile: std::collections::HashMap<Vec<usize>, Vec<usize>>,
    stopped: bool,
    /// restrict to injective maps, tracking used targets
    injective: bool,
    used_v: Vec<bool>,
    used_a: Vec<bool>,
}

const UNSET: usize = usize::MAX;

impl<'a> HomSearch<'a> {
    fn new(g: &'a XMGraph, h: &'a XMGraph, budget: u64, injective: bool) -> Self {
        let nm = g.theory.m_len();
        let mut arcs_closed_at = vec![Vec::new(); g.n_v];
        for alpha in 0..g.n_a {
            if let Some(&last) = g.profile(alpha).iter().max() {
                arcs_closed_at[last].push(alpha);
            }
        }
        let mut by_profile: std::collections::HashMap<Vec<usize>, Vec<usize>> = Default::default();
        for beta in 0..h.n_a {
            by_profile
                .entry(h.profile(beta).to_vec())
                .or_default()
                .push(beta);
        }
        Self {
            g,
            h,
            nm,
            budget,
            nodes: 0,
            v: vec![UNSET; g.n_v],
            a: vec![UNSET; g.n_a],
            arcs_closed_at,
            by_profile,
            stopped: false,
            injective,
            used_v: vec![false; h.n_v],
            used_a: vec![false; h.n_a],
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Capacity(format!(
                "homomorphism search exceeded its budget of {} nodes",
                self.budget
            )));
        }
        Ok(())
    }

    fn image_profile(&self, alpha: usize) -> Vec<usize> {
        self.g.profile(alpha).iter().map(|&w| self.v[w]).collect()
    }

    fn vertices(
        &mut self,
        i: usize,
        visit: &mut impl FnMut(&[usize], &[usize]) -> bool,
    ) -> Result<()> {
        if self.stopped {
            return Ok(());
        }
        if i == self.g.n_v {
            return self.start_arcs(visit);
        }
        for w in 0..self.h.n_v {
            if self.injective && self.used_v[w] {
                continue;
            }
            self.tick()?;
            self.v[i] = w;
            self.used_v[w] = true;
            let feasible = self.arcs_closed_at[i]
                .iter()
                .all(|&alpha| self.by_profile.contains_key(&self.image_profile(alpha)));
            if feasible {
                self.vertices(i + 1, visit)?;
            }
            self.used_v[w] = false;
            if self.stopped {
                break;
            }
        }
        self.v[i] = UNSET;
        Ok(())
    }

    fn start_arcs(&mut self, visit: &mut impl FnMut(&[usize], &[usize]) -> bool) -> Result<()> {
        self.a.iter_mut().for_each(|x| *x = UNSET);
        self.used_a.iter_mut().for_each(|x| *x = false);
        if self.g.is_reflexive() {
            for w in 0..self.g.n_v {
                let (src, dst) = (self.g.loops[w], self.h.loops[self.v[w]]);
                if self.a[src] == UNSET {
                    if self.injective && self.used_a[dst] {
                        return Ok(());
                    }
                    self.a[src] = dst;
                    self.used_a[dst] = true;
                } else if self.a[src] != dst {
                    return Ok(());
                }
            }
        }
        self.arcs(0, visit)
    }

    /// Assigns `alpha ↦ beta` and its orbit; returns the newly set arcs, or
    /// `None` (with nothing changed) on conflict.
    fn assign(&mut self, alpha: usize, beta: usize) -> Option<Vec<usize>> {
        let mut set = Vec::with_capacity(self.nm);
        for m in 0..self.nm {
            let src = self.g.act(alpha, m);
            let dst = self.h.act(beta, m);
            match self.a[src] {
                UNSET if !(self.injective && self.used_a[dst]) => {
                    self.a[src] = dst;
                    self.used_a[dst] = true;
                    set.push(src);
                }
                existing if existing == dst => {}
                _ => {
                    self.release(&set);
                    return None;
                }
            }
        }
        Some(set)
    }

    fn release(&mut self, set: &[usize]) {
        for &s in set {
            self.used_a[self.a[s]] = false;
            self.a[s] = UNSET;
        }
    }

    fn arcs(
        &mut self,
        from: usize,
        visit: &mut impl FnMut(&[usize], &[usize]) -> bool,
    ) -> Result<()> {
        let Some(alpha) = (from..self.g.n_a).find(|&a| self.a[a] == UNSET) else {
            if !visit(&self.v, &self.a) {
                self.stopped = true;
            }
            return Ok(());
        };
        let wanted = self.image_profile(alpha);
        let candidates = match self.by_profile.get(&wanted) {
            Some(c) => c.clone(),
            None => return Ok(()),
        };
        for beta in candidates {
            self.tick()?;
            if let Some(set) = self.assign(alpha, beta) {
                self.arcs(alpha + 1, visit)?;
                self.release(&set);
                if self.stopped {
                    break;
                }
            }
        }
        Ok(())
    }
}

/// Some isomorphism `g → h`, if one exists.
pub fn find_isomorphism(g: &Arc<XMGraph>, h: &Arc<XMGraph>) -> Result<Option<GraphMorphism>> {
    if g.n_v != h.n_v || g.n_a != h.n_a || !same_theory(&g.theory, &h.theory) {
        return Ok(None);
    }
    let mut found = None;
    let mut search = HomSearch::new(g, h, search_budget(), true);
    search.vertices(0, &mut |v: &[usize], a: &[usize]| {
        found = Some(GraphMorphism::new_unchecked(
            g.clone(),
            h.clone(),
            v.to_vec(),
            a.to_vec(),
        ));
        false
    })?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MonoidKind;
    use crate::catalog;
    use itertools::Itertools;

    fn sym2() -> Arc<Theory> {
        Theory::standard(MonoidKind::Symmetric, 2).unwrap()
    }

    #[test]
    fn representable_sizes() {
        let cases = [
            (MonoidKind::Oriented, (1, 0), (2, 1)),
            (MonoidKind::Symmetric, (1, 0), (2, 2)),
            (MonoidKind::ReflexiveOriented, (1, 1), (2, 3)),
            (MonoidKind::ReflexiveSymmetric, (1, 1), (2, 4)),
        ];
        for (kind, v, a) in cases {
            let t = Theory::standard(kind, 2).unwrap();
            let gv = representable(&t, Representable::V);
            let ga = representable(&t, Representable::A);
            assert_eq!((gv.vertex_count(), gv.arc_count()), v, "{kind}");
            assert_eq!((ga.vertex_count(), ga.arc_count()), a, "{kind}");
        }
        let t = Theory::standard(MonoidKind::ReflexiveOriented, 2).unwrap();
        let gv = representable(&t, Representable::V);
        assert_eq!(classify_arcs(&gv)[0].kind, ArcKind::DistinguishedLoop);
    }

    #[test]
    fn representables_have_no_unfixed_loops() {
        for kind in MonoidKind::ALL {
            for n in 1..=3 {
                let t = Theory::standard(kind, n).unwrap();
                let ga = representable(&t, Representable::A);
                assert!(
                    classify_arcs(&ga)
                        .iter()
                        .all(|c| c.kind != ArcKind::UnfixedLoop),
                    "{kind} n={n}"
                );
            }
        }
    }

    #[test]
    fn loop_graphs_validate() {
        let l = catalog::loops_symmetric(2).unwrap();
        let classes = classify_arcs(&l);
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.kind == ArcKind::FixedLoop));
        let lr = catalog::loops_reflexive(2).unwrap();
        let kinds: Vec<_> = classify_arcs(&lr).iter().map(|c| c.kind).collect();
        assert_eq!(kinds, [ArcKind::DistinguishedLoop, ArcKind::FixedLoop]);
    }

    #[test]
    fn rejects_incompatible_action() {
        // Two arcs swapped by the involution but with the same oriented
        // incidence (v0, v1): ∂(α.i)(s) must equal ∂(α)(t).
        let err = XMGraph::new(
            sym2(),
            2,
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0, 1], vec![1, 0]],
            None,
        )
        .unwrap_err();
        match err {
            Error::Law { law, detail } => {
                assert!(law.contains("compatibility"));
                assert!(detail.contains("(α, m, x)"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn example_2_3_classification() {
        let g = catalog::example_2_3().unwrap();
        let classes = classify_arcs(&g);
        let unfixed: Vec<_> = classes
            .iter()
            .filter(|c| c.kind == ArcKind::UnfixedLoop)
            .collect();
        assert_eq!(unfixed.len(), 1);
        let names: Vec<_> = unfixed[0].orbit.iter().map(|&a| g.arc_label(a)).collect();
        assert_eq!(names, ["β0", "β1"]);
        assert_eq!(
            classes
                .iter()
                .filter(|c| c.kind == ArcKind::DistinguishedLoop)
                .count(),
            3
        );
        assert_eq!(
            classes
                .iter()
                .filter(|c| c.kind == ArcKind::NonLoop)
                .count(),
            2
        );
    }

    #[test]
    fn yoneda_counts() {
        let t = sym2();
        let v = Arc::new(representable(&t, Representable::V));
        let a = Arc::new(representable(&t, Representable::A));
        let l = Arc::new(catalog::loops_symmetric(2).unwrap());
        assert_eq!(enumerate_homs(&v, &a).unwrap().len(), 2);
        assert_eq!(enumerate_homs(&a, &l).unwrap().len(), 2);
        assert_eq!(enumerate_homs(&l, &v).unwrap().len(), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let t = sym2();
        let a = Arc::new(representable(&t, Representable::A));
        let opts = SearchOptions {
            budget: 1,
            limit: None,
        };
        assert!(matches!(
            enumerate_homs_with(&a, &a, opts),
            Err(Error::Capacity(_))
        ));
    }

    fn brute_force(g: &XMGraph, h: &XMGraph) -> Vec<(Vec<usize>, Vec<usize>)> {
        let vmaps = (0..g.vertex_count())
            .map(|_| 0..h.vertex_count())
            .multi_cartesian_product();
        let vmaps: Vec<Vec<usize>> = if g.vertex_count() == 0 {
            vec![vec![]]
        } else {
            vmaps.collect()
        };
        let amaps: Vec<Vec<usize>> = if g.arc_count() == 0 {
            vec![vec![]]
        } else {
            (0..g.arc_count())
                .map(|_| 0..h.arc_count())
                .multi_cartesian_product()
                .collect()
        };
        let mut out = Vec::new();
        for v in &vmaps {
            for a in &amaps {
                if morphism_violation(g, h, v, a).is_none() {
                    out.push((v.clone(), a.clone()));
                }
            }
        }
        out
    }

    #[test]
    fn search_matches_brute_force() {
        let t = Theory::standard(MonoidKind::ReflexiveSymmetric, 2).unwrap();
        let small = crate::random::small_graphs(&t, 2, 4, 17, 12);
        for g in &small {
            for h in &small {
                let g = Arc::new(g.clone());
                let h = Arc::new(h.clone());
                let fast: Vec<_> = enumerate_homs(&g, &h)
                    .unwrap()
                    .into_iter()
                    .map(|f| (f.vertex_map().to_vec(), f.arc_map().to_vec()))
                    .collect();
                assert_eq!(fast, brute_force(&g, &h));
            }
        }
        let t = sym2();
        let small = crate::random::small_graphs(&t, 2, 3, 5, 12);
        for g in &small {
            for h in &small {
                let (g, h) = (Arc::new(g.clone()), Arc::new(h.clone()));
                let fast: Vec<_> = enumerate_homs(&g, &h)
                    .unwrap()
                    .into_iter()
                    .map(|f| (f.vertex_map().to_vec(), f.arc_map().to_vec()))
                    .collect();
                assert_eq!(fast, brute_force(&g, &h));
            }
        }
    }

    #[test]
    fn identity_and_composition() {
        let t = sym2();
        let a = Arc::new(representable(&t, Representable::A));
        let l = Arc::new(catalog::loops_symmetric(2).unwrap());
        let f = &enumerate_homs(&a, &l).unwrap()[1];
        let id_a = GraphMorphism::identity(&a);
        let id_l = GraphMorphism::identity(&l);
        assert_eq!(compose(f, &id_a).unwrap(), *f);
        assert_eq!(compose(&id_l, f).unwrap(), *f);
        let ends = enumerate_homs(&a, &a).unwrap();
        let (p, q) = (&ends[1], &ends[0]);
        let left = compose(f, &compose(p, q).unwrap()).unwrap();
        let right = compose(&compose(f, p).unwrap(), q).unwrap();
        assert_eq!(left, right);
        assert!(compose(&id_a, f).is_err());
    }
}
