use std::fmt::Write as _;
use std::sync::Arc;

use clap::ValueEnum;
use xmgraph::dot::{default_mode, to_dot};
use xmgraph::expo::exponential;
use xmgraph::graph::{
    classify_arcs, count_homs, find_isomorphism, representable, ArcKind, Representable,
};
use xmgraph::limits::terminal;
use xmgraph::{catalog, random, MonoidKind, Theory, XMGraph};

use crate::commands::CliResult;
use crate::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    /// Undirected reflexive graph with a band at one vertex.
    #[value(name = "ex-2-3")]
    Ex23,
    /// Representables for every kind at |X| = 2 and the Yoneda counts.
    #[value(name = "yoneda-x2")]
    YonedaX2,
    /// Exponentials with the vertex representable as exponent.
    #[value(name = "ex-4-1")]
    Ex41,
    /// Two symmetric loops raised to the arc representable.
    #[value(name = "ex-4-2")]
    Ex42,
    /// Two reflexive loops raised to the arc representable.
    #[value(name = "ex-4-3")]
    Ex43,
}

pub fn run(example: Example) -> CliResult<String> {
    let mut out = String::new();
    match example {
        Example::Ex23 => ex_2_3(&mut out)?,
        Example::YonedaX2 => yoneda_x2(&mut out)?,
        Example::Ex41 => ex_4_1(&mut out)?,
        Example::Ex42 => ex_4_2(&mut out)?,
        Example::Ex43 => ex_4_3(&mut out)?,
    }
    Ok(out)
}

fn ex_2_3(out: &mut String) -> CliResult<()> {
    let g = catalog::example_2_3()?;
    report::summary(out, "G", &g);
    out.push_str("orbits:\n");
    report::orbits(out, &g);
    out.push_str("dot:\n");
    out.push_str(&to_dot(&g, "G", default_mode(&g))?);
    Ok(())
}

fn yoneda_x2(out: &mut String) -> CliResult<()> {
    out.push_str("representables at |X| = 2:\n");
    for kind in MonoidKind::ALL {
        let t = Theory::standard(kind, 2)?;
        let v = representable(&t, Representable::V);
        let a = representable(&t, Representable::A);
        let dist = |g: &XMGraph| {
            (0..g.arc_count())
                .filter(|&x| g.is_distinguished(x))
                .count()
        };
        let _ = writeln!(
            out,
            "  {kind} (|M| = {}): V̲ ({}, {}; {} distinguished)  A̲ ({}, {}; {} distinguished)",
            t.m_len(),
            v.vertex_count(),
            v.arc_count(),
            dist(&v),
            a.vertex_count(),
            a.arc_count(),
            dist(&a)
        );
    }
    let g = Arc::new(catalog::example_2_3()?);
    let t = g.theory().clone();
    let v = Arc::new(representable(&t, Representable::V));
    let a = Arc::new(representable(&t, Representable::A));
    let _ = writeln!(
        out,
        "Yoneda on the ex-2-3 graph: |hom(V̲, G)| = {} = |G(V)| = {}; |hom(A̲, G)| = {} = |G(A)| = {}",
        count_homs(&v, &g)?,
        g.vertex_count(),
        count_homs(&a, &g)?,
        g.arc_count()
    );
    Ok(())
}

fn ex_4_1(out: &mut String) -> CliResult<()> {
    for n in [2, 3] {
        let t = Theory::standard(MonoidKind::Symmetric, n)?;
        let v = Arc::new(representable(&t, Representable::V));
        let e = exponential(&v, &v)?;
        let term = Arc::new(terminal(&t));
        let iso = find_isomorphism(&e.graph, &term)?.is_some();
        let kinds: Vec<&str> = classify_arcs(&e.graph)
            .iter()
            .map(|c| c.kind.as_str())
            .collect();
        let _ = writeln!(
            out,
            "V̲^V̲ over symmetric X{n}: {} vertex, {} arc ({}); isomorphic to the terminal graph: {}",
            e.graph.vertex_count(),
            e.graph.arc_count(),
            kinds.join(", "),
            if iso { "yes" } else { "no" }
        );
    }
    let t = Theory::standard(MonoidKind::Symmetric, 2)?;
    let v = Arc::new(representable(&t, Representable::V));
    out.push_str("|G^V̲(A)| = |G(V)|^|X| on random graphs over symmetric X2 (seed 1):\n");
    for (i, g) in random::small_graphs(&t, 3, 4, 1, 5).into_iter().enumerate() {
        let g = Arc::new(g);
        let e = exponential(&g, &v)?;
        let expected = g.vertex_count().pow(2);
        let _ = writeln!(
            out,
            "  G{i}: |G(V)| = {}, |G^V̲(A)| = {} {} {}",
            g.vertex_count(),
            e.graph.arc_count(),
            if e.graph.arc_count() == expected {
                "="
            } else {
                "!="
            },
            expected
        );
    }
    Ok(())
}

fn ex_4_2(out: &mut String) -> CliResult<()> {
    let t = Theory::standard(MonoidKind::Symmetric, 2)?;
    let l = Arc::new(catalog::loops_symmetric(2)?);
    let a = Arc::new(representable(&t, Representable::A));
    let e = exponential(&l, &a)?;
    report::summary(out, "L^A", &e.graph);
    out.push_str("orbits:\n");
    report::orbits(out, &e.graph);
    let (p, ev) = e.eval_morphism()?;
    let id_arc = t.identity();
    out.push_str("evaluation at the identity arc:\n");
    for phi in 0..e.graph.arc_count() {
        let _ = writeln!(
            out,
            "  ev({}, {}) = {}",
            e.graph.arc_label(phi),
            a.arc_label(id_arc),
            l.arc_label(ev.arc_map()[p.arc(phi, id_arc)])
        );
    }
    out.push_str("dot:\n");
    out.push_str(&to_dot(&e.graph, "L^A", default_mode(&e.graph))?);
    Ok(())
}

fn ex_4_3(out: &mut String) -> CliResult<()> {
    let t = Theory::standard(MonoidKind::ReflexiveSymmetric, 2)?;
    let l = Arc::new(catalog::loops_reflexive(2)?);
    let a = Arc::new(representable(&t, Representable::A));
    let e = exponential(&l, &a)?;
    let g = &e.graph;
    let classes = classify_arcs(g);
    let count = |k: ArcKind| classes.iter().filter(|c| c.kind == k).count();
    let fixed = count(ArcKind::FixedLoop) + count(ArcKind::DistinguishedLoop);
    let _ = writeln!(out, "vertices: {}", g.vertex_count());
    let _ = writeln!(out, "arcs: {}", g.arc_count());
    let _ = writeln!(out, "fixed loops: {fixed}");
    for v in 0..g.vertex_count() {
        let here = classes
            .iter()
            .filter(|c| c.orbit.len() == 1 && g.is_loop(c.orbit[0]) && g.inc(c.orbit[0], 0) == v)
            .count();
        let _ = writeln!(
            out,
            "  at {}: {here}, distinguished {}",
            g.vertex_label(v),
            g.arc_label(g.loop_at(v).expect("reflexive"))
        );
    }
    let sizes = |k: ArcKind| {
        let mut s: Vec<usize> = classes
            .iter()
            .filter(|c| c.kind == k)
            .map(|c| c.orbit.len())
            .collect();
        s.dedup();
        s
    };
    let _ = writeln!(
        out,
        "unfixed-loop pairs: {} (orbit sizes {:?})",
        count(ArcKind::UnfixedLoop),
        sizes(ArcKind::UnfixedLoop)
    );
    let _ = writeln!(
        out,
        "cross-edge pairs: {} (orbit sizes {:?})",
        count(ArcKind::NonLoop),
        sizes(ArcKind::NonLoop)
    );
    out.push_str("orbits:\n");
    report::orbits(out, g);
    Ok(())
}
