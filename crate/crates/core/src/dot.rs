//! Graphviz DOT rendering.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{classify_arcs, ArcKind, XMGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DotMode {
    /// One edge per orbit of arcs under the units.
    Undirected,
    /// One edge per arc, from its first to its second incidence.
    Directed,
    /// Vertex nodes and arc-orbit nodes joined by labelled incidences.
    Bipartite,
}

impl DotMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DotMode::Undirected => "undirected",
            DotMode::Directed => "directed",
            DotMode::Bipartite => "bipartite",
        }
    }
}

impl std::str::FromStr for DotMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [DotMode::Undirected, DotMode::Directed, DotMode::Bipartite]
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                Error::invalid(
                    "dot mode",
                    format!("unknown mode `{s}` (undirected, directed, bipartite)"),
                )
            })
    }
}

/// Whether some unit swaps the two points of a two-point `X`.
fn swaps_ends(g: &XMGraph) -> bool {
    let t = g.theory();
    t.x_len() == 2 && t.invertibles().into_iter().any(|m| t.act_x(0, m) == 1)
}

/// Undirected for symmetric two-point theories, directed for other
/// two-point theories, bipartite otherwise.
pub fn default_mode(g: &XMGraph) -> DotMode {
    if swaps_ends(g) {
        DotMode::Undirected
    } else if g.theory().x_len() == 2 {
        DotMode::Directed
    } else {
        DotMode::Bipartite
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn to_dot(g: &XMGraph, name: &str, mode: DotMode) -> Result<String> {
    let nx = g.theory().x_len();
    match mode {
        DotMode::Undirected if !swaps_ends(g) => {
            return Err(Error::Unsupported(format!(
                "undirected rendering needs a two-point theory with a swap, got {}",
                g.theory().label()
            )))
        }
        DotMode::Directed if nx != 2 => {
            return Err(Error::Unsupported(format!(
                "directed rendering needs |X| = 2, got |X| = {nx}"
            )))
        }
        _ => {}
    }
    let directed = mode == DotMode::Directed;
    let (kw, sep) = if directed {
        ("digraph", "->")
    } else {
        ("graph", "--")
    };
    let mut out = String::new();
    let _ = writeln!(out, "{kw} {} {{", quote(name));
    for v in 0..g.vertex_count() {
        let _ = writeln!(out, "  v{v} [label={}];", quote(&g.vertex_label(v)));
    }
    let classes = classify_arcs(g);
    match mode {
        DotMode::Undirected => {
            for class in &classes {
                let a = class.orbit[0];
                let mut attrs = Vec::new();
                match class.kind {
                    ArcKind::DistinguishedLoop => attrs.push("style=dotted".to_string()),
                    ArcKind::UnfixedLoop => {
                        attrs.push(format!("label={}", quote(&class.orbit.len().to_string())))
                    }
                    _ => {}
                }
                attrs.push(format!("tooltip={}", quote(&orbit_names(g, &class.orbit))));
                let _ = writeln!(
                    out,
                    "  v{} {sep} v{} [{}];",
                    g.inc(a, 0),
                    g.inc(a, 1),
                    attrs.join(", ")
                );
            }
        }
        DotMode::Directed => {
            for a in 0..g.arc_count() {
                let style = if g.is_distinguished(a) {
                    ", style=dotted"
                } else {
                    ""
                };
                let _ = writeln!(
                    out,
                    "  v{} {sep} v{} [label={}{style}];",
                    g.inc(a, 0),
                    g.inc(a, 1),
                    quote(&g.arc_label(a))
                );
            }
        }
        DotMode::Bipartite => {
            let t = g.theory();
            for (i, class) in classes.iter().enumerate() {
                let a = class.orbit[0];
                let mut label = orbit_names(g, &class.orbit);
                if class.kind == ArcKind::UnfixedLoop {
                    let _ = write!(label, " ({})", class.orbit.len());
                }
                let style = if class.kind == ArcKind::DistinguishedLoop {
                    ", style=dotted"
                } else {
                    ""
                };
                let _ = writeln!(out, "  e{i} [shape=box, label={}{style}];", quote(&label));
                for x in 0..nx {
                    let _ = writeln!(
                        out,
                        "  e{i} {sep} v{} [label={}];",
                        g.inc(a, x),
                        quote(t.xset().name(x))
                    );
                }
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn orbit_names(g: &XMGraph, orbit: &[usize]) -> String {
    orbit
        .iter()
        .map(|&a| g.arc_label(a))
        .collect::<Vec<_>>()
        .join("~")
}

pub fn export_dot(g: &XMGraph, name: &str, mode: DotMode, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = to_dot(g, name, mode)?;
    std::fs::write(path, text).map_err(|e| {
        Error::invalid(
            "dot export",
            format!("cannot write {}: {e}", path.display()),
        )
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::MonoidKind;
    use crate::catalog;
    use crate::graph::{representable, Representable};
    use crate::theory::Theory;

    fn edges(dot: &str) -> Vec<&str> {
        dot.lines()
            .filter(|l| l.contains("--") || l.contains("->"))
            .collect()
    }

    #[test]
    fn example_graph_has_a_two_labelled_loop_at_b() {
        let g = catalog::example_2_3().unwrap();
        let dot = to_dot(&g, "G", default_mode(&g)).unwrap();
        assert_eq!(
            dot.lines()
                .filter(|l| l.contains("[label=") && !l.contains("--"))
                .count(),
            3
        );
        let e = edges(&dot);
        assert_eq!(e.len(), 6);
        assert!(e.iter().any(|l| l.starts_with("  v1 -- v1 [label=\"2\"")));
        assert_eq!(e.iter().filter(|l| l.contains("dotted")).count(), 3);
    }

    #[test]
    fn loops_to_the_arc() {
        let t = Theory::standard(MonoidKind::Symmetric, 2).unwrap();
        let l = Arc::new(catalog::loops_symmetric(2).unwrap());
        let a = Arc::new(representable(&t, Representable::A));
        let e = crate::expo::exponential(&l, &a).unwrap();
        let dot = to_dot(&e.graph, "L^A", DotMode::Undirected).unwrap();
        let e = edges(&dot);
        assert_eq!(e.len(), 3);
        assert!(e
            .iter()
            .any(|l| l.contains("label=\"2\"") && l.contains("01~10")));
        assert!(e.iter().any(|l| l.contains("\"00\"")));
        assert!(e.iter().any(|l| l.contains("\"11\"")));
    }

    #[test]
    fn reflexive_vertex_is_a_dotted_loop() {
        let t = Theory::standard(MonoidKind::ReflexiveSymmetric, 2).unwrap();
        let v = representable(&t, Representable::V);
        let dot = to_dot(&v, "V", DotMode::Undirected).unwrap();
        assert_eq!(edges(&dot), ["  v0 -- v0 [style=dotted, tooltip=\"a0\"];"]);
    }

    #[test]
    fn modes_by_theory() {
        let o = Theory::standard(MonoidKind::Oriented, 2).unwrap();
        let a = representable(&o, Representable::A);
        assert_eq!(default_mode(&a), DotMode::Directed);
        assert!(to_dot(&a, "A", DotMode::Undirected).is_err());
        let dot = to_dot(&a, "A", DotMode::Directed).unwrap();
        assert!(dot.starts_with("digraph"));
        assert_eq!(edges(&dot).len(), 1);
        let s3 = Theory::standard(MonoidKind::Symmetric, 3).unwrap();
        let a3 = representable(&s3, Representable::A);
        assert_eq!(default_mode(&a3), DotMode::Bipartite);
        assert!(to_dot(&a3, "A", DotMode::Directed).is_err());
        let dot = to_dot(&a3, "A", DotMode::Bipartite).unwrap();
        assert_eq!(edges(&dot).len(), 3);
    }

    #[test]
    fn names_are_quoted() {
        assert_eq!(quote("a\"b\\"), "\"a\\\"b\\\\\"");
    }
}
