use std::fmt::Write as _;

use xmgraph::graph::{classify_arcs, ArcKind, GraphMorphism, XMGraph};

/// Counts of arc orbits by kind, in a fixed order.
pub fn orbit_counts(g: &XMGraph) -> [(ArcKind, usize, usize); 4] {
    let mut out = [
        (ArcKind::NonLoop, 0, 0),
        (ArcKind::FixedLoop, 0, 0),
        (ArcKind::UnfixedLoop, 0, 0),
        (ArcKind::DistinguishedLoop, 0, 0),
    ];
    for c in classify_arcs(g) {
        let slot = out
            .iter_mut()
            .find(|(k, _, _)| *k == c.kind)
            .expect("all kinds listed");
        slot.1 += 1;
        slot.2 += c.orbit.len();
    }
    out
}

pub fn summary(out: &mut String, name: &str, g: &XMGraph) {
    let _ = writeln!(out, "{name}: {g}");
    for (kind, orbits, arcs) in orbit_counts(g) {
        if orbits > 0 {
            let _ = writeln!(out, "  {}: {orbits} orbit(s), {arcs} arc(s)", kind.as_str());
        }
    }
}

pub fn orbits(out: &mut String, g: &XMGraph) {
    for c in classify_arcs(g) {
        let names: Vec<String> = c.orbit.iter().map(|&a| g.arc_label(a)).collect();
        let ends: Vec<String> = g
            .profile(c.orbit[0])
            .iter()
            .map(|&v| g.vertex_label(v))
            .collect();
        let _ = writeln!(
            out,
            "  {{{}}} at ({}): {}",
            names.join(", "),
            ends.join(", "),
            c.kind.as_str()
        );
    }
}

pub fn morphism(out: &mut String, name: &str, f: &GraphMorphism) {
    let (src, dst) = (f.src(), f.dst());
    let _ = writeln!(out, "{name}:");
    let vs: Vec<String> = (0..src.vertex_count())
        .map(|v| {
            format!(
                "{}->{}",
                src.vertex_label(v),
                dst.vertex_label(f.vertex_map()[v])
            )
        })
        .collect();
    let arcs: Vec<String> = (0..src.arc_count())
        .map(|a| format!("{}->{}", src.arc_label(a), dst.arc_label(f.arc_map()[a])))
        .collect();
    let _ = writeln!(out, "  vertices: {}", vs.join(" "));
    let _ = writeln!(out, "  arcs: {}", arcs.join(" "));
}
