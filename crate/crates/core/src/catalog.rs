//! Small named graphs used by examples, tests and the CLI.

use std::sync::Arc;

use crate::algebra::MonoidKind;
use crate::error::{Error, Result};
use crate::graph::XMGraph;
use crate::theory::Theory;

/// Builds a graph over a theory whose elements are all units or (reflexively)
/// fixed elements. `unit_act(α, σ)` gives the action of invertible `σ`; the
/// fixed elements act through the loops: `α.m' = (α.x).ℓ` for `m' = x_{m'}`.
pub fn assemble(
    theory: &Arc<Theory>,
    n_v: usize,
    inc: Vec<Vec<usize>>,
    unit_act: impl Fn(usize, usize) -> usize,
    loops: Option<Vec<usize>>,
) -> Result<XMGraph> {
    let t = &**theory;
    if !t.units_and_fixed_cover() {
        return Err(Error::Unsupported(format!(
            "{} has elements that are neither units nor fixed",
            t.label()
        )));
    }
    let act = (0..inc.len())
        .map(|a| {
            (0..t.m_len())
                .map(|m| match t.fix_point_of(m) {
                    Some(x) if t.is_reflexive() => {
                        let v = inc[a][x];
                        loops.as_ref().map_or(a, |l| l.get(v).copied().unwrap_or(a))
                    }
                    _ => unit_act(a, m),
                })
                .collect()
        })
        .collect();
    XMGraph::new(theory.clone(), n_v, inc, act, loops)
}

/// One vertex with two loops, both fixed by every permutation of `X`.
pub fn loops_symmetric(x_size: usize) -> Result<XMGraph> {
    let t = Theory::standard(MonoidKind::Symmetric, x_size)?;
    assemble(&t, 1, vec![vec![0; x_size]; 2], |a, _| a, None)?
        .with_names(Some(vec!["v".into()]), Some(vec!["0".into(), "1".into()]))
}

/// One vertex with its distinguished loop `0` and a second fixed loop `1`.
pub fn loops_reflexive(x_size: usize) -> Result<XMGraph> {
    let t = Theory::standard(MonoidKind::ReflexiveSymmetric, x_size)?;
    assemble(&t, 1, vec![vec![0; x_size]; 2], |a, _| a, Some(vec![0]))?
        .with_names(Some(vec!["v".into()]), Some(vec!["0".into(), "1".into()]))
}

/// The reflexive symmetric graph on `a, b, c` with a two-way arc between
/// `a` and `b`, a 2-loop at `b` and a two-way arc between `b` and `c`.
pub fn example_2_3() -> Result<XMGraph> {
    let t = Theory::standard(MonoidKind::ReflexiveSymmetric, 2)?;
    let (a, b, c) = (0, 1, 2);
    // α0 α1 β0 β1 γ0 γ1 ℓa ℓb ℓc
    let inc = vec![
        vec![a, b],
        vec![b, a],
        vec![b, b],
        vec![b, b],
        vec![b, c],
        vec![c, b],
        vec![a, a],
        vec![b, b],
        vec![c, c],
    ];
    let partner = [1, 0, 3, 2, 5, 4, 6, 7, 8];
    let id = t.identity();
    let g = assemble(
        &t,
        3,
        inc,
        |arc, m| if m == id { arc } else { partner[arc] },
        Some(vec![6, 7, 8]),
    )?;
    let names = |v: &[&str]| Some(v.iter().map(|s| s.to_string()).collect());
    g.with_names(
        names(&["a", "b", "c"]),
        names(&["α0", "α1", "β0", "β1", "γ0", "γ1", "ℓ_a", "ℓ_b", "ℓ_c"]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{classify_arcs, ArcKind};

    #[test]
    fn example_2_3_partners() {
        let g = example_2_3().unwrap();
        let t = g.theory().clone();
        let i = t.monoid().index_of("[t,s]").unwrap();
        assert_eq!(g.act(0, i), 1);
        assert_eq!(g.act(2, i), 3);
        assert_eq!(g.profile(4), [1, 2]);
        assert_eq!(g.profile(5), [2, 1]);
        let c_s = t.monoid().index_of("c_s").unwrap();
        assert_eq!(g.act(4, c_s), 7);
    }

    #[test]
    fn loop_graphs_for_three_points() {
        let g = loops_reflexive(3).unwrap();
        let kinds: Vec<_> = classify_arcs(&g).into_iter().map(|c| c.kind).collect();
        assert_eq!(kinds, [ArcKind::DistinguishedLoop, ArcKind::FixedLoop]);
        assert_eq!(loops_symmetric(3).unwrap().arc_count(), 2);
    }

    #[test]
    fn assemble_rejects_hereditary() {
        let t = Theory::standard(MonoidKind::Hereditary, 2).unwrap();
        assert!(assemble(&t, 1, vec![vec![0, 0]], |a, _| a, None).is_err());
    }
}
