use std::path::Path;
use std::sync::Arc;

use proptest::prelude::*;
use xmgraph::bridge::{Hypergraph, PowerGraph, ReflexiveFGraph};
use xmgraph::bundle::{Bundle, Item};
use xmgraph::expo::exponential;
use xmgraph::graph::{count_homs, enumerate_homs, GraphMorphism};
use xmgraph::limits::{coequalizer, coproduct, equalizer, product};
use xmgraph::{random, representable, MonoidKind, Representable, Theory, XMGraph};

fn theory(kind_ix: usize, n: usize) -> Arc<Theory> {
    Theory::standard(MonoidKind::ALL[kind_ix % MonoidKind::ALL.len()], n).unwrap()
}

fn graph(t: &Arc<Theory>, seed: u64) -> Arc<XMGraph> {
    Arc::new(random::random_graph(t, &mut random::rng(seed), 3, 4))
}

/// Theories on which the explicit exponential is available.
fn expo_theory(ix: usize) -> Arc<Theory> {
    let (kind, n) = [
        (MonoidKind::Oriented, 2),
        (MonoidKind::Oriented, 3),
        (MonoidKind::Symmetric, 2),
        (MonoidKind::Symmetric, 3),
        (MonoidKind::ReflexiveOriented, 2),
        (MonoidKind::ReflexiveSymmetric, 2),
    ][ix % 6];
    Theory::standard(kind, n).unwrap()
}

fn first_hom(g: &Arc<XMGraph>, h: &Arc<XMGraph>, pick: usize) -> Option<GraphMorphism> {
    let homs = enumerate_homs(g, h).unwrap();
    (!homs.is_empty()).then(|| homs[pick % homs.len()].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_graphs_are_compatible(k in 0usize..6, n in 1usize..=3, seed in any::<u64>()) {
        let t = theory(k, n);
        prop_assert_eq!(graph(&t, seed).compatibility_violations(), 0);
    }

    #[test]
    fn theory_axioms_hold(k in 0usize..6, n in 1usize..=3) {
        if let Ok(t) = Theory::standard(MonoidKind::ALL[k], n) {
            let report = t.check_axioms();
            prop_assert!(report.passed(), "{}", report);
        }
    }

    #[test]
    fn yoneda_counts(k in 0usize..6, seed in any::<u64>()) {
        let t = theory(k, 2);
        let g = graph(&t, seed);
        let v = Arc::new(representable(&t, Representable::V));
        let a = Arc::new(representable(&t, Representable::A));
        prop_assert_eq!(count_homs(&v, &g).unwrap(), g.vertex_count());
        prop_assert_eq!(count_homs(&a, &g).unwrap(), g.arc_count());
    }

    #[test]
    fn product_pairing_is_universal(k in 0usize..6, seeds in any::<[u64; 3]>(), pick in any::<[usize; 2]>()) {
        let t = theory(k, 2);
        let (f, g, h) = (graph(&t, seeds[0]), graph(&t, seeds[1]), graph(&t, seeds[2]));
        let p = product(&g, &h).unwrap();
        prop_assert_eq!(p.graph.vertex_count(), g.vertex_count() * h.vertex_count());
        prop_assert_eq!(p.graph.arc_count(), g.arc_count() * h.arc_count());
        prop_assert_eq!(
            count_homs(&f, &p.graph).unwrap(),
            count_homs(&f, &g).unwrap() * count_homs(&f, &h).unwrap()
        );
        if let (Some(a), Some(b)) = (first_hom(&f, &g, pick[0]), first_hom(&f, &h, pick[1])) {
            let ab = p.pair(&a, &b).unwrap();
            prop_assert_eq!(ab.then(&p.proj_left()).unwrap(), a);
            prop_assert_eq!(ab.then(&p.proj_right()).unwrap(), b);
        }
    }

    #[test]
    fn coproduct_copairing_is_universal(k in 0usize..6, seeds in any::<[u64; 3]>(), pick in any::<[usize; 2]>()) {
        let t = theory(k, 2);
        let (g, h, z) = (graph(&t, seeds[0]), graph(&t, seeds[1]), graph(&t, seeds[2]));
        let c = coproduct(&g, &h).unwrap();
        prop_assert_eq!(
            count_homs(&c.graph, &z).unwrap(),
            count_homs(&g, &z).unwrap() * count_homs(&h, &z).unwrap()
        );
        if let (Some(a), Some(b)) = (first_hom(&g, &z, pick[0]), first_hom(&h, &z, pick[1])) {
            let ab = c.copair(&a, &b).unwrap();
            prop_assert_eq!(c.inj_left().then(&ab).unwrap(), a);
            prop_assert_eq!(c.inj_right().then(&ab).unwrap(), b);
        }
    }

    #[test]
    fn equalizers_and_coequalizers_commute(k in 0usize..6, seeds in any::<[u64; 2]>(), pick in any::<[usize; 2]>()) {
        let t = theory(k, 2);
        let (g, h) = (graph(&t, seeds[0]), graph(&t, seeds[1]));
        if let (Some(f1), Some(f2)) = (first_hom(&g, &h, pick[0]), first_hom(&g, &h, pick[1])) {
            let (e, incl) = equalizer(&f1, &f2).unwrap();
            prop_assert_eq!(e.compatibility_violations(), 0);
            prop_assert_eq!(incl.then(&f1).unwrap(), incl.then(&f2).unwrap());
            let (q, proj) = coequalizer(&f1, &f2).unwrap();
            prop_assert_eq!(q.compatibility_violations(), 0);
            prop_assert_eq!(f1.then(&proj).unwrap(), f2.then(&proj).unwrap());
            prop_assert!(proj.is_surjective());
        }
    }

    #[test]
    fn exponential_transposes(ix in 0usize..6, seeds in any::<[u64; 3]>()) {
        let t = expo_theory(ix);
        let (f, g, h) = (graph(&t, seeds[0]), graph(&t, seeds[1]), graph(&t, seeds[2]));
        let fh = product(&f, &h).unwrap();
        let e = exponential(&g, &h).unwrap();
        prop_assert_eq!(e.graph.compatibility_violations(), 0);
        prop_assert!(e.arcs_compatible());
        let left = enumerate_homs(&fh.graph, &g).unwrap();
        prop_assert_eq!(left.len(), count_homs(&f, &e.graph).unwrap());
        for m in &left {
            let k = e.curry(m, &fh).unwrap();
            prop_assert_eq!(&e.uncurry(&k, &fh).unwrap(), m);
        }
    }

    #[test]
    fn hypergraph_adjunction(seed_g in any::<u64>(), seed_h in any::<u64>()) {
        let t = Theory::standard(MonoidKind::Symmetric, 2).unwrap();
        let g = graph(&t, seed_g);
        let h = random::random_hypergraph(&mut random::rng(seed_h), 3, 3, 3);
        let check = Hypergraph::adjunction_check(&g, &h).unwrap();
        prop_assert!(check.passed(), "{:?}", check);
    }

    #[test]
    fn power_graph_adjunction_and_fullness(seed_g in any::<u64>(), seeds in any::<[u64; 2]>()) {
        let t = Theory::standard(MonoidKind::Symmetric, 2).unwrap();
        let g = graph(&t, seed_g);
        let p = random::random_power_graph(&mut random::rng(seeds[0]), 2, 3, 3);
        let q = random::random_power_graph(&mut random::rng(seeds[1]), 2, 3, 3);
        prop_assert!(PowerGraph::adjunction_check(&g, &p).unwrap().passed());
        prop_assert!(p.nerve_fullness(&q).unwrap().passed());
        prop_assert!(p.is_fixed_point().unwrap());
    }

    #[test]
    fn reflexive_power_graph_adjunction(seed_g in any::<u64>(), seed_r in any::<u64>()) {
        let t = Theory::standard(MonoidKind::ReflexiveSymmetric, 2).unwrap();
        let g = graph(&t, seed_g);
        let r = random::random_rf_graph(&mut random::rng(seed_r), 2, 3, 3);
        prop_assert!(ReflexiveFGraph::adjunction_check(&g, &r).unwrap().passed());
    }

    #[test]
    fn bundle_text_round_trips(k in 0usize..6, n in 1usize..=3, seeds in any::<[u64; 2]>()) {
        let t = theory(k, n);
        let mut b = Bundle::new(Some(t.clone()));
        let (g, h) = (graph(&t, seeds[0]), graph(&t, seeds[1]));
        b.insert("G", Item::Graph(g.clone())).unwrap();
        b.insert("H", Item::Graph(h.clone())).unwrap();
        if let Some(f) = first_hom(&g, &h, 0) {
            b.insert("f", Item::Morphism(f)).unwrap();
        }
        let hyper = random::random_hypergraph(&mut random::rng(seeds[0]), 3, 3, 3);
        b.insert("E", Item::Hypergraph(hyper)).unwrap();
        let text = b.to_text();
        let back = Bundle::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert!(back.graph("G").unwrap().same_data(&g));
        prop_assert!(back.graph("H").unwrap().same_data(&h));
    }
}

#[test]
fn shipped_bundles_are_byte_stable() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../bundles");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let b = Bundle::parse(&text).unwrap();
        assert_eq!(b.to_text(), text, "{}", path.display());
        let again = Bundle::parse(&b.to_text()).unwrap();
        assert_eq!(again.to_text(), text);
        seen += 1;
    }
    assert!(seen >= 5);
}
