use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use xmgraph::bridge::{obstruction_certificate, Flavor, Hypergraph, PowerGraph, ReflexiveFGraph};
use xmgraph::bundle::{Bundle, Item};
use xmgraph::dot::{default_mode, to_dot};
use xmgraph::expo::{exponential, yoneda_exponential};
use xmgraph::graph::enumerate_homs;
use xmgraph::limits::{coequalizer, coproduct, equalizer, product};
use xmgraph::random;
use xmgraph::{Error, MonoidKind, Theory, XMGraph};

use crate::report;
use crate::Command;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(Error::Capacity(_)) => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Lookup failures are usage errors.
fn found<T>(r: xmgraph::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::Usage(e.to_string()))
}

fn load(path: &Path) -> CliResult<Bundle> {
    Ok(Bundle::load(path)?)
}

fn save(
    out: &mut String,
    path: Option<&PathBuf>,
    theory: Option<Arc<Theory>>,
    items: Vec<(String, Item)>,
) -> CliResult<()> {
    let Some(path) = path else { return Ok(()) };
    let mut b = Bundle::new(theory);
    for (name, item) in items {
        if b.get(&name).is_none() {
            b.insert(name, item)?;
        }
    }
    b.save(path)?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(())
}

fn graph_item(name: &str, g: &Arc<XMGraph>) -> (String, Item) {
    (name.to_string(), Item::Graph(g.clone()))
}

/// Runs a command, appending its report to `out` even when it fails.
pub fn run(command: Command, out: &mut String) -> CliResult<()> {
    match command {
        Command::Validate { bundle } => validate(out, &bundle)?,
        Command::Homs {
            bundle,
            g,
            h,
            limit,
        } => {
            let b = load(&bundle)?;
            let (gg, hh) = (found(b.graph(&g))?, found(b.graph(&h))?);
            let homs = enumerate_homs(gg, hh)?;
            let _ = writeln!(out, "hom({g}, {h}): {} morphism(s)", homs.len());
            for (i, f) in homs.iter().take(limit).enumerate() {
                report::morphism(out, &format!("#{i}"), f);
            }
            if homs.len() > limit {
                let _ = writeln!(out, "({} more not shown)", homs.len() - limit);
            }
        }
        Command::Product {
            bundle,
            g,
            h,
            output,
        } => {
            let b = load(&bundle)?;
            let (gg, hh) = (found(b.graph(&g))?, found(b.graph(&h))?);
            let p = product(gg, hh)?;
            let name = format!("{g}x{h}");
            report::summary(out, &name, &p.graph);
            let items = vec![
                graph_item(&g, gg),
                graph_item(&h, hh),
                graph_item(&name, &p.graph),
                (format!("{name}_p1"), Item::Morphism(p.proj_left())),
                (format!("{name}_p2"), Item::Morphism(p.proj_right())),
            ];
            save(out, output.as_ref(), b.theory().cloned(), items)?;
        }
        Command::Coproduct {
            bundle,
            g,
            h,
            output,
        } => {
            let b = load(&bundle)?;
            let (gg, hh) = (found(b.graph(&g))?, found(b.graph(&h))?);
            let c = coproduct(gg, hh)?;
            let name = format!("{g}+{h}");
            report::summary(out, &name, &c.graph);
            let items = vec![
                graph_item(&g, gg),
                graph_item(&h, hh),
                graph_item(&name, &c.graph),
                (format!("{name}_i1"), Item::Morphism(c.inj_left())),
                (format!("{name}_i2"), Item::Morphism(c.inj_right())),
            ];
            save(out, output.as_ref(), b.theory().cloned(), items)?;
        }
        Command::Equalizer {
            bundle,
            f,
            g,
            output,
        } => {
            let b = load(&bundle)?;
            let (ff, gg) = (found(b.morphism(&f))?, found(b.morphism(&g))?);
            let (e, incl) = equalizer(ff, gg)?;
            let name = format!("eq_{f}_{g}");
            report::summary(out, &name, &e);
            report::morphism(out, "inclusion", &incl);
            let src = find_graph_name(&b, ff.src());
            let items = vec![
                graph_item(&src, ff.src()),
                graph_item(&name, &e),
                (format!("{name}_incl"), Item::Morphism(incl)),
            ];
            save(out, output.as_ref(), b.theory().cloned(), items)?;
        }
        Command::Coequalizer {
            bundle,
            f,
            g,
            output,
        } => {
            let b = load(&bundle)?;
            let (ff, gg) = (found(b.morphism(&f))?, found(b.morphism(&g))?);
            let (q, proj) = coequalizer(ff, gg)?;
            let name = format!("coeq_{f}_{g}");
            report::summary(out, &name, &q);
            report::morphism(out, "projection", &proj);
            let dst = find_graph_name(&b, ff.dst());
            let items = vec![
                graph_item(&dst, ff.dst()),
                graph_item(&name, &q),
                (format!("{name}_proj"), Item::Morphism(proj)),
            ];
            save(out, output.as_ref(), b.theory().cloned(), items)?;
        }
        Command::Exponential {
            bundle,
            g,
            h,
            yoneda,
            output,
        } => {
            let b = load(&bundle)?;
            let (gg, hh) = (found(b.graph(&g))?, found(b.graph(&h))?);
            let graph = match (yoneda, exponential(gg, hh)) {
                (false, Ok(e)) => e.graph,
                (_, Err(e)) if !matches!(e, Error::Unsupported(_)) => return Err(e.into()),
                _ => {
                    let _ = writeln!(out, "computed from hom(Y × {h}, {g}) for representables Y");
                    yoneda_exponential(gg, hh)?.graph
                }
            };
            let name = format!("{g}^{h}");
            report::summary(out, &name, &graph);
            if graph.arc_count() <= 64 {
                report::orbits(out, &graph);
            }
            save(
                out,
                output.as_ref(),
                b.theory().cloned(),
                vec![graph_item(&name, &graph)],
            )?;
        }
        Command::Curry {
            bundle,
            morphism,
            left,
            exponent,
            output,
        } => {
            let b = load(&bundle)?;
            let h = found(b.morphism(&morphism))?;
            let (f, e) = (found(b.graph(&left))?, found(b.graph(&exponent))?);
            let fh = product(f, e)?;
            let base = h.dst().clone();
            let exp = exponential(&base, e)?;
            let k = exp.curry(h, &fh)?;
            let base_name = find_graph_name(&b, &base);
            let exp_name = format!("{base_name}^{exponent}");
            report::morphism(
                out,
                &format!("curry({morphism}) : {left} -> {exp_name}"),
                &k,
            );
            let items = vec![
                graph_item(&left, f),
                graph_item(&base_name, &base),
                graph_item(&exponent, e),
                graph_item(&exp_name, &exp.graph),
                (format!("curry_{morphism}"), Item::Morphism(k)),
            ];
            save(out, output.as_ref(), b.theory().cloned(), items)?;
        }
        Command::Uncurry {
            bundle,
            morphism,
            base,
            exponent,
            output,
        } => {
            let b = load(&bundle)?;
            let k = found(b.morphism(&morphism))?;
            let (g, e) = (found(b.graph(&base))?, found(b.graph(&exponent))?);
            let exp = exponential(g, e)?;
            let fh = product(k.src(), e)?;
            let h = exp.uncurry(k, &fh)?;
            let left = find_graph_name(&b, k.src());
            let prod_name = format!("{left}x{exponent}");
            report::morphism(
                out,
                &format!("uncurry({morphism}) : {prod_name} -> {base}"),
                &h,
            );
            let items = vec![
                graph_item(&prod_name, &fh.graph),
                graph_item(&base, g),
                (format!("uncurry_{morphism}"), Item::Morphism(h)),
            ];
            save(out, output.as_ref(), b.theory().cloned(), items)?;
        }
        Command::Nerve {
            flavor,
            bundle,
            object,
            x,
            output,
        } => {
            let b = load(&bundle)?;
            let nerve = match flavor {
                Flavor::Hyper => found(b.hypergraph(&object))?.nerve(x)?,
                Flavor::Power => found(b.power_graph(&object))?.nerve()?,
                Flavor::ReflexivePower => found(b.rf_graph(&object))?.nerve()?,
            };
            let name = format!("N_{object}");
            report::summary(out, &name, &nerve.graph);
            for (i, a) in nerve.arcs.iter().enumerate() {
                let _ = writeln!(out, "  arc {i}: edge {} via {:?}", a.edge, a.map);
            }
            let theory = Some(nerve.graph.theory().clone());
            save(
                out,
                output.as_ref(),
                theory,
                vec![graph_item(&name, &nerve.graph)],
            )?;
        }
        Command::Realize {
            flavor,
            bundle,
            graph,
            output,
        } => {
            let b = load(&bundle)?;
            let g = found(b.graph(&graph))?;
            let name = format!("R_{graph}");
            let item = match flavor {
                Flavor::Hyper => {
                    let (h, _) = Hypergraph::realize(g)?;
                    edges(out, &name, "hypergraph", h.vertex_count(), h.edges());
                    Item::Hypergraph(h)
                }
                Flavor::Power => {
                    let (p, _) = PowerGraph::realize(g)?;
                    edges(out, &name, "power graph", p.vertex_count(), p.edges());
                    Item::PowerGraph(p)
                }
                Flavor::ReflexivePower => {
                    let (r, _) = ReflexiveFGraph::realize(g)?;
                    let _ = writeln!(
                        out,
                        "{name}: reflexive power graph with {} part(s)",
                        r.part_count()
                    );
                    for p in 0..r.part_count() {
                        let kind = if r.is_vertex(p) { "vertex" } else { "edge" };
                        let _ = writeln!(out, "  part {p}: {kind} {:?}", r.inc(p));
                    }
                    Item::ReflexivePowerGraph(r)
                }
            };
            save(out, output.as_ref(), None, vec![(name, item)])?;
        }
        Command::FixedPoint {
            flavor,
            bundle,
            object,
            x,
        } => {
            let b = load(&bundle)?;
            let item = found(b.get(&object).ok_or_else(|| Error::Invalid {
                what: "bundle",
                detail: format!("no object named `{object}`"),
            }))?;
            let (which, c) = match (flavor, item) {
                (Flavor::Hyper, Item::Graph(g)) => ("unit", Hypergraph::unit(g)?),
                (Flavor::Power, Item::Graph(g)) => ("unit", PowerGraph::unit(g)?),
                (Flavor::ReflexivePower, Item::Graph(g)) => ("unit", ReflexiveFGraph::unit(g)?),
                (Flavor::Hyper, Item::Hypergraph(h)) => ("counit", h.counit(x)?),
                (Flavor::Power, Item::PowerGraph(p)) => ("counit", p.counit()?),
                (Flavor::ReflexivePower, Item::ReflexivePowerGraph(r)) => ("counit", r.counit()?),
                (f, i) => {
                    return Err(CliError::Usage(format!(
                        "`{object}` is a {}, which has no {} fixed-point check",
                        i.kind(),
                        f.as_str()
                    )))
                }
            };
            let _ = writeln!(out, "{which} at {object} ({}):", flavor.as_str());
            let _ = writeln!(out, "  vertices bijective: {}", c.vertices_bijective);
            let _ = writeln!(out, "  arcs bijective: {}", c.arcs_bijective);
            let _ = writeln!(
                out,
                "fixed point: {}",
                if c.is_iso() { "yes" } else { "no" }
            );
        }
        Command::AdjunctionCheck {
            trials,
            seed,
            flavor,
        } => adjunction_check(out, trials, seed, flavor)?,
        Command::Obstruction { case, x } => {
            let c = obstruction_certificate(case, x)?;
            let _ = write!(out, "{c}");
            if !c.verified {
                return Err(CliError::Core(Error::Invalid {
                    what: "certificate",
                    detail: "witness failed to verify".into(),
                }));
            }
        }
        Command::Example { name } => out.push_str(&crate::examples::run(name)?),
        Command::ExportDot {
            bundle,
            graph,
            mode,
            output,
        } => {
            let b = load(&bundle)?;
            let g = found(b.graph(&graph))?;
            let text = to_dot(g, &graph, mode.unwrap_or_else(|| default_mode(g)))?;
            match output {
                Some(p) => {
                    std::fs::write(&p, text).map_err(|e| Error::Invalid {
                        what: "dot export",
                        detail: format!("cannot write {}: {e}", p.display()),
                    })?;
                    let _ = writeln!(out, "wrote {}", p.display());
                }
                None => out.push_str(&text),
            }
        }
    }
    Ok(())
}

fn find_graph_name(b: &Bundle, g: &Arc<XMGraph>) -> String {
    b.graphs()
        .find(|(_, h)| Arc::ptr_eq(h, g))
        .map_or_else(|| "G".to_string(), |(n, _)| n.to_string())
}

fn edges(out: &mut String, name: &str, what: &str, n_v: usize, edges: &[Vec<usize>]) {
    let _ = writeln!(
        out,
        "{name}: {what} with {n_v} vertices, {} edge(s)",
        edges.len()
    );
    for (i, e) in edges.iter().enumerate() {
        let _ = writeln!(out, "  edge {i}: {e:?}");
    }
}

fn validate(out: &mut String, path: &Path) -> CliResult<()> {
    let b = load(path)?;
    if let Some(t) = b.theory() {
        let r = t.check_axioms();
        let _ = writeln!(
            out,
            "theory {}: {}",
            t.label(),
            if r.passed() { "ok" } else { "FAILED" }
        );
        if !r.passed() {
            return Err(CliError::Core(Error::Invalid {
                what: "theory",
                detail: r.to_string(),
            }));
        }
    }
    for (name, item) in b.items() {
        if let Item::Graph(g) = item {
            let bad = g.compatibility_violations();
            if bad > 0 {
                return Err(CliError::Core(Error::Invalid {
                    what: "graph",
                    detail: format!("`{name}` has {bad} compatibility violation(s)"),
                }));
            }
        }
        let _ = writeln!(out, "{} {name}: ok", item.kind());
    }
    let _ = writeln!(out, "valid: {} object(s)", b.items().len());
    Ok(())
}

fn adjunction_check(
    out: &mut String,
    trials: usize,
    seed: u64,
    flavor: Option<Flavor>,
) -> CliResult<()> {
    let sym = Theory::standard(MonoidKind::Symmetric, 2)?;
    let refl = Theory::standard(MonoidKind::ReflexiveSymmetric, 2)?;
    let mut rng = random::rng(seed);
    let mut tally = [(0usize, 0usize); 3];
    for i in 0..trials {
        let f = flavor.unwrap_or(Flavor::ALL[i % 3]);
        let slot = Flavor::ALL.iter().position(|&g| g == f).expect("listed");
        let check = match f {
            Flavor::Hyper => {
                let g = Arc::new(random::random_graph(&sym, &mut rng, 3, 4));
                let h = random::random_hypergraph(&mut rng, 3, 3, 3);
                Hypergraph::adjunction_check(&g, &h)?
            }
            Flavor::Power => {
                let g = Arc::new(random::random_graph(&sym, &mut rng, 3, 4));
                let p = random::random_power_graph(&mut rng, 2, 3, 3);
                PowerGraph::adjunction_check(&g, &p)?
            }
            Flavor::ReflexivePower => {
                let g = Arc::new(random::random_graph(&refl, &mut rng, 3, 4));
                let r = random::random_rf_graph(&mut rng, 2, 3, 3);
                ReflexiveFGraph::adjunction_check(&g, &r)?
            }
        };
        tally[slot].1 += 1;
        if check.passed() {
            tally[slot].0 += 1;
        } else {
            let _ = writeln!(
                out,
                "trial {i} ({}): |hom(R(G), H)| = {}, |hom(G, N(H))| = {}, injective {}, surjective {}",
                f.as_str(),
                check.left,
                check.right,
                check.transpose_injective,
                check.transpose_surjective
            );
        }
    }
    for (f, (ok, n)) in Flavor::ALL.iter().zip(tally) {
        if n > 0 {
            let _ = writeln!(out, "{}: {ok}/{n}", f.as_str());
        }
    }
    let passed: usize = tally.iter().map(|t| t.0).sum();
    let _ = writeln!(out, "bijection passes: {passed}/{trials}");
    if passed != trials {
        return Err(CliError::Core(Error::Invalid {
            what: "adjunction",
            detail: format!("{} trial(s) failed", trials - passed),
        }));
    }
    Ok(())
}
