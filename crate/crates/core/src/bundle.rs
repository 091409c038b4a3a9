//! Line-oriented text bundles holding a theory and named objects.
//!
//! ```text
//! xmgraph-bundle 1
//! theory symmetric 2
//! graph L
//!   vertices v
//!   arc 0 inc v v act 0 0
//! end
//! ```
//!
//! Arc lines list one incidence per point of `X` and one partner per monoid
//! element, both in theory order. `#` starts a comment.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::algebra::{FiniteMonoid, MonoidKind, RightMSet};
use crate::bridge::{Hypergraph, PowerGraph, ReflexiveFGraph};
use crate::error::{Error, Result};
use crate::graph::{same_theory, GraphMorphism, XMGraph};
use crate::theory::Theory;

pub const HEADER: &str = "xmgraph-bundle 1";

#[derive(Clone, Debug)]
pub enum Item {
    Graph(Arc<XMGraph>),
    Hypergraph(Hypergraph),
    PowerGraph(PowerGraph),
    ReflexivePowerGraph(ReflexiveFGraph),
    Morphism(GraphMorphism),
}

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Graph(_) => "graph",
            Item::Hypergraph(_) => "hypergraph",
            Item::PowerGraph(_) => "powergraph",
            Item::ReflexivePowerGraph(_) => "rfgraph",
            Item::Morphism(_) => "morphism",
        }
    }
}

/// A theory together with uniquely named objects, kept in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Bundle {
    theory: Option<Arc<Theory>>,
    items: Vec<(String, Item)>,
}

impl Bundle {
    pub fn new(theory: Option<Arc<Theory>>) -> Self {
        Self {
            theory,
            items: Vec::new(),
        }
    }

    pub fn theory(&self) -> Option<&Arc<Theory>> {
        self.theory.as_ref()
    }

    pub fn items(&self) -> &[(String, Item)] {
        &self.items
    }

    pub fn get(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }

    /// Adds an object. Graphs and morphisms must live over the bundle theory.
    pub fn insert(&mut self, name: impl Into<String>, item: Item) -> Result<()> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(Error::invalid(
                "bundle",
                format!("`{name}` is not a valid object name"),
            ));
        }
        if self.get(&name).is_some() {
            return Err(Error::invalid(
                "bundle",
                format!("duplicate object `{name}`"),
            ));
        }
        let graph_theory = match &item {
            Item::Graph(g) => Some(g.theory()),
            Item::Morphism(f) => Some(f.src().theory()),
            _ => None,
        };
        if let Some(t) = graph_theory {
            match &self.theory {
                Some(own) if same_theory(own, t) => {}
                Some(own) => {
                    return Err(Error::TheoryMismatch(format!(
                        "`{name}` is over {} but the bundle is over {}",
                        t.label(),
                        own.label()
                    )))
                }
                None => self.theory = Some(t.clone()),
            }
        }
        self.items.push((name, item));
        Ok(())
    }

    fn lookup(&self, name: &str, kind: &'static str) -> Result<&Item> {
        let item = self
            .get(name)
            .ok_or_else(|| Error::invalid("bundle", format!("no object named `{name}`")))?;
        if item.kind() == kind {
            Ok(item)
        } else {
            Err(Error::invalid(
                "bundle",
                format!("`{name}` is a {}, not a {kind}", item.kind()),
            ))
        }
    }

    pub fn graph(&self, name: &str) -> Result<&Arc<XMGraph>> {
        match self.lookup(name, "graph")? {
            Item::Graph(g) => Ok(g),
            _ => unreachable!(),
        }
    }

    pub fn hypergraph(&self, name: &str) -> Result<&Hypergraph> {
        match self.lookup(name, "hypergraph")? {
            Item::Hypergraph(h) => Ok(h),
            _ => unreachable!(),
        }
    }

    pub fn power_graph(&self, name: &str) -> Result<&PowerGraph> {
        match self.lookup(name, "powergraph")? {
            Item::PowerGraph(p) => Ok(p),
            _ => unreachable!(),
        }
    }

    pub fn rf_graph(&self, name: &str) -> Result<&ReflexiveFGraph> {
        match self.lookup(name, "rfgraph")? {
            Item::ReflexivePowerGraph(r) => Ok(r),
            _ => unreachable!(),
        }
    }

    pub fn morphism(&self, name: &str) -> Result<&GraphMorphism> {
        match self.lookup(name, "morphism")? {
            Item::Morphism(f) => Ok(f),
            _ => unreachable!(),
        }
    }

    pub fn graphs(&self) -> impl Iterator<Item = (&str, &Arc<XMGraph>)> {
        self.items.iter().filter_map(|(n, i)| match i {
            Item::Graph(g) => Some((n.as_str(), g)),
            _ => None,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::invalid("bundle", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text())
            .map_err(|e| Error::invalid("bundle", format!("cannot write {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (lines, last_line) = tokenize(text);
        Parser {
            lines: &lines,
            pos: 0,
            last_line,
        }
        .bundle()
    }

    /// Canonical text: header, theory, then objects in insertion order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        if let Some(t) = &self.theory {
            write_theory(&mut out, t);
        }
        for (name, item) in &self.items {
            match item {
                Item::Graph(g) => write_graph(&mut out, name, g),
                Item::Hypergraph(h) => {
                    let _ = writeln!(out, "hypergraph {name}");
                    let _ = writeln!(out, "  vertices {}", h.vertex_count());
                    write_edges(&mut out, h.edges());
                    out.push_str("end\n");
                }
                Item::PowerGraph(p) => {
                    let _ = writeln!(out, "powergraph {name} arity {}", p.arity());
                    let _ = writeln!(out, "  vertices {}", p.vertex_count());
                    write_edges(&mut out, p.edges());
                    out.push_str("end\n");
                }
                Item::ReflexivePowerGraph(r) => {
                    let _ = writeln!(out, "rfgraph {name} arity {}", r.arity());
                    for p in 0..r.part_count() {
                        if r.is_vertex(p) {
                            out.push_str("  vertex\n");
                        } else {
                            line(&mut out, "  edge", r.inc(p).iter().map(usize::to_string));
                        }
                    }
                    out.push_str("end\n");
                }
                Item::Morphism(f) => self.write_morphism(&mut out, name, f),
            }
        }
        out
    }

    fn write_morphism(&self, out: &mut String, name: &str, f: &GraphMorphism) {
        let find = |g: &Arc<XMGraph>| {
            self.graphs()
                .find(|(_, h)| Arc::ptr_eq(h, g))
                .or_else(|| self.graphs().find(|(_, h)| h.same_data(g)))
                .map(|(n, _)| n.to_string())
                .unwrap_or_else(|| "?".into())
        };
        let (src, dst) = (f.src(), f.dst());
        let _ = writeln!(out, "morphism {name} {} {}", find(src), find(dst));
        let vl = labels(dst.vertex_count(), |v| dst.vertex_label(v), 'v');
        let al = labels(dst.arc_count(), |a| dst.arc_label(a), 'a');
        line(out, "  vmap", f.vertex_map().iter().map(|&v| vl[v].clone()));
        line(out, "  amap", f.arc_map().iter().map(|&a| al[a].clone()));
        out.push_str("end\n");
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '#')
}

/// Labels if they are valid and distinct, otherwise `<prefix><index>`.
fn labels(n: usize, label: impl Fn(usize) -> String, prefix: char) -> Vec<String> {
    let given: Vec<String> = (0..n).map(label).collect();
    let distinct = given.iter().collect::<HashSet<_>>().len() == n;
    if distinct && given.iter().all(|s| valid_name(s)) {
        given
    } else {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }
}

fn line(out: &mut String, head: &str, tokens: impl Iterator<Item = String>) {
    out.push_str(head);
    for t in tokens {
        out.push(' ');
        out.push_str(&t);
    }
    out.push('\n');
}

fn write_edges(out: &mut String, edges: &[Vec<usize>]) {
    for e in edges {
        line(out, "  edge", e.iter().map(usize::to_string));
    }
}

fn write_theory(out: &mut String, t: &Theory) {
    if let Some(kind) = t.kind() {
        let _ = writeln!(out, "theory {kind} {}", t.x_len());
        return;
    }
    let m = t.monoid();
    let x = t.xset();
    let ml = labels(m.len(), |i| m.name(i).to_string(), 'm');
    let xl = labels(x.len(), |i| x.name(i).to_string(), 'x');
    out.push_str("theory custom\n");
    line(out, "  monoid", ml.iter().cloned());
    let _ = writeln!(out, "  identity {}", ml[m.identity()]);
    for a in 0..m.len() {
        line(
            out,
            &format!("  mul {}", ml[a]),
            (0..m.len()).map(|b| ml[m.mul(a, b)].clone()),
        );
    }
    line(out, "  xset", xl.iter().cloned());
    for p in 0..x.len() {
        line(
            out,
            &format!("  xact {}", xl[p]),
            (0..m.len()).map(|e| xl[x.act(p, e)].clone()),
        );
    }
    if t.is_reflexive() {
        for p in 0..x.len() {
            let _ = writeln!(out, "  fix {} {}", xl[p], ml[t.fix_elem(p)]);
        }
    }
    out.push_str("end\n");
}

fn write_graph(out: &mut String, name: &str, g: &XMGraph) {
    let t = g.theory();
    let vl = labels(g.vertex_count(), |v| g.vertex_label(v), 'v');
    let al = labels(g.arc_count(), |a| g.arc_label(a), 'a');
    let _ = writeln!(out, "graph {name}");
    line(out, "  vertices", vl.iter().cloned());
    for a in 0..g.arc_count() {
        let mut s = format!("  arc {} inc", al[a]);
        for x in 0..t.x_len() {
            s.push(' ');
            s.push_str(&vl[g.inc(a, x)]);
        }
        s.push_str(" act");
        for m in 0..t.m_len() {
            s.push(' ');
            s.push_str(&al[g.act(a, m)]);
        }
        out.push_str(&s);
        out.push('\n');
    }
    for (v, name) in vl.iter().enumerate() {
        if let Some(l) = g.loop_at(v) {
            let _ = writeln!(out, "  loop {name} {}", al[l]);
        }
    }
    out.push_str("end\n");
}

/// Prefixes validation errors with the object they concern.
fn in_object(kind: &str, name: &str, e: Error) -> Error {
    match e {
        Error::Invalid { what, detail } => Error::Invalid {
            what,
            detail: format!("{kind} `{name}`: {detail}"),
        },
        Error::Law { law, detail } => Error::Law {
            law,
            detail: format!("{kind} `{name}`: {detail}"),
        },
        other => other,
    }
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

struct Line<'a> {
    number: usize,
    end_column: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column: self.tokens.first().map_or(1, |t| t.column),
            message: message.into(),
        }
    }

    fn at(&self, i: usize, message: impl Into<String>) -> Error {
        let column = self.tokens.get(i).map_or(self.end_column, |t| t.column);
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn token(&self, i: usize, what: &str) -> Result<Token<'a>> {
        self.tokens
            .get(i)
            .copied()
            .ok_or_else(|| self.at(i, format!("expected {what}")))
    }

    fn literal(&self, i: usize, lit: &str) -> Result<()> {
        match self.tokens.get(i) {
            Some(t) if t.text == lit => Ok(()),
            Some(t) => Err(tok_err(t, format!("expected `{lit}`, found `{}`", t.text))),
            None => Err(self.at(i, format!("expected `{lit}`"))),
        }
    }

    fn exact_len(&self, n: usize) -> Result<()> {
        match self.tokens.get(n) {
            Some(t) => Err(tok_err(t, format!("unexpected `{}`", t.text))),
            None if self.tokens.len() < n => Err(self.at(self.tokens.len(), "line ends early")),
            None => Ok(()),
        }
    }

    fn number(&self, i: usize, what: &str) -> Result<usize> {
        let t = self.token(i, what)?;
        t.text
            .parse()
            .map_err(|_| tok_err(&t, format!("expected {what}, found `{}`", t.text)))
    }

    fn numbers(&self, from: usize) -> Result<Vec<usize>> {
        (from..self.tokens.len())
            .map(|i| self.number(i, "a number"))
            .collect()
    }
}

fn tok_err(t: &Token<'_>, message: impl Into<String>) -> Error {
    Error::Parse {
        line: t.line,
        column: t.column,
        message: message.into(),
    }
}

fn resolve(names: &[String], t: &Token<'_>, what: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == t.text)
        .ok_or_else(|| tok_err(t, format!("unknown {what} `{}`", t.text)))
}

fn unique_names(tokens: &[Token<'_>], what: &str) -> Result<Vec<String>> {
    let mut seen = HashSet::new();
    tokens
        .iter()
        .map(|t| {
            if seen.insert(t.text) {
                Ok(t.text.to_string())
            } else {
                Err(tok_err(t, format!("duplicate {what} `{}`", t.text)))
            }
        })
        .collect()
}

struct Parser<'p, 'a> {
    lines: &'p [Line<'a>],
    pos: usize,
    last_line: usize,
}

fn tokenize(text: &str) -> (Vec<Line<'_>>, usize) {
    let mut lines = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        last_line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (j, c) in content
            .char_indices()
            .chain(std::iter::once((content.len(), ' ')))
        {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..j],
                        line: i + 1,
                        column: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            lines.push(Line {
                number: i + 1,
                end_column: content.trim_end().chars().count() + 1,
                tokens,
            });
        }
    }
    (lines, last_line)
}

impl<'p, 'a> Parser<'p, 'a> {
    fn next(&mut self) -> Option<&'p Line<'a>> {
        let l = self.lines.get(self.pos);
        self.pos += 1;
        l
    }

    fn eof(&self, what: &str) -> Error {
        Error::Parse {
            line: self.last_line.max(1),
            column: 1,
            message: format!("unexpected end of input, expected {what}"),
        }
    }

    /// Lines of a block up to its `end`.
    fn block(&mut self, what: &str) -> Result<Vec<&'p Line<'a>>> {
        let start = self.pos;
        loop {
            let l = self
                .lines
                .get(self.pos)
                .ok_or_else(|| self.eof(&format!("`end` closing {what}")))?;
            self.pos += 1;
            if l.keyword() == "end" {
                l.exact_len(1)?;
                return Ok(self.lines[start..self.pos - 1].iter().collect());
            }
        }
    }

    fn bundle(mut self) -> Result<Bundle> {
        let header = match self.next() {
            Some(h) => h,
            None => return Err(self.eof("the header")),
        };
        let found: Vec<&str> = header.tokens.iter().map(|t| t.text).collect();
        if found.join(" ") != HEADER {
            return Err(header.error(format!("expected header `{HEADER}`")));
        }
        let mut bundle = Bundle::default();
        while self.pos < self.lines.len() {
            let head: &'p Line<'a> = &self.lines[self.pos];
            self.pos += 1;
            let keyword = head.keyword();
            if keyword == "theory" {
                if bundle.theory.is_some() || !bundle.items.is_empty() {
                    return Err(head.error("the theory must come first and appear once"));
                }
                bundle.theory = Some(self.theory(head)?);
                continue;
            }
            let name_tok = head.token(1, "an object name")?;
            let name = name_tok.text;
            if bundle.get(name).is_some() {
                return Err(tok_err(&name_tok, format!("duplicate object `{name}`")));
            }
            let item = match keyword {
                "graph" => {
                    head.exact_len(2)?;
                    let t = bundle
                        .theory
                        .clone()
                        .ok_or_else(|| head.error("graph before any theory"))?;
                    let body = self.block("graph")?;
                    Item::Graph(Arc::new(graph(t, name, &body, head)?))
                }
                "hypergraph" => {
                    head.exact_len(2)?;
                    let body = self.block("hypergraph")?;
                    let (n, edges) = edge_list(&body, head)?;
                    Item::Hypergraph(
                        Hypergraph::new(n, edges).map_err(|e| in_object(keyword, name, e))?,
                    )
                }
                "powergraph" => {
                    head.literal(2, "arity")?;
                    let arity = head.number(3, "an arity")?;
                    head.exact_len(4)?;
                    let body = self.block("powergraph")?;
                    let (n, edges) = edge_list(&body, head)?;
                    Item::PowerGraph(
                        PowerGraph::new(arity, n, edges)
                            .map_err(|e| in_object(keyword, name, e))?,
                    )
                }
                "rfgraph" => {
                    head.literal(2, "arity")?;
                    let arity = head.number(3, "an arity")?;
                    head.exact_len(4)?;
                    let body = self.block("rfgraph")?;
                    let (mut is_vertex, mut inc) = (Vec::new(), Vec::new());
                    for l in body {
                        match l.keyword() {
                            "vertex" => {
                                l.exact_len(1)?;
                                inc.push(vec![is_vertex.len(); arity]);
                                is_vertex.push(true);
                            }
                            "edge" => {
                                inc.push(l.numbers(1)?);
                                is_vertex.push(false);
                            }
                            k => return Err(l.error(format!("unexpected `{k}` in rfgraph"))),
                        }
                    }
                    Item::ReflexivePowerGraph(
                        ReflexiveFGraph::new(arity, is_vertex, inc)
                            .map_err(|e| in_object(keyword, name, e))?,
                    )
                }
                "morphism" => {
                    head.exact_len(4)?;
                    let (s, d) = (head.tokens[2], head.tokens[3]);
                    let src = bundle
                        .graph(s.text)
                        .map_err(|e| tok_err(&s, e.to_string()))?
                        .clone();
                    let dst = bundle
                        .graph(d.text)
                        .map_err(|e| tok_err(&d, e.to_string()))?
                        .clone();
                    let body = self.block("morphism")?;
                    Item::Morphism(morphism(src, dst, name, &body, head)?)
                }
                k => return Err(head.error(format!("unknown section `{k}`"))),
            };
            bundle
                .insert(name, item)
                .map_err(|e| tok_err(&name_tok, e.to_string()))?;
        }
        Ok(bundle)
    }

    fn theory(&mut self, head: &'p Line<'a>) -> Result<Arc<Theory>> {
        let kind_tok = head.token(1, "a theory kind")?;
        if kind_tok.text != "custom" {
            let kind: MonoidKind = kind_tok
                .text
                .parse()
                .map_err(|e: Error| tok_err(&kind_tok, e.to_string()))?;
            let n = head.number(2, "the size of X")?;
            head.exact_len(3)?;
            return Theory::standard(kind, n).map_err(|e| head.error(e.to_string()));
        }
        head.exact_len(2)?;
        let body = self.block("theory")?;
        let find = |key: &str| {
            let mut it = body.iter().filter(|l| l.keyword() == key);
            match (it.next(), it.next()) {
                (Some(l), None) => Ok(*l),
                (_, Some(l)) => Err(l.error(format!("repeated `{key}`"))),
                (None, _) => Err(head.error(format!("custom theory lacks `{key}`"))),
            }
        };
        if let Some(l) = body.iter().find(|l| {
            !matches!(
                l.keyword(),
                "monoid" | "identity" | "mul" | "xset" | "xact" | "fix"
            )
        }) {
            return Err(l.error(format!("unexpected `{}` in theory", l.keyword())));
        }
        let ml = find("monoid")?;
        let mnames = unique_names(&ml.tokens[1..], "monoid element")?;
        let il = find("identity")?;
        il.exact_len(2)?;
        let identity = resolve(&mnames, &il.tokens[1], "monoid element")?;
        let xl = find("xset")?;
        let xnames = unique_names(&xl.tokens[1..], "point")?;
        let rows = |key: &str,
                    row_names: &[String],
                    entry_names: &[String],
                    what: &str|
         -> Result<Vec<Vec<usize>>> {
            let mut table = vec![None; row_names.len()];
            for l in body.iter().filter(|l| l.keyword() == key) {
                let r = resolve(row_names, &l.token(1, what)?, what)?;
                l.exact_len(2 + mnames.len())?;
                if table[r].is_some() {
                    return Err(l.error(format!("repeated `{key}` row")));
                }
                table[r] = Some(
                    l.tokens[2..]
                        .iter()
                        .map(|t| resolve(entry_names, t, what))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            table
                .into_iter()
                .enumerate()
                .map(|(i, r)| {
                    r.ok_or_else(|| head.error(format!("missing `{key} {}` row", row_names[i])))
                })
                .collect()
        };
        let mul = rows("mul", &mnames, &mnames, "monoid element")?;
        let monoid = FiniteMonoid::from_table(mnames.clone(), mul, identity)
            .map_err(|e| in_object("theory", "custom", e))?;
        let xact = rows("xact", &xnames, &xnames, "point")?;
        let xset = RightMSet::new(xnames.clone(), xact, &monoid)
            .map_err(|e| in_object("theory", "custom", e))?;
        let fix_lines: Vec<_> = body.iter().filter(|l| l.keyword() == "fix").collect();
        if fix_lines.is_empty() {
            return Theory::new(monoid, xset, false).map_err(|e| in_object("theory", "custom", e));
        }
        let mut fix = vec![None; xnames.len()];
        for l in fix_lines {
            l.exact_len(3)?;
            let x = resolve(&xnames, &l.tokens[1], "point")?;
            fix[x] = Some(resolve(&mnames, &l.tokens[2], "monoid element")?);
        }
        let fix = fix
            .into_iter()
            .enumerate()
            .map(|(i, f)| f.ok_or_else(|| head.error(format!("missing `fix {}`", xnames[i]))))
            .collect::<Result<Vec<_>>>()?;
        Theory::with_fix_elements(monoid, xset, fix).map_err(|e| in_object("theory", "custom", e))
    }
}

fn graph(t: Arc<Theory>, name: &str, body: &[&Line<'_>], head: &Line<'_>) -> Result<XMGraph> {
    let (nx, nm) = (t.x_len(), t.m_len());
    let vl = body
        .first()
        .filter(|l| l.keyword() == "vertices")
        .ok_or_else(|| head.error("graph must start with a `vertices` line"))?;
    let vnames = unique_names(&vl.tokens[1..], "vertex")?;
    let arc_lines: Vec<_> = body[1..].iter().filter(|l| l.keyword() == "arc").collect();
    let arc_toks = arc_lines
        .iter()
        .map(|l| l.token(1, "an arc name"))
        .collect::<Result<Vec<_>>>()?;
    let anames = unique_names(&arc_toks, "arc")?;
    let (mut inc, mut act, mut loops) = (Vec::new(), Vec::new(), vec![None; vnames.len()]);
    for l in &body[1..] {
        match l.keyword() {
            "arc" => {
                l.literal(2, "inc")?;
                l.literal(3 + nx, "act")?;
                l.exact_len(4 + nx + nm)?;
                inc.push(
                    (0..nx)
                        .map(|x| resolve(&vnames, &l.tokens[3 + x], "vertex"))
                        .collect::<Result<Vec<_>>>()?,
                );
                act.push(
                    (0..nm)
                        .map(|m| resolve(&anames, &l.tokens[4 + nx + m], "arc"))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            "loop" => {
                l.exact_len(3)?;
                let v = resolve(&vnames, &l.tokens[1], "vertex")?;
                if loops[v].is_some() {
                    return Err(l.error(format!("second loop for vertex `{}`", vnames[v])));
                }
                loops[v] = Some(resolve(&anames, &l.tokens[2], "arc")?);
            }
            k => return Err(l.error(format!("unexpected `{k}` in graph"))),
        }
    }
    let loops = if t.is_reflexive() {
        Some(
            loops
                .into_iter()
                .enumerate()
                .map(|(v, l)| {
                    l.ok_or_else(|| head.error(format!("vertex `{}` has no loop", vnames[v])))
                })
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        if loops.iter().any(Option::is_some) {
            return Err(head.error("loop lines need a reflexive theory"));
        }
        None
    };
    XMGraph::new(t, vnames.len(), inc, act, loops)
        .and_then(|g| g.with_names(Some(vnames), Some(anames)))
        .map_err(|e| in_object("graph", name, e))
}

fn edge_list(body: &[&Line<'_>], head: &Line<'_>) -> Result<(usize, Vec<Vec<usize>>)> {
    let vl = body
        .first()
        .filter(|l| l.keyword() == "vertices")
        .ok_or_else(|| head.error("expected a `vertices <count>` line"))?;
    vl.exact_len(2)?;
    let n = vl.number(1, "a vertex count")?;
    let edges = body[1..]
        .iter()
        .map(|l| {
            if l.keyword() == "edge" {
                l.numbers(1)
            } else {
                Err(l.error(format!("unexpected `{}`", l.keyword())))
            }
        })
        .collect::<Result<_>>()?;
    Ok((n, edges))
}

fn morphism(
    src: Arc<XMGraph>,
    dst: Arc<XMGraph>,
    name: &str,
    body: &[&Line<'_>],
    head: &Line<'_>,
) -> Result<GraphMorphism> {
    let vl = labels(dst.vertex_count(), |v| dst.vertex_label(v), 'v');
    let al = labels(dst.arc_count(), |a| dst.arc_label(a), 'a');
    let get = |key: &str, names: &[String], len: usize, what: &str| -> Result<Vec<usize>> {
        let l = body
            .iter()
            .find(|l| l.keyword() == key)
            .ok_or_else(|| head.error(format!("morphism lacks `{key}`")))?;
        l.exact_len(1 + len)?;
        l.tokens[1..]
            .iter()
            .map(|t| resolve(names, t, what))
            .collect()
    };
    if let Some(l) = body
        .iter()
        .find(|l| !matches!(l.keyword(), "vmap" | "amap"))
    {
        return Err(l.error(format!("unexpected `{}` in morphism", l.keyword())));
    }
    let v = get("vmap", &vl, src.vertex_count(), "vertex")?;
    let a = get("amap", &al, src.arc_count(), "arc")?;
    GraphMorphism::new(src, dst, v, a).map_err(|e| in_object("morphism", name, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn sample() -> Bundle {
        let g = Arc::new(catalog::example_2_3().unwrap());
        let mut b = Bundle::new(Some(g.theory().clone()));
        b.insert("G", Item::Graph(g.clone())).unwrap();
        b.insert("id", Item::Morphism(GraphMorphism::identity(&g)))
            .unwrap();
        b.insert(
            "H",
            Item::Hypergraph(Hypergraph::new(3, vec![vec![0, 1], vec![2]]).unwrap()),
        )
        .unwrap();
        b.insert(
            "P",
            Item::PowerGraph(PowerGraph::new(2, 2, vec![vec![1, 0]]).unwrap()),
        )
        .unwrap();
        b.insert(
            "R",
            Item::ReflexivePowerGraph(ReflexiveFGraph::with_edges(2, 2, vec![vec![0, 1]]).unwrap()),
        )
        .unwrap();
        b
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let text = sample().to_text();
        let again = Bundle::parse(&text).unwrap();
        assert_eq!(again.to_text(), text);
        assert!(again
            .graph("G")
            .unwrap()
            .same_data(sample().graph("G").unwrap()));
        assert_eq!(again.items().len(), 5);
    }

    #[test]
    fn custom_theories_round_trip() {
        let std_t = Theory::standard(MonoidKind::ReflexiveSymmetric, 2).unwrap();
        let custom = Theory::with_fix_elements(
            std_t.monoid().clone(),
            std_t.xset().clone(),
            std_t.fix_elems().to_vec(),
        )
        .unwrap();
        let g = catalog::loops_reflexive(2).unwrap();
        let g = XMGraph::new(
            custom.clone(),
            1,
            g.inc_table(),
            g.act_table(),
            Some(g.loops().to_vec()),
        )
        .unwrap();
        let mut b = Bundle::new(Some(custom));
        b.insert("L", Item::Graph(Arc::new(g))).unwrap();
        let text = b.to_text();
        assert!(text.contains("theory custom"));
        assert_eq!(Bundle::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn broken_action_cites_the_triple() {
        let text = "xmgraph-bundle 1\ntheory symmetric 2\ngraph A\n  vertices p q\n  arc a inc p q act a a\nend\n";
        match Bundle::parse(text).unwrap_err() {
            Error::Law { detail, .. } => {
                assert!(detail.contains("graph `A`"), "{detail}");
                assert!(detail.contains("(α, m, x) = (0, [t,s], s)"), "{detail}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let cases = [
            ("xmgraph-bundle 2\n", 1, 1),
            ("xmgraph-bundle 1\ntheory symmetric 2\ngraph A\n  vertices p\n  arc a inc p q act a a\nend\n", 5, 15),
            ("xmgraph-bundle 1\ntheory symmetric 2\ngraph A\n  vertices p\n", 4, 1),
            ("xmgraph-bundle 1\nwidget W\n", 2, 1),
            ("xmgraph-bundle 1\ntheory wobbly 2\n", 2, 8),
            ("xmgraph-bundle 1\ngraph A\nend\n", 2, 1),
        ];
        for (text, line, column) in cases {
            match Bundle::parse(text).unwrap_err() {
                Error::Parse {
                    line: l, column: c, ..
                } => assert_eq!((l, c), (line, column), "{text}"),
                e => panic!("{text}: {e}"),
            }
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# a bundle\nxmgraph-bundle 1\n\ntheory oriented 2 # X2\nhypergraph H\n  vertices 2\n  edge 1 0\nend\n";
        let b = Bundle::parse(text).unwrap();
        assert_eq!(b.hypergraph("H").unwrap().edges(), [vec![0, 1]]);
        assert!(b.graph("H").is_err());
    }
}
