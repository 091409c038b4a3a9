//! Finite monoids, right M-sets and the standard submonoids of `End(X)`.
//!
//! Multiplication is diagrammatic: `mul(a, b)` means "apply `a`, then `b`",
//! which for endomaps is `b ∘ a`. With this convention evaluation
//! `x.f = f(x)` is a right action and the absorbing set
//! `Fix(M) = {m' : mul(m, m') = m' for all m}` of `rX`, `srX` and `hrX` is
//! exactly the set of constant maps.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest monoid any constructor will accept.
pub const MAX_MONOID_SIZE: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    names: Vec<String>,
    mul: Vec<usize>,
    identity: usize,
}

impl FiniteMonoid {
    /// Builds a monoid from an explicit multiplication table and checks the
    /// unit and associativity laws exhaustively.
    pub fn from_table(names: Vec<String>, mul: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let monoid = Self::from_table_unchecked(names, mul, identity)?;
        if let Some(violation) = monoid.law_violations().into_iter().next() {
            return Err(Error::law("monoid law", violation));
        }
        Ok(monoid)
    }

    /// Shape-checks the table but skips the algebraic laws. Useful for
    /// exercising [`crate::theory::Theory::check_axioms`] on broken input.
    pub fn from_table_unchecked(
        names: Vec<String>,
        mul: Vec<Vec<usize>>,
        identity: usize,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::invalid(
                "monoid",
                "a monoid needs at least one element",
            ));
        }
        if n > MAX_MONOID_SIZE {
            return Err(Error::Capacity(format!(
                "monoid with {n} elements exceeds the limit of {MAX_MONOID_SIZE}"
            )));
        }
        if identity >= n {
            return Err(Error::invalid(
                "monoid",
                format!("identity index {identity} out of range"),
            ));
        }
        if mul.len() != n || mul.iter().any(|row| row.len() != n) {
            return Err(Error::invalid(
                "monoid",
                format!("multiplication table must be {n}x{n}"),
            ));
        }
        let flat: Vec<usize> = mul.into_iter().flatten().collect();
        if let Some(bad) = flat.iter().find(|&&e| e >= n) {
            return Err(Error::invalid(
                "monoid",
                format!("table entry {bad} out of range"),
            ));
        }
        check_unique_names("monoid", &names)?;
        Ok(Self {
            names,
            mul: flat,
            identity,
        })
    }

    /// Unit and associativity failures, formatted for humans.
    pub fn law_violations(&self) -> Vec<String> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            if self.mul(self.identity, a) != a || self.mul(a, self.identity) != a {
                out.push(format!(
                    "identity does not act trivially on {}",
                    self.names[a]
                ));
            }
        }
        for (a, b, c) in (0..n)
            .cartesian_product(0..n)
            .cartesian_product(0..n)
            .map(|((a, b), c)| (a, b, c))
        {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                out.push(format!(
                    "({a}*{b})*{c} != {a}*({b}*{c})",
                    a = self.names[a],
                    b = self.names[b],
                    c = self.names[c]
                ));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// `a` then `b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.names.len() + b]
    }

    pub fn name(&self, m: usize) -> &str {
        &self.names[m]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    /// `{m' : mul(m, m') = m' for all m}`.
    pub fn fix_set(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&fixed| (0..self.len()).all(|m| self.mul(m, fixed) == fixed))
            .collect()
    }

    pub fn inverse(&self, m: usize) -> Option<usize> {
        (0..self.len())
            .find(|&n| self.mul(m, n) == self.identity && self.mul(n, m) == self.identity)
    }

    pub fn invertibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&m| self.inverse(m).is_some())
            .collect()
    }
}

/// A finite set with a right action `act(x, mul(a, b)) = act(act(x, a), b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightMSet {
    names: Vec<String>,
    act: Vec<usize>,
    monoid_len: usize,
}

impl RightMSet {
    pub fn new(names: Vec<String>, act: Vec<Vec<usize>>, monoid: &FiniteMonoid) -> Result<Self> {
        let n = names.len();
        let m_len = monoid.len();
        if act.len() != n || act.iter().any(|row| row.len() != m_len) {
            return Err(Error::invalid(
                "M-set",
                format!("action table must be {n}x{m_len}"),
            ));
        }
        let flat: Vec<usize> = act.into_iter().flatten().collect();
        if let Some(bad) = flat.iter().find(|&&e| e >= n) {
            return Err(Error::invalid(
                "M-set",
                format!("action entry {bad} out of range"),
            ));
        }
        check_unique_names("M-set", &names)?;
        let set = Self {
            names,
            act: flat,
            monoid_len: m_len,
        };
        set.check_action(monoid)?;
        Ok(set)
    }

    fn check_action(&self, monoid: &FiniteMonoid) -> Result<()> {
        for x in 0..self.len() {
            if self.act(x, monoid.identity()) != x {
                return Err(Error::law(
                    "right action unit",
                    format!("{}.id != {}", self.names[x], self.names[x]),
                ));
            }
            for a in 0..monoid.len() {
                for b in 0..monoid.len() {
                    if self.act(x, monoid.mul(a, b)) != self.act(self.act(x, a), b) {
                        return Err(Error::law(
                            "right action",
                            format!(
                                "x={}, a={}, b={}",
                                self.names[x],
                                monoid.name(a),
                                monoid.name(b)
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn monoid_len(&self) -> usize {
        self.monoid_len
    }

    #[inline]
    pub fn act(&self, x: usize, m: usize) -> usize {
        self.act[x * self.monoid_len + m]
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        if self.monoid_len == 0 {
            return vec![Vec::new(); self.len()];
        }
        self.act
            .chunks(self.monoid_len)
            .map(|r| r.to_vec())
            .collect()
    }
}

/// Which standard submonoid of `End(X)` to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonoidKind {
    Oriented,
    Symmetric,
    Hereditary,
    ReflexiveOriented,
    ReflexiveSymmetric,
    ReflexiveHereditary,
}

impl MonoidKind {
    pub const ALL: [MonoidKind; 6] = [
        MonoidKind::Oriented,
        MonoidKind::Symmetric,
        MonoidKind::Hereditary,
        MonoidKind::ReflexiveOriented,
        MonoidKind::ReflexiveSymmetric,
        MonoidKind::ReflexiveHereditary,
    ];

    pub fn is_reflexive(self) -> bool {
        matches!(
            self,
            MonoidKind::ReflexiveOriented
                | MonoidKind::ReflexiveSymmetric
                | MonoidKind::ReflexiveHereditary
        )
    }

    fn has_permutations(self) -> bool {
        matches!(
            self,
            MonoidKind::Symmetric
                | MonoidKind::ReflexiveSymmetric
                | MonoidKind::Hereditary
                | MonoidKind::ReflexiveHereditary
        )
    }

    fn has_constants(self) -> bool {
        self.is_reflexive() || self == MonoidKind::Hereditary
    }

    fn is_hereditary(self) -> bool {
        matches!(
            self,
            MonoidKind::Hereditary | MonoidKind::ReflexiveHereditary
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MonoidKind::Oriented => "oriented",
            MonoidKind::Symmetric => "symmetric",
            MonoidKind::Hereditary => "hereditary",
            MonoidKind::ReflexiveOriented => "reflexive-oriented",
            MonoidKind::ReflexiveSymmetric => "reflexive-symmetric",
            MonoidKind::ReflexiveHereditary => "reflexive-hereditary",
        }
    }

    /// Size of the monoid on an `n`-element set, saturating on overflow.
    pub fn predicted_size(self, n: usize) -> u128 {
        let n128 = n as u128;
        let factorial = (1..=n128)
            .try_fold(1u128, |acc, k| acc.checked_mul(k))
            .unwrap_or(u128::MAX);
        let power = u32::try_from(n)
            .ok()
            .and_then(|e| n128.checked_pow(e))
            .unwrap_or(u128::MAX);
        let constants = if n >= 2 { n128 } else { 0 };
        match self {
            MonoidKind::Oriented => 1,
            MonoidKind::Symmetric => factorial,
            MonoidKind::Hereditary | MonoidKind::ReflexiveHereditary => power.max(1),
            MonoidKind::ReflexiveOriented => 1 + constants,
            MonoidKind::ReflexiveSymmetric => factorial.saturating_add(constants),
        }
    }
}

impl fmt::Display for MonoidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MonoidKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MonoidKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::invalid("monoid kind", format!("unknown kind `{s}`")))
    }
}

/// Canonical names for the elements of an `n`-element set: `s, t` when
/// `n = 2`, decimal indices otherwise.
pub fn carrier_names(n: usize) -> Vec<String> {
    if n == 2 {
        vec!["s".into(), "t".into()]
    } else {
        (0..n).map(|i| i.to_string()).collect()
    }
}

/// The named submonoid of `End(X)` for `|X| = x_size`, acting on `X` by
/// evaluation.
///
/// Element order is `id`, the remaining permutations in lexicographic order
/// of their image lists, the constants `c_<x>`, then any other endomaps
/// lexicographically.
pub fn build_standard_monoid(x_size: usize, kind: MonoidKind) -> Result<(FiniteMonoid, RightMSet)> {
    if kind.is_reflexive() && x_size == 0 {
        return Err(Error::invalid(
            "monoid kind",
            format!("{kind} needs a nonempty X, otherwise Fix(M) is empty"),
        ));
    }
    let predicted = kind.predicted_size(x_size);
    if predicted > MAX_MONOID_SIZE as u128 {
        return Err(Error::Capacity(format!(
            "{kind} monoid on {x_size} points has {predicted} elements (limit {MAX_MONOID_SIZE})"
        )));
    }

    let carrier = carrier_names(x_size);
    let identity: Vec<usize> = (0..x_size).collect();
    let mut maps: Vec<Vec<usize>> = vec![identity.clone()];
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut push = |map: Vec<usize>, maps: &mut Vec<Vec<usize>>| {
        if !seen.contains_key(&map) {
            seen.insert(map.clone(), maps.len());
            maps.push(map);
        }
    };

    if kind.has_permutations() {
        for perm in (0..x_size).permutations(x_size) {
            push(perm, &mut maps);
        }
    }
    if kind.has_constants() {
        for x in 0..x_size {
            push(vec![x; x_size], &mut maps);
        }
    }
    if kind.is_hereditary() {
        for map in (0..x_size).map(|_| 0..x_size).multi_cartesian_product() {
            push(map, &mut maps);
        }
    }

    let index: HashMap<&[usize], usize> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i))
        .collect();
    let names: Vec<String> = maps.iter().map(|m| endomap_name(m, &carrier)).collect();
    let mul: Vec<Vec<usize>> = maps
        .iter()
        .map(|a| {
            maps.iter()
                .map(|b| {
                    let composite: Vec<usize> = a.iter().map(|&x| b[x]).collect();
                    index[composite.as_slice()]
                })
                .collect()
        })
        .collect();
    let monoid = FiniteMonoid::from_table_unchecked(names, mul, 0)?;
    let act: Vec<Vec<usize>> = (0..x_size)
        .map(|x| maps.iter().map(|m| m[x]).collect())
        .collect();
    let xset = RightMSet {
        names: carrier,
        act: act.into_iter().flatten().collect(),
        monoid_len: monoid.len(),
    };
    Ok((monoid, xset))
}

fn endomap_name(map: &[usize], carrier: &[String]) -> String {
    let is_identity = map.iter().enumerate().all(|(i, &y)| i == y);
    if is_identity {
        return "id".into();
    }
    if map.len() >= 2 && map.iter().all(|&y| y == map[0]) {
        return format!("c_{}", carrier[map[0]]);
    }
    format!("[{}]", map.iter().map(|&y| carrier[y].as_str()).join(","))
}

fn check_unique_names(what: &'static str, names: &[String]) -> Result<()> {
    if let Some(dup) = names.iter().duplicates().next() {
        return Err(Error::invalid(
            what,
            format!("duplicate element name `{dup}`"),
        ));
    }
    if let Some(bad) = names
        .iter()
        .find(|n| n.is_empty() || n.chars().any(char::is_whitespace))
    {
        return Err(Error::invalid(
            what,
            format!("element name `{bad}` must be a nonempty token"),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names_of(m: &FiniteMonoid, elems: &[usize]) -> Vec<String> {
        elems.iter().map(|&e| m.name(e).to_string()).collect()
    }

    #[test]
    fn standard_sizes() {
        let (m, _) = build_standard_monoid(2, MonoidKind::Symmetric).unwrap();
        assert_eq!(m.names(), ["id", "[t,s]"]);
        let (m, _) = build_standard_monoid(2, MonoidKind::Hereditary).unwrap();
        assert_eq!(m.len(), 4);
        let (m, _) = build_standard_monoid(2, MonoidKind::ReflexiveSymmetric).unwrap();
        assert_eq!(m.names(), ["id", "[t,s]", "c_s", "c_t"]);
        let (m, _) = build_standard_monoid(3, MonoidKind::Symmetric).unwrap();
        assert_eq!(m.len(), 6);
        let (m, _) = build_standard_monoid(3, MonoidKind::ReflexiveOriented).unwrap();
        assert_eq!(m.len(), 4);
        let (m, _) = build_standard_monoid(0, MonoidKind::Hereditary).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn sizes_match_prediction() {
        for kind in MonoidKind::ALL {
            for n in 1..=4 {
                let (m, x) = build_standard_monoid(n, kind).unwrap();
                assert_eq!(m.len() as u128, kind.predicted_size(n), "{kind} n={n}");
                assert_eq!(x.len(), n);
            }
        }
    }

    #[test]
    fn reflexive_needs_points() {
        assert!(matches!(
            build_standard_monoid(0, MonoidKind::ReflexiveSymmetric),
            Err(Error::Invalid { .. })
        ));
    }

    #[test]
    fn capacity_guard() {
        assert!(matches!(
            build_standard_monoid(6, MonoidKind::Hereditary),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            build_standard_monoid(8, MonoidKind::Symmetric),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn fix_sets() {
        let (m, _) = build_standard_monoid(2, MonoidKind::ReflexiveSymmetric).unwrap();
        assert_eq!(names_of(&m, &m.fix_set()), ["c_s", "c_t"]);
        let (m, _) = build_standard_monoid(2, MonoidKind::Symmetric).unwrap();
        assert!(m.fix_set().is_empty());
        let (m, _) = build_standard_monoid(1, MonoidKind::Oriented).unwrap();
        assert_eq!(m.fix_set(), [0]);
        for kind in [
            MonoidKind::ReflexiveOriented,
            MonoidKind::ReflexiveHereditary,
        ] {
            let (m, _) = build_standard_monoid(3, kind).unwrap();
            assert_eq!(names_of(&m, &m.fix_set()), ["c_0", "c_1", "c_2"], "{kind}");
        }
    }

    #[test]
    fn invertible_elements() {
        let (m, _) = build_standard_monoid(2, MonoidKind::ReflexiveSymmetric).unwrap();
        assert_eq!(names_of(&m, &m.invertibles()), ["id", "[t,s]"]);
        let (m, _) = build_standard_monoid(3, MonoidKind::Symmetric).unwrap();
        assert_eq!(m.invertibles().len(), 6);
        let (m, _) = build_standard_monoid(2, MonoidKind::ReflexiveOriented).unwrap();
        assert_eq!(names_of(&m, &m.invertibles()), ["id"]);
    }

    #[test]
    fn laws_hold_exhaustively() {
        for kind in MonoidKind::ALL {
            for n in 0..=3 {
                let Ok((m, x)) = build_standard_monoid(n, kind) else {
                    continue;
                };
                assert!(m.law_violations().is_empty(), "{kind} n={n}");
                RightMSet::new(x.names().to_vec(), x.table(), &m).unwrap();
                let fix = m.fix_set();
                for &f in &fix {
                    for k in 0..m.len() {
                        assert!(
                            fix.contains(&m.mul(f, k)),
                            "Fix not closed for {kind} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn diagrammatic_multiplication() {
        // c_s then swap is c_t; swap then c_s is c_s.
        let (m, _) = build_standard_monoid(2, MonoidKind::ReflexiveSymmetric).unwrap();
        let swap = m.index_of("[t,s]").unwrap();
        let cs = m.index_of("c_s").unwrap();
        let ct = m.index_of("c_t").unwrap();
        assert_eq!(m.mul(cs, swap), ct);
        assert_eq!(m.mul(swap, cs), cs);
    }

    #[test]
    fn rejects_bad_tables() {
        let names = vec!["e".to_string(), "a".to_string()];
        // a*a = e but e is not a two-sided identity in row 0.
        let bad = FiniteMonoid::from_table(names.clone(), vec![vec![1, 1], vec![1, 0]], 0);
        assert!(matches!(bad, Err(Error::Law { .. })));
        let ok = FiniteMonoid::from_table(names, vec![vec![0, 1], vec![1, 0]], 0).unwrap();
        assert_eq!(ok.invertibles(), [0, 1]);
    }
}
