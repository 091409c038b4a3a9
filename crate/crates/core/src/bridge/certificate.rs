use std::fmt;
use std::sync::Arc;

use super::{Hypergraph, PowerGraph, ReflexiveFGraph};
use crate::error::{Error, Result};
use crate::expo::exponential;
use crate::graph::{
    arc_orbits, classify_arcs, find_isomorphism, representable, ArcKind, Representable, XMGraph,
};

/// Which comma category is shown to lack exponentials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObstructionCase {
    KUniform,
    PowerGraph,
    ReflexivePowerGraph,
}

impl ObstructionCase {
    pub const ALL: [ObstructionCase; 3] = [
        ObstructionCase::KUniform,
        ObstructionCase::PowerGraph,
        ObstructionCase::ReflexivePowerGraph,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ObstructionCase::KUniform => "k-uniform",
            ObstructionCase::PowerGraph => "power-graph",
            ObstructionCase::ReflexivePowerGraph => "reflexive-power-graph",
        }
    }
}

impl fmt::Display for ObstructionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ObstructionCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                Error::invalid(
                    "obstruction case",
                    format!("unknown case `{s}` (k-uniform, power-graph, reflexive-power-graph)"),
                )
            })
    }
}

/// Witness that `N(G)^{N(H)}` is not in the essential image of a nerve, so
/// the comma category has no exponential `G^H`.
#[derive(Clone, Debug)]
pub struct ObstructionCertificate {
    pub case: ObstructionCase,
    pub x_len: usize,
    pub g_description: String,
    pub h_description: String,
    pub g_nerve: Arc<XMGraph>,
    pub h_nerve: Arc<XMGraph>,
    pub exponential: Arc<XMGraph>,
    pub witness_arc: usize,
    /// The unit moving the witness loop; `None` for the k-uniform case,
    /// whose witness is a degenerate incidence instead.
    pub witness_sigma: Option<usize>,
    pub verified: bool,
    pub transcript: Vec<String>,
}

pub fn obstruction_certificate(
    case: ObstructionCase,
    x_len: usize,
) -> Result<ObstructionCertificate> {
    if x_len < 2 {
        return Err(Error::invalid(
            "obstruction case",
            format!("|X| = {x_len}; the obstruction needs |X| ≥ 2"),
        ));
    }
    let (g_description, h_description, g_nerve, h_nerve) = match case {
        ObstructionCase::KUniform => {
            let v = Hypergraph::interpretation_vertex();
            let n = v.nerve(x_len)?.graph;
            (
                "one vertex, no edges".to_string(),
                "one vertex, no edges".to_string(),
                n.clone(),
                n,
            )
        }
        ObstructionCase::PowerGraph => {
            let g = PowerGraph::new(x_len, 1, vec![vec![0; x_len]; 2])?;
            let h = PowerGraph::interpretation_arc(x_len);
            (
                "one vertex v with two edges {v,…,v}".to_string(),
                "the arc interpretation: vertices X, one edge (x)_{x∈X}".to_string(),
                g.nerve()?.graph,
                h.nerve()?.graph,
            )
        }
        ObstructionCase::ReflexivePowerGraph => {
            let g = ReflexiveFGraph::with_edges(x_len, 1, vec![vec![0; x_len]])?;
            let h = ReflexiveFGraph::interpretation_arc(x_len);
            (
                "one vertex v and one further part e with ∂e = {v,…,v}".to_string(),
                "the arc interpretation: parts ⊤ and X, ∂⊤ = (x)_{x∈X}".to_string(),
                g.nerve()?.graph,
                h.nerve()?.graph,
            )
        }
    };
    let e = exponential(&g_nerve, &h_nerve)?;
    let exp = e.graph.clone();
    let mut transcript = vec![
        format!("N(G): {g_nerve}"),
        format!("N(H): {h_nerve}"),
        format!("N(G)^N(H): {exp}"),
    ];
    let (witness_arc, witness_sigma) = match case {
        ObstructionCase::KUniform => {
            let alpha = (0..exp.arc_count())
                .find(|&a| image_size(&exp, a) < x_len)
                .ok_or_else(|| {
                    Error::invalid("certificate", "no arc with a degenerate incidence")
                })?;
            (alpha, None)
        }
        _ => {
            let class = classify_arcs(&exp)
                .into_iter()
                .find(|c| c.kind == ArcKind::UnfixedLoop)
                .ok_or_else(|| Error::invalid("certificate", "exponential has no unfixed loop"))?;
            let alpha = class.orbit[0];
            let t = exp.theory();
            let sigma = t
                .invertibles()
                .into_iter()
                .find(|&s| exp.act(alpha, s) != alpha)
                .expect("an unfixed loop is moved by some unit");
            (alpha, Some(sigma))
        }
    };
    let mut cert = ObstructionCertificate {
        case,
        x_len,
        g_description,
        h_description,
        g_nerve,
        h_nerve,
        exponential: exp,
        witness_arc,
        witness_sigma,
        verified: false,
        transcript: Vec::new(),
    };
    transcript.extend(cert.recheck_transcript());
    cert.verified = cert.recheck();
    cert.transcript = transcript;
    Ok(cert)
}

fn image_size(g: &XMGraph, a: usize) -> usize {
    let mut p = g.profile(a).to_vec();
    p.sort_unstable();
    p.dedup();
    p.len()
}

impl ObstructionCertificate {
    pub fn witness_orbit_size(&self) -> usize {
        arc_orbits(&self.exponential)
            .into_iter()
            .find(|o| o.contains(&self.witness_arc))
            .map_or(0, |o| o.len())
    }

    /// Re-checks the witness from the raw incidence and action tables.
    pub fn recheck(&self) -> bool {
        let g = &self.exponential;
        let alpha = self.witness_arc;
        if alpha >= g.arc_count() {
            return false;
        }
        let inc = g.inc_table();
        let act = g.act_table();
        match self.witness_sigma {
            None => {
                let mut image = inc[alpha].clone();
                image.sort_unstable();
                image.dedup();
                image.len() < self.x_len
            }
            Some(sigma) => {
                let is_unit = g.theory().inverse(sigma).is_some();
                let is_loop = inc[alpha].windows(2).all(|w| w[0] == w[1]);
                is_unit && is_loop && act[alpha][sigma] != alpha
            }
        }
    }

    fn recheck_transcript(&self) -> Vec<String> {
        let g = &self.exponential;
        let alpha = self.witness_arc;
        let profile: Vec<String> = g
            .profile(alpha)
            .iter()
            .map(|&v| g.vertex_label(v))
            .collect();
        let mut lines = vec![format!(
            "witness arc {} with incidence ({})",
            g.arc_label(alpha),
            profile.join(", ")
        )];
        match self.witness_sigma {
            None => {
                lines.push(format!(
                    "incidence image has {} element(s) < |X| = {}; every arc in the nerve of a {}-uniform hypergraph has an image of size {}",
                    image_size(g, alpha),
                    self.x_len,
                    self.x_len,
                    self.x_len
                ));
                if let Ok((r, _)) = Hypergraph::realize(g) {
                    lines.push(format!(
                        "its realization has edge sizes {:?}, so it is not {}-uniform",
                        r.uniformity_profile(),
                        self.x_len
                    ));
                }
            }
            Some(sigma) => {
                let t = g.theory();
                lines.push(format!(
                    "{}.{} = {} ≠ {}",
                    g.arc_label(alpha),
                    t.monoid().name(sigma),
                    g.arc_label(g.act(alpha, sigma)),
                    g.arc_label(alpha)
                ));
                let rep = Arc::new(representable(t, Representable::A));
                let iso = find_isomorphism(&self.h_nerve, &rep)
                    .ok()
                    .flatten()
                    .is_some();
                lines.push(format!("N(H) ≅ A̲: {iso}"));
                lines.push("nerves of power graphs contain only fixed loops".to_string());
            }
        }
        lines
    }
}

impl fmt::Display for ObstructionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "obstruction certificate: {} (|X| = {})",
            self.case, self.x_len
        )?;
        writeln!(f, "G: {}", self.g_description)?;
        writeln!(f, "H: {}", self.h_description)?;
        writeln!(
            f,
            "witness arc: {}",
            self.exponential.arc_label(self.witness_arc)
        )?;
        match self.witness_sigma {
            Some(s) => {
                let name = self.exponential.theory().monoid().name(s);
                if self.x_len == 2 {
                    writeln!(f, "witness sigma: σ = i, the swap {name}")?;
                } else {
                    writeln!(f, "witness sigma: σ = {name}")?;
                }
            }
            None => writeln!(f, "witness sigma: none (degenerate incidence)")?,
        }
        writeln!(f, "witness orbit size: {}", self.witness_orbit_size())?;
        writeln!(f, "verified: {}", self.verified)?;
        for line in &self.transcript {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_cases_verify() {
        for n in [2, 3] {
            for case in ObstructionCase::ALL {
                let c = obstruction_certificate(case, n).unwrap();
                assert!(c.verified, "{case} {n}");
                assert!(c.recheck());
            }
        }
    }

    #[test]
    fn power_graph_witness_matches_the_two_loop() {
        let c = obstruction_certificate(ObstructionCase::PowerGraph, 2).unwrap();
        let t = c.exponential.theory().clone();
        assert_eq!(t.monoid().name(c.witness_sigma.unwrap()), "[t,s]");
        assert_eq!(c.witness_orbit_size(), 2);
        assert!(c.to_string().contains("σ = i"));
        assert!(c.exponential.is_loop(c.witness_arc));
    }

    #[test]
    fn reflexive_case_uses_the_64_arc_exponential() {
        let c = obstruction_certificate(ObstructionCase::ReflexivePowerGraph, 2).unwrap();
        assert_eq!(
            (c.exponential.vertex_count(), c.exponential.arc_count()),
            (2, 64)
        );
    }

    #[test]
    fn k_uniform_case_is_the_terminal_loop() {
        let c = obstruction_certificate(ObstructionCase::KUniform, 2).unwrap();
        assert_eq!(
            (c.exponential.vertex_count(), c.exponential.arc_count()),
            (1, 1)
        );
        assert!(c.witness_sigma.is_none());
    }

    #[test]
    fn tampered_certificates_fail_recheck() {
        let mut c = obstruction_certificate(ObstructionCase::PowerGraph, 2).unwrap();
        c.witness_arc = 0;
        assert!(!c.recheck());
        assert!(obstruction_certificate(ObstructionCase::KUniform, 1).is_err());
    }
}
