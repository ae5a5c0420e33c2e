//! The full analysis pipeline and its JSON report.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::catalysis::{self, CatalyticFinding};
use crate::error::Result;
use crate::network::{parse_network, ConservationLaw, Consistency, ReactionNetwork};
use crate::pathway::DEFAULT_BOUND;
use crate::persistence::{self, PersistenceCertificate};
use crate::siphon::{self, SetClassification};
use crate::simulate::{self, ProbeReport};

pub const TOOL_NAME: &str = "crn-analyze";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSummary {
    /// Canonical `.crn` rendering; parsing it reproduces the analysed network.
    pub text: String,
    pub species: Vec<String>,
    pub reactions: Vec<String>,
    pub reversible: bool,
    pub weakly_reversible: bool,
    pub chemical: bool,
    pub conservative: bool,
    pub consistency: Consistency,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalysisSection {
    pub bound: usize,
    pub max_scale: usize,
    pub findings: Vec<CatalyticFinding>,
    /// Why the search was skipped or restricted.
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    /// SHA-256 of the input text, hex encoded.
    pub input_digest: String,
    pub network: NetworkSummary,
    pub conservation_laws: Vec<ConservationLaw>,
    pub minimal_siphons: Vec<SetClassification>,
    pub persistence: PersistenceCertificate,
    pub catalysis: Option<CatalysisSection>,
    pub probe: Option<ProbeReport>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeOptions {
    pub trials: usize,
    pub t_end: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisOptions {
    pub catalysis: bool,
    pub bound: usize,
    pub probe: Option<ProbeOptions>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            catalysis: false,
            bound: DEFAULT_BOUND,
            probe: None,
        }
    }
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn summarize(net: &ReactionNetwork) -> NetworkSummary {
    let names = net.species_names();
    NetworkSummary {
        text: net.render(),
        species: names.clone(),
        reactions: net.reactions().iter().map(|r| r.render(&names)).collect(),
        reversible: net.is_reversible(),
        weakly_reversible: net.is_weakly_reversible(),
        chemical: net.is_chemical(),
        conservative: net.is_conservative(),
        consistency: net.is_consistent(),
    }
}

/// Parse, structure, minimal siphons, classification, persistence, then the optional stages.
pub fn analyze(text: &str, options: &AnalysisOptions) -> Result<AnalysisReport> {
    let net = parse_network(text)?;
    analyze_network(&net, &digest(text), options)
}

pub fn analyze_network(
    net: &ReactionNetwork,
    input_digest: &str,
    options: &AnalysisOptions,
) -> Result<AnalysisReport> {
    let persistence = persistence::certify(net)?;
    let catalysis = if options.catalysis {
        Some(if net.is_chemical() {
            CatalysisSection {
                bound: options.bound,
                max_scale: catalysis::DEFAULT_MAX_SCALE,
                findings: catalysis::find_catalytic_sets(net, options.bound)?,
                note: None,
            }
        } else {
            CatalysisSection {
                bound: options.bound,
                max_scale: catalysis::DEFAULT_MAX_SCALE,
                findings: self_replicable_siphon_findings(net, &persistence.minimal_siphons)?,
                note: Some(
                    "non-integer stoichiometry: only self-replicable siphons were turned into \
                     strictly catalytic sets; pathway search was skipped"
                        .into(),
                ),
            }
        })
    } else {
        None
    };
    let probe = match &options.probe {
        Some(p) => Some(simulate::empirical_persistence_probe(net, p.trials, p.t_end, p.seed)?),
        None => None,
    };
    Ok(AnalysisReport {
        tool: ToolInfo {
            name: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
        },
        input_digest: input_digest.to_string(),
        network: summarize(net),
        conservation_laws: net.conservation_laws(),
        minimal_siphons: persistence.minimal_siphons.clone(),
        persistence,
        catalysis,
        probe,
    })
}

fn self_replicable_siphon_findings(
    net: &ReactionNetwork,
    siphons: &[SetClassification],
) -> Result<Vec<CatalyticFinding>> {
    siphons
        .iter()
        .filter(|c| c.is_self_replicable)
        .map(|c| {
            catalysis::strictly_catalytic_from_self_replicable_siphon(
                net,
                &c.set,
                &c.self_replicability,
            )
        })
        .collect()
}

/// Outcome of re-checking a report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, what: &str, r: std::result::Result<(), String>) {
        self.checked += 1;
        if let Err(e) = r {
            self.failures.push(format!("{what}: {e}"));
        }
    }
}

fn ok_if(b: bool, msg: &str) -> std::result::Result<(), String> {
    if b {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

impl AnalysisReport {
    /// Re-derives the network from the report and re-checks every certificate in it.
    pub fn verify(&self) -> Verification {
        let mut v = Verification::default();
        let net = match parse_network(&self.network.text) {
            Ok(n) => n,
            Err(e) => {
                v.check("network text", Err(e.to_string()));
                return v;
            }
        };
        let fresh = summarize(&net);
        let s = &self.network;
        v.check(
            "network flags",
            ok_if(
                s.species == fresh.species
                    && s.reactions == fresh.reactions
                    && s.reversible == fresh.reversible
                    && s.weakly_reversible == fresh.weakly_reversible
                    && s.chemical == fresh.chemical
                    && s.conservative == fresh.conservative
                    && s.consistency.is_consistent() == fresh.consistency.is_consistent(),
                "summary disagrees with the network",
            ),
        );
        v.check(
            "consistency certificate",
            ok_if(s.consistency.verify(&net), "certificate fails"),
        );
        let expected_laws = net.conservation_laws();
        v.check(
            "conservation laws",
            ok_if(
                self.conservation_laws.len() == expected_laws.len()
                    && self.conservation_laws.iter().all(|l| l.holds_for(&net)),
                "basis is wrong",
            ),
        );
        let listed: Vec<_> = self.minimal_siphons.iter().map(|c| c.set.clone()).collect();
        v.check(
            "minimal siphons",
            ok_if(listed == siphon::minimal_siphons(&net), "list differs from enumeration"),
        );
        for c in &self.minimal_siphons {
            v.check(&format!("siphon {:?}", c.species), c.verify(&net));
        }
        v.check("persistence", self.persistence.verify(&net));
        v.check(
            "persistence siphons",
            ok_if(
                self.persistence.minimal_siphons == self.minimal_siphons,
                "persistence evidence differs from the siphon section",
            ),
        );
        if let Some(cat) = &self.catalysis {
            for f in &cat.findings {
                v.check(&format!("catalytic set {:?}", f.species), f.verify(&net));
            }
        }
        v
    }

    /// Pretty JSON with object keys in sorted order.
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }
}

/// Serializes with every object's keys sorted, whatever map type serde_json was built with.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    fn sort(v: Value) -> Value {
        match v {
            Value::Object(m) => {
                let mut entries: Vec<(String, Value)> = m.into_iter().collect();
                entries.sort_by(|a, b| a.0.cmp(&b.0));
                Value::Object(entries.into_iter().map(|(k, v)| (k, sort(v))).collect())
            }
            Value::Array(a) => Value::Array(a.into_iter().map(sort).collect()),
            other => other,
        }
    }
    let v = serde_json::to_value(value).expect("report types serialize");
    serde_json::to_string_pretty(&sort(v)).expect("value serializes")
}
