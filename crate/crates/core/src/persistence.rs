//! Persistence certificates assembled from minimal-siphon classifications.
//!
//! Every siphon contains a minimal siphon, and subsets of critical, drainable or self-replicable
//! sets keep that property, so each rule only needs to inspect minimal siphons.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::network::{ConservationLaw, ReactionNetwork};
use crate::siphon::{self, SetClassification};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PersistenceVerdict {
    Persistent,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PersistenceRule {
    NoSiphons,
    ConservativeNoCriticalSiphons,
    NoDrainableSiphons,
    WeaklyReversibleNonAutocatalytic,
    None,
}

/// Which rules hold, independently of the order they are tried in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleApplicability {
    pub no_siphons: bool,
    pub conservative_no_critical_siphons: bool,
    pub no_drainable_siphons: bool,
    pub weakly_reversible_non_autocatalytic: bool,
}

impl RuleApplicability {
    /// First applicable rule in certificate order.
    pub fn first(&self) -> PersistenceRule {
        if self.no_siphons {
            PersistenceRule::NoSiphons
        } else if self.conservative_no_critical_siphons {
            PersistenceRule::ConservativeNoCriticalSiphons
        } else if self.no_drainable_siphons {
            PersistenceRule::NoDrainableSiphons
        } else if self.weakly_reversible_non_autocatalytic {
            PersistenceRule::WeaklyReversibleNonAutocatalytic
        } else {
            PersistenceRule::None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistenceCertificate {
    pub verdict: PersistenceVerdict,
    pub rule: PersistenceRule,
    pub applicable: RuleApplicability,
    pub minimal_siphons: Vec<SetClassification>,
    /// Conservation law with every weight at least one, when the network is conservative.
    pub conservative_law: Option<ConservationLaw>,
    pub weakly_reversible: bool,
    /// Drainable minimal siphons, listed when no rule applies.
    pub blockers: Vec<Vec<String>>,
}

fn applicability(
    siphons: &[SetClassification],
    law: &Option<ConservationLaw>,
    weakly_reversible: bool,
) -> RuleApplicability {
    RuleApplicability {
        no_siphons: siphons.is_empty(),
        conservative_no_critical_siphons: law.is_some() && siphons.iter().all(|c| !c.is_critical),
        no_drainable_siphons: siphons.iter().all(|c| !c.is_drainable),
        weakly_reversible_non_autocatalytic: weakly_reversible
            && siphons.iter().all(|c| !c.is_self_replicable),
    }
}

pub fn certify(net: &ReactionNetwork) -> Result<PersistenceCertificate> {
    let minimal_siphons = siphon::minimal_siphons(net)
        .iter()
        .map(|t| siphon::classify_set(net, t))
        .collect::<Result<Vec<_>>>()?;
    let conservative_law = net.conservative_law();
    let weakly_reversible = net.is_weakly_reversible();
    let applicable = applicability(&minimal_siphons, &conservative_law, weakly_reversible);
    let rule = applicable.first();
    let verdict = if rule == PersistenceRule::None {
        PersistenceVerdict::Inconclusive
    } else {
        PersistenceVerdict::Persistent
    };
    let blockers = if verdict == PersistenceVerdict::Inconclusive {
        minimal_siphons
            .iter()
            .filter(|c| c.is_drainable)
            .map(|c| c.species.clone())
            .collect()
    } else {
        Vec::new()
    };
    Ok(PersistenceCertificate {
        verdict,
        rule,
        applicable,
        minimal_siphons,
        conservative_law,
        weakly_reversible,
        blockers,
    })
}

impl PersistenceCertificate {
    pub fn is_persistent(&self) -> bool {
        self.verdict == PersistenceVerdict::Persistent
    }

    /// Re-derives the siphon list and re-checks every piece of evidence the rule relies on.
    pub fn verify(&self, net: &ReactionNetwork) -> std::result::Result<(), String> {
        let expected = siphon::minimal_siphons(net);
        let listed: Vec<_> = self.minimal_siphons.iter().map(|c| c.set.clone()).collect();
        if expected != listed {
            return Err("minimal siphon list is incomplete or wrong".into());
        }
        for c in &self.minimal_siphons {
            c.verify(net).map_err(|e| format!("siphon {:?}: {e}", c.species))?;
        }
        if let Some(law) = &self.conservative_law {
            let full = law.weights.len() == net.num_species()
                && law.weights.iter().all(|w| *w >= num_traits::One::one());
            if !full || !law.holds_for(net) {
                return Err("conservative law fails".into());
            }
        } else if net.is_conservative() {
            return Err("conservative law omitted".into());
        }
        if self.weakly_reversible != net.is_weakly_reversible() {
            return Err("weak reversibility flag is wrong".into());
        }
        let applicable = applicability(
            &self.minimal_siphons,
            &self.conservative_law,
            self.weakly_reversible,
        );
        if applicable != self.applicable || applicable.first() != self.rule {
            return Err("rule selection does not match the evidence".into());
        }
        let persistent = self.rule != PersistenceRule::None;
        if persistent != self.is_persistent() {
            return Err("verdict does not match rule".into());
        }
        let drainable: Vec<Vec<String>> = self
            .minimal_siphons
            .iter()
            .filter(|c| c.is_drainable)
            .map(|c| c.species.clone())
            .collect();
        if persistent && !self.blockers.is_empty() {
            return Err("persistent certificate lists blockers".into());
        }
        if !persistent && (self.blockers != drainable || drainable.is_empty()) {
            return Err("blockers must be exactly the drainable minimal siphons".into());
        }
        Ok(())
    }
}
