//! Catalytic and strictly catalytic species sets.
//!
//! A pathway `y ->* y'` with catalyst `m = min(y, y')` exhibits `supp(m)` as catalytic when the
//! catalyst-free pair `y - m ->* y' - m` is impossible, and as strictly catalytic when
//! `k(y - m) ->* k(y' - m)` is impossible for every `k > 0`. Only cone and siphon certificates
//! speak about every `k`; exhaustive search at a few scales only ever yields "catalytic".

use std::collections::{BTreeMap, HashSet};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Complex, ReactionNetwork};
use crate::pathway::{self, bounded_reach, replay, PathwayWitness, ReachabilityVerdict};
use crate::rational::Rational;
use crate::siphon::{self, ConeEvidence};
use crate::species_set::SpeciesSet;

/// Largest scale tried when no scale-invariant certificate exists.
pub const DEFAULT_MAX_SCALE: usize = 8;
/// Firings explored from each reactant complex when collecting candidate pathways.
const CANDIDATE_DEPTH: usize = 3;
const CANDIDATE_LIMIT: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalysisKind {
    Catalytic,
    StrictlyCatalytic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleCheck {
    pub k: usize,
    pub verdict: ReachabilityVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CatalysisEvidence {
    /// Cone or siphon certificate for the catalyst-free pair, valid at every scale.
    Strict { separation: ReachabilityVerdict },
    /// Verdicts for `k = 1, 2, ...`: unreachable up to some scale, then possibly a reachable or
    /// undecided scale that ended the scan.
    Scaled { max_scale: usize, checks: Vec<ScaleCheck> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalyticFinding {
    pub species: Vec<String>,
    pub set: SpeciesSet,
    pub kind: CatalysisKind,
    pub pathway: PathwayWitness,
    pub end: Complex,
    pub catalyst: Complex,
    pub evidence: CatalysisEvidence,
}

impl CatalyticFinding {
    /// Largest `k` such that every scale `1..=k` was shown unreachable.
    pub fn tested_up_to(&self) -> Option<usize> {
        match &self.evidence {
            CatalysisEvidence::Strict { .. } => None,
            CatalysisEvidence::Scaled { checks, .. } => Some(
                checks
                    .iter()
                    .take_while(|c| c.verdict.is_unreachable())
                    .count(),
            ),
        }
    }

    /// Scale at which the catalyst-free pair became reachable, if any.
    pub fn reachable_at(&self) -> Option<usize> {
        match &self.evidence {
            CatalysisEvidence::Scaled { checks, .. } => {
                checks.iter().find(|c| c.verdict.is_reachable()).map(|c| c.k)
            }
            CatalysisEvidence::Strict { .. } => None,
        }
    }

    pub fn verify(&self, net: &ReactionNetwork) -> std::result::Result<(), String> {
        let end = replay(net, &self.pathway).map_err(|e| e.to_string())?;
        if end != self.end {
            return Err("pathway does not end at the recorded population".into());
        }
        if self.catalyst != self.pathway.start.meet(&end) {
            return Err("catalyst is not min(start, end)".into());
        }
        if self.catalyst.support_set(net.num_species()) != self.set || self.set.is_empty() {
            return Err("set is not the catalyst support".into());
        }
        if net.set_names(&self.set) != self.species {
            return Err("species names disagree with set".into());
        }
        let src = self.pathway.start.checked_sub(&self.catalyst).expect("min is below start");
        let tgt = end.checked_sub(&self.catalyst).expect("min is below end");
        match (&self.evidence, self.kind) {
            (CatalysisEvidence::Strict { separation }, CatalysisKind::StrictlyCatalytic) => {
                if !separation.is_scale_invariant() || !separation.verify(net, &src, &tgt) {
                    return Err("strict separation certificate fails".into());
                }
            }
            (CatalysisEvidence::Scaled { checks, .. }, CatalysisKind::Catalytic) => {
                match checks.first() {
                    Some(c) if c.k == 1 && c.verdict.is_unreachable() => {}
                    _ => return Err("catalytic claim lacks an unreachability verdict at k = 1".into()),
                }
                for c in checks {
                    let k = Rational::from_integer(c.k.into());
                    if !c.verdict.verify(net, &src.scale(&k), &tgt.scale(&k)) {
                        return Err(format!("scale {} verdict fails", c.k));
                    }
                }
            }
            _ => return Err("kind and evidence disagree".into()),
        }
        Ok(())
    }
}

/// Classifies one pathway, or `None` when the catalyst is empty or the catalyst-free pair is
/// reachable or undecided at `k = 1`.
pub fn classify_pathway(
    net: &ReactionNetwork,
    pathway: &PathwayWitness,
    bound: usize,
    max_scale: usize,
) -> Result<Option<CatalyticFinding>> {
    let end = replay(net, pathway)?;
    let catalyst = pathway.start.meet(&end);
    let set = catalyst.support_set(net.num_species());
    if set.is_empty() || end == pathway.start {
        return Ok(None);
    }
    let src = pathway.start.checked_sub(&catalyst).expect("min is below start");
    let tgt = end.checked_sub(&catalyst).expect("min is below end");
    let make = |kind, evidence| CatalyticFinding {
        species: net.set_names(&set),
        set: set.clone(),
        kind,
        pathway: pathway.clone(),
        end: end.clone(),
        catalyst: catalyst.clone(),
        evidence,
    };
    if let Some(separation) = pathway::separating_certificate(net, &src, &tgt)? {
        return Ok(Some(make(
            CatalysisKind::StrictlyCatalytic,
            CatalysisEvidence::Strict { separation },
        )));
    }
    let mut checks = Vec::new();
    for k in 1..=max_scale.max(1) {
        let q = Rational::from_integer(k.into());
        let verdict = bounded_reach(net, &src.scale(&q), &tgt.scale(&q), bound)?;
        let unreachable = verdict.is_unreachable();
        if k == 1 && !unreachable {
            return Ok(None);
        }
        checks.push(ScaleCheck { k, verdict });
        if !unreachable {
            break;
        }
    }
    Ok(Some(make(
        CatalysisKind::Catalytic,
        CatalysisEvidence::Scaled {
            max_scale,
            checks,
        },
    )))
}

/// Candidate pathways: every single reaction, plus short pathways from each reactant complex.
fn candidates(net: &ReactionNetwork, bound: usize) -> Result<Vec<PathwayWitness>> {
    let mut out = Vec::new();
    for (i, r) in net.reactions().iter().enumerate() {
        out.push(PathwayWitness {
            start: r.reactant.clone(),
            steps: vec![pathway::Dilution {
                reaction: i,
                padding: Complex::zero(),
            }],
        });
    }
    let mut starts: Vec<&Complex> = net.reactions().iter().map(|r| &r.reactant).collect();
    starts.sort();
    starts.dedup();
    for start in starts {
        out.extend(pathway::reachable_pathways(
            net,
            start,
            CANDIDATE_DEPTH.min(bound),
            CANDIDATE_LIMIT,
        )?);
    }
    Ok(out)
}

/// Searches short pathways for catalytic sets, one finding per set, strict evidence preferred.
///
/// Requires integer stoichiometry; for other networks only
/// [`strictly_catalytic_from_self_replicable_siphon`] applies.
pub fn find_catalytic_sets(net: &ReactionNetwork, bound: usize) -> Result<Vec<CatalyticFinding>> {
    find_catalytic_sets_with(net, bound, DEFAULT_MAX_SCALE)
}

pub fn find_catalytic_sets_with(
    net: &ReactionNetwork,
    bound: usize,
    max_scale: usize,
) -> Result<Vec<CatalyticFinding>> {
    if bound == 0 {
        return Err(Error::InvalidParameter("bound must be positive".into()));
    }
    if !net.is_chemical() {
        return Err(Error::Precondition(
            "catalysis search needs integer stoichiometric coefficients".into(),
        ));
    }
    let mut best: BTreeMap<SpeciesSet, CatalyticFinding> = BTreeMap::new();
    let mut seen = HashSet::new();
    for w in candidates(net, bound)? {
        let end = replay(net, &w)?;
        let m = w.start.meet(&end);
        let key = (w.start.checked_sub(&m), end.checked_sub(&m), m.support());
        if !seen.insert(key) {
            continue;
        }
        let set = m.support_set(net.num_species());
        if set.is_empty()
            || best.get(&set).is_some_and(|f| f.kind == CatalysisKind::StrictlyCatalytic)
        {
            continue;
        }
        if let Some(f) = classify_pathway(net, &w, bound, max_scale)? {
            let replace = match best.get(&set) {
                None => true,
                Some(old) => f.kind == CatalysisKind::StrictlyCatalytic && old.kind != f.kind,
            };
            if replace {
                best.insert(set, f);
            }
        }
    }
    Ok(best.into_values().collect())
}

/// Turns a self-replicable siphon into a strictly catalytic pathway.
///
/// The pathway comes from the self-replication coefficients, padded by one unit of every set
/// species the start lacks, so `y' - y > 0` on the set and the catalyst covers it. The siphon
/// misses `y - m` and meets `y' - m`, which separates them at every scale. The reported set is the
/// catalyst support, which contains the given siphon.
pub fn strictly_catalytic_from_self_replicable_siphon(
    net: &ReactionNetwork,
    set: &SpeciesSet,
    certificate: &ConeEvidence,
) -> Result<CatalyticFinding> {
    if !siphon::is_siphon(net, set)? || set.is_empty() {
        return Err(Error::Precondition("set is not a non-empty siphon".into()));
    }
    let a = match certificate {
        ConeEvidence::Feasible { a } if certificate.verify_self_replicable(net, set) => a,
        _ => {
            return Err(Error::Precondition(
                "certificate does not show the set is self-replicable".into(),
            ))
        }
    };
    let base = pathway::witness_from_coefficients(net, a)?;
    let missing = Complex::from_pairs(
        set.iter()
            .filter(|&i| !base.start.coefficient(i).is_positive())
            .map(|i| (i, Rational::from_integer(1.into()))),
    )?;
    let pathway = base.padded(&missing);
    let end = replay(net, &pathway)?;
    let catalyst = pathway.start.meet(&end);
    let separation = ReachabilityVerdict::UnreachableBySiphon {
        siphon: set.clone(),
        farkas: None,
    };
    let src = pathway.start.checked_sub(&catalyst).expect("min is below start");
    let tgt = end.checked_sub(&catalyst).expect("min is below end");
    if !separation.verify(net, &src, &tgt) {
        return Err(Error::Invariant(
            "self-replicable siphon failed to separate the catalyst-free pair".into(),
        ));
    }
    let cset = catalyst.support_set(net.num_species());
    Ok(CatalyticFinding {
        species: net.set_names(&cset),
        set: cset,
        kind: CatalysisKind::StrictlyCatalytic,
        pathway,
        end,
        catalyst,
        evidence: CatalysisEvidence::Strict { separation },
    })
}
