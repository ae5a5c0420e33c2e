//! Set-level properties of species: siphons, closed sets, criticality, drainability and
//! self-replicability, plus minimal-siphon enumeration.
//!
//! Criticality, drainability and self-replicability are cone conditions on the stoichiometric
//! matrix and are decided by exact linear feasibility. Each answer carries a certificate that a
//! caller can re-check without trusting the solver:
//!
//! | property           | yes                                  | no                                     |
//! |--------------------|--------------------------------------|----------------------------------------|
//! | critical           | `a` with `(aΓ)_i >= 1` on `T`        | positive conservation law inside `T`   |
//! | self-replicable    | `a >= 0`, `(aΓ)_i >= 1` on `T`       | `u >= 0` on `T`, `Σu = 1`, `Γu <= 0`   |
//! | drainable          | `a >= 0`, `(aΓ)_i <= -1` on `T`      | `u >= 0` on `T`, `Σu = 1`, `Γu >= 0`   |

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{solve_feasibility, FeasibilitySystem};
use crate::matrix::RationalMatrix;
use crate::network::{ConservationLaw, ReactionNetwork};
use crate::rational::{self, Rational};
use crate::species_set::SpeciesSet;

/// Index of the first reaction whose product meets `set` while its reactant misses it.
pub fn siphon_violation(net: &ReactionNetwork, set: &SpeciesSet) -> Result<Option<usize>> {
    net.check_set(set)?;
    Ok(net.reactions().iter().position(|r| {
        r.product.support().iter().any(|&s| set.contains(s))
            && !r.reactant.support().iter().any(|&s| set.contains(s))
    }))
}

pub fn is_siphon(net: &ReactionNetwork, set: &SpeciesSet) -> Result<bool> {
    Ok(siphon_violation(net, set)?.is_none())
}

/// Index of the first reaction whose reactant lies inside `set` while its product escapes it.
pub fn closed_violation(net: &ReactionNetwork, set: &SpeciesSet) -> Result<Option<usize>> {
    net.check_set(set)?;
    Ok(net.reactions().iter().position(|r| {
        r.reactant.support().iter().all(|&s| set.contains(s))
            && !r.product.support().iter().all(|&s| set.contains(s))
    }))
}

pub fn is_closed(net: &ReactionNetwork, set: &SpeciesSet) -> Result<bool> {
    Ok(closed_violation(net, set)?.is_none())
}

/// Smallest closed superset, by fixpoint: fire every reaction whose reactant support is inside.
pub fn closure(net: &ReactionNetwork, set: &SpeciesSet) -> Result<SpeciesSet> {
    net.check_set(set)?;
    let mut current = set.clone();
    loop {
        let mut grew = false;
        for r in net.reactions() {
            if r.reactant.support().iter().all(|&s| current.contains(s)) {
                for s in r.product.support() {
                    grew |= current.insert(s);
                }
            }
        }
        if !grew {
            return Ok(current);
        }
    }
}

/// `set` is a siphon exactly when its complement is closed.
pub fn complement_duality_check(net: &ReactionNetwork, set: &SpeciesSet) -> Result<bool> {
    Ok(is_siphon(net, set)? == is_closed(net, &set.complement())?)
}

fn require_nonempty(set: &SpeciesSet) -> Result<()> {
    if set.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Criticality {
    /// Free `a` over reactions with `(aΓ)_i >= 1` for every `i` in the set. Pairing it with any
    /// positive conservation law `w` supported in the set gives `0 = a Γ w > 0`.
    Critical {
        #[serde(with = "rational::serde_q::vec")]
        gordan: Vec<Rational>,
    },
    NotCritical { law: ConservationLaw },
}

impl Criticality {
    pub fn is_critical(&self) -> bool {
        matches!(self, Criticality::Critical { .. })
    }

    pub fn verify(&self, net: &ReactionNetwork, set: &SpeciesSet) -> bool {
        let gamma = net.stoichiometric_matrix();
        match self {
            Criticality::Critical { gordan } => {
                gordan.len() == net.num_reactions() && {
                    let g = gamma.left_mul(gordan);
                    set.iter().all(|i| g[i] >= Rational::one())
                }
            }
            Criticality::NotCritical { law } => {
                law.positive
                    && law.holds_for(net)
                    && law.support().iter().all(|&i| set.contains(i))
            }
        }
    }
}

/// Decides whether a set admits no positive conservation law supported inside it.
pub fn is_critical(net: &ReactionNetwork, set: &SpeciesSet) -> Result<Criticality> {
    net.check_set(set)?;
    require_nonempty(set)?;
    if let Some(law) = net.positive_conservation_law(set) {
        return Ok(Criticality::NotCritical { law });
    }
    let gamma = net.stoichiometric_matrix();
    let mut sys = FeasibilitySystem::new(net.num_reactions());
    for i in set.iter() {
        sys = sys.at_least(gamma.column(i), Rational::one());
    }
    match solve_feasibility(&sys).point() {
        Some(gordan) => Ok(Criticality::Critical { gordan }),
        None => Err(Error::Invariant(
            "neither a positive conservation law nor a Gordan vector exists".into(),
        )),
    }
}

/// A point is critical iff its zero set is critical (or empty).
pub fn is_critical_point(net: &ReactionNetwork, z: &[Rational]) -> Result<bool> {
    if z.len() != net.num_species() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, network has {} species",
            z.len(),
            net.num_species()
        )));
    }
    if z.iter().any(Signed::is_negative) {
        return Err(Error::Precondition("critical point must be non-negative".into()));
    }
    let zeros = SpeciesSet::from_indices(
        net.num_species(),
        (0..z.len()).filter(|&i| z[i].is_zero()),
    );
    if zeros.is_empty() {
        return Ok(true);
    }
    Ok(is_critical(net, &zeros)?.is_critical())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Grow,
    Drain,
}

/// Evidence for a cone condition `a >= 0, ±(aΓ)_i >= 1 on T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConeEvidence {
    /// Non-negative reaction coefficients.
    Feasible {
        #[serde(with = "rational::serde_q::vec")]
        a: Vec<Rational>,
    },
    /// Farkas dual over species, zero outside the set, summing to one.
    Infeasible {
        #[serde(with = "rational::serde_q::vec")]
        dual: Vec<Rational>,
    },
}

impl ConeEvidence {
    pub fn holds(&self) -> bool {
        matches!(self, ConeEvidence::Feasible { .. })
    }

    pub fn coefficients(&self) -> Option<&[Rational]> {
        match self {
            ConeEvidence::Feasible { a } => Some(a),
            ConeEvidence::Infeasible { .. } => None,
        }
    }

    fn verify(&self, gamma: &RationalMatrix, set: &SpeciesSet, dir: Direction) -> bool {
        match self {
            ConeEvidence::Feasible { a } => {
                a.len() == gamma.nrows() && rational::all_nonneg(a) && {
                    let g = gamma.left_mul(a);
                    set.iter().all(|i| match dir {
                        Direction::Grow => g[i] >= Rational::one(),
                        Direction::Drain => g[i] <= -Rational::one(),
                    })
                }
            }
            ConeEvidence::Infeasible { dual } => {
                dual.len() == gamma.ncols()
                    && rational::all_nonneg(dual)
                    && (0..dual.len()).all(|i| set.contains(i) || dual[i].is_zero())
                    && dual.iter().sum::<Rational>() == Rational::one()
                    && gamma.mul_vec(dual).iter().all(|x| match dir {
                        Direction::Grow => !x.is_positive(),
                        Direction::Drain => !x.is_negative(),
                    })
            }
        }
    }

    pub fn verify_self_replicable(&self, net: &ReactionNetwork, set: &SpeciesSet) -> bool {
        self.verify(&net.stoichiometric_matrix(), set, Direction::Grow)
    }

    pub fn verify_drainable(&self, net: &ReactionNetwork, set: &SpeciesSet) -> bool {
        self.verify(&net.stoichiometric_matrix(), set, Direction::Drain)
    }
}

fn cone_condition(net: &ReactionNetwork, set: &SpeciesSet, dir: Direction) -> Result<ConeEvidence> {
    net.check_set(set)?;
    require_nonempty(set)?;
    let gamma = net.stoichiometric_matrix();
    // Conic in `a`, so strict positivity on T is encoded as >= 1.
    let mut sys = FeasibilitySystem::new(net.num_reactions()).all_nonneg();
    for i in set.iter() {
        sys = match dir {
            Direction::Grow => sys.at_least(gamma.column(i), Rational::one()),
            Direction::Drain => sys.at_most(gamma.column(i), -Rational::one()),
        };
    }
    if let Some(a) = solve_feasibility(&sys).point() {
        return Ok(ConeEvidence::Feasible { a });
    }
    let n = net.num_species();
    let mut dual = FeasibilitySystem::new(n).all_nonneg().equal(
        (0..n)
            .map(|i| if set.contains(i) { Rational::one() } else { Rational::zero() })
            .collect(),
        Rational::one(),
    );
    for i in (0..n).filter(|&i| !set.contains(i)) {
        let mut row = vec![Rational::zero(); n];
        row[i] = Rational::one();
        dual = dual.equal(row, Rational::zero());
    }
    for row in gamma.rows() {
        dual = match dir {
            Direction::Grow => dual.at_most(row.clone(), Rational::zero()),
            Direction::Drain => dual.at_least(row.clone(), Rational::zero()),
        };
    }
    match solve_feasibility(&dual).point() {
        Some(dual) => Ok(ConeEvidence::Infeasible { dual }),
        None => Err(Error::Invariant("Farkas alternative failed for a cone condition".into())),
    }
}

/// Some non-negative combination of reactions is strictly positive on every species of `set`.
pub fn is_self_replicable(net: &ReactionNetwork, set: &SpeciesSet) -> Result<ConeEvidence> {
    cone_condition(net, set, Direction::Grow)
}

/// Self-replicable for the opposite network: some non-negative combination of reactions is
/// strictly negative on every species of `set`.
pub fn is_drainable(net: &ReactionNetwork, set: &SpeciesSet) -> Result<ConeEvidence> {
    cone_condition(net, set, Direction::Drain)
}

/// All inclusion-minimal non-empty siphons, sorted by size then members.
///
/// From each root species, a candidate set grows by branching on the reactant species of the
/// first reaction that violates the siphon condition. Every minimal siphon containing the root is
/// reached because some reactant species of any violating reaction must belong to it.
pub fn minimal_siphons(net: &ReactionNetwork) -> Vec<SpeciesSet> {
    let n = net.num_species();
    let mut found: Vec<SpeciesSet> = Vec::new();
    let mut visited: HashSet<SpeciesSet> = HashSet::new();
    for root in 0..n {
        let mut queue = VecDeque::from([SpeciesSet::from_indices(n, [root])]);
        while let Some(cand) = queue.pop_front() {
            if !visited.insert(cand.clone()) || found.iter().any(|f| f.is_subset(&cand)) {
                continue;
            }
            match siphon_violation(net, &cand).expect("same universe") {
                None => {
                    found.retain(|f| !cand.is_subset(f));
                    found.push(cand);
                }
                Some(r) => {
                    for s in net.reactions()[r].reactant.support() {
                        let mut next = cand.clone();
                        next.insert(s);
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    let minimal: BTreeSet<SpeciesSet> = found
        .iter()
        .filter(|f| !found.iter().any(|g| g.is_proper_subset(f)))
        .cloned()
        .collect();
    minimal.into_iter().collect()
}

/// Every non-empty siphon, by checking all subsets. Limited to 20 species.
pub fn all_siphons(net: &ReactionNetwork) -> Result<Vec<SpeciesSet>> {
    let n = net.num_species();
    if n > 20 {
        return Err(Error::InvalidParameter(format!(
            "listing all siphons of {n} species is too expensive; use minimal siphons"
        )));
    }
    let mut out: Vec<SpeciesSet> = (1u64..(1 << n))
        .map(|m| SpeciesSet::from_mask(n, m))
        .filter(|t| siphon_violation(net, t).expect("same universe").is_none())
        .collect();
    out.sort();
    Ok(out)
}

/// Every flag of a non-empty species set together with its evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetClassification {
    pub species: Vec<String>,
    pub set: SpeciesSet,
    pub is_siphon: bool,
    /// Reaction that makes the set fail to be a siphon.
    pub siphon_violation: Option<usize>,
    pub is_closed: bool,
    pub closed_violation: Option<usize>,
    pub is_critical: bool,
    pub criticality: Criticality,
    pub is_drainable: bool,
    pub drainability: ConeEvidence,
    pub is_self_replicable: bool,
    pub self_replicability: ConeEvidence,
}

impl SetClassification {
    /// Re-checks every certificate and the flag/evidence agreement.
    pub fn verify(&self, net: &ReactionNetwork) -> std::result::Result<(), String> {
        let set = &self.set;
        let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
        check(net.check_set(set).is_ok(), "set does not belong to network")?;
        check(
            self.siphon_violation == siphon_violation(net, set).map_err(|e| e.to_string())?,
            "siphon witness",
        )?;
        check(self.is_siphon == self.siphon_violation.is_none(), "siphon flag")?;
        check(
            self.closed_violation == closed_violation(net, set).map_err(|e| e.to_string())?,
            "closed witness",
        )?;
        check(self.is_closed == self.closed_violation.is_none(), "closed flag")?;
        check(self.is_critical == self.criticality.is_critical(), "critical flag")?;
        check(self.criticality.verify(net, set), "criticality certificate")?;
        check(self.is_drainable == self.drainability.holds(), "drainable flag")?;
        check(self.drainability.verify_drainable(net, set), "drainability certificate")?;
        check(self.is_self_replicable == self.self_replicability.holds(), "self-replicable flag")?;
        check(
            self.self_replicability.verify_self_replicable(net, set),
            "self-replicability certificate",
        )?;
        check(
            !(self.is_drainable || self.is_self_replicable) || self.is_critical,
            "drainable or self-replicable set that is not critical",
        )
    }
}

pub fn classify_set(net: &ReactionNetwork, set: &SpeciesSet) -> Result<SetClassification> {
    net.check_set(set)?;
    require_nonempty(set)?;
    let siphon_violation = siphon_violation(net, set)?;
    let closed_violation = closed_violation(net, set)?;
    let criticality = is_critical(net, set)?;
    let drainability = is_drainable(net, set)?;
    let self_replicability = is_self_replicable(net, set)?;
    let c = SetClassification {
        species: net.set_names(set),
        set: set.clone(),
        is_siphon: siphon_violation.is_none(),
        siphon_violation,
        is_closed: closed_violation.is_none(),
        closed_violation,
        is_critical: criticality.is_critical(),
        criticality,
        is_drainable: drainability.holds(),
        drainability,
        is_self_replicable: self_replicability.holds(),
        self_replicability,
    };
    if (c.is_drainable || c.is_self_replicable) && !c.is_critical {
        return Err(Error::Invariant(format!(
            "set {:?} is drainable or self-replicable but not critical",
            c.species
        )));
    }
    Ok(c)
}
