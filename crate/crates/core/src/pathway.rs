//! Dilutions, reaction pathways and bounded reachability.
//!
//! A dilution fires reaction `y -> y'` inside a larger population `y + w`, giving `y' + w`. A
//! pathway is a chain of dilutions and is stored as a start population plus one
//! `(reaction, padding)` pair per step, so it can be replayed with exact bookkeeping.
//!
//! Unreachability is certified in three ways. Cone and siphon certificates are invariant under
//! scaling both endpoints by any `k > 0`; exhaustive search only speaks about the given pair.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{solve_feasibility, FeasibilitySystem};
use crate::network::{Complex, ReactionNetwork};
use crate::rational::{self, Rational};
use crate::siphon;
use crate::species_set::SpeciesSet;

/// Firing cap when no bound is given.
pub const DEFAULT_BOUND: usize = 64;
/// Upper limit on distinct populations visited by one search.
pub const MAX_STATES: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dilution {
    pub reaction: usize,
    pub padding: Complex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathwayWitness {
    pub start: Complex,
    pub steps: Vec<Dilution>,
}

impl PathwayWitness {
    pub fn trivial(start: Complex) -> Self {
        Self {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every population along the pathway, start first.
    pub fn populations(&self, net: &ReactionNetwork) -> Result<Vec<Complex>> {
        check_complex(net, &self.start)?;
        let mut current = self.start.clone();
        let mut out = vec![current.clone()];
        for (k, step) in self.steps.iter().enumerate() {
            let r = net.reactions().get(step.reaction).ok_or_else(|| Error::InvalidStep {
                step: k,
                message: format!("no reaction with index {}", step.reaction),
            })?;
            let rest = current
                .checked_sub(&r.reactant)
                .ok_or(Error::NegativePopulation { step: k })?;
            if rest != step.padding {
                return Err(Error::InvalidStep {
                    step: k,
                    message: format!(
                        "population minus reactant is {:?}, padding says {:?}",
                        rest, step.padding
                    ),
                });
            }
            current = r.product.add(&step.padding);
            out.push(current.clone());
        }
        Ok(out)
    }

    /// The same pathway with `extra` added to every population.
    pub fn padded(&self, extra: &Complex) -> Self {
        Self {
            start: self.start.add(extra),
            steps: self
                .steps
                .iter()
                .map(|d| Dilution {
                    reaction: d.reaction,
                    padding: d.padding.add(extra),
                })
                .collect(),
        }
    }

    /// The same pathway with every population multiplied by `k`, one dilution per copy.
    pub fn scaled(&self, net: &ReactionNetwork, k: usize) -> Result<Self> {
        let pops = self.populations(net)?;
        let mut steps = Vec::with_capacity(self.steps.len() * k);
        for (i, step) in self.steps.iter().enumerate() {
            // Copies 0..j have already fired this step; the rest are still waiting.
            for j in 0..k {
                let done = pops[i + 1].scale(&Rational::from_integer(j.into()));
                let waiting = pops[i].scale(&Rational::from_integer((k - j - 1).into()));
                steps.push(Dilution {
                    reaction: step.reaction,
                    padding: done.add(&waiting).add(&step.padding),
                });
            }
        }
        Ok(Self {
            start: self.start.scale(&Rational::from_integer(k.into())),
            steps,
        })
    }
}

fn check_complex(net: &ReactionNetwork, c: &Complex) -> Result<()> {
    match c.largest_species() {
        Some(s) if s >= net.num_species() => Err(Error::Dimension(format!(
            "complex uses species {s}, network has {}",
            net.num_species()
        ))),
        _ => Ok(()),
    }
}

/// Replays a witness and returns the final population.
pub fn replay(net: &ReactionNetwork, w: &PathwayWitness) -> Result<Complex> {
    Ok(w.populations(net)?.pop().expect("start is always present"))
}

/// Builds a pathway whose displacement is a positive multiple of `aΓ`.
///
/// Denominators of `a` are cleared to integers `n_r`; the start is `Σ n_r · reactant(r)` and each
/// reaction fires `n_r` times in ascending index order. Before every firing the reactants still
/// waiting to fire are part of the population, so each step is a valid dilution.
pub fn witness_from_coefficients(net: &ReactionNetwork, a: &[Rational]) -> Result<PathwayWitness> {
    if a.len() != net.num_reactions() {
        return Err(Error::Dimension(format!(
            "{} coefficients for {} reactions",
            a.len(),
            net.num_reactions()
        )));
    }
    if !rational::all_nonneg(a) {
        return Err(Error::Precondition("coefficients must be non-negative".into()));
    }
    if rational::all_zero(a) {
        return Err(Error::Precondition("coefficients must not all be zero".into()));
    }
    let d = Rational::from_integer(rational::common_denominator(a));
    let counts: Vec<usize> = a
        .iter()
        .map(|x| {
            (x * &d)
                .to_integer()
                .to_usize()
                .ok_or_else(|| Error::InvalidParameter("coefficient too large to fire".into()))
        })
        .collect::<Result<_>>()?;
    let mut start = Complex::zero();
    for (r, &n) in net.reactions().iter().zip(&counts) {
        start = start.add(&r.reactant.scale(&Rational::from_integer(n.into())));
    }
    let mut current = start.clone();
    let mut steps = Vec::with_capacity(counts.iter().sum());
    for (idx, (r, &n)) in net.reactions().iter().zip(&counts).enumerate() {
        for _ in 0..n {
            let padding = current
                .checked_sub(&r.reactant)
                .ok_or_else(|| Error::Invariant("pending reactant missing from population".into()))?;
            current = r.product.add(&padding);
            steps.push(Dilution {
                reaction: idx,
                padding,
            });
        }
    }
    Ok(PathwayWitness { start, steps })
}

/// Largest siphon contained in `allowed`: repeatedly drop species produced by a reaction whose
/// reactant misses the current set.
pub fn largest_siphon_within(net: &ReactionNetwork, allowed: &SpeciesSet) -> SpeciesSet {
    let mut t = allowed.clone();
    loop {
        let mut drop = Vec::new();
        for r in net.reactions() {
            if !r.reactant.support().iter().any(|&s| t.contains(s)) {
                drop.extend(r.product.support().into_iter().filter(|&s| t.contains(s)));
            }
        }
        if drop.is_empty() {
            return t;
        }
        let keep = t.iter().filter(|s| !drop.contains(s));
        t = SpeciesSet::from_indices(t.universe(), keep.collect::<Vec<_>>());
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReachabilityVerdict {
    Reachable { witness: PathwayWitness },
    /// `y` over species with `row_r · y >= 0` for every reaction and `(target - source) · y <= -1`.
    UnreachableByCone {
        #[serde(with = "rational::serde_q::vec")]
        farkas: Vec<Rational>,
    },
    /// `siphon` misses the source, so it stays empty along any pathway. Either the target meets
    /// it, or `farkas` shows the displacement is outside the cone of the reactions that can still
    /// fire (those whose reactant misses the siphon).
    UnreachableBySiphon {
        siphon: SpeciesSet,
        #[serde(with = "rational::serde_q::option_vec", default)]
        farkas: Option<Vec<Rational>>,
    },
    /// Every population reachable from the source was visited without any pruning.
    UnreachableExhaustive { explored: usize },
    Unknown { bound: usize },
}

impl ReachabilityVerdict {
    pub fn is_reachable(&self) -> bool {
        matches!(self, ReachabilityVerdict::Reachable { .. })
    }

    pub fn is_unreachable(&self) -> bool {
        matches!(
            self,
            ReachabilityVerdict::UnreachableByCone { .. }
                | ReachabilityVerdict::UnreachableBySiphon { .. }
                | ReachabilityVerdict::UnreachableExhaustive { .. }
        )
    }

    /// Unreachability that holds for `k·source` and `k·target` for every `k > 0`.
    pub fn is_scale_invariant(&self) -> bool {
        matches!(
            self,
            ReachabilityVerdict::UnreachableByCone { .. }
                | ReachabilityVerdict::UnreachableBySiphon { .. }
        )
    }

    /// Independent check. Exhaustive verdicts are re-derived by a fresh search.
    pub fn verify(&self, net: &ReactionNetwork, source: &Complex, target: &Complex) -> bool {
        let d = displacement(net, source, target);
        let gamma = net.stoichiometric_matrix();
        let cone_ok = |farkas: &[Rational], allowed: &dyn Fn(usize) -> bool| {
            farkas.len() == net.num_species()
                && rational::dot(&d, farkas) <= -Rational::one()
                && (0..net.num_reactions())
                    .filter(|&r| allowed(r))
                    .all(|r| !rational::dot(gamma.row(r), farkas).is_negative())
        };
        match self {
            ReachabilityVerdict::Reachable { witness } => {
                witness.start == *source && replay(net, witness).ok().as_ref() == Some(target)
            }
            ReachabilityVerdict::UnreachableByCone { farkas } => cone_ok(farkas, &|_| true),
            ReachabilityVerdict::UnreachableBySiphon { siphon: t, farkas } => {
                let sup = source.support_set(net.num_species());
                net.check_set(t).is_ok()
                    && !t.is_empty()
                    && siphon::is_siphon(net, t).unwrap_or(false)
                    && !t.meets(&sup)
                    && match farkas {
                        None => t.meets(&target.support_set(net.num_species())),
                        Some(y) => cone_ok(y, &|r| {
                            !net.reactions()[r].reactant.support().iter().any(|&s| t.contains(s))
                        }),
                    }
            }
            ReachabilityVerdict::UnreachableExhaustive { .. } => {
                let Ok((src, tgt, frac)) = integer_parts(net, source, target) else {
                    return false;
                };
                let search = Search::new(net, &src, &tgt, usize::MAX, MAX_STATES);
                matches!(
                    search.and_then(|s| Ok(s.explore(&src, |p| p == tgt.as_slice(), &frac))),
                    Ok(Outcome::Exhausted(_))
                )
            }
            ReachabilityVerdict::Unknown { .. } => true,
        }
    }
}

fn displacement(net: &ReactionNetwork, source: &Complex, target: &Complex) -> Vec<Rational> {
    let n = net.num_species();
    let t = target.to_dense(n);
    let s = source.to_dense(n);
    t.into_iter().zip(s).map(|(a, b)| a - b).collect()
}

/// Scale-invariant unreachability certificate, if one exists for this pair.
pub fn separating_certificate(
    net: &ReactionNetwork,
    source: &Complex,
    target: &Complex,
) -> Result<Option<ReachabilityVerdict>> {
    check_complex(net, source)?;
    check_complex(net, target)?;
    let n = net.num_species();
    let t = largest_siphon_within(net, &source.support_set(n).complement());
    if !t.is_empty() && t.meets(&target.support_set(n)) {
        return Ok(Some(ReachabilityVerdict::UnreachableBySiphon {
            siphon: t,
            farkas: None,
        }));
    }
    let allowed: Vec<usize> = (0..net.num_reactions())
        .filter(|&r| !net.reactions()[r].reactant.support().iter().any(|&s| t.contains(s)))
        .collect();
    let gamma = net.stoichiometric_matrix();
    let d = displacement(net, source, target);
    let mut primal = FeasibilitySystem::new(allowed.len()).all_nonneg();
    for j in 0..n {
        let col = allowed.iter().map(|&r| gamma.get(r, j).clone()).collect();
        primal = primal.equal(col, d[j].clone());
    }
    if solve_feasibility(&primal).is_feasible() {
        return Ok(None);
    }
    let mut dual = FeasibilitySystem::new(n).at_most(d, -Rational::one());
    for &r in &allowed {
        dual = dual.at_least(gamma.row(r).to_vec(), Rational::zero());
    }
    let farkas = solve_feasibility(&dual)
        .point()
        .ok_or_else(|| Error::Invariant("Farkas alternative failed for cone membership".into()))?;
    Ok(Some(if t.is_empty() {
        ReachabilityVerdict::UnreachableByCone { farkas }
    } else {
        ReachabilityVerdict::UnreachableBySiphon {
            siphon: t,
            farkas: Some(farkas),
        }
    }))
}

/// Integer parts of source and target plus their shared fractional part.
fn integer_parts(
    net: &ReactionNetwork,
    source: &Complex,
    target: &Complex,
) -> Result<(Vec<i64>, Vec<i64>, Complex)> {
    if !net.is_chemical() {
        return Err(Error::Precondition(
            "bounded search needs integer stoichiometric coefficients".into(),
        ));
    }
    check_complex(net, source)?;
    check_complex(net, target)?;
    let (sw, sf) = source.split_fractional();
    let (tw, tf) = target.split_fractional();
    if sf != tf {
        return Err(Error::InvalidParameter(
            "source and target differ in fractional parts, which integer reactions never change"
                .into(),
        ));
    }
    let n = net.num_species();
    Ok((to_counts(&sw, n)?, to_counts(&tw, n)?, sf))
}

fn to_counts(c: &Complex, n: usize) -> Result<Vec<i64>> {
    c.to_dense(n)
        .iter()
        .map(|q| {
            q.to_integer()
                .to_i64()
                .ok_or_else(|| Error::InvalidParameter("population too large".into()))
        })
        .collect()
}

fn from_counts(v: &[i64]) -> Complex {
    Complex::from_pairs(v.iter().enumerate().map(|(s, &x)| (s, Rational::from_integer(x.into()))))
        .expect("counts are non-negative")
}

enum Outcome {
    Found(PathwayWitness),
    Exhausted(usize),
    Truncated,
}

/// Breadth-first search over integer populations, firing with minimal padding.
struct Search {
    reactants: Vec<Vec<i64>>,
    deltas: Vec<Vec<i64>>,
    cap: Vec<i64>,
    depth: usize,
    max_states: usize,
}

impl Search {
    fn new(
        net: &ReactionNetwork,
        source: &[i64],
        target: &[i64],
        depth: usize,
        max_states: usize,
    ) -> Result<Self> {
        let n = net.num_species();
        let mut reactants = Vec::new();
        let mut deltas = Vec::new();
        let mut max_coef = 0i64;
        for r in net.reactions() {
            let y = to_counts(&r.reactant, n)?;
            let yp = to_counts(&r.product, n)?;
            max_coef = max_coef.max(*y.iter().chain(&yp).max().unwrap_or(&0));
            deltas.push(yp.iter().zip(&y).map(|(a, b)| a - b).collect());
            reactants.push(y);
        }
        let budget = i64::try_from(depth.min(1 << 20)).unwrap_or(i64::MAX);
        let cap = source
            .iter()
            .zip(target)
            .map(|(a, b)| (*a.max(b)).saturating_add(budget.saturating_mul(max_coef)))
            .collect();
        Ok(Self {
            reactants,
            deltas,
            cap,
            depth,
            max_states,
        })
    }

    fn explore(&self, start: &[i64], goal: impl Fn(&[i64]) -> bool, frac: &Complex) -> Outcome {
        self.explore_all(start, goal, frac, |_| {})
    }

    /// Runs the search, reporting every visited node's path to `visit`.
    fn explore_all(
        &self,
        start: &[i64],
        goal: impl Fn(&[i64]) -> bool,
        frac: &Complex,
        mut visit: impl FnMut(&dyn Fn() -> PathwayWitness),
    ) -> Outcome {
        // node: (population, parent, reaction fired from parent)
        let mut nodes: Vec<(Vec<i64>, usize, usize)> = vec![(start.to_vec(), usize::MAX, 0)];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(start.to_vec(), 0)]);
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        let mut truncated = false;
        let path = |nodes: &[(Vec<i64>, usize, usize)], mut at: usize| {
            let mut chain = Vec::new();
            while nodes[at].1 != usize::MAX {
                chain.push(at);
                at = nodes[at].1;
            }
            chain.reverse();
            let steps = chain
                .iter()
                .map(|&i| {
                    let (_, parent, r) = &nodes[i];
                    let before = &nodes[*parent].0;
                    let pad: Vec<i64> =
                        before.iter().zip(&self.reactants[*r]).map(|(a, b)| a - b).collect();
                    Dilution {
                        reaction: *r,
                        padding: from_counts(&pad).add(frac),
                    }
                })
                .collect();
            PathwayWitness {
                start: from_counts(&nodes[0].0).add(frac),
                steps,
            }
        };
        if goal(start) {
            return Outcome::Found(path(&nodes, 0));
        }
        while let Some((at, depth)) = queue.pop_front() {
            for r in 0..self.reactants.len() {
                let pop = &nodes[at].0;
                if pop.iter().zip(&self.reactants[r]).any(|(p, y)| p < y) {
                    continue;
                }
                let next: Vec<i64> = pop.iter().zip(&self.deltas[r]).map(|(p, d)| p + d).collect();
                if index.contains_key(&next) {
                    continue;
                }
                if depth >= self.depth
                    || next.iter().zip(&self.cap).any(|(x, c)| x > c)
                    || nodes.len() >= self.max_states
                {
                    truncated = true;
                    continue;
                }
                let id = nodes.len();
                index.insert(next.clone(), id);
                nodes.push((next, at, r));
                if goal(&nodes[id].0) {
                    return Outcome::Found(path(&nodes, id));
                }
                visit(&|| path(&nodes, id));
                queue.push_back((id, depth + 1));
            }
        }
        if truncated {
            Outcome::Truncated
        } else {
            Outcome::Exhausted(nodes.len())
        }
    }
}

/// Decides `source ->* target` within `bound` firings, or certifies that it is impossible.
///
/// Requires integer reactions. Integer reactions never change fractional parts, so those must
/// agree and are carried along as padding.
pub fn bounded_reach(
    net: &ReactionNetwork,
    source: &Complex,
    target: &Complex,
    bound: usize,
) -> Result<ReachabilityVerdict> {
    if bound == 0 {
        return Err(Error::InvalidParameter("bound must be positive".into()));
    }
    let (src, tgt, frac) = integer_parts(net, source, target)?;
    if source == target {
        return Ok(ReachabilityVerdict::Reachable {
            witness: PathwayWitness::trivial(source.clone()),
        });
    }
    if let Some(v) = separating_certificate(net, source, target)? {
        return Ok(v);
    }
    let search = Search::new(net, &src, &tgt, bound, MAX_STATES)?;
    Ok(match search.explore(&src, |p| p == tgt.as_slice(), &frac) {
        Outcome::Found(witness) => ReachabilityVerdict::Reachable { witness },
        Outcome::Exhausted(explored) => ReachabilityVerdict::UnreachableExhaustive { explored },
        Outcome::Truncated => ReachabilityVerdict::Unknown { bound },
    })
}

/// First pathway from `start` (integer network and start) whose end satisfies `goal`, searching
/// at most `depth` firings with populations capped at `start + depth · max coefficient`.
pub fn find_pathway(
    net: &ReactionNetwork,
    start: &Complex,
    depth: usize,
    goal: impl Fn(&Complex) -> bool,
) -> Result<Option<PathwayWitness>> {
    let (src, _, frac) = integer_parts(net, start, start)?;
    let search = Search::new(net, &src, &src, depth, MAX_STATES)?;
    Ok(match search.explore(&src, |p| goal(&from_counts(p).add(&frac)), &frac) {
        Outcome::Found(w) => Some(w),
        _ => None,
    })
}

/// Pathways to every population reachable from `start` within `depth` firings, in search order,
/// capped at `limit` results.
pub fn reachable_pathways(
    net: &ReactionNetwork,
    start: &Complex,
    depth: usize,
    limit: usize,
) -> Result<Vec<PathwayWitness>> {
    let (src, _, frac) = integer_parts(net, start, start)?;
    let search = Search::new(net, &src, &src, depth, limit.saturating_add(1))?;
    let mut out = Vec::new();
    search.explore_all(&src, |_| false, &frac, |w| {
        if out.len() < limit {
            out.push(w())
        }
    });
    Ok(out)
}
