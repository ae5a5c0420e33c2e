//! Seeded generators, brute-force oracles and the randomized suites shared by the core
//! integration tests and the acceptance target.
#![allow(dead_code)]

pub mod criteria;

use std::collections::{HashMap, HashSet, VecDeque};

use crn_core::diffusive::{self, TrichotomyVerdict, VerdictKind};
use crn_core::feasibility::{solve_feasibility, FeasibilitySystem, Relation};
use crn_core::pathway::{self, PathwayWitness};
use crn_core::rational::{self, int, ratio, Rational};
use crn_core::siphon::{self, ConeEvidence};
use crn_core::{Complex, RationalMatrix, Reaction, ReactionNetwork, SpeciesSet};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Outcome = Result<usize, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("S{i}")).collect()
}

pub fn random_complex(rng: &mut ChaCha8Rng, n: usize, max_coef: i64) -> Complex {
    let pairs: Vec<(usize, Rational)> = (0..n)
        .filter_map(|s| {
            if rng.random_bool(0.45) {
                Some((s, int(rng.random_range(1..=max_coef))))
            } else {
                None
            }
        })
        .collect();
    Complex::from_pairs(pairs).expect("valid coefficients")
}

/// Random chemical network with up to `max_species` species and up to `max_reactions`
/// distinct reactions (at least one).
pub fn random_net(
    rng: &mut ChaCha8Rng,
    max_species: usize,
    max_reactions: usize,
    max_coef: i64,
) -> ReactionNetwork {
    let n = rng.random_range(1..=max_species);
    let m = rng.random_range(1..=max_reactions);
    loop {
        let mut seen = HashSet::new();
        let mut reactions = Vec::new();
        for _ in 0..(4 * m) {
            if reactions.len() == m {
                break;
            }
            let y = random_complex(rng, n, max_coef);
            let yp = random_complex(rng, n, max_coef);
            if y == yp || !seen.insert((y.clone(), yp.clone())) {
                continue;
            }
            reactions.push(Reaction::new(y, yp).expect("distinct sides"));
        }
        if !reactions.is_empty() {
            return ReactionNetwork::new(names(n), reactions).expect("valid network");
        }
    }
}

/// Weakly reversible by construction: distinct complexes arranged in disjoint directed cycles.
pub fn random_weakly_reversible(
    rng: &mut ChaCha8Rng,
    max_species: usize,
    max_complexes: usize,
    max_coef: i64,
) -> ReactionNetwork {
    let n = rng.random_range(1..=max_species);
    loop {
        let k = rng.random_range(2..=max_complexes.max(2));
        let mut complexes: Vec<Complex> = Vec::new();
        for _ in 0..(4 * k) {
            if complexes.len() == k {
                break;
            }
            let c = random_complex(rng, n, max_coef);
            if !complexes.contains(&c) {
                complexes.push(c);
            }
        }
        if complexes.len() < 2 {
            continue;
        }
        let mut reactions = Vec::new();
        let mut i = 0;
        while i + 1 < complexes.len() {
            let len = rng.random_range(2..=(complexes.len() - i)).min(3);
            let len = if complexes.len() - i - len == 1 { len + 1 } else { len };
            let cycle = &complexes[i..i + len];
            for j in 0..len {
                let r = Reaction::new(cycle[j].clone(), cycle[(j + 1) % len].clone()).unwrap();
                if !reactions.contains(&r) {
                    reactions.push(r);
                }
            }
            i += len;
        }
        return ReactionNetwork::new(names(n), reactions).expect("valid network");
    }
}

pub fn random_nonempty_set(rng: &mut ChaCha8Rng, n: usize) -> SpeciesSet {
    let mask = rng.random_range(1..(1u64 << n));
    SpeciesSet::from_mask(n, mask)
}

pub fn random_subset(rng: &mut ChaCha8Rng, of: &SpeciesSet) -> SpeciesSet {
    loop {
        let t = SpeciesSet::from_indices(of.universe(), of.iter().filter(|_| rng.random_bool(0.6)));
        if !t.is_empty() {
            return t;
        }
    }
}

/// Strongly diffusive matrix; about a third are built singular with a positive kernel vector.
pub fn random_strongly_diffusive(rng: &mut ChaCha8Rng, max_n: usize) -> RationalMatrix {
    let n = rng.random_range(1..=max_n);
    let mut a = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                a.set(i, j, int(rng.random_range(1..=4)));
            }
        }
    }
    if rng.random_range(0..3) == 0 {
        let v: Vec<Rational> = (0..n).map(|_| int(rng.random_range(1..=3))).collect();
        for i in 0..n {
            let off: Rational = (0..n).filter(|&j| j != i).map(|j| a.get(i, j) * &v[j]).sum();
            a.set(i, i, -(off / &v[i]));
        }
        if n == 1 {
            a.set(0, 0, int(-1));
        }
    } else {
        for i in 0..n {
            a.set(i, i, ratio(-rng.random_range(1..=12 * n as i64), rng.random_range(1..=2)));
        }
    }
    a
}

// ---------------------------------------------------------------------------------------------
// Oracles

pub fn brute_is_siphon(net: &ReactionNetwork, t: &SpeciesSet) -> bool {
    net.reactions().iter().all(|r| {
        let produces = r.product.support().iter().any(|&s| t.contains(s));
        let consumes = r.reactant.support().iter().any(|&s| t.contains(s));
        !produces || consumes
    })
}

pub fn brute_minimal_siphons(net: &ReactionNetwork) -> Vec<SpeciesSet> {
    let n = net.num_species();
    let all: Vec<SpeciesSet> = (1u64..(1 << n))
        .map(|m| SpeciesSet::from_mask(n, m))
        .filter(|t| brute_is_siphon(net, t))
        .collect();
    let mut minimal: Vec<SpeciesSet> = all
        .iter()
        .filter(|t| !all.iter().any(|u| u.is_proper_subset(t)))
        .cloned()
        .collect();
    minimal.sort();
    minimal
}

/// Every reaction `y -> y'` has a directed path `y' -> ... -> y` in the complex graph.
pub fn brute_weakly_reversible(net: &ReactionNetwork) -> bool {
    let mut succ: HashMap<&Complex, Vec<&Complex>> = HashMap::new();
    for r in net.reactions() {
        succ.entry(&r.reactant).or_default().push(&r.product);
    }
    net.reactions().iter().all(|r| {
        let mut seen = HashSet::from([&r.product]);
        let mut queue = VecDeque::from([&r.product]);
        while let Some(c) = queue.pop_front() {
            if c == &r.reactant {
                return true;
            }
            for &d in succ.get(c).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(d) {
                    queue.push_back(d);
                }
            }
        }
        false
    })
}

/// Solve `M x = b` by Gauss-Jordan; free variables are set to zero.
fn particular_solution(rows: &[Vec<Rational>], rhs: &[Rational], vars: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..vars {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let prow = m[row].clone();
                for (x, y) in m[i].iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[vars].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); vars];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][vars].clone();
    }
    Some(x)
}

/// Feasibility by enumerating candidate minimal faces. A non-empty polyhedron has a minimal face
/// that is the affine set cut out by some subset of its constraints taken with equality, so a
/// particular solution of one such subset lies in it.
pub fn brute_feasible(sys: &FeasibilitySystem) -> bool {
    let vars = sys.variables();
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for ineq in sys.inequalities() {
        rows.push((ineq.row.clone(), ineq.rhs.clone()));
    }
    for v in 0..vars {
        if sys.is_nonneg(v) {
            let mut e = vec![Rational::zero(); vars];
            e[v] = Rational::one();
            rows.push((e, Rational::zero()));
        }
    }
    let fixed = sys.equalities().to_vec();
    (0u64..(1 << rows.len())).any(|mask| {
        let chosen: Vec<&(Vec<Rational>, Rational)> = fixed
            .iter()
            .chain((0..rows.len()).filter(|i| mask >> i & 1 == 1).map(|i| &rows[i]))
            .collect();
        let m: Vec<Vec<Rational>> = chosen.iter().map(|(r, _)| r.clone()).collect();
        let b: Vec<Rational> = chosen.iter().map(|(_, b)| b.clone()).collect();
        particular_solution(&m, &b, vars).is_some_and(|x| sys.is_satisfied_by(&x))
    })
}

pub fn random_system(rng: &mut ChaCha8Rng) -> FeasibilitySystem {
    let vars = rng.random_range(1..=4);
    let mut sys = FeasibilitySystem::new(vars);
    for v in 0..vars {
        if rng.random_bool(0.6) {
            sys = sys.nonneg(v);
        }
    }
    let coef = |rng: &mut ChaCha8Rng| int(rng.random_range(-3..=3));
    for _ in 0..rng.random_range(0..=2) {
        let row: Vec<Rational> = (0..vars).map(|_| coef(rng)).collect();
        sys = sys.equal(row, coef(rng));
    }
    for _ in 0..rng.random_range(0..=4) {
        let row: Vec<Rational> = (0..vars).map(|_| coef(rng)).collect();
        let rel = if rng.random_bool(0.5) { Relation::Ge } else { Relation::Le };
        sys = sys.inequality(row, rel, coef(rng));
    }
    sys
}

fn sub(a: &Complex, b: &Complex, n: usize) -> Vec<Rational> {
    a.to_dense(n).iter().zip(b.to_dense(n)).map(|(x, y)| x - y).collect()
}

fn meets(c: &Complex, t: &SpeciesSet) -> bool {
    c.support().iter().any(|&s| t.contains(s))
}

// ---------------------------------------------------------------------------------------------
// Suites. Each returns the number of cases checked.

/// Siphon/closed complement duality, closure, union of siphons, intersection of closed sets.
pub fn suite_set_algebra(cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    for case in 0..cases {
        let net = random_net(&mut rng, 6, 5, 3);
        let n = net.num_species();
        let t = random_nonempty_set(&mut rng, n);
        let u = random_nonempty_set(&mut rng, n);
        let ctx = || format!("case {case}: {}", net.render());
        let sip = |s: &SpeciesSet| siphon::is_siphon(&net, s).unwrap();
        let closed = |s: &SpeciesSet| siphon::is_closed(&net, s).unwrap();
        if sip(&t) != closed(&t.complement()) || sip(&t) != brute_is_siphon(&net, &t) {
            return Err(format!("duality fails for {t:?}; {}", ctx()));
        }
        if sip(&t) && sip(&u) && !sip(&t.union(&u)) {
            return Err(format!("union of siphons is not a siphon; {}", ctx()));
        }
        if closed(&t) && closed(&u) && !closed(&t.intersection(&u)) {
            return Err(format!("intersection of closed sets is not closed; {}", ctx()));
        }
        let cl = siphon::closure(&net, &t).unwrap();
        if !t.is_subset(&cl) || !closed(&cl) {
            return Err(format!("closure of {t:?} is not a closed superset; {}", ctx()));
        }
        let smaller = (0..(1u64 << n))
            .map(|m| SpeciesSet::from_mask(n, m))
            .any(|c| t.is_subset(&c) && closed(&c) && !cl.is_subset(&c));
        if smaller {
            return Err(format!("closure of {t:?} is not least; {}", ctx()));
        }
    }
    Ok(cases)
}

/// Critical, drainable and self-replicable pass to non-empty subsets; certificates replay.
pub fn suite_monotonicity(cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    for case in 0..cases {
        let net = random_net(&mut rng, 6, 5, 3);
        let u = random_nonempty_set(&mut rng, net.num_species());
        let t = random_subset(&mut rng, &u);
        let big = siphon::classify_set(&net, &u).map_err(|e| e.to_string())?;
        let small = siphon::classify_set(&net, &t).map_err(|e| e.to_string())?;
        big.verify(&net)?;
        small.verify(&net)?;
        let broken = (big.is_critical && !small.is_critical)
            || (big.is_drainable && !small.is_drainable)
            || (big.is_self_replicable && !small.is_self_replicable);
        if broken {
            return Err(format!(
                "case {case}: property of {u:?} lost on subset {t:?} in {}",
                net.render()
            ));
        }
    }
    Ok(cases)
}

/// Part 1 on random sets; part 2 on every minimal critical siphon (|S| <= 6, coefficients <= 3).
pub fn suite_minimal_siphon_parts_1_2(cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    for case in 0..cases {
        let net = random_net(&mut rng, 6, 6, 3);
        let t = random_nonempty_set(&mut rng, net.num_species());
        let c = siphon::classify_set(&net, &t).map_err(|e| e.to_string())?;
        if (c.is_drainable || c.is_self_replicable) && !c.is_critical {
            return Err(format!("case {case}: part 1 fails for {t:?} in {}", net.render()));
        }
        for m in siphon::minimal_siphons(&net) {
            let c = siphon::classify_set(&net, &m).map_err(|e| e.to_string())?;
            if c.is_critical && !(c.is_drainable || c.is_self_replicable) {
                return Err(format!("case {case}: part 2 fails for {m:?} in {}", net.render()));
            }
        }
    }
    Ok(cases)
}

/// Part 3: on weakly reversible (hence consistent) nets the three notions coincide on every
/// non-empty set.
pub fn suite_minimal_siphon_part_3(cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    for case in 0..cases {
        let net = random_weakly_reversible(&mut rng, 5, 6, 3);
        if !net.is_weakly_reversible() || !net.is_consistent().is_consistent() {
            return Err(format!("case {case}: generator produced {}", net.render()));
        }
        let n = net.num_species();
        for mask in 1u64..(1 << n) {
            let t = SpeciesSet::from_mask(n, mask);
            let c = siphon::classify_set(&net, &t).map_err(|e| e.to_string())?;
            if !(c.is_critical == c.is_drainable && c.is_drainable == c.is_self_replicable) {
                return Err(format!("case {case}: part 3 fails for {t:?} in {}", net.render()));
            }
        }
    }
    Ok(cases)
}

/// Exactly one alternative holds, the certificate replays and the elimination route agrees.
pub fn suite_trichotomy(cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let mut kinds = HashMap::new();
    for case in 0..cases {
        let a = random_strongly_diffusive(&mut rng, 8);
        let n = a.ncols();
        let kernel = {
            let mut sys = FeasibilitySystem::new(n)
                .all_nonneg()
                .equal(vec![Rational::one(); n], Rational::one());
            for row in a.rows() {
                sys = sys.equal(row.clone(), Rational::zero());
            }
            solve_feasibility(&sys).is_feasible()
        };
        let positive = {
            let mut sys = FeasibilitySystem::new(n).all_nonneg();
            for j in 0..n {
                sys = sys.at_least(a.column(j), Rational::one());
            }
            solve_feasibility(&sys).is_feasible()
        };
        let orthant = a
            .inverse()
            .is_some_and(|inv| inv.scale(&-Rational::one()).is_nonneg());
        let holding = [kernel, positive, orthant].iter().filter(|b| **b).count();
        if holding != 1 {
            return Err(format!("case {case}: {holding} alternatives hold for {:?}", a.rows()));
        }
        let lp = diffusive::trichotomy(&a).map_err(|e| e.to_string())?;
        let elim = diffusive::trichotomy_by_elimination(&a).map_err(|e| e.to_string())?;
        if !lp.verify(&a) || !elim.verify(&a) {
            return Err(format!("case {case}: certificate fails to replay for {:?}", a.rows()));
        }
        if lp.kind() != elim.kind() {
            return Err(format!(
                "case {case}: LP says {:?}, elimination says {:?}",
                lp.kind(),
                elim.kind()
            ));
        }
        let expected = if kernel {
            VerdictKind::KernelNonneg
        } else if positive {
            VerdictKind::PositiveCombination
        } else {
            VerdictKind::NegativeOrthant
        };
        if lp.kind() != expected {
            return Err(format!("case {case}: verdict {:?}, expected {expected:?}", lp.kind()));
        }
        if lp.kind() == VerdictKind::NoneOfThree {
            return Err(format!("case {case}: NoneOfThree on a strongly diffusive matrix"));
        }
        if let TrichotomyVerdict::KernelNonneg { v } = &lp {
            if v.iter().any(Signed::is_negative) {
                return Err(format!("case {case}: negative kernel entry"));
            }
        }
        *kinds.entry(lp.kind()).or_insert(0usize) += 1;
    }
    if kinds.len() < 3 && cases >= 100 {
        return Err(format!("generator covered only {kinds:?}"));
    }
    Ok(cases)
}

/// Simplex answers match the minimal-face oracle; feasible points satisfy the system.
pub fn suite_feasibility_oracle(cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    for case in 0..cases {
        let sys = random_system(&mut rng);
        let got = solve_feasibility(&sys);
        if let Some(x) = got.clone().point() {
            if !sys.is_satisfied_by(&x) {
                return Err(format!("case {case}: returned point violates {sys:?}"));
            }
        }
        if got.is_feasible() != brute_feasible(&sys) {
            return Err(format!("case {case}: simplex and oracle disagree on {sys:?}"));
        }
    }
    Ok(cases)
}

/// Witness from coefficients: valid replay with displacement `d · aΓ` (exactly `aΓ` for integer
/// `a`); siphon lemma; fractional parts carried; conservation laws constant.
pub fn suite_pathways(cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    for case in 0..cases {
        let net = random_net(&mut rng, 5, 5, 3);
        let n = net.num_species();
        let m = net.num_reactions();
        let integral = rng.random_bool(0.5);
        let mut a: Vec<Rational> = (0..m)
            .map(|_| {
                if integral {
                    int(rng.random_range(0..=2))
                } else {
                    ratio(rng.random_range(0..=3), rng.random_range(1..=3))
                }
            })
            .collect();
        if rational::all_zero(&a) {
            a[0] = Rational::one();
        }
        let ctx = || format!("case {case}: {}", net.render());
        let w = pathway::witness_from_coefficients(&net, &a).map_err(|e| e.to_string())?;
        let end = pathway::replay(&net, &w).map_err(|e| format!("{e}; {}", ctx()))?;
        let d = Rational::from_integer(rational::common_denominator(&a));
        let scaled: Vec<Rational> = a.iter().map(|x| x * &d).collect();
        let expected = net.stoichiometric_matrix().left_mul(&scaled);
        if sub(&end, &w.start, n) != expected {
            return Err(format!("displacement differs from aΓ; {}", ctx()));
        }
        if integral && d != Rational::one() {
            return Err(format!("integer coefficients were rescaled; {}", ctx()));
        }

        // Padding the whole pathway with a fractional complex keeps it valid.
        let mut pairs = Vec::new();
        for s in 0..n {
            if rng.random_bool(0.4) {
                pairs.push((s, ratio(rng.random_range(1..=3), 4)));
            }
        }
        let frac = Complex::from_pairs(pairs).unwrap();
        let padded = w.padded(&frac);
        check_witness(&net, &padded).map_err(|e| format!("{e}; {}", ctx()))?;

        // Random walks from a random start, some with fractional parts.
        let start = random_complex(&mut rng, n, 3).add(&frac);
        let walks = pathway::reachable_pathways(&net, &start, 4, 30).map_err(|e| e.to_string())?;
        for walk in walks.iter().chain([&padded]) {
            check_witness(&net, walk).map_err(|e| format!("{e}; {}", ctx()))?;
        }
    }
    Ok(cases)
}

fn check_witness(net: &ReactionNetwork, w: &PathwayWitness) -> Result<(), String> {
    let n = net.num_species();
    let end = pathway::replay(net, w).map_err(|e| e.to_string())?;
    for t in siphon::all_siphons(net).map_err(|e| e.to_string())? {
        if meets(&end, &t) && !meets(&w.start, &t) {
            return Err(format!("siphon {t:?} refilled"));
        }
    }
    if w.start.split_fractional().1 != end.split_fractional().1 {
        return Err("fractional part changed".into());
    }
    let delta = sub(&end, &w.start, n);
    for law in net.conservation_laws() {
        if !rational::dot(&law.weights, &delta).is_zero() {
            return Err("conservation law violated".into());
        }
    }
    Ok(())
}

/// Minimal siphon enumeration against subset brute force, |S| <= 10.
pub fn suite_minimal_siphons_oracle(cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    for case in 0..cases {
        let net = random_net(&mut rng, 10, 8, 2);
        if siphon::minimal_siphons(&net) != brute_minimal_siphons(&net) {
            return Err(format!("case {case}: enumeration differs in {}", net.render()));
        }
    }
    Ok(cases)
}

/// Cone LPs against integer firing-count search on 3-species nets with coefficients <= 2.
///
/// Any non-negative integer firing vector `n` is realised by a pathway starting from the sum of
/// the reactants it fires, so `(nΓ)_T < 0` on `T` is a draining pathway and `> 0` a replicating
/// one. Agreement is required in both directions within the search box, and every feasible
/// LP answer must itself produce a replayable pathway with the right sign.
pub fn suite_cone_vs_pathway(cases: usize, seed: u64) -> Outcome {
    const BOX: i64 = 3;
    let mut rng = rng(seed);
    for case in 0..cases {
        let net = random_net(&mut rng, 3, 4, 2);
        let n = net.num_species();
        let m = net.num_reactions();
        let t = random_nonempty_set(&mut rng, n);
        let ctx = || format!("case {case}: T={t:?} {}", net.render());
        let gamma = net.stoichiometric_matrix();
        let (mut drain_found, mut grow_found) = (false, false);
        let mut counts = vec![0i64; m];
        'outer: loop {
            if counts.iter().any(|&c| c > 0) {
                let a: Vec<Rational> = counts.iter().map(|&c| int(c)).collect();
                let g = gamma.left_mul(&a);
                drain_found |= t.iter().all(|i| g[i].is_negative());
                grow_found |= t.iter().all(|i| g[i].is_positive());
            }
            for c in counts.iter_mut() {
                *c += 1;
                if *c <= BOX {
                    continue 'outer;
                }
                *c = 0;
            }
            break;
        }
        let drain = siphon::is_drainable(&net, &t).map_err(|e| e.to_string())?;
        let grow = siphon::is_self_replicable(&net, &t).map_err(|e| e.to_string())?;
        if !drain.verify_drainable(&net, &t) || !grow.verify_self_replicable(&net, &t) {
            return Err(format!("cone certificate fails; {}", ctx()));
        }
        if drain_found && !drain.holds() || grow_found && !grow.holds() {
            return Err(format!("pathway found but LP infeasible; {}", ctx()));
        }
        for (e, sign) in [(&drain, -1), (&grow, 1)] {
            if let ConeEvidence::Feasible { a } = e {
                let w = pathway::witness_from_coefficients(&net, a).map_err(|e| e.to_string())?;
                let end = pathway::replay(&net, &w).map_err(|e| e.to_string())?;
                let delta = sub(&end, &w.start, n);
                let ok = t.iter().all(|i| {
                    if sign < 0 {
                        delta[i].is_negative()
                    } else {
                        delta[i].is_positive()
                    }
                });
                if !ok {
                    return Err(format!("LP witness does not move T; {}", ctx()));
                }
            }
        }
        // Small LP solutions must also be visible to the box search.
        let small = |e: &ConeEvidence| {
            e.coefficients().is_some_and(|a| {
                let d = Rational::from_integer(rational::common_denominator(a));
                a.iter().all(|x| x * &d <= int(BOX))
            })
        };
        if small(&drain) && !drain_found || small(&grow) && !grow_found {
            return Err(format!("LP found a small pathway the search missed; {}", ctx()));
        }
    }
    Ok(cases)
}

/// Weak reversibility against a path search in the complex graph.
pub fn suite_weak_reversibility(cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    for case in 0..cases {
        let net = if rng.random_bool(0.5) {
            random_weakly_reversible(&mut rng, 4, 6, 2)
        } else {
            random_net(&mut rng, 4, 6, 2)
        };
        if net.is_weakly_reversible() != brute_weakly_reversible(&net) {
            return Err(format!("case {case}: disagreement on {}", net.render()));
        }
    }
    Ok(cases)
}

pub const PROPERTY_SEED: u64 = 0x5eed_2024;

/// Every randomized suite with its name, at `cases` cases each.
pub fn all_suites(cases: usize) -> Vec<(&'static str, Outcome)> {
    vec![
        ("siphon/closed duality, union, intersection, closure", suite_set_algebra(cases, PROPERTY_SEED)),
        ("subset monotonicity", suite_monotonicity(cases, PROPERTY_SEED + 1)),
        ("minimal siphon parts 1 and 2", suite_minimal_siphon_parts_1_2(cases, PROPERTY_SEED + 2)),
        ("minimal siphon part 3", suite_minimal_siphon_part_3(cases, PROPERTY_SEED + 3)),
        ("trichotomy", suite_trichotomy(cases, PROPERTY_SEED + 4)),
        ("simplex vs minimal-face oracle", suite_feasibility_oracle(cases, PROPERTY_SEED + 5)),
        ("pathway witnesses", suite_pathways(cases, PROPERTY_SEED + 6)),
        ("minimal siphons vs brute force", suite_minimal_siphons_oracle(cases, PROPERTY_SEED + 7)),
        ("cone LP vs pathway search", suite_cone_vs_pathway(cases, PROPERTY_SEED + 8)),
        ("weak reversibility vs path search", suite_weak_reversibility(cases, PROPERTY_SEED + 9)),
    ]
}
