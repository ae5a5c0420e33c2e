//! Example-reproduction and simulator checks, one named result per check.

use crn_core::catalysis::{self, CatalysisKind};
use crn_core::diffusive::{self, TrichotomyVerdict};
use crn_core::pathway::{self, ReachabilityVerdict};
use crn_core::rational::int;
use crn_core::simulate::{self, mass_action_rhs_exact};
use crn_core::{parse_network, persistence, siphon, PersistenceRule, PersistenceVerdict};
use crn_core::{RationalMatrix, ReactionNetwork, SimulationParams, SpeciesSet};
use num_traits::Zero;

pub type Check = (&'static str, Result<(), String>);

pub const FIRST_NET: &str = "Y <-> 2X\n2Y <-> X";
pub const NO_SIPHONS: &str = "0 <-> X + Y\nX + Y <-> 2X + Y\n2X + Y <-> X + 2Y\nX + 2Y <-> 3X + 4Y";
pub const ISOMERIZATION: &str = "X <-> Y";
pub const COUNTER: &str = "X <-> 2X\nY <-> X + Y";
pub const CDS: &str = "X -> 2Y\n2X -> Y";
pub const CDS_SECOND: &str = "X -> 2X\n2X -> 2X + Y";
pub const CATALYSIS_NOT_STRICT: &str = "3X -> 0\nX + 2Y -> 2Y";
pub const CATALYSIS_STRICT: &str = "X + Y -> Y\nX + 2Y -> 2Y";
pub const CATALYSIS_COUNTER: &str = "X -> 2X\nY -> X + Y";
pub const X2Y: &str = "X -> 2Y\nY -> 2X";
pub const DIFFUSIVE_ONLY: &str = "-1 0 0\n0 -1 2\n0 1 -1";

fn ensure(b: bool, msg: impl Into<String>) -> Result<(), String> {
    if b {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn net(text: &str) -> Result<ReactionNetwork, String> {
    parse_network(text).map_err(|e| e.to_string())
}

fn set(net: &ReactionNetwork, names: &str) -> Result<SpeciesSet, String> {
    net.species_set(names).map_err(|e| e.to_string())
}

fn first_net() -> Result<(), String> {
    let n = net(FIRST_NET)?;
    ensure(n.is_weakly_reversible(), "not weakly reversible")?;
    ensure(n.is_consistent().is_consistent(), "not consistent")?;
    ensure(n.conservation_laws().is_empty(), "conservation basis not empty")?;
    let xy = set(&n, "X,Y")?;
    ensure(siphon::minimal_siphons(&n) == vec![xy.clone()], "minimal siphons differ")?;
    let c = siphon::classify_set(&n, &xy).map_err(|e| e.to_string())?;
    ensure(
        c.is_critical && c.is_drainable && c.is_self_replicable,
        "{X,Y} must be critical, drainable and self-replicable",
    )?;
    let cert = persistence::certify(&n).map_err(|e| e.to_string())?;
    ensure(cert.verdict == PersistenceVerdict::Inconclusive, "verdict")?;
    ensure(cert.blockers == vec![n.set_names(&xy)], "blockers")
}

fn no_siphons() -> Result<(), String> {
    let n = net(NO_SIPHONS)?;
    ensure(siphon::all_siphons(&n).map_err(|e| e.to_string())?.is_empty(), "has a siphon")?;
    let cert = persistence::certify(&n).map_err(|e| e.to_string())?;
    ensure(
        cert.verdict == PersistenceVerdict::Persistent && cert.rule == PersistenceRule::NoSiphons,
        format!("{:?} {:?}", cert.verdict, cert.rule),
    )
}

fn isomerization() -> Result<(), String> {
    let n = net(ISOMERIZATION)?;
    let xy = set(&n, "X,Y")?;
    ensure(siphon::minimal_siphons(&n) == vec![xy.clone()], "siphons")?;
    match siphon::is_critical(&n, &xy).map_err(|e| e.to_string())? {
        siphon::Criticality::NotCritical { law } => {
            ensure(law.weights[0] == law.weights[1] && !law.weights[0].is_zero(), "law not ∝ (1,1)")?
        }
        siphon::Criticality::Critical { .. } => return Err("reported critical".into()),
    }
    let cert = persistence::certify(&n).map_err(|e| e.to_string())?;
    ensure(
        cert.verdict == PersistenceVerdict::Persistent
            && cert.rule == PersistenceRule::ConservativeNoCriticalSiphons,
        format!("{:?} {:?}", cert.verdict, cert.rule),
    )
}

fn counter() -> Result<(), String> {
    let n = net(COUNTER)?;
    ensure(siphon::minimal_siphons(&n) == vec![set(&n, "Y")?], "minimal siphons")?;
    for s in siphon::all_siphons(&n).map_err(|e| e.to_string())? {
        let crit = siphon::is_critical(&n, &s).map_err(|e| e.to_string())?;
        ensure(!crit.is_critical(), format!("{:?} is critical", n.set_names(&s)))?;
    }
    Ok(())
}

fn cds() -> Result<(), String> {
    let n = net(CDS)?;
    let c = siphon::classify_set(&n, &set(&n, "X,Y")?).map_err(|e| e.to_string())?;
    ensure(
        c.is_siphon && c.is_critical && !c.is_drainable && !c.is_self_replicable,
        "first net: {X,Y} must be a critical siphon, neither drainable nor self-replicable",
    )?;
    let n = net(CDS_SECOND)?;
    let xy = set(&n, "X,Y")?;
    let x = set(&n, "X")?;
    let c = siphon::classify_set(&n, &xy).map_err(|e| e.to_string())?;
    ensure(c.is_siphon && c.is_critical && c.is_self_replicable, "second net: {X,Y}")?;
    ensure(!siphon::minimal_siphons(&n).contains(&xy), "{X,Y} should not be minimal")?;
    let c = siphon::classify_set(&n, &x).map_err(|e| e.to_string())?;
    ensure(c.is_siphon && c.is_critical, "second net: {X} must be a critical siphon")
}

fn finding(
    text: &str,
    species: &str,
    kind: CatalysisKind,
) -> Result<catalysis::CatalyticFinding, String> {
    let n = net(text)?;
    let target = set(&n, species)?;
    let found = catalysis::find_catalytic_sets(&n, 8).map_err(|e| e.to_string())?;
    let f = found
        .into_iter()
        .find(|f| f.set == target)
        .ok_or_else(|| format!("no finding for {{{species}}}"))?;
    f.verify(&n)?;
    ensure(f.kind == kind, format!("{{{species}}} is {:?}", f.kind))?;
    Ok(f)
}

fn catalysis_examples() -> Result<(), String> {
    let f = finding(CATALYSIS_NOT_STRICT, "Y", CatalysisKind::Catalytic)?;
    ensure(f.reachable_at().is_some(), "no reachable scale recorded")?;
    let n = net(CATALYSIS_NOT_STRICT)?;
    let from = n.parse_complex("3X").map_err(|e| e.to_string())?;
    let to = n.parse_complex("0").map_err(|e| e.to_string())?;
    let v = pathway::bounded_reach(&n, &from, &to, 8).map_err(|e| e.to_string())?;
    ensure(v.is_reachable() && v.verify(&n, &from, &to), "3X ->* 0 not found within 8")?;
    finding(CATALYSIS_STRICT, "Y", CatalysisKind::StrictlyCatalytic)?;
    finding(CATALYSIS_COUNTER, "X", CatalysisKind::StrictlyCatalytic)?;
    Ok(())
}

fn diffusive_only() -> Result<(), String> {
    let a = RationalMatrix::parse(DIFFUSIVE_ONLY).map_err(|e| e.to_string())?;
    ensure(a.kernel_basis().is_empty(), "kernel not trivial")?;
    ensure(diffusive::validate_diffusive(&a).unwrap_or(false), "not diffusive")?;
    ensure(!diffusive::validate_strongly_diffusive(&a).unwrap_or(true), "strongly diffusive")?;
    let v = diffusive::classify_diffusive_general(&a).map_err(|e| e.to_string())?;
    ensure(v == TrichotomyVerdict::NoneOfThree, format!("{:?}", v.kind()))
}

fn x2y() -> Result<(), String> {
    let n = net(X2Y)?;
    let from = n.parse_complex("2X").map_err(|e| e.to_string())?;
    let to = n.parse_complex("5X").map_err(|e| e.to_string())?;
    match pathway::bounded_reach(&n, &from, &to, 64).map_err(|e| e.to_string())? {
        ReachabilityVerdict::Reachable { witness } => {
            ensure(witness.len() == 3, format!("{} steps", witness.len()))?;
            ensure(pathway::replay(&n, &witness).map_err(|e| e.to_string())? == to, "replay")
        }
        other => Err(format!("{other:?}")),
    }
}

pub fn example_checks() -> Vec<Check> {
    vec![
        ("Y<->2X, 2Y<->X", first_net()),
        ("0<->X+Y<->2X+Y<->X+2Y<->3X+4Y", no_siphons()),
        ("X<->Y", isomerization()),
        ("counter example", counter()),
        ("critical-drainable-self-replicable examples", cds()),
        ("catalysis examples", catalysis_examples()),
        ("diffusive, not strongly diffusive matrix", diffusive_only()),
        ("2X ->* 5X", x2y()),
    ]
}

fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

fn decay() -> Result<(), String> {
    let n = net("X -> Y")?;
    let p = SimulationParams::new(vec![int(1)], vec![int(1), int(1)], 5.0).with_sample_times(vec![1.0]);
    let run = simulate::simulate(&n, &p).map_err(|e| e.to_string())?;
    for t in [1.0, 5.0] {
        let x = run.state_at(t).ok_or(format!("t={t} not sampled"))?[0];
        let e = rel_err(x, (-t).exp());
        ensure(e < 1e-6, format!("relative error {e:e} at t={t}"))?;
    }
    Ok(())
}

fn conservation_drift() -> Result<(), String> {
    for (text, rates, x0) in [
        ("X -> Y", vec![int(1)], vec![int(1), int(1)]),
        ("X <-> Y", vec![int(2), int(1)], vec![int(3), int(1)]),
        ("X -> Y\nY -> Z\nZ -> X", vec![int(1), int(3), int(2)], vec![int(1), int(2), int(3)]),
    ] {
        let n = net(text)?;
        let t_end = 20.0;
        let run = simulate::simulate(&n, &SimulationParams::new(rates, x0, t_end))
            .map_err(|e| e.to_string())?;
        let total0: f64 = run.trajectory[0].iter().sum();
        for (t, x) in run.times.iter().zip(&run.trajectory).skip(1) {
            let drift = (x.iter().sum::<f64>() - total0).abs() / t;
            ensure(drift < 1e-9, format!("{text}: drift {drift:e} per unit time at t={t}"))?;
        }
    }
    Ok(())
}

fn first_net_equilibrium() -> Result<(), String> {
    let n = net(FIRST_NET)?;
    let rates = vec![int(1); 4];
    let x0 = vec![int(1), int(1)];
    let d = mass_action_rhs_exact(&n, &rates, &x0).map_err(|e| e.to_string())?;
    ensure(d.iter().all(Zero::is_zero), format!("derivative {d:?}"))?;
    let run = simulate::simulate(&n, &SimulationParams::new(rates, x0, 100.0))
        .map_err(|e| e.to_string())?;
    ensure(
        run.min_concentration >= 0.5,
        format!("min concentration {}", run.min_concentration),
    )
}

pub fn simulator_checks() -> Vec<Check> {
    vec![
        ("X->Y matches exp(-t) at t=1,5", decay()),
        ("conservation drift below 1e-9 per unit time", conservation_drift()),
        ("Y<->2X, 2Y<->X at (1,1): zero derivative, min >= 0.5", first_net_equilibrium()),
    ]
}

