use std::fmt::Write;

use crn_core::catalysis::{CatalysisEvidence, CatalysisKind};
use crn_core::diffusive::TrichotomyVerdict;
use crn_core::pathway::ReachabilityVerdict;
use crn_core::rational::{self, Rational};
use crn_core::siphon::{ConeEvidence, Criticality, SetClassification};
use crn_core::{AnalysisReport, PersistenceCertificate, ReactionNetwork};

fn vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(rational::render).collect();
    format!("[{}]", parts.join(", "))
}

fn flag(b: bool, name: &str) -> String {
    if b {
        name.to_string()
    } else {
        format!("¬{name}")
    }
}

fn reaction_name(net: &ReactionNetwork, r: usize) -> String {
    net.reactions()[r].render(&net.species_names())
}

pub fn classification(net: &ReactionNetwork, c: &SetClassification) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{{{}}}: {} {} {} {}",
        c.species.join(", "),
        flag(c.is_siphon, "siphon"),
        flag(c.is_critical, "critical"),
        flag(c.is_drainable, "drainable"),
        flag(c.is_self_replicable, "self-replicable"),
    );
    let _ = writeln!(s, "  {}", flag(c.is_closed, "closed"));
    if let Some(r) = c.siphon_violation {
        let _ = writeln!(s, "  not a siphon: {}", reaction_name(net, r));
    }
    if let Some(r) = c.closed_violation {
        let _ = writeln!(s, "  not closed: {}", reaction_name(net, r));
    }
    match &c.criticality {
        Criticality::Critical { gordan } => {
            let _ = writeln!(s, "  critical: gordan {}", vector(gordan));
        }
        Criticality::NotCritical { law } => {
            let _ = writeln!(s, "  not critical: law {}", vector(&law.weights));
        }
    }
    cone(&mut s, "drainable", &c.drainability);
    cone(&mut s, "self-replicable", &c.self_replicability);
    s
}

fn cone(s: &mut String, what: &str, e: &ConeEvidence) {
    let _ = match e {
        ConeEvidence::Feasible { a } => writeln!(s, "  {what}: a = {}", vector(a)),
        ConeEvidence::Infeasible { dual } => writeln!(s, "  not {what}: dual {}", vector(dual)),
    };
}

pub fn persistence(c: &PersistenceCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verdict: {:?}", c.verdict);
    let _ = writeln!(s, "rule: {:?}", c.rule);
    let _ = writeln!(s, "minimal siphons: {}", c.minimal_siphons.len());
    for m in &c.minimal_siphons {
        let _ = writeln!(
            s,
            "  {{{}}} {} {} {}",
            m.species.join(", "),
            flag(m.is_critical, "critical"),
            flag(m.is_drainable, "drainable"),
            flag(m.is_self_replicable, "self-replicable")
        );
    }
    if let Some(law) = &c.conservative_law {
        let _ = writeln!(s, "conservation law: {}", vector(&law.weights));
    }
    let _ = writeln!(s, "weakly reversible: {}", c.weakly_reversible);
    for b in &c.blockers {
        let _ = writeln!(s, "blocker: {{{}}}", b.join(", "));
    }
    s
}

pub fn trichotomy(v: &TrichotomyVerdict, strong: bool) -> String {
    let mut s = String::new();
    match v {
        TrichotomyVerdict::KernelNonneg { v } => {
            let _ = writeln!(s, "KernelNonneg\nv = {}", vector(v));
        }
        TrichotomyVerdict::PositiveCombination { a } => {
            let _ = writeln!(s, "PositiveCombination\na = {}", vector(a));
        }
        TrichotomyVerdict::NegativeOrthant { c } => {
            let _ = writeln!(s, "NegativeOrthant\nC =");
            for row in c.rows() {
                let _ = writeln!(s, "  {}", vector(row));
            }
        }
        TrichotomyVerdict::NoneOfThree if !strong => {
            let _ = writeln!(s, "NoneOfThree (input diffusive, not strongly diffusive)");
        }
        TrichotomyVerdict::NoneOfThree => {
            let _ = writeln!(s, "NoneOfThree");
        }
    }
    if !strong && !matches!(v, TrichotomyVerdict::NoneOfThree) {
        let _ = writeln!(s, "input diffusive, not strongly diffusive");
    }
    let _ = writeln!(s, "verified: ok");
    s
}

pub fn reachability(net: &ReactionNetwork, v: &ReachabilityVerdict) -> String {
    let mut s = String::new();
    match v {
        ReachabilityVerdict::Reachable { witness } => {
            let _ = writeln!(s, "reachable in {} steps", witness.len());
            if let Ok(pops) = witness.populations(net) {
                for (i, p) in pops.iter().enumerate() {
                    let shown = if p.is_empty() {
                        "0".to_string()
                    } else {
                        net.render_complex(p)
                    };
                    if i == 0 {
                        let _ = writeln!(s, "  {shown}");
                    } else {
                        let step = &witness.steps[i - 1];
                        let _ = writeln!(s, "  -> {shown}    [{}]", reaction_name(net, step.reaction));
                    }
                }
            }
        }
        ReachabilityVerdict::UnreachableByCone { farkas } => {
            let _ = writeln!(s, "unreachable: cone separation y = {}", vector(farkas));
        }
        ReachabilityVerdict::UnreachableBySiphon { siphon, farkas } => {
            let _ = writeln!(s, "unreachable: siphon {{{}}}", net.set_names(siphon).join(", "));
            if let Some(y) = farkas {
                let _ = writeln!(s, "  restricted cone separation y = {}", vector(y));
            }
        }
        ReachabilityVerdict::UnreachableExhaustive { explored } => {
            let _ = writeln!(s, "unreachable: exhaustive search over {explored} populations");
        }
        ReachabilityVerdict::Unknown { bound } => {
            let _ = writeln!(s, "unknown within bound {bound}");
        }
    }
    s
}

pub fn report(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let n = &r.network;
    let _ = writeln!(s, "{} {}", r.tool.name, r.tool.version);
    let _ = writeln!(s, "input sha256: {}", r.input_digest);
    let _ = writeln!(s, "species: {}", n.species.join(", "));
    let _ = writeln!(s, "reactions:");
    for line in &n.reactions {
        let _ = writeln!(s, "  {line}");
    }
    let _ = writeln!(
        s,
        "{} {} {} {} {}",
        flag(n.reversible, "reversible"),
        flag(n.weakly_reversible, "weakly-reversible"),
        flag(n.chemical, "chemical"),
        flag(n.conservative, "conservative"),
        flag(n.consistency.is_consistent(), "consistent"),
    );
    for law in &r.conservation_laws {
        let _ = writeln!(s, "conservation law: {}", vector(&law.weights));
    }
    let _ = writeln!(s, "\npersistence");
    for line in persistence(&r.persistence).lines() {
        let _ = writeln!(s, "  {line}");
    }
    if let Some(cat) = &r.catalysis {
        let _ = writeln!(s, "\ncatalysis (bound {}, scales up to {})", cat.bound, cat.max_scale);
        if let Some(note) = &cat.note {
            let _ = writeln!(s, "  note: {note}");
        }
        if cat.findings.is_empty() {
            let _ = writeln!(s, "  none found");
        }
        for f in &cat.findings {
            let kind = match f.kind {
                CatalysisKind::Catalytic => "catalytic",
                CatalysisKind::StrictlyCatalytic => "strictly catalytic",
            };
            let _ = write!(s, "  {{{}}} {kind}", f.species.join(", "));
            match &f.evidence {
                CatalysisEvidence::Strict { .. } => {
                    let _ = writeln!(s);
                }
                CatalysisEvidence::Scaled { .. } => {
                    let _ = writeln!(
                        s,
                        " (unreachable up to k={}, reachable at {})",
                        f.tested_up_to().unwrap_or(0),
                        f.reachable_at()
                            .map(|k| format!("k={k}"))
                            .unwrap_or_else(|| "no tested k".into())
                    );
                }
            }
        }
    }
    if let Some(p) = &r.probe {
        let _ = writeln!(
            s,
            "\nprobe: {} trials, seed {}, {} flagged",
            p.trials.len(),
            p.seed,
            p.flagged.len()
        );
    }
    s
}
