use std::fmt::Write as _;

use collidere_core::decomposition::{
    canonical_omp_decomposition, collide_nodes as colliding, construct_omp_witness, decompose_check,
    enumerate_decomposition_targets, omp_criterion, omp_targets, verify_witness, OmpVerdict,
    SearchOutcome,
};
use collidere_core::expr::{format_types, parse_expression, parse_type};
use collidere_core::invariants::{
    basic_invariants, brieskorn_model, signature_steenbrink, spectrum as spectrum_of,
    tau_es_unshifted, BrieskornModel,
};
use collidere_core::obstructions::{
    aggregate_verdict, DeformationProblem, ObstructionReport, Status, Verdict,
};
use collidere_core::SingularityType;
use serde_json::{json, Value};

use crate::deviations::Recorder;
use crate::{Config, Output, EXIT_BUDGET, EXIT_IMPOSSIBLE, EXIT_OK, EXIT_UNKNOWN};

const MAX_MODEL_EXPONENT: u32 = 4096;
const MAX_MODEL_MU: u64 = 4_000_000;

fn read_type(text: &str) -> Result<SingularityType, String> {
    parse_type(text).map_err(|e| format!("invalid type {text:?}: {e}"))
}

fn read_targets(text: &str) -> Result<Vec<SingularityType>, String> {
    let e = parse_expression(text).map_err(|e| format!("invalid expression {text:?}: {e}"))?;
    Ok(e.expand())
}

fn type_json(t: &SingularityType) -> Value {
    json!({"name": t.label(), "key": t.key()})
}

pub fn invariants(text: &str, dev: &mut Recorder) -> Result<Output, String> {
    let t = read_type(text)?;
    let inv = basic_invariants(&t);
    let model = brieskorn_model(&t);
    let mut json = json!({
        "type": t.label(),
        "key": t.key(),
        "invariants": {
            "r": inv.r,
            "mult": inv.mult,
            "delta": inv.delta,
            "mu": inv.mu,
            "kappa": inv.kappa,
            "tau_es": inv.tau_es,
            "tau_es_unshifted": tau_es_unshifted(&t),
        },
        "brieskorn_model": null,
        "spectrum": null,
        "signature": null,
    });
    let mut text = format!("{} {}\n", t.label(), t.key());
    let _ = writeln!(
        text,
        "  r = {}, mult = {}, delta = {}, mu = {}, kappa = {}, tau_es = {}",
        inv.r,
        inv.mult,
        inv.delta,
        inv.mu,
        inv.kappa,
        inv.tau_es.map_or("unknown".into(), |x| x.to_string())
    );
    if let Some(m) = model {
        dev.observe(m);
        let sig = signature_steenbrink(m);
        json["brieskorn_model"] = json!({"p": m.p, "q": m.q});
        json["spectrum"] = serde_json::to_value(spectrum_of(m)).expect("spectrum serializes");
        json["signature"] = serde_json::to_value(sig).expect("signature serializes");
        let _ = writeln!(
            text,
            "  model x^{} + y^{}, signature (+{}, 0:{}, -{})",
            m.p, m.q, sig.mu_plus, sig.mu_zero, sig.mu_minus
        );
    }
    Ok(Output {
        json,
        text,
        code: EXIT_OK,
    })
}

pub fn report_code(r: &ObstructionReport) -> u8 {
    match r.verdict {
        Verdict::Impossible { .. } => EXIT_IMPOSSIBLE,
        Verdict::Possible => EXIT_OK,
        Verdict::Unknown if r.budget_exhausted() => EXIT_BUDGET,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

pub fn headline(r: &ObstructionReport) -> String {
    format!("{}: {}", r.problem, r.verdict)
}

pub fn report_text(r: &ObstructionReport) -> String {
    let mut text = headline(r) + "\n";
    for rule in &r.rules {
        let _ = write!(text, "  {:<20}{}", rule.id.as_str(), rule.status);
        if let Some(reason) = rule.reason() {
            let _ = write!(text, " ({reason})");
        }
        if rule.status == Status::Fail {
            let _ = write!(text, " {}", rule.detail);
        }
        text.push('\n');
    }
    if let Some(desc) = r.certificate_json().get("description").and_then(Value::as_str) {
        let _ = writeln!(text, "  certificate: {desc}");
    } else if r.certificate.is_some() {
        let _ = writeln!(text, "  certificate: line arrangement");
    }
    text
}

pub fn observe_problem(p: &DeformationProblem, dev: &mut Recorder) {
    for t in std::iter::once(&p.source).chain(&p.targets) {
        if let Some(m) = brieskorn_model(t) {
            dev.observe(m);
        }
    }
}

pub fn build_problem(source: &str, into: &str) -> Result<DeformationProblem, String> {
    let s = read_type(source)?;
    let t = read_targets(into)?;
    Ok(DeformationProblem::new(s, t))
}

pub fn check(source: &str, into: &str, config: &Config, dev: &mut Recorder) -> Result<Output, String> {
    let p = build_problem(source, into)?;
    observe_problem(&p, dev);
    let r = aggregate_verdict(&p, config.budget);
    Ok(Output {
        json: r.to_json(),
        text: report_text(&r),
        code: report_code(&r),
    })
}

pub fn decompose(source: &str, into: Option<&str>, config: &Config) -> Result<Output, String> {
    let s = read_type(source)?;
    let Some(into) = into else {
        let e = enumerate_decomposition_targets(&s, config.budget);
        let mut text = String::new();
        for entry in &e.entries {
            let _ = writeln!(text, "{} -> {}", s.label(), format_types(&entry.targets));
        }
        if !e.complete {
            text.push_str("(incomplete: budget exhausted)\n");
        }
        let json = json!({
            "source": type_json(&s),
            "complete": e.complete,
            "entries": e.entries.iter().map(|x| json!({
                "targets": format_types(&x.targets),
                "witness": x.witness,
            })).collect::<Vec<_>>(),
        });
        let code = if e.complete { EXIT_OK } else { EXIT_BUDGET };
        return Ok(Output { json, text, code });
    };
    let targets = read_targets(into)?;
    let outcome = decompose_check(&s, &targets, config.budget, None).map_err(|e| e.to_string())?;
    let head = format!("{} -> {}", s.label(), format_types(&targets));
    let (name, witness, code) = match &outcome {
        SearchOutcome::Witness(w) => ("witness", Some(w), EXIT_OK),
        SearchOutcome::NoDecomposition => ("no_decomposition", None, EXIT_IMPOSSIBLE),
        SearchOutcome::BudgetExceeded => ("budget_exceeded", None, EXIT_BUDGET),
    };
    let mut text = format!("{head}: {name}\n");
    if let Some(w) = witness {
        for c in &w.components {
            let _ = writeln!(text, "  {} on {:?}", c.target.label(), c.map);
        }
    }
    let json = json!({
        "source": type_json(&s),
        "targets": format_types(&targets),
        "outcome": name,
        "witness": witness,
    });
    Ok(Output { json, text, code })
}

pub fn canonical_omp(text: &str) -> Result<Output, String> {
    let t = read_type(text)?;
    let m = canonical_omp_decomposition(&t);
    let targets = omp_targets(&m);
    let count: u64 = m.values().sum();
    let parts: Vec<Value> = m
        .iter()
        .rev()
        .map(|(&p, &n)| json!({"p": p, "count": n}))
        .collect();
    let json = json!({
        "source": type_json(&t),
        "decomposition": parts,
        "targets": format_types(&targets),
        "count": count,
    });
    let text = format!("{} -> {} ({count} ordinary points)\n", t.label(), format_types(&targets));
    Ok(Output {
        json,
        text,
        code: EXIT_OK,
    })
}

pub fn collide_nodes(n: u64) -> Result<Output, String> {
    if n == 0 || n > 40 {
        return Err(format!("node count {n} outside 1..=40"));
    }
    let types = colliding(n);
    let text: String = types.iter().map(|t| format!("{}\n", t.label())).collect();
    let json = json!({
        "n": n,
        "types": types.iter().map(type_json).collect::<Vec<_>>(),
    });
    Ok(Output {
        json,
        text,
        code: EXIT_OK,
    })
}

pub fn witness_omp(p: u32, parts: &[u32]) -> Result<Output, String> {
    if !(2..=MAX_MODEL_EXPONENT).contains(&p) {
        return Err(format!("p = {p} outside 2..={MAX_MODEL_EXPONENT}"));
    }
    if parts.is_empty() || parts.iter().any(|&q| q < 3 || q > p) {
        return Err(format!("parts {parts:?} must lie in 3..={p}"));
    }
    let verdict = omp_criterion(p, parts);
    let (name, code) = match verdict {
        OmpVerdict::Possible => ("POSSIBLE", EXIT_OK),
        OmpVerdict::Impossible => ("IMPOSSIBLE", EXIT_IMPOSSIBLE),
        OmpVerdict::NotApplicable => ("NOT_APPLICABLE", EXIT_UNKNOWN),
    };
    let mut json = json!({
        "p": p,
        "parts": parts,
        "verdict": name,
        "arrangement": null,
        "witness": null,
    });
    let mut text = format!("K_{p} parts {parts:?}: {name}\n");
    if verdict == OmpVerdict::Possible {
        let arrangement = construct_omp_witness(p, parts).map_err(|e| e.to_string())?;
        let witness = arrangement.to_witness();
        let source = collidere_core::registry::ordinary(p as usize);
        verify_witness(source.graph(), &witness).map_err(|e| format!("internal: witness rejected: {e}"))?;
        for pt in arrangement.points.iter().filter(|pt| pt.lines.len() >= 3) {
            let _ = writeln!(text, "  lines {:?} concurrent", pt.lines);
        }
        json["arrangement"] = serde_json::to_value(&arrangement).expect("arrangement serializes");
        json["witness"] = serde_json::to_value(&witness).expect("witness serializes");
    }
    Ok(Output { json, text, code })
}

pub fn spectrum(p: u32, q: u32, dev: &mut Recorder) -> Result<Output, String> {
    for x in [p, q] {
        if !(2..=MAX_MODEL_EXPONENT).contains(&x) {
            return Err(format!("exponent {x} outside 2..={MAX_MODEL_EXPONENT}"));
        }
    }
    let m = BrieskornModel::new(p, q);
    if m.mu() > MAX_MODEL_MU {
        return Err(format!("Milnor number {} above {MAX_MODEL_MU}", m.mu()));
    }
    dev.observe(m);
    let sp = spectrum_of(m);
    let sig = signature_steenbrink(m);
    let mut text = format!("x^{} + y^{}: mu = {}\n", m.p, m.q, m.mu());
    for (s, k) in sp.iter() {
        let _ = writeln!(text, "  {s} x{k}");
    }
    let _ = writeln!(
        text,
        "  signature (+{}, 0:{}, -{})",
        sig.mu_plus, sig.mu_zero, sig.mu_minus
    );
    let json = json!({
        "p": m.p,
        "q": m.q,
        "mu": m.mu(),
        "spectrum": sp,
        "symmetric": sp.is_symmetric(),
        "signature": sig,
    });
    Ok(Output {
        json,
        text,
        code: EXIT_OK,
    })
}
