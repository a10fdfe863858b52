//! The individual obstruction rules. Each returns `FAIL` only when the
//! deformation is provably impossible.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::problem::{DeformationProblem, RuleId, RuleOutcome, Status};
use crate::decomposition::{
    construct_omp_witness, decompose_check, functionals, omp_criterion, verify_witness,
    ArrangementIncidence, DecompositionWitness, IncidencePoint, OmpVerdict, SearchBudget,
    SearchOutcome,
};
use crate::invariants::{
    basic_invariants, brieskorn_model, signature_steenbrink, spectrum, tau_es, InvariantBundle,
    Rational, Signature, Spectrum,
};
use crate::tree::SingularityType;

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// A comparison `lhs <op> rhs` that must hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCheck {
    pub name: &'static str,
    pub source: u64,
    pub targets: u64,
    pub holds: bool,
}

/// Invariant comparisons between a (possibly disconnected) source and the
/// targets: delta equal, the semicontinuous invariants not increasing, and
/// branch pairs sufficient to cover the source pairs.
pub fn linear_checks(source: &[InvariantBundle], targets: &[InvariantBundle]) -> Vec<LinearCheck> {
    let sum = |v: &[InvariantBundle], f: fn(&InvariantBundle) -> u64| v.iter().map(f).sum::<u64>();
    let max = |v: &[InvariantBundle]| v.iter().map(|b| b.mult).max().unwrap_or(0);
    let check = |name, s: u64, t: u64, holds: bool| LinearCheck {
        name,
        source: s,
        targets: t,
        holds,
    };
    let (sd, td) = (sum(source, |b| b.delta), sum(targets, |b| b.delta));
    let (sm, tm) = (sum(source, |b| b.mu), sum(targets, |b| b.mu));
    let (sk, tk) = (sum(source, |b| b.kappa), sum(targets, |b| b.kappa));
    let (smd, tmd) = (sum(source, |b| b.mu - b.delta), sum(targets, |b| b.mu - b.delta));
    let (sp, tp) = (sum(source, |b| choose2(b.r)), sum(targets, |b| choose2(b.r)));
    vec![
        check("delta", sd, td, sd == td),
        check("mu", sm, tm, sm >= tm),
        check("kappa", sk, tk, sk >= tk),
        check("mult", max(source), max(targets), max(source) >= max(targets)),
        check("mu_minus_delta", smd, tmd, smd >= tmd),
        check("branch_pairs", sp, tp, sp <= tp),
    ]
}

pub fn rule_counting(p: &DeformationProblem) -> RuleOutcome {
    let src = [basic_invariants(&p.source)];
    let tgt: Vec<_> = p.targets.iter().map(basic_invariants).collect();
    let mut checks: Vec<Value> = Vec::new();
    let mut failed = Vec::new();
    for c in linear_checks(&src, &tgt) {
        if !c.holds {
            failed.push(c.name.to_string());
        }
        checks.push(json!({"check": c.name, "source": c.source, "targets": c.targets, "holds": c.holds}));
    }
    let graphs: Vec<_> = p.targets.iter().map(SingularityType::graph).collect();
    for c in functionals::all_checks(p.source.graph(), &graphs) {
        if c.violated {
            failed.push(c.name.clone());
        }
        checks.push(json!({"check": c.name, "source": c.source, "targets": c.targets, "holds": !c.violated}));
    }
    let status = if failed.is_empty() { Status::Pass } else { Status::Fail };
    RuleOutcome::new(RuleId::Counting, status, json!({ "checks": checks, "failed": failed }))
}

fn is_omp(t: &SingularityType) -> bool {
    t.graph().is_uniform() == Some(1)
}

/// Arrangement of `p` lines in general position.
fn generic_arrangement(p: u32) -> ArrangementIncidence {
    let points = (1..=p)
        .flat_map(|x| (x + 1..=p).map(move |y| IncidencePoint { lines: vec![x, y] }))
        .collect();
    ArrangementIncidence { lines: p, points }
}

/// Certificate produced by the series rule for an ordinary point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementCertificate {
    pub incidence: ArrangementIncidence,
    pub witness: DecompositionWitness,
}

/// Series rule together with the line-arrangement certificate when one is
/// found.
pub fn rule_series_with_certificate(
    p: &DeformationProblem,
) -> (RuleOutcome, Option<ArrangementCertificate>) {
    let id = RuleId::Series;
    let src = p.source.graph();
    let r = src.branches() as u64;
    match src.is_uniform() {
        Some(1) => {
            if let Some(bad) = p.targets.iter().find(|t| !is_omp(t)) {
                let detail = json!({
                    "condition": "an ordinary point only splits into ordinary points",
                    "offending_target": bad.label(),
                });
                return (RuleOutcome::new(id, Status::Fail, detail), None);
            }
            let parts: Vec<u32> = p
                .targets
                .iter()
                .map(|t| t.branches() as u32)
                .filter(|&q| q >= 3)
                .collect();
            let nodes = p.targets.len() as u64 - parts.len() as u64;
            let implied = choose2(r) as i64 - parts.iter().map(|&q| choose2(u64::from(q)) as i64).sum::<i64>();
            if implied != nodes as i64 {
                let detail = json!({"reason": "delta-mismatch", "nodes": nodes, "implied_nodes": implied});
                return (RuleOutcome::new(id, Status::Skipped, detail), None);
            }
            let p_lines = r as u32;
            let incidence = if parts.is_empty() {
                generic_arrangement(p_lines)
            } else {
                match omp_criterion(p_lines, &parts) {
                    OmpVerdict::NotApplicable => {
                        let detail = json!({
                            "reason": "outside-criterion",
                            "parts": parts,
                            "note": "some multiplicity is below max(k-1, 3)",
                        });
                        return (RuleOutcome::new(id, Status::Skipped, detail), None);
                    }
                    OmpVerdict::Impossible => {
                        let k = parts.len() as u64;
                        let detail = json!({
                            "criterion": "p + C(k,2) >= sum p_i",
                            "p": r,
                            "parts": parts,
                            "lhs": r + choose2(k),
                            "rhs": parts.iter().map(|&q| u64::from(q)).sum::<u64>(),
                        });
                        return (RuleOutcome::new(id, Status::Fail, detail), None);
                    }
                    OmpVerdict::Possible => construct_omp_witness(p_lines, &parts)
                        .expect("criterion holds"),
                }
            };
            let witness = incidence.to_witness();
            if verify_witness(src, &witness).is_err() {
                let detail = json!({"reason": "arrangement failed to verify"});
                return (RuleOutcome::new(id, Status::Skipped, detail), None);
            }
            let detail = json!({
                "criterion": "p + C(k,2) >= sum p_i",
                "parts": parts,
                "nodes": nodes,
                "arrangement": incidence,
                "note": "combinatorial arrangement; realizable by lines in general position subject to the prescribed concurrences",
            });
            (
                RuleOutcome::new(id, Status::Pass, detail),
                Some(ArrangementCertificate { incidence, witness }),
            )
        }
        Some(k) if p.targets.iter().all(|t| t.branches() == 2) => {
            (series_kpk(r, u64::from(k), p), None)
        }
        _ => (RuleOutcome::skipped(id, "not-applicable"), None),
    }
}

pub fn rule_series(p: &DeformationProblem) -> RuleOutcome {
    rule_series_with_certificate(p).0
}

/// Can the items be split into `bins` groups that each sum to `cap`?
fn exact_bin_packing(items: &[u64], bins: usize, cap: u64) -> bool {
    fn go(items: &[u64], idx: usize, loads: &mut [u64], cap: u64) -> bool {
        if idx == items.len() {
            return loads.iter().all(|&l| l == cap);
        }
        let x = items[idx];
        for b in 0..loads.len() {
            if loads[b] + x > cap || loads[..b].contains(&loads[b]) {
                continue;
            }
            loads[b] += x;
            if go(items, idx + 1, loads, cap) {
                return true;
            }
            loads[b] -= x;
        }
        false
    }
    let total: u64 = items.iter().sum();
    if total != bins as u64 * cap {
        return false;
    }
    let mut sorted = items.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    go(&sorted, 0, &mut vec![0; bins], cap)
}

/// Sub-multisets of `counts` (value -> count) summing to `target`.
fn sub_multisets(counts: &BTreeMap<u64, u64>, target: u64) -> Vec<BTreeMap<u64, u64>> {
    fn go(
        vals: &[(u64, u64)],
        idx: usize,
        remaining: u64,
        cur: &mut BTreeMap<u64, u64>,
        out: &mut Vec<BTreeMap<u64, u64>>,
    ) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        if idx == vals.len() {
            return;
        }
        let (v, c) = vals[idx];
        for take in 0..=c.min(remaining / v) {
            if take > 0 {
                cur.insert(v, take);
            }
            go(vals, idx + 1, remaining - take * v, cur, out);
        }
        cur.remove(&v);
    }
    let vals: Vec<(u64, u64)> = counts.iter().map(|(&v, &c)| (v, c)).collect();
    let mut out = Vec::new();
    go(&vals, 0, target, &mut BTreeMap::new(), &mut out);
    out
}

fn series_kpk(p: u64, k: u64, problem: &DeformationProblem) -> RuleOutcome {
    let id = RuleId::Series;
    let items: Vec<u64> = problem
        .targets
        .iter()
        .map(|t| u64::from(t.graph().weight(0, 1)))
        .collect();
    let fail = |detail: Value| RuleOutcome::new(id, Status::Fail, detail);
    if let Some(&i) = items.iter().find(|&&i| i > k) {
        return fail(json!({"condition": "contact at most k", "k": k, "offending": i}));
    }
    let bins = choose2(p);
    let total: u64 = items.iter().sum();
    if total != bins * k {
        return fail(json!({"condition": "sum i*n_i = C(p,2)*k", "lhs": total, "rhs": bins * k}));
    }
    if !exact_bin_packing(&items, bins as usize, k) {
        return fail(json!({"condition": "partition into C(p,2) groups of sum k", "groups": bins, "k": k}));
    }
    let mut detail = json!({"groups": bins, "k": k, "partition": true});
    if p == 3 && k >= 2 {
        let n_k = items.iter().filter(|&&i| i == k).count() as u64;
        if n_k > 2 {
            return fail(json!({"condition": "n_k <= 2", "n_k": n_k}));
        }
        if n_k == 2 {
            let ones = items.iter().filter(|&&i| i == 1).count() as u64;
            if !(items.len() as u64 == 2 + k && ones == k) {
                return fail(json!({"condition": "n_k = 2 forces 2A_{2k-1} + kA_1", "n_k": 2}));
            }
        }
        if n_k == 1 {
            let mut rest: BTreeMap<u64, u64> = BTreeMap::new();
            for &i in items.iter().filter(|&&i| i != k) {
                *rest.entry(i).or_insert(0) += 1;
            }
            let mut best: Option<(u64, u64)> = None;
            for g2 in sub_multisets(&rest, k) {
                let mut g3 = rest.clone();
                for (v, c) in &g2 {
                    *g3.get_mut(v).expect("sub-multiset") -= c;
                }
                g3.retain(|_, c| *c > 0);
                let l = *g2.keys().next_back().expect("non-empty group");
                let Some(&m) = g3.keys().next_back() else {
                    continue;
                };
                if best.map_or(true, |(bl, bm)| l + m < bl + bm) {
                    best = Some((l, m));
                }
            }
            match best {
                Some((l, m)) if l + m <= k + 1 => {
                    detail["l_plus_m"] = json!({"l": l, "m": m, "bound": k + 1});
                }
                Some((l, m)) => {
                    return fail(json!({"condition": "l + m <= k + 1", "l": l, "m": m, "bound": k + 1}));
                }
                None => {
                    return fail(json!({"condition": "two further groups of sum k"}));
                }
            }
        }
    }
    RuleOutcome::new(id, Status::Pass, detail)
}

pub fn rule_dual_graph_with_witness(
    p: &DeformationProblem,
    budget: SearchBudget,
    hint: Option<&DecompositionWitness>,
) -> (RuleOutcome, Option<DecompositionWitness>) {
    let id = RuleId::DualGraph;
    let sd = p.source.delta();
    let td: u64 = p.targets.iter().map(SingularityType::delta).sum();
    if sd != td {
        let detail = json!({"reason": "delta-mismatch", "source_delta": sd, "target_delta": td});
        return (RuleOutcome::new(id, Status::Skipped, detail), None);
    }
    match decompose_check(&p.source, &p.targets, budget, hint) {
        Ok(SearchOutcome::Witness(w)) => {
            let detail = json!({"witness": w});
            (RuleOutcome::new(id, Status::Pass, detail), Some(w))
        }
        Ok(SearchOutcome::NoDecomposition) => {
            (RuleOutcome::new(id, Status::Fail, json!({"search": "exhausted"})), None)
        }
        Ok(SearchOutcome::BudgetExceeded) => (
            RuleOutcome::new(
                id,
                Status::Skipped,
                json!({"reason": "budget", "max_nodes": budget.max_nodes}),
            ),
            None,
        ),
        Err(e) => (
            RuleOutcome::new(id, Status::Skipped, json!({"reason": e.to_string()})),
            None,
        ),
    }
}

pub fn rule_dual_graph(p: &DeformationProblem, budget: SearchBudget) -> RuleOutcome {
    rule_dual_graph_with_witness(p, budget, None).0
}

fn ratio_str(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn interval_scan(source: &Spectrum, targets: &Spectrum) -> Option<Value> {
    let one = Rational::from_integer(1);
    let mut points: Vec<Rational> = source
        .iter()
        .chain(targets.iter())
        .flat_map(|(s, _)| [s, s - one])
        .collect();
    points.sort();
    points.dedup();
    for &a in &points {
        let (cs, ct) = (source.half_open(a, a + one), targets.half_open(a, a + one));
        if ct > cs {
            return Some(json!({
                "kind": "half_open",
                "interval": format!("({}, {}]", ratio_str(a), ratio_str(a + one)),
                "source": cs,
                "targets": ct,
            }));
        }
    }
    let mut open_points = points.clone();
    open_points.extend(points.windows(2).map(|w| (w[0] + w[1]) / 2));
    open_points.sort();
    for &a in &open_points {
        let (cs, ct) = (source.open(a, a + one), targets.open(a, a + one));
        if ct > cs {
            return Some(json!({
                "kind": "open",
                "interval": format!("({}, {})", ratio_str(a), ratio_str(a + one)),
                "source": cs,
                "targets": ct,
            }));
        }
    }
    None
}

pub fn rule_spectrum_signature(p: &DeformationProblem) -> RuleOutcome {
    let id = RuleId::SpectrumSignature;
    let Some(src_model) = brieskorn_model(&p.source) else {
        return RuleOutcome::skipped(id, "no-model");
    };
    let Some(models) = p.targets.iter().map(brieskorn_model).collect::<Option<Vec<_>>>() else {
        return RuleOutcome::skipped(id, "no-model");
    };
    let sp_s = spectrum(src_model);
    let sp_t: Spectrum = models.iter().map(|&m| spectrum(m)).collect::<Vec<_>>().iter().sum();
    let sig_s = signature_steenbrink(src_model);
    let sig_t: Signature = models.iter().map(|&m| signature_steenbrink(m)).sum();
    let slack = (sig_s.mu_zero + sig_s.mu()) as i64 - sig_t.mu() as i64;
    let mut failures = Vec::new();
    if sig_t.mu_plus > sig_s.mu_plus {
        failures.push(json!({"check": "mu_plus", "source": sig_s.mu_plus, "targets": sig_t.mu_plus}));
    }
    if sig_t.mu_minus > sig_s.mu_minus {
        failures.push(json!({"check": "mu_minus", "source": sig_s.mu_minus, "targets": sig_t.mu_minus}));
    }
    if sig_t.mu_zero as i64 > slack {
        failures.push(json!({"check": "mu_zero", "bound": slack, "targets": sig_t.mu_zero}));
    }
    let interval = interval_scan(&sp_s, &sp_t);
    let mut detail = json!({
        "source_signature": sig_s,
        "target_signature": sig_t,
        "source_spectrum": sp_s,
        "target_spectrum": sp_t,
    });
    if let Some(iv) = &interval {
        failures.push(json!({"check": "spectrum", "violation": iv}));
    }
    let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    detail["failures"] = Value::Array(failures);
    RuleOutcome::new(id, status, detail)
}

pub fn rule_hirzebruch(p: &DeformationProblem) -> RuleOutcome {
    let id = RuleId::Hirzebruch;
    if !is_omp(&p.source) || !p.targets.iter().all(is_omp) {
        return RuleOutcome::skipped(id, "not-omp");
    }
    let lines = p.source.branches() as i64;
    let mut n: BTreeMap<i64, i64> = BTreeMap::new();
    for t in &p.targets {
        *n.entry(t.branches() as i64).or_insert(0) += 1;
    }
    let count = |i: i64| n.get(&i).copied().unwrap_or(0);
    let blocked: Vec<i64> = [lines, lines - 1, lines - 2]
        .into_iter()
        .filter(|&i| count(i) != 0)
        .collect();
    if !blocked.is_empty() {
        return RuleOutcome::new(
            id,
            Status::Skipped,
            json!({"reason": "precondition", "nonzero": blocked.iter().map(|i| format!("n_{i}")).collect::<Vec<_>>()}),
        );
    }
    let lhs = 4 * count(2) + 3 * count(3);
    let rhs = 4 * lines + n.range(5..).map(|(&i, &c)| 4 * (2 * i - 9) * c).sum::<i64>();
    let detail = json!({
        "inequality": "4 n_2 + 3 n_3 >= 4 p + sum_{i>=5} 4 (2i - 9) n_i",
        "lhs": lhs,
        "rhs": rhs,
    });
    let status = if lhs < rhs { Status::Fail } else { Status::Pass };
    RuleOutcome::new(id, status, detail)
}

pub fn rule_tau_es(p: &DeformationProblem) -> RuleOutcome {
    let id = RuleId::TauEs;
    let Some(src) = tau_es(&p.source) else {
        return RuleOutcome::skipped(id, "unknown-tau");
    };
    let Some(tgt) = p.targets.iter().map(tau_es).sum::<Option<u64>>() else {
        return RuleOutcome::skipped(id, "unknown-tau");
    };
    if src <= tgt {
        RuleOutcome::new(
            id,
            Status::Warn,
            json!({
                "reason": "generic representative cannot deform; special moduli required",
                "source": src,
                "targets": tgt,
            }),
        )
    } else {
        RuleOutcome::new(id, Status::Pass, json!({"source": src, "targets": tgt}))
    }
}
