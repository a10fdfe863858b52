use std::fmt;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::existence::{Certificate, ExistenceTable};
use super::problem::{DeformationProblem, RuleId, RuleOutcome, Status};
use super::rules::{
    rule_counting, rule_dual_graph_with_witness, rule_hirzebruch, rule_series_with_certificate,
    rule_spectrum_signature, rule_tau_es,
};
use crate::decomposition::{DecompositionWitness, SearchBudget};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// At least one rule fails; lists every failing rule.
    Impossible { rules: Vec<RuleId> },
    /// No rule fails and a known construction realizes the splitting.
    Possible,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Impossible { .. } => "IMPOSSIBLE",
            Verdict::Possible => "POSSIBLE",
            Verdict::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct ObstructionReport {
    pub problem: DeformationProblem,
    /// One outcome per rule, in [`RuleId::ALL`] order.
    pub rules: Vec<RuleOutcome>,
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    /// Dual-graph witness found by the search, when it succeeded.
    pub witness: Option<DecompositionWitness>,
}

impl ObstructionReport {
    pub fn failed_rules(&self) -> Vec<RuleId> {
        match &self.verdict {
            Verdict::Impossible { rules } => rules.clone(),
            _ => Vec::new(),
        }
    }

    pub fn outcome(&self, id: RuleId) -> &RuleOutcome {
        self.rules.iter().find(|r| r.id == id).expect("every rule runs")
    }

    pub fn budget_exhausted(&self) -> bool {
        self.outcome(RuleId::DualGraph).reason() == Some("budget")
    }

    pub fn certificate_json(&self) -> Value {
        match &self.certificate {
            Some(c) => c.to_json(ExistenceTable::builtin(), self.witness.as_ref()),
            None => Value::Null,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "problem": self.problem,
            "rules": self.rules,
            "verdict": self.verdict,
            "failed_rules": self.failed_rules(),
            "certificate": self.certificate_json(),
        })
    }
}

impl Serialize for ObstructionReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Runs every rule on `p` and combines the outcomes.
pub fn aggregate_verdict(p: &DeformationProblem, budget: SearchBudget) -> ObstructionReport {
    aggregate_with_hint(p, budget, None)
}

/// As [`aggregate_verdict`], with a candidate dual-graph witness that is
/// verified instead of searched for.
pub fn aggregate_with_hint(
    p: &DeformationProblem,
    budget: SearchBudget,
    hint: Option<&DecompositionWitness>,
) -> ObstructionReport {
    let (series, arrangement) = rule_series_with_certificate(p);
    let (dual, witness) = rule_dual_graph_with_witness(p, budget, hint);
    let rules = vec![
        rule_counting(p),
        series,
        dual,
        rule_spectrum_signature(p),
        rule_hirzebruch(p),
        rule_tau_es(p),
    ];
    debug_assert!(rules.iter().map(|r| r.id).eq(RuleId::ALL));
    let failing: Vec<RuleId> = rules
        .iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| r.id)
        .collect();
    let (verdict, certificate) = if !failing.is_empty() {
        (Verdict::Impossible { rules: failing }, None)
    } else {
        let cert = arrangement
            .map(Certificate::OmpArrangement)
            .or_else(|| ExistenceTable::builtin().certify(&p.source, &p.targets));
        match cert {
            Some(c) => (Verdict::Possible, Some(c)),
            None => (Verdict::Unknown, None),
        }
    };
    ObstructionReport {
        problem: p.clone(),
        rules,
        verdict,
        certificate,
        witness,
    }
}
