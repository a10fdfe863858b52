//! Deformations known to exist, used to certify `POSSIBLE` verdicts.
//!
//! The table lives in `data/existence_table.json`: explicit rows
//! `S -> S_1 + ... + S_k`, plus parametric families interpreted here. A
//! problem is certified when its targets arise from a row or family applied
//! to the source, followed by a family split (or nothing) of each member.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::rules::ArrangementCertificate;
use crate::decomposition::{canonical_omp_decomposition, omp_targets, DecompositionWitness};
use crate::expr::{display_order, format_types, parse_expression, parse_type};
use crate::tree::SingularityType;

const BUILTIN: &str = include_str!("../../data/existence_table.json");
const SUPPORTED_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    NodeSmoothing,
    CanonicalOmp,
    AChain,
    DChain,
    K3TwoTop,
    K3Lm,
}

impl FamilyId {
    pub const ALL: [FamilyId; 6] = [
        FamilyId::NodeSmoothing,
        FamilyId::CanonicalOmp,
        FamilyId::AChain,
        FamilyId::DChain,
        FamilyId::K3TwoTop,
        FamilyId::K3Lm,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyId::NodeSmoothing => "node-smoothing",
            FamilyId::CanonicalOmp => "canonical-omp",
            FamilyId::AChain => "a-chain",
            FamilyId::DChain => "d-chain",
            FamilyId::K3TwoTop => "k3-two-top",
            FamilyId::K3Lm => "k3-lm",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("malformed existence table: {0}")]
    Json(String),
    #[error("existence table version {found} is not supported (expected {SUPPORTED_VERSION})")]
    Version { found: u32 },
    #[error("unknown family id {0:?}")]
    UnknownFamily(String),
    #[error("row {index}: {reason}")]
    BadRow { index: usize, reason: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    version: u32,
    description: String,
    families: Vec<RawFamily>,
    rows: Vec<RawRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    id: String,
    statement: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    source: String,
    targets: String,
    note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub source: SingularityType,
    pub targets: Vec<SingularityType>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistenceTable {
    pub version: u32,
    pub description: String,
    pub families: Vec<(FamilyId, String)>,
    pub rows: Vec<TableRow>,
}

/// How one member of the first step turns into its share of the targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub member: SingularityType,
    /// `None` when the member is kept as it is.
    pub family: Option<FamilyId>,
    pub into: Vec<SingularityType>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FirstStep {
    Identity,
    Row(usize),
    Family(FamilyId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// A line arrangement realizing a splitting of an ordinary point.
    OmpArrangement(ArrangementCertificate),
    /// A table row or family, followed by family splits of its members.
    Table {
        first_step: FirstStep,
        description: String,
        splits: Vec<Split>,
    },
}

impl Certificate {
    pub fn to_json(&self, table: &ExistenceTable, witness: Option<&DecompositionWitness>) -> Value {
        let mut v = match self {
            Certificate::OmpArrangement(c) => json!({
                "kind": "omp-arrangement",
                "arrangement": c.incidence,
                "witness": c.witness,
            }),
            Certificate::Table {
                first_step,
                description,
                splits,
            } => {
                let step = match first_step {
                    FirstStep::Identity => json!({"identity": true}),
                    FirstStep::Row(i) => json!({
                        "row": i,
                        "source": table.rows[*i].source.label(),
                        "targets": format_types(&table.rows[*i].targets),
                        "note": table.rows[*i].note,
                    }),
                    FirstStep::Family(f) => json!({"family": f.as_str()}),
                };
                json!({
                    "kind": "existence-table",
                    "table_version": table.version,
                    "first_step": step,
                    "description": description,
                    "splits": splits.iter().filter(|s| s.family.is_some()).map(|s| json!({
                        "member": s.member.label(),
                        "family": s.family.map(|f| f.as_str()),
                        "into": format_types(&s.into),
                    })).collect::<Vec<_>>(),
                })
            }
        };
        if let (Some(w), Certificate::Table { .. }) = (witness, self) {
            v["witness"] = serde_json::to_value(w).expect("witness serializes");
        }
        v
    }
}

fn a_weight(t: &SingularityType) -> Option<u64> {
    (t.branches() == 2).then(|| u64::from(t.graph().weight(0, 1)))
}

fn kpk_params(t: &SingularityType) -> Option<(usize, u64)> {
    t.graph().is_uniform().map(|k| (t.branches(), u64::from(k)))
}

fn sorted(mut v: Vec<SingularityType>) -> Vec<SingularityType> {
    v.sort_by(display_order);
    v
}

fn a_type(k: u64) -> SingularityType {
    crate::registry::a_odd(k as crate::graph::Weight)
}

/// Targets of the `k3-lm` family for `x^3 + y^{3k}`.
fn k3_lm_targets(k: u64) -> Vec<Vec<SingularityType>> {
    (1..=k)
        .map(|l| (l, k + 1 - l))
        .filter(|&(l, m)| l <= m && m >= 1)
        .map(|(l, m)| {
            let mut v = vec![a_type(k), a_type(l), a_type(m)];
            v.extend(std::iter::repeat(a_type(1)).take((k - 1) as usize));
            sorted(v)
        })
        .collect()
}

fn k3_two_top(k: u64) -> Vec<SingularityType> {
    let mut v = vec![a_type(k), a_type(k)];
    v.extend(std::iter::repeat(a_type(1)).take(k as usize));
    sorted(v)
}

/// Whether `family` takes `member` to exactly `group` (sorted by display
/// order).
pub fn family_certifies(family: FamilyId, member: &SingularityType, group: &[SingularityType]) -> bool {
    match family {
        FamilyId::NodeSmoothing => {
            group.len() as u64 == member.delta() && group.iter().all(|t| a_weight(t) == Some(1))
        }
        FamilyId::CanonicalOmp => omp_targets(&canonical_omp_decomposition(member)) == group,
        FamilyId::AChain => {
            let Some(big) = a_weight(member) else { return false };
            let parts: Option<Vec<u64>> = group.iter().map(a_weight).collect();
            parts.is_some_and(|p| p.iter().sum::<u64>() == big)
        }
        FamilyId::DChain => {
            let g = member.graph();
            let mut w: Vec<u32> = g.edge_weights().to_vec();
            w.sort_unstable();
            let big = match (g.branches(), w.as_slice()) {
                (3, [1, 1, k]) => u64::from(*k),
                _ => return false,
            };
            let parts: Option<Vec<u64>> = group.iter().map(a_weight).collect();
            parts.is_some_and(|p| {
                p.iter().sum::<u64>() == big + 2 && p.iter().filter(|&&x| x == 1).count() >= 2
            })
        }
        FamilyId::K3TwoTop => match kpk_params(member) {
            Some((3, k)) if k >= 2 => k3_two_top(k) == group,
            _ => false,
        },
        FamilyId::K3Lm => match kpk_params(member) {
            Some((3, k)) if k >= 2 => k3_lm_targets(k).iter().any(|t| t == group),
            _ => false,
        },
    }
}

impl ExistenceTable {
    pub fn builtin() -> &'static ExistenceTable {
        static TABLE: OnceLock<ExistenceTable> = OnceLock::new();
        TABLE.get_or_init(|| ExistenceTable::from_json(BUILTIN).expect("built-in table is valid"))
    }

    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        let raw: RawTable = serde_json::from_str(text).map_err(|e| LoadError::Json(e.to_string()))?;
        if raw.version != SUPPORTED_VERSION {
            return Err(LoadError::Version { found: raw.version });
        }
        let families = raw
            .families
            .into_iter()
            .map(|f| {
                FamilyId::parse(&f.id)
                    .map(|id| (id, f.statement))
                    .ok_or(LoadError::UnknownFamily(f.id))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rows = raw
            .rows
            .into_iter()
            .enumerate()
            .map(|(index, r)| {
                let bad = |reason: String| LoadError::BadRow { index, reason };
                let source = parse_type(&r.source).map_err(|e| bad(e.to_string()))?;
                let targets = parse_expression(&r.targets)
                    .map_err(|e| bad(e.to_string()))?
                    .expand();
                let sd = source.delta();
                let td: u64 = targets.iter().map(SingularityType::delta).sum();
                if sd != td {
                    return Err(bad(format!("delta {sd} != {td}")));
                }
                Ok(TableRow {
                    source,
                    targets: sorted(targets),
                    note: r.note,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExistenceTable {
            version: raw.version,
            description: raw.description,
            families,
            rows,
        })
    }

    fn has(&self, f: FamilyId) -> bool {
        self.families.iter().any(|(id, _)| *id == f)
    }

    /// Candidate first steps out of `source`, in a fixed order.
    fn first_steps(&self, source: &SingularityType) -> Vec<(FirstStep, Vec<SingularityType>)> {
        let mut out = vec![(FirstStep::Identity, vec![source.clone()])];
        for (i, row) in self.rows.iter().enumerate() {
            if row.source == *source {
                out.push((FirstStep::Row(i), row.targets.clone()));
            }
        }
        if self.has(FamilyId::CanonicalOmp) {
            let t = omp_targets(&canonical_omp_decomposition(source));
            out.push((FirstStep::Family(FamilyId::CanonicalOmp), sorted(t)));
        }
        if let Some((3, k)) = kpk_params(source) {
            if k >= 2 && self.has(FamilyId::K3TwoTop) {
                out.push((FirstStep::Family(FamilyId::K3TwoTop), k3_two_top(k)));
            }
            if k >= 2 && self.has(FamilyId::K3Lm) {
                for t in k3_lm_targets(k) {
                    out.push((FirstStep::Family(FamilyId::K3Lm), t));
                }
            }
        }
        out
    }

    /// Finds a certificate for `source -> targets`.
    pub fn certify(&self, source: &SingularityType, targets: &[SingularityType]) -> Option<Certificate> {
        let targets = sorted(targets.to_vec());
        let mut pool: BTreeMap<usize, u64> = BTreeMap::new();
        let distinct: Vec<SingularityType> = {
            let mut d = targets.clone();
            d.dedup();
            d
        };
        for t in &targets {
            let idx = distinct.iter().position(|d| d == t).expect("present");
            *pool.entry(idx).or_insert(0) += 1;
        }
        for (step, members) in self.first_steps(source) {
            let mut splits = Vec::new();
            if self.assign(&members, 0, &distinct, &mut pool, &mut splits) {
                if step == FirstStep::Identity && splits[0].family.is_none() {
                    // `source -> source` is not a deformation to certify
                    if targets.len() == 1 {
                        return None;
                    }
                    continue;
                }
                let mut steps = match &step {
                    FirstStep::Identity => Vec::new(),
                    FirstStep::Row(i) => vec![format!(
                        "{} -> {} (table row {i})",
                        source.label(),
                        format_types(&members)
                    )],
                    FirstStep::Family(f) => {
                        vec![format!("{} -> {} ({})", source.label(), format_types(&members), f.as_str())]
                    }
                };
                for split in &splits {
                    if let Some(f) = split.family {
                        steps.push(format!(
                            "{} -> {} ({})",
                            split.member.label(),
                            format_types(&split.into),
                            f.as_str()
                        ));
                    }
                }
                let description = steps.join("; ");
                return Some(Certificate::Table {
                    first_step: step,
                    description,
                    splits,
                });
            }
        }
        None
    }

    /// Splits the remaining `pool` among `members[idx..]`.
    fn assign(
        &self,
        members: &[SingularityType],
        idx: usize,
        distinct: &[SingularityType],
        pool: &mut BTreeMap<usize, u64>,
        splits: &mut Vec<Split>,
    ) -> bool {
        if idx == members.len() {
            return pool.values().all(|&c| c == 0);
        }
        let member = &members[idx];
        let mut groups = Vec::new();
        sub_pools(distinct, pool, member.delta(), &mut Vec::new(), 0, &mut groups);
        for group in groups {
            let types: Vec<SingularityType> = sorted(group.iter().map(|&i| distinct[i].clone()).collect());
            let family = if types.len() == 1 && types[0] == *member {
                Some(None)
            } else {
                FamilyId::ALL
                    .into_iter()
                    .filter(|f| self.has(*f))
                    .find(|f| family_certifies(*f, member, &types))
                    .map(Some)
            };
            let Some(family) = family else { continue };
            for &i in &group {
                *pool.get_mut(&i).expect("in pool") -= 1;
            }
            splits.push(Split {
                member: member.clone(),
                family,
                into: types,
            });
            if self.assign(members, idx + 1, distinct, pool, splits) {
                return true;
            }
            splits.pop();
            for &i in &group {
                *pool.get_mut(&i).expect("in pool") += 1;
            }
        }
        false
    }
}

/// Sub-multisets of `pool` (indices into `distinct`, non-decreasing) with
/// total delta `remaining`.
fn sub_pools(
    distinct: &[SingularityType],
    pool: &BTreeMap<usize, u64>,
    remaining: u64,
    cur: &mut Vec<usize>,
    from: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        return;
    }
    for i in from..distinct.len() {
        let avail = pool.get(&i).copied().unwrap_or(0);
        let used = cur.iter().filter(|&&j| j == i).count() as u64;
        let d = distinct[i].delta();
        if used < avail && d <= remaining {
            cur.push(i);
            sub_pools(distinct, pool, remaining - d, cur, i, out);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn certify(s: &str, t: &str) -> Option<Certificate> {
        let src = parse_type(s).unwrap();
        let tg = parse_expression(t).unwrap().expand();
        ExistenceTable::builtin().certify(&src, &tg)
    }

    #[test]
    fn builtin_loads() {
        let t = ExistenceTable::builtin();
        assert_eq!(t.version, 1);
        assert_eq!(t.rows.len(), 12);
        assert_eq!(t.families.len(), FamilyId::ALL.len());
    }

    #[test]
    fn unknown_family_is_rejected() {
        let text = BUILTIN.replace("\"k3-lm\"", "\"k3-xyz\"");
        assert_eq!(
            ExistenceTable::from_json(&text),
            Err(LoadError::UnknownFamily("k3-xyz".into()))
        );
        let text = BUILTIN.replace("\"version\": 1", "\"version\": 2");
        assert_eq!(ExistenceTable::from_json(&text), Err(LoadError::Version { found: 2 }));
        let text = BUILTIN.replace("\"2A3 + 2A1\"", "\"2A3 + 3A1\"");
        assert!(matches!(ExistenceTable::from_json(&text), Err(LoadError::BadRow { index: 0, .. })));
    }

    #[test]
    fn rows_and_refinements() {
        assert!(certify("K(4,2)", "3D4 + 3A1").is_some());
        assert!(certify("K(4,2)", "2D4 + 6A1").is_some());
        assert!(certify("K(3,4)", "2A7 + 4A1").is_some());
        assert!(certify("K(3,4)", "A7 + 2A5 + A3 + A1").is_none());
        // refinement of 2A_5 + 3A_1 by splitting one A_5
        assert!(certify("K(3,3)", "A5 + A3 + 4A1").is_some());
        assert!(certify("K(3,4)", "6A3").is_none());
        assert!(certify("K(3,4)", "12A1").is_some());
    }

    #[test]
    fn families() {
        assert!(certify("D6", "A3 + 2A1").is_some());
        assert!(certify("D6", "D4 + A1").is_some());
        assert!(certify("A7", "A3 + 2A1").is_some());
        assert!(certify("K(3,6)", "2A11 + 6A1").is_some());
        assert!(certify("K(4,3)", "3X9").is_some());
        assert!(certify("K5", "K5").is_none());
    }
}
