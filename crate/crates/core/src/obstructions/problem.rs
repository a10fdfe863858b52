use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::expr::{display_order, format_types};
use crate::tree::SingularityType;

/// A source type and the multiset of types it should split into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationProblem {
    pub source: SingularityType,
    /// Sorted by [`display_order`].
    pub targets: Vec<SingularityType>,
}

impl DeformationProblem {
    pub fn new(source: SingularityType, mut targets: Vec<SingularityType>) -> Self {
        assert!(!targets.is_empty(), "a problem needs at least one target");
        targets.sort_by(display_order);
        DeformationProblem { source, targets }
    }
}

impl fmt::Display for DeformationProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source.label(), format_types(&self.targets))
    }
}

impl Serialize for DeformationProblem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("DeformationProblem", 4)?;
        s.serialize_field("source", &self.source.label())?;
        s.serialize_field("source_key", self.source.key())?;
        s.serialize_field("targets", &format_types(&self.targets))?;
        s.serialize_field(
            "target_keys",
            &self.targets.iter().map(|t| t.key()).collect::<Vec<_>>(),
        )?;
        s.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleId {
    Counting,
    Series,
    DualGraph,
    SpectrumSignature,
    Hirzebruch,
    TauEs,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [
        RuleId::Counting,
        RuleId::Series,
        RuleId::DualGraph,
        RuleId::SpectrumSignature,
        RuleId::Hirzebruch,
        RuleId::TauEs,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RuleId::Counting => "counting",
            RuleId::Series => "series",
            RuleId::DualGraph => "dual_graph",
            RuleId::SpectrumSignature => "spectrum_signature",
            RuleId::Hirzebruch => "hirzebruch",
            RuleId::TauEs => "tau_es",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Warn,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Warn => "WARN",
        })
    }
}

/// Result of one rule. For `SKIPPED` and `WARN` the detail carries a
/// `reason` string.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleOutcome {
    pub id: RuleId,
    pub status: Status,
    pub detail: Value,
}

impl RuleOutcome {
    pub fn new(id: RuleId, status: Status, detail: Value) -> Self {
        RuleOutcome { id, status, detail }
    }

    pub fn skipped(id: RuleId, reason: &str) -> Self {
        RuleOutcome::new(id, Status::Skipped, serde_json::json!({ "reason": reason }))
    }

    pub fn reason(&self) -> Option<&str> {
        self.detail.get("reason").and_then(Value::as_str)
    }
}
