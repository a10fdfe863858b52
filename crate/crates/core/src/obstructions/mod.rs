//! Obstructions to a proposed splitting `S -> S_1 + ... + S_k` and the
//! aggregated verdict.

mod existence;
mod problem;
mod report;
pub mod rules;

pub use existence::{family_certifies, Certificate, ExistenceTable, FamilyId, FirstStep, LoadError, Split, TableRow};
pub use problem::{DeformationProblem, RuleId, RuleOutcome, Status};
pub use report::{aggregate_verdict, aggregate_with_hint, ObstructionReport, Verdict};
