//! Decompositions of dual graphs: `Γ = ⊕ Γ_i` means every branch pair of the
//! source is covered by branch pairs of the targets, with weights adding up
//! exactly.

mod canonical;
pub mod functionals;
mod omp;
mod search;
mod targets;
mod witness;

pub use canonical::{canonical_omp_decomposition, collide_nodes, omp_targets, OmpMultiset};
pub use omp::{
    construct_omp_witness, omp_criterion, ArrangementIncidence, IncidencePoint, OmpVerdict,
};
pub use search::{decompose_check, Meter, SearchBudget, SearchOutcome};
pub use targets::{enumerate_decomposition_targets, TargetEnumeration, TargetEntry};
pub use witness::{
    verify_witness, DecompositionWitness, WitnessComponent, WitnessError, WitnessFile,
    WitnessFileComponent,
};
