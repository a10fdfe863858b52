//! Dual graphs of plane curve singularities with smooth branches, and the
//! obstructions that decide whether one singularity can split into a given
//! collection of others under a delta-constant deformation.

pub mod decomposition;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod graph;
pub mod invariants;
pub mod obstructions;
pub mod registry;
pub mod tree;

pub use enumerate::enumerate_types_with_delta;
pub use error::{DecompositionError, GraphError, NameError, OmpError, TreeError};
pub use graph::{Component, DualGraph, GraphFile, Weight};
pub use registry::make_named_type;
pub use tree::{canonical_form, LevelTree, SingularityType};
