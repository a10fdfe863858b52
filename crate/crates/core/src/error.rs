use thiserror::Error;

use crate::graph::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a dual graph needs at least two branches, got {branches}")]
    TooFewBranches { branches: usize },
    #[error("vertex {vertex} out of range for {branches} branches")]
    VertexOutOfRange { vertex: usize, branches: usize },
    #[error("loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("weight of pair ({i}, {j}) must be at least 1")]
    NonPositiveWeight { i: usize, j: usize },
    #[error("pair ({i}, {j}) listed more than once")]
    DuplicatePair { i: usize, j: usize },
    #[error("pair ({i}, {j}) has no weight")]
    IncompleteGraph { i: usize, j: usize },
    #[error("triple ({i}, {j}, {k}) violates the ultrametric condition")]
    UltrametricViolation { i: usize, j: usize, k: usize },
    #[error("subset of size {size} is too small, need at least 2 vertices")]
    SubsetTooSmall { size: usize },
    #[error("vertex {vertex} repeated in subset")]
    RepeatedVertex { vertex: usize },
    #[error("not an embedding: {reason}")]
    NotAnEmbedding { reason: String },
    #[error("pair ({i}, {j}) has weight {available}, cannot subtract {requested}")]
    WeightUnderflow {
        i: usize,
        j: usize,
        available: Weight,
        requested: Weight,
    },
    #[error("residual component on vertices {vertices:?} is not a dual graph: {source}")]
    InvalidComponent {
        vertices: Vec<usize>,
        source: Box<GraphError>,
    },
    #[error("edge entries must have i < j, got ({i}, {j})")]
    UnorderedPair { i: usize, j: usize },
    #[error("weight {weight} is too large")]
    WeightTooLarge { weight: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("malformed level tree key at byte {position}: {reason}")]
    Syntax { position: usize, reason: String },
    #[error("internal node at level {level} has fewer than two children")]
    Unary { level: Weight },
    #[error("level {child} does not exceed parent level {parent}")]
    NonIncreasing { parent: Weight, child: Weight },
    #[error("levels must be at least 1")]
    ZeroLevel,
    #[error("a single leaf is a smooth germ, not a singularity")]
    SingleLeaf,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("{name} has a singular branch")]
    SingularBranchType { name: String },
    #[error("unknown type name {name:?}")]
    UnknownName { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("delta mismatch: source has {source_delta}, targets sum to {target_delta}")]
    DeltaMismatch { source_delta: u64, target_delta: u64 },
    #[error("invalid hint: {reason}")]
    InvalidHint { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmpError {
    #[error("no arrangement: {p} lines with multiple points {parts:?} fail the criterion")]
    CriterionFailed { p: u32, parts: Vec<u32> },
}
