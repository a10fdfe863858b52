use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::DualGraph;
use crate::tree::SingularityType;

/// One target placed on the source: vertex `v` of `target.graph()` goes to
/// vertex `map[v]` of the source graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessComponent {
    pub target: SingularityType,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub components: Vec<WitnessComponent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("component {index}: map has {got} entries, type has {expected} branches")]
    MapLength {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("component {index}: vertex {vertex} outside the source")]
    OutOfRange { index: usize, vertex: usize },
    #[error("component {index}: vertex {vertex} used twice")]
    NotInjective { index: usize, vertex: usize },
    #[error("pair ({i}, {j}): covered weight {covered}, source weight {expected}")]
    WeightMismatch {
        i: usize,
        j: usize,
        covered: u64,
        expected: u64,
    },
    #[error("vertex {vertex} is not hit by any component")]
    Uncovered { vertex: usize },
    #[error("component {index}: {reason}")]
    BadType { index: usize, reason: String },
}

impl DecompositionWitness {
    pub fn targets(&self) -> Vec<SingularityType> {
        self.components.iter().map(|c| c.target.clone()).collect()
    }

    pub fn to_file(&self) -> WitnessFile {
        WitnessFile {
            components: self
                .components
                .iter()
                .map(|c| WitnessFileComponent {
                    r#type: c.target.label(),
                    key: Some(c.target.key().to_string()),
                    map: c.map.clone(),
                })
                .collect(),
        }
    }
}

/// Serialized witness: `{"components": [{"type": ..., "map": [...]}, ...]}`.
/// `type` is a registry name or a level-tree key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub components: Vec<WitnessFileComponent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFileComponent {
    pub r#type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<String>,
    pub map: Vec<usize>,
}

impl WitnessFile {
    /// Resolves the type of every component. A `key`, when present, must be
    /// the canonical key of `type`.
    pub fn into_witness(self) -> Result<DecompositionWitness, WitnessError> {
        let components = self
            .components
            .into_iter()
            .enumerate()
            .map(|(index, c)| {
                let bad = |reason: String| WitnessError::BadType { index, reason };
                let target = crate::expr::parse_type(&c.r#type).map_err(|e| bad(e.to_string()))?;
                if let Some(k) = &c.key {
                    if k != target.key() {
                        return Err(bad(format!("key {k} does not match {}", target.key())));
                    }
                }
                Ok(WitnessComponent { target, map: c.map })
            })
            .collect::<Result<_, _>>()?;
        Ok(DecompositionWitness { components })
    }
}

impl Serialize for DecompositionWitness {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(serializer)
    }
}

/// Checks a witness by summing weights pair by pair.
pub fn verify_witness(source: &DualGraph, witness: &DecompositionWitness) -> Result<(), WitnessError> {
    let n = source.branches();
    let mut covered = vec![0u64; n * n];
    let mut hit = vec![false; n];
    for (index, c) in witness.components.iter().enumerate() {
        let g = c.target.graph();
        if c.map.len() != g.branches() {
            return Err(WitnessError::MapLength {
                index,
                got: c.map.len(),
                expected: g.branches(),
            });
        }
        let mut seen = vec![false; n];
        for &v in &c.map {
            if v >= n {
                return Err(WitnessError::OutOfRange { index, vertex: v });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(WitnessError::NotInjective { index, vertex: v });
            }
            hit[v] = true;
        }
        for (a, b, w) in g.edges() {
            let (x, y) = (c.map[a], c.map[b]);
            covered[x * n + y] += u64::from(w);
            covered[y * n + x] += u64::from(w);
        }
    }
    for (i, j, w) in source.edges() {
        if covered[i * n + j] != u64::from(w) {
            return Err(WitnessError::WeightMismatch {
                i,
                j,
                covered: covered[i * n + j],
                expected: u64::from(w),
            });
        }
    }
    if let Some(vertex) = hit.iter().position(|&h| !h) {
        return Err(WitnessError::Uncovered { vertex });
    }
    Ok(())
}
