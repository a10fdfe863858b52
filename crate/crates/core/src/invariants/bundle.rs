use serde::Serialize;

use super::tau::tau_es;
use crate::tree::SingularityType;

/// Numerical invariants of a type with smooth branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvariantBundle {
    pub r: u64,
    pub mult: u64,
    pub delta: u64,
    pub mu: u64,
    pub kappa: u64,
    pub tau_es: Option<u64>,
}

impl InvariantBundle {
    pub fn mu_minus_delta(&self) -> u64 {
        self.mu - self.delta
    }
}

pub fn basic_invariants(t: &SingularityType) -> InvariantBundle {
    let r = t.branches() as u64;
    let delta = t.delta();
    // the graph is connected, so delta >= r - 1 and mu >= 1
    let mu = 2 * delta + 1 - r;
    InvariantBundle {
        r,
        mult: r,
        delta,
        mu,
        kappa: 2 * delta,
        tau_es: tau_es(t),
    }
}
