//! Splitting an ordinary `p`-fold point into ordinary points via line
//! arrangements.

use serde::{Deserialize, Serialize};

use super::witness::{DecompositionWitness, WitnessComponent};
use crate::error::OmpError;
use crate::registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OmpVerdict {
    Possible,
    Impossible,
    NotApplicable,
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Can `K_p` split into `K_{p_1}, ..., K_{p_k}` plus nodes?
///
/// When every `p_i >= max(k-1, 3)` this holds exactly when
/// `p + C(k,2) >= Σ p_i`. Other part lists are outside the criterion.
pub fn omp_criterion(p: u32, parts: &[u32]) -> OmpVerdict {
    assert!(p >= 2 && !parts.is_empty());
    let total: u64 = parts.iter().map(|&q| choose2(u64::from(q))).sum();
    if total > choose2(u64::from(p)) {
        return OmpVerdict::Impossible;
    }
    let k = parts.len() as u64;
    let floor = (k.saturating_sub(1)).max(3);
    if parts.iter().any(|&q| u64::from(q) < floor) {
        return OmpVerdict::NotApplicable;
    }
    let sum: u64 = parts.iter().map(|&q| u64::from(q)).sum();
    if u64::from(p) + choose2(k) >= sum {
        OmpVerdict::Possible
    } else {
        OmpVerdict::Impossible
    }
}

/// A point of an arrangement together with the lines through it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidencePoint {
    pub lines: Vec<u32>,
}

/// Combinatorial line arrangement: lines `1..=lines` and the points where at
/// least two of them meet. Every pair of lines meets at exactly one listed
/// point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementIncidence {
    pub lines: u32,
    pub points: Vec<IncidencePoint>,
}

impl ArrangementIncidence {
    /// Number of points of each multiplicity, `m -> n_m`.
    pub fn multiplicities(&self) -> std::collections::BTreeMap<usize, u64> {
        let mut out = std::collections::BTreeMap::new();
        for pt in &self.points {
            *out.entry(pt.lines.len()).or_insert(0) += 1;
        }
        out
    }

    pub fn nodes(&self) -> u64 {
        self.points.iter().filter(|p| p.lines.len() == 2).count() as u64
    }

    /// Checks that line ids are in range and that every pair of lines shares
    /// exactly one point.
    pub fn check(&self) -> Result<(), String> {
        let l = self.lines as usize;
        let mut meet = vec![0u32; l * l];
        for (idx, pt) in self.points.iter().enumerate() {
            if pt.lines.len() < 2 {
                return Err(format!("point {idx} lies on fewer than two lines"));
            }
            for (a, &x) in pt.lines.iter().enumerate() {
                if x == 0 || x > self.lines {
                    return Err(format!("point {idx}: line {x} out of range"));
                }
                for &y in &pt.lines[a + 1..] {
                    let (i, j) = ((x - 1) as usize, (y - 1) as usize);
                    if i == j {
                        return Err(format!("point {idx}: line {x} repeated"));
                    }
                    meet[i * l + j] += 1;
                    meet[j * l + i] += 1;
                }
            }
        }
        for i in 0..l {
            for j in i + 1..l {
                if meet[i * l + j] != 1 {
                    return Err(format!(
                        "lines {} and {} share {} points",
                        i + 1,
                        j + 1,
                        meet[i * l + j]
                    ));
                }
            }
        }
        Ok(())
    }

    /// The decomposition of `K_lines` read off the arrangement: one ordinary
    /// point per marked point, on the lines through it.
    pub fn to_witness(&self) -> DecompositionWitness {
        DecompositionWitness {
            components: self
                .points
                .iter()
                .map(|pt| WitnessComponent {
                    target: registry::ordinary(pt.lines.len()),
                    map: pt.lines.iter().map(|&x| (x - 1) as usize).collect(),
                })
                .collect(),
        }
    }
}

/// Builds an arrangement of `p` lines with points of multiplicities `parts`
/// and only nodes otherwise.
///
/// Start from `k` base points in general position joined pairwise by
/// `C(k,2)` lines, add `p_i - (k-1)` further lines through the `i`-th base
/// point and `p - Σ p_i + C(k,2)` lines in general position. All remaining
/// intersections are nodes.
pub fn construct_omp_witness(p: u32, parts: &[u32]) -> Result<ArrangementIncidence, OmpError> {
    if omp_criterion(p, parts) != OmpVerdict::Possible {
        return Err(OmpError::CriterionFailed {
            p,
            parts: parts.to_vec(),
        });
    }
    let k = parts.len();
    let mut through: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut next = 1u32;
    for i in 0..k {
        for j in i + 1..k {
            through[i].push(next);
            through[j].push(next);
            next += 1;
        }
    }
    for (i, &q) in parts.iter().enumerate() {
        for _ in 0..(q as usize + 1 - k) {
            through[i].push(next);
            next += 1;
        }
    }
    let lines = p;
    debug_assert!(next - 1 <= lines);

    let l = lines as usize;
    let mut covered = vec![false; l * l];
    let mut points = Vec::new();
    for mut on in through {
        on.sort_unstable();
        for (a, &x) in on.iter().enumerate() {
            for &y in &on[a + 1..] {
                covered[(x as usize - 1) * l + (y as usize - 1)] = true;
            }
        }
        points.push(IncidencePoint { lines: on });
    }
    for x in 1..=lines {
        for y in x + 1..=lines {
            if !covered[(x as usize - 1) * l + (y as usize - 1)] {
                points.push(IncidencePoint { lines: vec![x, y] });
            }
        }
    }
    let arrangement = ArrangementIncidence { lines, points };
    debug_assert_eq!(arrangement.check(), Ok(()));
    Ok(arrangement)
}
