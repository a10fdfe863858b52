//! Backtracking search for decompositions.
//!
//! Targets are placed one after another (largest delta first), each vertex by
//! vertex in the canonical leaf order of its level tree. The search keeps the
//! residual weight of every source pair and never lets it go negative.
//!
//! Symmetry is broken by accepting only placements that are lexicographically
//! minimal under the symmetries that are cheap to describe:
//!
//! * swapping two identical consecutive sibling subtrees of a target: the
//!   first leaf of the earlier one must land on a smaller source vertex;
//! * swapping two identical consecutive targets: their image tuples must be
//!   non-decreasing;
//! * swapping two identical consecutive sibling subtrees `X`, `Y` of the
//!   source: the first source vertex of `X ∪ Y` used by any placement must
//!   lie in `X`.
//!
//! The first two act on positions and the last on values, so all three hold
//! simultaneously for the lexicographically least witness in any orbit.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::functionals;
use super::witness::{verify_witness, DecompositionWitness, WitnessComponent};
use crate::error::DecompositionError;
use crate::graph::{DualGraph, Weight};
use crate::tree::{LevelTree, SingularityType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub wall_clock_ms: Option<u64>,
}

impl SearchBudget {
    pub const DEFAULT_NODES: u64 = 10_000_000;

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            wall_clock_ms: None,
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::nodes(Self::DEFAULT_NODES)
    }
}

/// Running consumption of a [`SearchBudget`], shareable across several
/// searches.
#[derive(Debug, Clone)]
pub struct Meter {
    budget: SearchBudget,
    used: u64,
    deadline: Option<Instant>,
    exceeded: bool,
}

impl Meter {
    pub fn new(budget: SearchBudget) -> Self {
        Meter {
            budget,
            used: 0,
            deadline: budget
                .wall_clock_ms
                .map(|ms| Instant::now() + Duration::from_millis(ms)),
            exceeded: false,
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn exceeded(&self) -> bool {
        self.exceeded
    }

    #[inline]
    fn tick(&mut self) -> bool {
        self.used += 1;
        if self.used > self.budget.max_nodes {
            self.exceeded = true;
        } else if self.used % 4096 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.exceeded = true;
                }
            }
        }
        !self.exceeded
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Witness(DecompositionWitness),
    NoDecomposition,
    BudgetExceeded,
}

/// Decides whether `targets` decompose `source`.
///
/// With a hint, only the hint is checked.
pub fn decompose_check(
    source: &SingularityType,
    targets: &[SingularityType],
    budget: SearchBudget,
    hint: Option<&DecompositionWitness>,
) -> Result<SearchOutcome, DecompositionError> {
    decompose_with_meter(source, targets, &mut Meter::new(budget), hint)
}

pub(crate) fn decompose_with_meter(
    source: &SingularityType,
    targets: &[SingularityType],
    meter: &mut Meter,
    hint: Option<&DecompositionWitness>,
) -> Result<SearchOutcome, DecompositionError> {
    let source_delta = source.delta();
    let target_delta: u64 = targets.iter().map(SingularityType::delta).sum();
    if source_delta != target_delta {
        return Err(DecompositionError::DeltaMismatch {
            source_delta,
            target_delta,
        });
    }
    if let Some(hint) = hint {
        let mut want: Vec<&str> = targets.iter().map(SingularityType::key).collect();
        let mut got: Vec<&str> = hint.components.iter().map(|c| c.target.key()).collect();
        want.sort_unstable();
        got.sort_unstable();
        if want != got {
            return Err(DecompositionError::InvalidHint {
                reason: "hint components do not match the targets".into(),
            });
        }
        return match verify_witness(source.graph(), hint) {
            Ok(()) => Ok(SearchOutcome::Witness(hint.clone())),
            Err(e) => Err(DecompositionError::InvalidHint {
                reason: e.to_string(),
            }),
        };
    }
    if !quick_feasible(source.graph(), targets) {
        return Ok(SearchOutcome::NoDecomposition);
    }
    let mut search = Search::new(source, targets, meter);
    Ok(match search.run() {
        Some(true) => SearchOutcome::Witness(search.witness()),
        Some(false) => SearchOutcome::NoDecomposition,
        None => SearchOutcome::BudgetExceeded,
    })
}

/// Necessary conditions that do not need a search.
fn quick_feasible(source: &DualGraph, targets: &[SingularityType]) -> bool {
    let r = source.branches();
    let pairs = |n: usize| n * (n - 1) / 2;
    if targets.iter().any(|t| t.branches() > r || t.graph().max_weight() > source.max_weight()) {
        return false;
    }
    if pairs(r) > targets.iter().map(|t| pairs(t.branches())).sum() {
        return false;
    }
    let graphs: Vec<&DualGraph> = targets.iter().map(SingularityType::graph).collect();
    !functionals::all_checks(source, &graphs).iter().any(|c| c.violated)
}

struct Part {
    ty: SingularityType,
    degree: Vec<u64>,
    /// For the first leaf of a subtree with an identical preceding sibling,
    /// the first leaf of that sibling.
    sibling_before: Vec<Option<usize>>,
    same_as_previous: bool,
    pairs: u64,
    max_weight: Weight,
}

struct Search<'m> {
    n: usize,
    source: DualGraph,
    residual: Vec<Weight>,
    residual_degree: Vec<u64>,
    use_count: Vec<u32>,
    /// For a source vertex in `Y`, the ranges `X` that must be used first.
    must_follow: Vec<Vec<(usize, usize)>>,
    parts: Vec<Part>,
    images: Vec<Vec<usize>>,
    /// Suffix sums over parts: remaining pair count and weight capacity.
    pairs_after: Vec<u64>,
    weight_after: Vec<u64>,
    meter: &'m mut Meter,
}

/// First-leaf positions and leaf counts of every subtree, in DFS order.
fn sibling_pairs(tree: &LevelTree, start: usize, out: &mut Vec<((usize, usize), (usize, usize))>) {
    if let LevelTree::Node { children, .. } = tree {
        let mut offset = start;
        let mut prev: Option<(&LevelTree, usize, usize)> = None;
        for c in children {
            let len = c.leaves();
            if let Some((p, ps, pl)) = prev {
                if p == c {
                    out.push(((ps, ps + pl), (offset, offset + len)));
                }
            }
            sibling_pairs(c, offset, out);
            prev = Some((c, offset, len));
            offset += len;
        }
    }
}

impl<'m> Search<'m> {
    fn new(source: &SingularityType, targets: &[SingularityType], meter: &'m mut Meter) -> Self {
        let g = source.graph().clone();
        let n = g.branches();
        let mut residual = vec![0; n * n];
        for (i, j, w) in g.edges() {
            residual[i * n + j] = w;
            residual[j * n + i] = w;
        }
        let residual_degree = (0..n).map(|v| g.weighted_degree(v)).collect();

        let mut must_follow = vec![Vec::new(); n];
        let mut pairs = Vec::new();
        sibling_pairs(source.tree(), 0, &mut pairs);
        for (x, y) in pairs {
            for v in y.0..y.1 {
                must_follow[v].push(x);
            }
        }

        let mut sorted: Vec<SingularityType> = targets.to_vec();
        sorted.sort_by(|a, b| {
            b.delta()
                .cmp(&a.delta())
                .then(b.branches().cmp(&a.branches()))
                .then(a.key().cmp(b.key()))
        });
        let mut parts: Vec<Part> = Vec::with_capacity(sorted.len());
        for ty in sorted {
            let tg = ty.graph();
            let r = tg.branches();
            let mut sibling_before = vec![None; r];
            let mut sib = Vec::new();
            sibling_pairs(ty.tree(), 0, &mut sib);
            for (x, y) in sib {
                sibling_before[y.0] = Some(x.0);
            }
            let same_as_previous = parts.last().is_some_and(|p| p.ty == ty);
            parts.push(Part {
                degree: (0..r).map(|v| tg.weighted_degree(v)).collect(),
                sibling_before,
                same_as_previous,
                pairs: (r * (r - 1) / 2) as u64,
                max_weight: tg.max_weight(),
                ty,
            });
        }
        let mut pairs_after = vec![0; parts.len() + 1];
        let mut weight_after = vec![0; parts.len() + 1];
        for i in (0..parts.len()).rev() {
            pairs_after[i] = pairs_after[i + 1] + parts[i].pairs;
            weight_after[i] = weight_after[i + 1] + u64::from(parts[i].max_weight);
        }
        let images = parts.iter().map(|p| Vec::with_capacity(p.ty.branches())).collect();
        Search {
            n,
            source: g,
            residual,
            residual_degree,
            use_count: vec![0; n],
            must_follow,
            parts,
            images,
            pairs_after,
            weight_after,
            meter,
        }
    }

    /// `Some(found)`, or `None` when the budget ran out.
    fn run(&mut self) -> Option<bool> {
        let found = self.place(0, 0);
        if self.meter.exceeded() {
            return if found { Some(true) } else { None };
        }
        Some(found)
    }

    fn witness(&self) -> DecompositionWitness {
        let w = DecompositionWitness {
            components: self
                .parts
                .iter()
                .zip(&self.images)
                .map(|(p, img)| WitnessComponent {
                    target: p.ty.clone(),
                    map: img.clone(),
                })
                .collect(),
        };
        debug_assert_eq!(verify_witness(&self.source, &w), Ok(()));
        w
    }

    fn residual_ok(&self, next: usize) -> bool {
        let remaining_pairs = self.pairs_after[next];
        let remaining_weight = self.weight_after[next];
        let mut positive = 0u64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let w = self.residual[i * self.n + j];
                if w > 0 {
                    positive += 1;
                    if u64::from(w) > remaining_weight || positive > remaining_pairs {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn place(&mut self, pi: usize, vi: usize) -> bool {
        if pi == self.parts.len() {
            return true;
        }
        if vi == self.parts[pi].ty.branches() {
            if !self.residual_ok(pi + 1) {
                return false;
            }
            return self.place(pi + 1, 0);
        }
        let n = self.n;
        let lower = self.lower_bound(pi, vi);
        for x in lower..n {
            if !self.admissible(pi, vi, x) {
                continue;
            }
            if !self.meter.tick() {
                return false;
            }
            self.apply(pi, vi, x);
            if self.place(pi, vi + 1) {
                return true;
            }
            self.undo(pi, vi, x);
            if self.meter.exceeded() {
                return false;
            }
        }
        false
    }

    fn lower_bound(&self, pi: usize, vi: usize) -> usize {
        let part = &self.parts[pi];
        let mut lower = 0;
        if let Some(a) = part.sibling_before[vi] {
            lower = self.images[pi][a] + 1;
        }
        if part.same_as_previous {
            let prev = &self.images[pi - 1];
            if self.images[pi][..vi] == prev[..vi] {
                lower = lower.max(prev[vi]);
            }
        }
        lower
    }

    fn admissible(&self, pi: usize, vi: usize, x: usize) -> bool {
        let part = &self.parts[pi];
        let img = &self.images[pi];
        if img.contains(&x) || self.residual_degree[x] < part.degree[vi] {
            return false;
        }
        for &(a, b) in &self.must_follow[x] {
            if self.use_count[a..b].iter().all(|&c| c == 0) {
                return false;
            }
        }
        let tg = part.ty.graph();
        img.iter()
            .enumerate()
            .all(|(u, &y)| self.residual[y * self.n + x] >= tg.weight(u, vi))
    }

    fn apply(&mut self, pi: usize, vi: usize, x: usize) {
        let n = self.n;
        let tg = self.parts[pi].ty.graph();
        for (u, &y) in self.images[pi].iter().enumerate() {
            let w = tg.weight(u, vi);
            self.residual[y * n + x] -= w;
            self.residual[x * n + y] -= w;
            self.residual_degree[x] -= u64::from(w);
            self.residual_degree[y] -= u64::from(w);
        }
        self.use_count[x] += 1;
        self.images[pi].push(x);
    }

    fn undo(&mut self, pi: usize, vi: usize, x: usize) {
        let n = self.n;
        self.images[pi].pop();
        self.use_count[x] -= 1;
        let tg = self.parts[pi].ty.graph();
        for (u, &y) in self.images[pi].iter().enumerate() {
            let w = tg.weight(u, vi);
            self.residual[y * n + x] += w;
            self.residual[x * n + y] += w;
            self.residual_degree[x] += u64::from(w);
            self.residual_degree[y] += u64::from(w);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{a_odd, j10, kpk, ordinary};
    use crate::tree::canonical_form;

    fn check(source: &SingularityType, targets: &[SingularityType]) -> SearchOutcome {
        decompose_check(source, targets, SearchBudget::default(), None).unwrap()
    }

    #[test]
    fn k4_is_not_two_triangles() {
        let k3 = ordinary(3);
        assert_eq!(check(&ordinary(4), &[k3.clone(), k3]), SearchOutcome::NoDecomposition);
    }

    #[test]
    fn addition_example() {
        let src = canonical_form(&DualGraph::triangle(2, 2, 4).unwrap());
        let out = check(&src, &[j10(), a_odd(2)]);
        let SearchOutcome::Witness(w) = out else {
            panic!("expected a witness, got {out:?}")
        };
        assert_eq!(verify_witness(src.graph(), &w), Ok(()));
    }

    #[test]
    fn three_triangles_and_three_edges() {
        let k3 = ordinary(3);
        let a1 = a_odd(1);
        let targets = [k3.clone(), k3.clone(), k3, a1.clone(), a1.clone(), a1];
        let out = check(&kpk(4, 2), &targets);
        assert!(matches!(out, SearchOutcome::Witness(_)), "{out:?}");
    }

    #[test]
    fn fano_plane() {
        let targets = vec![ordinary(3); 7];
        assert!(matches!(check(&ordinary(7), &targets), SearchOutcome::Witness(_)));
    }

    #[test]
    fn delta_mismatch_is_an_error() {
        assert!(matches!(
            decompose_check(&ordinary(3), &[a_odd(1), a_odd(1)], SearchBudget::default(), None),
            Err(DecompositionError::DeltaMismatch { source_delta: 3, target_delta: 2 })
        ));
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let targets = vec![ordinary(3); 7];
        let out = decompose_check(&ordinary(7), &targets, SearchBudget::nodes(3), None).unwrap();
        assert_eq!(out, SearchOutcome::BudgetExceeded);
    }

    #[test]
    fn hints_are_verified_not_searched() {
        let src = ordinary(3);
        let targets = vec![a_odd(1); 3];
        let good = DecompositionWitness {
            components: vec![
                WitnessComponent { target: a_odd(1), map: vec![0, 1] },
                WitnessComponent { target: a_odd(1), map: vec![0, 2] },
                WitnessComponent { target: a_odd(1), map: vec![1, 2] },
            ],
        };
        let out = decompose_check(&src, &targets, SearchBudget::nodes(0), Some(&good)).unwrap();
        assert_eq!(out, SearchOutcome::Witness(good.clone()));

        let mut bad = good;
        bad.components[2].map = vec![0, 1];
        assert!(matches!(
            decompose_check(&src, &targets, SearchBudget::default(), Some(&bad)),
            Err(DecompositionError::InvalidHint { .. })
        ));
    }
}
