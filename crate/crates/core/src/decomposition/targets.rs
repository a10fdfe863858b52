use std::cmp::Ordering;

use super::search::{decompose_with_meter, Meter, SearchBudget, SearchOutcome};
use super::witness::DecompositionWitness;
use crate::enumerate::types_up_to;
use crate::graph::DualGraph;
use crate::tree::SingularityType;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetEntry {
    pub targets: Vec<SingularityType>,
    pub witness: DecompositionWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetEnumeration {
    pub entries: Vec<TargetEntry>,
    /// False when the budget ran out; `entries` is then a prefix.
    pub complete: bool,
}

/// Whether `small` maps injectively into `big` with no weight increasing.
pub(crate) fn weight_embeds(small: &DualGraph, big: &DualGraph) -> bool {
    fn go(small: &DualGraph, big: &DualGraph, map: &mut Vec<usize>) -> bool {
        let v = map.len();
        if v == small.branches() {
            return true;
        }
        for x in 0..big.branches() {
            if map.contains(&x) {
                continue;
            }
            if map
                .iter()
                .enumerate()
                .all(|(u, &y)| small.weight(u, v) <= big.weight(y, x))
            {
                map.push(x);
                if go(small, big, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    small.branches() <= big.branches() && go(small, big, &mut Vec::new())
}

fn search_order(a: &SingularityType, b: &SingularityType) -> Ordering {
    b.delta()
        .cmp(&a.delta())
        .then(b.branches().cmp(&a.branches()))
        .then(a.key().cmp(b.key()))
}

/// Every multiset of at least two types that decomposes `source`, each with a
/// witness.
pub fn enumerate_decomposition_targets(source: &SingularityType, budget: SearchBudget) -> TargetEnumeration {
    let delta = source.delta();
    let mut candidates: Vec<SingularityType> = types_up_to(delta - 1)
        .into_iter()
        .filter(|t| weight_embeds(t.graph(), source.graph()))
        .collect();
    candidates.sort_by(search_order);

    let mut meter = Meter::new(budget);
    let mut entries = Vec::new();
    let mut complete = true;
    let mut chosen = Vec::new();
    visit(
        &candidates,
        0,
        delta,
        source,
        &mut chosen,
        &mut meter,
        &mut entries,
        &mut complete,
    );
    entries.sort_by(|a: &TargetEntry, b: &TargetEntry| {
        a.targets.len().cmp(&b.targets.len()).then_with(|| {
            let ka = a.targets.iter().map(|t| t.key());
            let kb = b.targets.iter().map(|t| t.key());
            ka.cmp(kb)
        })
    });
    TargetEnumeration { entries, complete }
}

#[allow(clippy::too_many_arguments)]
fn visit(
    candidates: &[SingularityType],
    from: usize,
    remaining: u64,
    source: &SingularityType,
    chosen: &mut Vec<usize>,
    meter: &mut Meter,
    entries: &mut Vec<TargetEntry>,
    complete: &mut bool,
) {
    if !*complete {
        return;
    }
    if remaining == 0 {
        let targets: Vec<SingularityType> = chosen.iter().map(|&i| candidates[i].clone()).collect();
        match decompose_with_meter(source, &targets, meter, None) {
            Ok(SearchOutcome::Witness(witness)) => entries.push(TargetEntry { targets, witness }),
            Ok(SearchOutcome::NoDecomposition) => {}
            Ok(SearchOutcome::BudgetExceeded) => *complete = false,
            Err(e) => unreachable!("delta is balanced by construction: {e}"),
        }
        return;
    }
    for i in from..candidates.len() {
        let d = candidates[i].delta();
        if d > remaining {
            continue;
        }
        chosen.push(i);
        visit(candidates, i, remaining - d, source, chosen, meter, entries, complete);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{a_odd, d_even, make_named_type, ordinary};

    fn labels(t: &SingularityType) -> Vec<Vec<String>> {
        let e = enumerate_decomposition_targets(t, SearchBudget::default());
        assert!(e.complete);
        e.entries
            .iter()
            .map(|x| x.targets.iter().map(|t| t.label()).collect())
            .collect()
    }

    #[test]
    fn small_sources() {
        assert_eq!(labels(&ordinary(3)), vec![vec!["A_1"; 3]]);
        assert_eq!(labels(&a_odd(2)), vec![vec!["A_1"; 2]]);
        let d6 = labels(&d_even(2));
        assert_eq!(d6.len(), 3);
        assert!(d6.contains(&vec!["D_4".to_string(), "A_1".to_string()]));
        assert!(d6.contains(&vec!["A_3".to_string(), "A_1".to_string(), "A_1".to_string()]));
        assert!(d6.contains(&vec!["A_1".to_string(); 4]));
    }

    #[test]
    fn embedding_test() {
        let x12 = make_named_type("X12").unwrap();
        assert!(weight_embeds(ordinary(3).graph(), x12.graph()));
        assert!(weight_embeds(a_odd(2).graph(), x12.graph()));
        assert!(!weight_embeds(a_odd(3).graph(), x12.graph()));
        assert!(!weight_embeds(ordinary(5).graph(), x12.graph()));
    }
}
