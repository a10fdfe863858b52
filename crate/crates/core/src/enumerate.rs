//! Enumeration of all types with a given delta invariant.

use std::collections::HashMap;

use crate::graph::Weight;
use crate::tree::{LevelTree, SingularityType};

#[derive(Clone)]
struct Sized {
    tree: LevelTree,
    delta: u64,
    leaves: u64,
}

/// All trees (including the single leaf) whose root level is at least
/// `min_level` and whose delta is at most `budget`.
struct Generator {
    memo: HashMap<(u64, u64), Vec<Sized>>,
}

impl Generator {
    fn trees(&mut self, min_level: u64, budget: u64) -> Vec<Sized> {
        if let Some(v) = self.memo.get(&(min_level, budget)) {
            return v.clone();
        }
        let mut out = vec![Sized {
            tree: LevelTree::Leaf,
            delta: 0,
            leaves: 1,
        }];
        for level in min_level..=budget {
            let candidates = self.trees(level + 1, budget);
            let mut chosen = Vec::new();
            extend(&candidates, 0, level, 0, 0, budget, &mut chosen, &mut out);
        }
        self.memo.insert((min_level, budget), out.clone());
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    candidates: &[Sized],
    from: usize,
    level: u64,
    delta: u64,
    leaves: u64,
    budget: u64,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Sized>,
) {
    if chosen.len() >= 2 {
        out.push(Sized {
            tree: LevelTree::Node {
                level: level as Weight,
                children: chosen.iter().map(|&i| candidates[i].tree.clone()).collect(),
            },
            delta,
            leaves,
        });
    }
    for i in from..candidates.len() {
        let c = &candidates[i];
        let next = delta + c.delta + level * leaves * c.leaves;
        if next > budget {
            continue;
        }
        chosen.push(i);
        extend(candidates, i, level, next, leaves + c.leaves, budget, chosen, out);
        chosen.pop();
    }
}

/// Every isomorphism class of dual graph with delta `n`, sorted by branch
/// count and then by canonical key.
pub fn enumerate_types_with_delta(n: u64) -> Vec<SingularityType> {
    types_up_to(n).into_iter().filter(|t| t.delta() == n).collect()
}

/// Every type with delta between 1 and `n`, sorted by branch count and key.
pub fn types_up_to(n: u64) -> Vec<SingularityType> {
    if n == 0 {
        return Vec::new();
    }
    let mut generator = Generator {
        memo: HashMap::new(),
    };
    let mut types: Vec<SingularityType> = generator
        .trees(1, n)
        .into_iter()
        .filter(|s| s.delta >= 1 && matches!(s.tree, LevelTree::Node { .. }))
        .map(|s| SingularityType::from_tree(&s.tree).expect("generated trees are valid"))
        .collect();
    types.sort_by(|a, b| (a.branches(), a.key()).cmp(&(b.branches(), b.key())));
    types.dedup();
    types
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: u64) -> Vec<String> {
        enumerate_types_with_delta(n).iter().map(|t| t.label()).collect()
    }

    #[test]
    fn small_deltas() {
        assert!(labels(0).is_empty());
        assert_eq!(labels(1), ["A_1"]);
        assert_eq!(labels(2), ["A_3"]);
        assert_eq!(labels(3), ["A_5", "D_4"]);
        assert_eq!(labels(6), ["A_11", "D_10", "J_10", "X_9"]);
        assert_eq!(labels(7), ["A_13", "D_12", "J_{2,2}", "X_{1,2}"]);
    }

    #[test]
    fn delta_ten_includes_k5() {
        let all = labels(10);
        assert!(all.contains(&"K_5".to_string()));
        assert!(all.contains(&"A_19".to_string()));
    }
}
