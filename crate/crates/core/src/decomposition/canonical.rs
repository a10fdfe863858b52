use std::collections::BTreeMap;

use crate::enumerate::enumerate_types_with_delta;
use crate::graph::DualGraph;
use crate::registry;
use crate::tree::SingularityType;

/// `p -> n_p`: the multiset `Σ n_p K_p` of ordinary points (`K_2 = A_1`).
pub type OmpMultiset = BTreeMap<usize, u64>;

/// Repeatedly subtracts `w_min · K_r` from every component until nothing is
/// left; each subtracted `w · K_p` contributes `w` copies of `K_p`.
pub fn canonical_omp_decomposition(source: &SingularityType) -> OmpMultiset {
    fn peel(g: &DualGraph, out: &mut OmpMultiset) {
        let w = g.min_weight();
        *out.entry(g.branches()).or_insert(0) += u64::from(w);
        let flat = DualGraph::uniform(g.branches(), w).expect("positive weight");
        let identity: Vec<usize> = (0..g.branches()).collect();
        let rest = g
            .subtract(&flat, &identity)
            .expect("removing the minimal weight leaves disjoint cliques");
        for c in rest {
            peel(&c.graph, out);
        }
    }
    let mut out = OmpMultiset::new();
    peel(source.graph(), &mut out);
    out
}

/// Expands an [`OmpMultiset`] into a list of types, largest first.
pub fn omp_targets(m: &OmpMultiset) -> Vec<SingularityType> {
    m.iter()
        .rev()
        .flat_map(|(&p, &n)| std::iter::repeat(registry::ordinary(p)).take(n as usize))
        .collect()
}

/// Every type that a collision of `n` nodes can produce: since every dual
/// graph splits into its edges of unit weight, these are exactly the types
/// with delta `n`.
pub fn collide_nodes(n: u64) -> Vec<SingularityType> {
    enumerate_types_with_delta(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{kpk, ordinary};
    use crate::tree::canonical_form;

    #[test]
    fn examples() {
        let t = canonical_form(&DualGraph::triangle(2, 2, 4).unwrap());
        assert_eq!(canonical_omp_decomposition(&t), OmpMultiset::from([(2, 2), (3, 2)]));
        for p in 1..=5 {
            assert_eq!(canonical_omp_decomposition(&kpk(4, p)), OmpMultiset::from([(4, u64::from(p))]));
        }
        assert_eq!(canonical_omp_decomposition(&ordinary(6)), OmpMultiset::from([(6, 1)]));
    }

    #[test]
    fn delta_is_preserved() {
        for t in crate::enumerate::types_up_to(8) {
            let m = canonical_omp_decomposition(&t);
            let d: u64 = m.iter().map(|(&p, &n)| n * (p * (p - 1) / 2) as u64).sum();
            assert_eq!(d, t.delta());
        }
    }

    #[test]
    fn node_lists() {
        let names = |n| collide_nodes(n).iter().map(|t| t.label()).collect::<Vec<_>>();
        assert_eq!(names(2), ["A_3"]);
        assert_eq!(names(5), ["A_9", "D_8"]);
    }
}
