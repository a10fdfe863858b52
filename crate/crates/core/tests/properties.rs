mod common;

use collidere_core::decomposition::{
    canonical_omp_decomposition, decompose_check, omp_targets, verify_witness, SearchBudget,
    SearchOutcome,
};
use collidere_core::enumerate::types_up_to;
use collidere_core::expr::{format_types, parse_expression};
use collidere_core::invariants::{
    basic_invariants, signature_from_spectrum, signature_steenbrink, spectrum, BrieskornModel,
};
use collidere_core::obstructions::rules::linear_checks;
use collidere_core::obstructions::{aggregate_verdict, DeformationProblem, RuleId, Status, Verdict};
use collidere_core::registry::ordinary;
use collidere_core::{canonical_form, DualGraph, SingularityType};
use common::level_tree;
use proptest::prelude::*;
use proptest::sample::select;

fn small_types() -> Vec<SingularityType> {
    types_up_to(7)
}

fn node_smoothing(t: &SingularityType) -> Vec<SingularityType> {
    vec![ordinary(2); t.delta() as usize]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn key_round_trip(tree in level_tree()) {
        let t = SingularityType::from_tree(&tree).unwrap();
        let back = SingularityType::parse_key(t.key()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(canonical_form(t.graph()).key().to_string(), t.key());
    }

    #[test]
    fn canonical_form_ignores_labels(
        (tree, perm) in level_tree().prop_flat_map(|t| {
            let n = t.leaves();
            (Just(t), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        })
    ) {
        let g = tree.to_graph().unwrap();
        let h = DualGraph::validate(g.branches(), g.edges().map(|(i, j, w)| (perm[i], perm[j], w))).unwrap();
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
    }

    #[test]
    fn invariants_follow_from_the_graph(tree in level_tree()) {
        let t = SingularityType::from_tree(&tree).unwrap();
        let inv = basic_invariants(&t);
        let weights: u64 = t.graph().edges().map(|(_, _, w)| u64::from(w)).sum();
        prop_assert_eq!(inv.delta, weights);
        prop_assert_eq!(inv.delta, tree.delta());
        prop_assert_eq!(inv.mu + inv.r, 2 * inv.delta + 1);
        prop_assert_eq!(inv.kappa, 2 * inv.delta);
    }

    #[test]
    fn signature_matches_spectrum(p in 2u32..=12, q in 2u32..=12) {
        let m = BrieskornModel::new(p, q);
        prop_assert_eq!(signature_from_spectrum(&spectrum(m)), signature_steenbrink(m));
        prop_assert_eq!(signature_steenbrink(m).mu(), m.mu());
    }

    #[test]
    fn expressions_round_trip(types in prop::collection::vec(select(small_types()), 1..6)) {
        let text = format_types(&types);
        let parsed = parse_expression(&text).unwrap();
        let mut a: Vec<String> = parsed.expand().iter().map(|t| t.key().to_string()).collect();
        let mut b: Vec<String> = types.iter().map(|t| t.key().to_string()).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        prop_assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn canonical_omp_decomposition_is_found_and_verifies(t in select(small_types())) {
        let targets = omp_targets(&canonical_omp_decomposition(&t));
        match decompose_check(&t, &targets, SearchBudget::default(), None).unwrap() {
            SearchOutcome::Witness(w) => prop_assert!(verify_witness(t.graph(), &w).is_ok()),
            other => prop_assert!(false, "{} -> {}: {:?}", t.label(), format_types(&targets), other),
        }
    }

    #[test]
    fn known_constructions_are_never_impossible(t in select(small_types())) {
        for targets in [omp_targets(&canonical_omp_decomposition(&t)), node_smoothing(&t)] {
            if targets.len() < 2 {
                continue;
            }
            let p = DeformationProblem::new(t.clone(), targets);
            let r = aggregate_verdict(&p, SearchBudget::default());
            prop_assert!(
                !matches!(r.verdict, Verdict::Impossible { .. }),
                "{}: {}", p, serde_json::to_string(&r.failed_rules()).unwrap()
            );
            prop_assert_eq!(r.verdict, Verdict::Possible, "{}", p);
        }
    }

    #[test]
    fn budget_exhaustion_never_forbids(
        t in select(small_types()),
        parts in prop::collection::vec(select(small_types()), 1..5),
    ) {
        let targets: Vec<SingularityType> = parts;
        let p = DeformationProblem::new(t, targets);
        let r = aggregate_verdict(&p, SearchBudget::nodes(1));
        if r.outcome(RuleId::DualGraph).status == Status::Skipped {
            prop_assert!(!r.failed_rules().contains(&RuleId::DualGraph));
        }
        let full = aggregate_verdict(&p, SearchBudget::default());
        if let Verdict::Impossible { rules } = &r.verdict {
            let kept = matches!(&full.verdict, Verdict::Impossible { rules: f } if rules.iter().all(|x| f.contains(x)));
            prop_assert!(kept);
        }
    }

    #[test]
    fn adding_a_node_to_both_sides_keeps_linear_checks(
        s in prop::collection::vec(select(small_types()), 1..3),
        t in prop::collection::vec(select(small_types()), 1..5),
    ) {
        let bundles = |v: &[SingularityType]| v.iter().map(basic_invariants).collect::<Vec<_>>();
        let (bs, bt) = (bundles(&s), bundles(&t));
        let node = basic_invariants(&ordinary(2));
        let (mut bs2, mut bt2) = (bs.clone(), bt.clone());
        bs2.push(node);
        bt2.push(node);
        let before: Vec<bool> = linear_checks(&bs, &bt).iter().map(|c| c.holds).collect();
        let after: Vec<bool> = linear_checks(&bs2, &bt2).iter().map(|c| c.holds).collect();
        prop_assert_eq!(before, after);
    }
}
