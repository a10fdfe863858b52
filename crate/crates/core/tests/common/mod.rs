#![allow(dead_code)]

use collidere_core::expr::{parse_expression, parse_type};
use collidere_core::obstructions::DeformationProblem;
use collidere_core::LevelTree;
use proptest::prelude::*;

pub fn problem(source: &str, targets: &str) -> DeformationProblem {
    DeformationProblem::new(
        parse_type(source).unwrap(),
        parse_expression(targets).unwrap().expand(),
    )
}

/// Tree shape with level increments relative to the parent.
#[derive(Debug, Clone)]
pub enum Shape {
    Leaf,
    Node { step: u32, children: Vec<Shape> },
}

pub fn shape() -> impl Strategy<Value = Shape> {
    let leaf = Just(Shape::Leaf);
    leaf.prop_recursive(3, 9, 3, |inner| {
        (1u32..=2, prop::collection::vec(inner, 2..=3))
            .prop_map(|(step, children)| Shape::Node { step, children })
    })
}

pub fn to_tree(s: &Shape, parent: u32) -> LevelTree {
    match s {
        Shape::Leaf => LevelTree::Leaf,
        Shape::Node { step, children } => LevelTree::Node {
            level: parent + step,
            children: children.iter().map(|c| to_tree(c, parent + step)).collect(),
        },
    }
}

/// Random level trees with at least two leaves.
pub fn level_tree() -> impl Strategy<Value = LevelTree> {
    (1u32..=2, prop::collection::vec(shape(), 2..=3)).prop_map(|(level, children)| LevelTree::Node {
        level,
        children: children.iter().map(|c| to_tree(c, level)).collect(),
    })
}

/// Partitions of `n` into parts, each non-increasing.
pub fn partitions(n: u64) -> Vec<Vec<u64>> {
    fn go(n: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            cur.push(part);
            go(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Non-increasing lists drawn from `lo..=hi` whose sum of `cost` stays
/// within `budget`.
pub fn bounded_lists(lo: u64, hi: u64, cost: fn(u64) -> u64, budget: u64) -> Vec<Vec<u64>> {
    fn go(lo: u64, hi: u64, cost: fn(u64) -> u64, budget: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for q in (lo..=hi).rev() {
            if cost(q) <= budget {
                cur.push(q);
                go(lo, q, cost, budget - cost(q), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(lo, hi, cost, budget, &mut Vec::new(), &mut out);
    out
}

pub fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}
