//! Level trees and canonical forms.
//!
//! Removing all edges of weight at most `k` from a dual graph leaves a
//! disjoint union of complete graphs. Nesting these clusters for increasing
//! `k` gives a rooted tree whose internal nodes carry the weight at which
//! their cluster splits. Sorting children recursively turns that tree into a
//! canonical string, so two graphs are isomorphic exactly when their keys
//! agree.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::TreeError;
use crate::graph::{DualGraph, Weight};
use crate::registry;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LevelTree {
    Leaf,
    Node { level: Weight, children: Vec<LevelTree> },
}

impl LevelTree {
    pub fn leaves(&self) -> usize {
        match self {
            LevelTree::Leaf => 1,
            LevelTree::Node { children, .. } => children.iter().map(LevelTree::leaves).sum(),
        }
    }

    pub fn level(&self) -> Option<Weight> {
        match self {
            LevelTree::Leaf => None,
            LevelTree::Node { level, .. } => Some(*level),
        }
    }

    /// Sum of pairwise leaf weights, computed without building the graph.
    pub fn delta(&self) -> u64 {
        match self {
            LevelTree::Leaf => 0,
            LevelTree::Node { level, children } => {
                let mut acc = 0u64;
                let mut seen = 0u64;
                for c in children {
                    let s = c.leaves() as u64;
                    acc += c.delta() + u64::from(*level) * seen * s;
                    seen += s;
                }
                acc
            }
        }
    }

    /// Checks levels and arities.
    pub fn check(&self) -> Result<(), TreeError> {
        fn walk(t: &LevelTree, parent: Option<Weight>) -> Result<(), TreeError> {
            let LevelTree::Node { level, children } = t else {
                return Ok(());
            };
            if *level == 0 {
                return Err(TreeError::ZeroLevel);
            }
            if let Some(p) = parent {
                if *level <= p {
                    return Err(TreeError::NonIncreasing {
                        parent: p,
                        child: *level,
                    });
                }
            }
            if children.len() < 2 {
                return Err(TreeError::Unary { level: *level });
            }
            children.iter().try_for_each(|c| walk(c, Some(*level)))
        }
        if matches!(self, LevelTree::Leaf) {
            return Err(TreeError::SingleLeaf);
        }
        walk(self, None)
    }

    /// Dual graph with leaves numbered in depth-first order.
    pub fn to_graph(&self) -> Result<DualGraph, TreeError> {
        self.check()?;
        let n = self.leaves();
        let mut table = vec![0; n * n];
        fn fill(t: &LevelTree, start: usize, n: usize, table: &mut [Weight]) -> usize {
            match t {
                LevelTree::Leaf => 1,
                LevelTree::Node { level, children } => {
                    let mut offset = start;
                    let mut ranges = Vec::with_capacity(children.len());
                    for c in children {
                        let len = fill(c, offset, n, table);
                        ranges.push((offset, offset + len));
                        offset += len;
                    }
                    for (a, &(s1, e1)) in ranges.iter().enumerate() {
                        for &(s2, e2) in &ranges[a + 1..] {
                            for i in s1..e1 {
                                for j in s2..e2 {
                                    table[i * n + j] = *level;
                                    table[j * n + i] = *level;
                                }
                            }
                        }
                    }
                    offset - start
                }
            }
        }
        fill(self, 0, n, &mut table);
        Ok(DualGraph::from_fn(n, |i, j| table[i * n + j]))
    }

    /// Recursive key; children must already be in canonical order for the
    /// result to be canonical.
    pub fn key(&self) -> String {
        let mut out = String::new();
        self.write_key(&mut out);
        out
    }

    fn write_key(&self, out: &mut String) {
        match self {
            LevelTree::Leaf => out.push('•'),
            LevelTree::Node { level, children } => {
                out.push('(');
                out.push_str(&level.to_string());
                out.push(':');
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.write_key(out);
                }
                out.push(')');
            }
        }
    }

    /// Returns the same tree with children sorted by key at every node.
    pub fn canonicalized(&self) -> LevelTree {
        match self {
            LevelTree::Leaf => LevelTree::Leaf,
            LevelTree::Node { level, children } => {
                let mut kids: Vec<(String, LevelTree)> = children
                    .iter()
                    .map(|c| {
                        let c = c.canonicalized();
                        (c.key(), c)
                    })
                    .collect();
                kids.sort_by(|a, b| a.0.cmp(&b.0));
                LevelTree::Node {
                    level: *level,
                    children: kids.into_iter().map(|(_, c)| c).collect(),
                }
            }
        }
    }

    /// Parses a key. Leaves may be written `•` or `*`.
    pub fn parse_key(text: &str) -> Result<LevelTree, TreeError> {
        let bytes = text.as_bytes();
        let mut pos = 0;
        let tree = parse_node(text, bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(TreeError::Syntax {
                position: pos,
                reason: "trailing input".into(),
            });
        }
        tree.check()?;
        Ok(tree)
    }
}

fn parse_node(text: &str, bytes: &[u8], pos: &mut usize) -> Result<LevelTree, TreeError> {
    let err = |position: usize, reason: &str| TreeError::Syntax {
        position,
        reason: reason.into(),
    };
    if text[*pos..].starts_with('•') {
        *pos += '•'.len_utf8();
        return Ok(LevelTree::Leaf);
    }
    match bytes.get(*pos) {
        Some(b'*') => {
            *pos += 1;
            Ok(LevelTree::Leaf)
        }
        Some(b'(') => {
            *pos += 1;
            let start = *pos;
            while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
                *pos += 1;
            }
            let level: Weight = text[start..*pos]
                .parse()
                .map_err(|_| err(start, "expected a level"))?;
            if bytes.get(*pos) != Some(&b':') {
                return Err(err(*pos, "expected ':'"));
            }
            *pos += 1;
            let mut children = vec![parse_node(text, bytes, pos)?];
            loop {
                match bytes.get(*pos) {
                    Some(b',') => {
                        *pos += 1;
                        children.push(parse_node(text, bytes, pos)?);
                    }
                    Some(b')') => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(err(*pos, "expected ',' or ')'")),
                }
            }
            Ok(LevelTree::Node { level, children })
        }
        _ => Err(err(*pos, "expected '(' or a leaf")),
    }
}

/// Isomorphism class of a dual graph.
///
/// Equality, hashing and ordering all go through the canonical key.
#[derive(Clone)]
pub struct SingularityType {
    tree: LevelTree,
    key: String,
    graph: DualGraph,
}

impl SingularityType {
    pub fn tree(&self) -> &LevelTree {
        &self.tree
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    /// Representative graph with vertices in canonical leaf order.
    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn branches(&self) -> usize {
        self.graph.branches()
    }

    pub fn delta(&self) -> u64 {
        self.graph.delta()
    }

    /// Registry name, if the graph has one.
    pub fn name(&self) -> Option<String> {
        registry::name_of(self)
    }

    /// Registry name or the canonical key.
    pub fn label(&self) -> String {
        self.name().unwrap_or_else(|| self.key.clone())
    }

    pub fn from_tree(tree: &LevelTree) -> Result<Self, TreeError> {
        let graph = tree.to_graph()?;
        Ok(canonical_form(&graph))
    }

    pub fn parse_key(text: &str) -> Result<Self, TreeError> {
        Self::from_tree(&LevelTree::parse_key(text)?)
    }
}

impl PartialEq for SingularityType {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for SingularityType {}

impl Hash for SingularityType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for SingularityType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SingularityType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Debug for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(name) => write!(f, "{name} {}", self.key),
            None => f.write_str(&self.key),
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Canonical form of `g` together with the order in which the leaves of the
/// canonical tree visit the vertices of `g`.
pub fn canonical_form_with_order(g: &DualGraph) -> (SingularityType, Vec<usize>) {
    fn build(g: &DualGraph, vertices: &[usize]) -> (LevelTree, String, Vec<usize>) {
        if vertices.len() == 1 {
            return (LevelTree::Leaf, "•".to_string(), vec![vertices[0]]);
        }
        let mut level = Weight::MAX;
        for (a, &u) in vertices.iter().enumerate() {
            for &v in &vertices[a + 1..] {
                level = level.min(g.weight(u, v));
            }
        }
        // classes of "w > level"; an equivalence relation in an ultrametric graph
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in vertices {
            match classes.iter_mut().find(|c| g.weight(c[0], v) > level) {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut kids: Vec<_> = classes.iter().map(|c| build(g, c)).collect();
        kids.sort_by(|a, b| a.1.cmp(&b.1));
        let mut key = format!("({level}:");
        let mut order = Vec::with_capacity(vertices.len());
        let mut children = Vec::with_capacity(kids.len());
        for (i, (t, k, o)) in kids.into_iter().enumerate() {
            if i > 0 {
                key.push(',');
            }
            key.push_str(&k);
            order.extend(o);
            children.push(t);
        }
        key.push(')');
        (LevelTree::Node { level, children }, key, order)
    }

    let all: Vec<usize> = (0..g.branches()).collect();
    let (tree, key, order) = build(g, &all);
    let graph = DualGraph::from_fn(order.len(), |a, b| g.weight(order[a], order[b]));
    (SingularityType { tree, key, graph }, order)
}

pub fn canonical_form(g: &DualGraph) -> SingularityType {
    canonical_form_with_order(g).0
}
