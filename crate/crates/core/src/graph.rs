//! Weighted complete graphs on the branches of a singularity.
//!
//! Vertex `i` stands for the `i`-th smooth branch and the weight of the edge
//! `{i, j}` is the intersection multiplicity of the two branches. A table of
//! weights is a dual graph exactly when it is complete, all weights are
//! positive, and every triple satisfies the ultrametric condition (the two
//! smallest of its three weights coincide).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Intersection multiplicity of two branches.
pub type Weight = u32;

/// Validated dual graph stored as a dense upper-triangular weight table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DualGraph {
    branches: usize,
    weights: Vec<Weight>,
}

#[inline]
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl DualGraph {
    /// Validates a branch count and a list of `(i, j, w)` edges covering every
    /// unordered pair exactly once.
    pub fn validate(
        branches: usize,
        edges: impl IntoIterator<Item = (usize, usize, Weight)>,
    ) -> Result<Self, GraphError> {
        if branches < 2 {
            return Err(GraphError::TooFewBranches { branches });
        }
        let n = branches;
        let mut weights = vec![0; n * (n - 1) / 2];
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: a.max(b),
                    branches,
                });
            }
            if a == b {
                return Err(GraphError::SelfLoop { vertex: a });
            }
            let (i, j) = (a.min(b), a.max(b));
            if w == 0 {
                return Err(GraphError::NonPositiveWeight { i, j });
            }
            let slot = &mut weights[tri_index(n, i, j)];
            if *slot != 0 {
                return Err(GraphError::DuplicatePair { i, j });
            }
            *slot = w;
        }
        for i in 0..n {
            for j in i + 1..n {
                if weights[tri_index(n, i, j)] == 0 {
                    return Err(GraphError::IncompleteGraph { i, j });
                }
            }
        }
        let graph = DualGraph { branches, weights };
        if let Some((i, j, k)) = graph.ultrametric_violation() {
            return Err(GraphError::UltrametricViolation { i, j, k });
        }
        Ok(graph)
    }

    /// Builds a graph from a symmetric weight function. The caller guarantees
    /// the result is a dual graph; validity is checked in debug builds.
    pub(crate) fn from_fn(branches: usize, mut weight: impl FnMut(usize, usize) -> Weight) -> Self {
        let mut weights = Vec::with_capacity(branches * (branches - 1) / 2);
        for i in 0..branches {
            for j in i + 1..branches {
                weights.push(weight(i, j));
            }
        }
        let graph = DualGraph { branches, weights };
        debug_assert!(branches >= 2);
        debug_assert!(graph.weights.iter().all(|&w| w > 0));
        debug_assert!(graph.ultrametric_violation().is_none());
        graph
    }

    /// Complete graph on `branches` vertices with every weight equal to `weight`.
    pub fn uniform(branches: usize, weight: Weight) -> Result<Self, GraphError> {
        if branches < 2 {
            return Err(GraphError::TooFewBranches { branches });
        }
        if weight == 0 {
            return Err(GraphError::NonPositiveWeight { i: 0, j: 1 });
        }
        Ok(Self::from_fn(branches, |_, _| weight))
    }

    /// Triangle with weights on the edges `{0,1}`, `{0,2}`, `{1,2}`.
    pub fn triangle(w01: Weight, w02: Weight, w12: Weight) -> Result<Self, GraphError> {
        Self::validate(3, [(0, 1, w01), (0, 2, w02), (1, 2, w12)])
    }

    pub fn branches(&self) -> usize {
        self.branches
    }

    /// Weight of the edge `{i, j}`; `i != j`.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> Weight {
        assert!(i != j, "no loop edges in a dual graph");
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.weights[tri_index(self.branches, a, b)]
    }

    /// Edges as `(i, j, w)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Weight)> + '_ {
        let n = self.branches;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j, self.weight(i, j))))
    }

    pub fn edge_weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Sum of all edge weights, i.e. the delta invariant.
    pub fn delta(&self) -> u64 {
        self.weights.iter().map(|&w| u64::from(w)).sum()
    }

    pub fn min_weight(&self) -> Weight {
        self.weights.iter().copied().min().unwrap_or(0)
    }

    pub fn max_weight(&self) -> Weight {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// Sum of weights of the edges at `v`.
    pub fn weighted_degree(&self, v: usize) -> u64 {
        (0..self.branches)
            .filter(|&u| u != v)
            .map(|u| u64::from(self.weight(u, v)))
            .sum()
    }

    /// Whether every weight equals `w`.
    pub fn is_uniform(&self) -> Option<Weight> {
        let first = self.weights[0];
        self.weights.iter().all(|&w| w == first).then_some(first)
    }

    fn ultrametric_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.branches;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut t = [self.weight(i, j), self.weight(i, k), self.weight(j, k)];
                    t.sort_unstable();
                    if t[0] != t[1] {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Induced graph on `subset`, with vertex `t` of the result standing for
    /// `subset[t]`.
    pub fn full_subgraph(&self, subset: &[usize]) -> Result<DualGraph, GraphError> {
        if subset.len() < 2 {
            return Err(GraphError::SubsetTooSmall { size: subset.len() });
        }
        let mut seen = vec![false; self.branches];
        for &v in subset {
            if v >= self.branches {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    branches: self.branches,
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(GraphError::RepeatedVertex { vertex: v });
            }
        }
        Ok(Self::from_fn(subset.len(), |a, b| self.weight(subset[a], subset[b])))
    }

    /// Subtracts `smaller`, placed on this graph by `embedding`
    /// (`embedding[v]` is the image of vertex `v` of `smaller`).
    ///
    /// Edges whose weight drops to zero are erased, then isolated vertices.
    /// Every remaining connected component must again be a dual graph; a
    /// component that is not complete or not ultrametric is reported as an
    /// error.
    pub fn subtract(
        &self,
        smaller: &DualGraph,
        embedding: &[usize],
    ) -> Result<Vec<Component>, GraphError> {
        if embedding.len() != smaller.branches {
            return Err(GraphError::NotAnEmbedding {
                reason: format!(
                    "map has {} entries for {} vertices",
                    embedding.len(),
                    smaller.branches
                ),
            });
        }
        let mut seen = vec![false; self.branches];
        for &v in embedding {
            if v >= self.branches {
                return Err(GraphError::NotAnEmbedding {
                    reason: format!("image {v} outside 0..{}", self.branches),
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(GraphError::NotAnEmbedding {
                    reason: format!("vertex {v} hit twice"),
                });
            }
        }
        let mut residual = self.weights.clone();
        let n = self.branches;
        for (a, b, w) in smaller.edges() {
            let (x, y) = (embedding[a].min(embedding[b]), embedding[a].max(embedding[b]));
            let slot = &mut residual[tri_index(n, x, y)];
            if *slot < w {
                return Err(GraphError::WeightUnderflow {
                    i: x,
                    j: y,
                    available: *slot,
                    requested: w,
                });
            }
            *slot -= w;
        }
        let at = |i: usize, j: usize| -> Weight {
            if i < j {
                residual[tri_index(n, i, j)]
            } else {
                residual[tri_index(n, j, i)]
            }
        };

        // connected components over positive residual edges
        let mut label = vec![usize::MAX; n];
        let mut components = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX || (0..n).all(|u| u == start || at(start, u) == 0) {
                continue;
            }
            let id = components.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            label[start] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for u in 0..n {
                    if u != v && label[u] == usize::MAX && at(u, v) > 0 {
                        label[u] = id;
                        stack.push(u);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }

        components
            .into_iter()
            .map(|vertices| {
                let edges: Vec<_> = (0..vertices.len())
                    .flat_map(|a| (a + 1..vertices.len()).map(move |b| (a, b)))
                    .filter_map(|(a, b)| {
                        let w = at(vertices[a], vertices[b]);
                        (w > 0).then_some((a, b, w))
                    })
                    .collect();
                let graph = DualGraph::validate(vertices.len(), edges).map_err(|e| {
                    GraphError::InvalidComponent {
                        vertices: vertices.clone(),
                        source: Box::new(e),
                    }
                })?;
                Ok(Component { graph, vertices })
            })
            .collect()
    }

    /// Graph with vertex `v` moved to position `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> DualGraph {
        assert_eq!(perm.len(), self.branches);
        let mut inverse = vec![0; self.branches];
        for (v, &p) in perm.iter().enumerate() {
            inverse[p] = v;
        }
        Self::from_fn(self.branches, |a, b| self.weight(inverse[a], inverse[b]))
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            branches: self.branches,
            weights: self.edges().map(|(i, j, w)| [i as u64, j as u64, u64::from(w)]).collect(),
        }
    }
}

impl fmt::Debug for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DualGraph({}; ", self.branches)?;
        let mut first = true;
        for (i, j, w) in self.edges() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{i}-{j}:{w}")?;
        }
        f.write_str(")")
    }
}

/// One connected piece left over by [`DualGraph::subtract`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub graph: DualGraph,
    /// `vertices[t]` is the vertex of the minuend that vertex `t` came from.
    pub vertices: Vec<usize>,
}

/// On-disk graph format: `{"branches": r, "weights": [[i, j, w], ...]}` with
/// 0-based `i < j` and every pair listed once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub branches: usize,
    pub weights: Vec<[u64; 3]>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<DualGraph, GraphError> {
        let mut edges = Vec::with_capacity(self.weights.len());
        for [i, j, w] in self.weights {
            if i >= j {
                return Err(GraphError::UnorderedPair {
                    i: i as usize,
                    j: j as usize,
                });
            }
            let w = Weight::try_from(w).map_err(|_| GraphError::WeightTooLarge { weight: w })?;
            edges.push((i as usize, j as usize, w));
        }
        DualGraph::validate(self.branches, edges)
    }
}
