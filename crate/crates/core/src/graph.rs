//! Weighted undirected graphs and real-valued signals on their vertices.
//!
//! Vertices are dense indices `0..n`. Weights are stored per directed entry
//! so that asymmetric or otherwise malformed input survives construction and
//! can be reported by [`WeightedGraph::validate`].

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

/// A finite weighted graph with nonnegative symmetric weights `w(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    adj: Vec<BTreeMap<usize, f64>>,
}

impl WeightedGraph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![BTreeMap::new(); n],
        }
    }

    /// Builds a graph from undirected edges. Each `(u, v, w)` sets both
    /// `w(u, v)` and `w(v, u)`; zero weights are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut g = Self::empty(n);
        for (u, v, w) in edges {
            g.check_entry(u, v, w)?;
            if w != 0.0 {
                g.adj[u].insert(v, w);
                g.adj[v].insert(u, w);
            }
        }
        Ok(g)
    }

    /// Builds a graph from raw directed entries `w(u, v)` without enforcing
    /// symmetry. Intended for ingesting untrusted data before validation.
    pub fn from_directed_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut g = Self::empty(n);
        for (u, v, w) in entries {
            g.check_entry(u, v, w)?;
            if w != 0.0 {
                g.adj[u].insert(v, w);
            }
        }
        Ok(g)
    }

    fn check_entry(&self, u: usize, v: usize, w: f64) -> Result<()> {
        for index in [u, v] {
            if index >= self.n {
                return Err(Error::VertexOutOfRange { index, n: self.n });
            }
        }
        if !w.is_finite() {
            return Err(Error::InvalidGraph(format!(
                "non-finite weight on ({u}, {v})"
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `w(u, v)`, zero when there is no edge.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.adj
            .get(u)
            .and_then(|row| row.get(&v))
            .copied()
            .unwrap_or(0.0)
    }

    /// Weighted degree `w(v) = Σ_u w(u, v)`.
    pub fn degree(&self, v: usize) -> f64 {
        self.adj[v].values().sum()
    }

    /// Neighbours of `v` with their weights, in ascending index order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adj[v].iter().map(|(&u, &w)| (u, w))
    }

    /// Undirected edges `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.range(u + 1..).map(move |(&v, &w)| (u, v, w)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Checks symmetry, nonnegativity and absence of loops.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (u, row) in self.adj.iter().enumerate() {
            for (&v, &w) in row {
                if u == v {
                    violations.push(Violation::Loop {
                        vertex: u,
                        weight: w,
                    });
                    continue;
                }
                if w < 0.0 {
                    violations.push(Violation::NegativeWeight { u, v, weight: w });
                }
                // report each asymmetric pair once, from its lower endpoint
                let back = self.weight(v, u);
                if back != w && (u < v || !self.adj[v].contains_key(&u)) {
                    violations.push(Violation::Asymmetric {
                        u,
                        v,
                        forward: w,
                        backward: back,
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// The subgraph induced by `cluster`: vertex `i` of the result is
    /// `cluster[i]`, and every edge with both ends in the cluster keeps its
    /// weight.
    pub fn induced_subgraph(&self, cluster: &[usize]) -> Result<WeightedGraph> {
        if cluster.is_empty() {
            return Err(Error::EmptyCluster);
        }
        let mut local = BTreeMap::new();
        for (i, &v) in cluster.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange {
                    index: v,
                    n: self.n,
                });
            }
            if local.insert(v, i).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} listed twice in cluster"
                )));
            }
        }
        let mut sub = WeightedGraph::empty(cluster.len());
        for (i, &v) in cluster.iter().enumerate() {
            for (u, w) in self.neighbors(v) {
                if let Some(&j) = local.get(&u) {
                    sub.adj[i].insert(j, w);
                }
            }
        }
        Ok(sub)
    }

    /// Component label for every vertex (labels are `0..count`, assigned in
    /// order of the smallest vertex of each component).
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for (u, _) in self.neighbors(v) {
                    if label[u] == usize::MAX {
                        label[u] = count;
                        queue.push_back(u);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    /// True iff the graph has exactly one connected component. A graph with
    /// no vertices is not connected.
    pub fn is_connected(&self) -> bool {
        self.components().0 == 1
    }

    /// `‖∇f‖² = Σ_{u,v} ½ |f(u) − f(v)|² w(u, v)` over ordered pairs.
    pub fn gradient_norm_sq(&self, f: &GraphSignal) -> Result<f64> {
        self.check_signal(f)?;
        let x = f.as_slice();
        let mut total = 0.0;
        for (u, row) in self.adj.iter().enumerate() {
            for (&v, &w) in row {
                let d = x[u] - x[v];
                total += 0.5 * d * d * w;
            }
        }
        Ok(total)
    }

    pub(crate) fn check_signal(&self, f: &GraphSignal) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: f.len(),
            });
        }
        Ok(())
    }
}

/// A single invariant violation found by [`WeightedGraph::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Asymmetric {
        u: usize,
        v: usize,
        forward: f64,
        backward: f64,
    },
    NegativeWeight {
        u: usize,
        v: usize,
        weight: f64,
    },
    Loop {
        vertex: usize,
        weight: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Converts a failing report into an [`Error::InvalidGraph`].
    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidGraph(format!(
                "{} violation(s), first: {v:?}",
                self.violations.len()
            ))),
        }
    }
}

/// A real-valued function on the vertex set. Entries are always finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GraphSignal(Vec<f64>);

impl GraphSignal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self(vec![c; n])
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|x| x.is_finite()));
        Self(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &GraphSignal) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / self.0.len() as f64
    }

    /// `self − other`, entrywise.
    pub fn sub(&self, other: &GraphSignal) -> GraphSignal {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + other`, entrywise.
    pub fn add(&self, other: &GraphSignal) -> GraphSignal {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: f64) -> GraphSignal {
        Self(self.0.iter().map(|a| c * a).collect())
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &GraphSignal) -> f64 {
        self.sub(other).norm()
    }
}

impl std::ops::Index<usize> for GraphSignal {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> WeightedGraph {
        WeightedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    fn sig(v: &[f64]) -> GraphSignal {
        GraphSignal::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_edge_is_valid() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        assert!(g.validate().is_valid());
        assert_eq!(g.degree(0), 1.0);
    }

    #[test]
    fn asymmetric_weights_are_reported() {
        let g = WeightedGraph::from_directed_entries(2, [(0, 1, 1.0), (1, 0, 2.0)]).unwrap();
        let report = g.validate();
        assert_eq!(
            report.violations,
            vec![Violation::Asymmetric {
                u: 0,
                v: 1,
                forward: 1.0,
                backward: 2.0
            }]
        );
        assert!(report.into_result().is_err());
    }

    #[test]
    fn one_sided_entry_is_reported_once() {
        let g = WeightedGraph::from_directed_entries(3, [(2, 0, 1.5)]).unwrap();
        assert_eq!(g.validate().violations.len(), 1);
    }

    #[test]
    fn loop_is_reported() {
        let g = WeightedGraph::from_directed_entries(1, [(0, 0, 1.0)]).unwrap();
        assert_eq!(
            g.validate().violations,
            vec![Violation::Loop {
                vertex: 0,
                weight: 1.0
            }]
        );
    }

    #[test]
    fn negative_weight_is_reported() {
        let g = WeightedGraph::from_edges(2, [(0, 1, -1.0)]).unwrap();
        assert!(matches!(
            g.validate().violations[0],
            Violation::NegativeWeight { .. }
        ));
    }

    #[test]
    fn out_of_range_edge_is_rejected() {
        assert_eq!(
            WeightedGraph::from_edges(2, [(0, 2, 1.0)]),
            Err(Error::VertexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn induced_pair_of_path() {
        let g = path(3);
        let sub = g.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!(sub.n(), 2);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 1, 1.0)]);
    }

    #[test]
    fn induced_non_adjacent_vertices_have_no_edges() {
        let sub = path(3).induced_subgraph(&[0, 2]).unwrap();
        assert_eq!(sub.n(), 2);
        assert_eq!(sub.edge_count(), 0);
        assert!(!sub.is_connected());
    }

    #[test]
    fn induced_full_vertex_set_is_identity() {
        let k3 = WeightedGraph::from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(k3.induced_subgraph(&[0, 1, 2]).unwrap(), k3);
    }

    #[test]
    fn induced_subgraph_errors() {
        let g = path(3);
        assert_eq!(g.induced_subgraph(&[]), Err(Error::EmptyCluster));
        assert_eq!(
            g.induced_subgraph(&[0, 5]),
            Err(Error::VertexOutOfRange { index: 5, n: 3 })
        );
        assert!(g.induced_subgraph(&[1, 1]).is_err());
    }

    #[test]
    fn induced_subgraph_keeps_weights_bit_equal() {
        let w = 0.1 + 0.2;
        let g = WeightedGraph::from_edges(4, [(0, 1, w), (1, 2, 1.0 / 3.0), (2, 3, 7.5)]).unwrap();
        let sub = g.induced_subgraph(&[2, 1]).unwrap();
        assert_eq!(sub.weight(0, 1).to_bits(), (1.0f64 / 3.0).to_bits());
    }

    #[test]
    fn connectivity() {
        assert!(path(3).is_connected());
        assert!(!WeightedGraph::empty(2).is_connected());
        assert!(WeightedGraph::empty(1).is_connected());
    }

    #[test]
    fn gradient_single_edge() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(g.gradient_norm_sq(&sig(&[0.0, 1.0])).unwrap(), 1.0);
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 2.0), (1, 2, 0.5), (0, 2, 3.0)]).unwrap();
        assert_eq!(
            g.gradient_norm_sq(&GraphSignal::constant(3, 4.2)).unwrap(),
            0.0
        );
    }

    #[test]
    fn gradient_on_path4() {
        let g = path(4);
        assert_eq!(
            g.gradient_norm_sq(&sig(&[1.0, 2.0, 4.0, 8.0])).unwrap(),
            21.0
        );
    }

    #[test]
    fn gradient_length_mismatch() {
        assert_eq!(
            path(4).gradient_norm_sq(&sig(&[1.0])),
            Err(Error::LengthMismatch {
                expected: 4,
                got: 1
            })
        );
    }

    #[test]
    fn signal_rejects_non_finite() {
        assert_eq!(
            GraphSignal::new(vec![0.0, f64::NAN]),
            Err(Error::NonFinite(1))
        );
    }
}
