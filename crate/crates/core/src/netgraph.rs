//! Weighted directed graphs with rational-function edge weights.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::ratfun::RationalFunction;

/// A weighted digraph `G = (V, E, w)`.
///
/// Vertices keep their declaration order. There is at most one edge per
/// ordered pair, every stored weight is nonzero, and loops are allowed.
#[derive(Clone)]
pub struct WeightedDigraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeMap<(usize, usize), RationalFunction>,
}

/// Per-vertex degree counts. Loops count once toward each direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeStats {
    pub in_degree: usize,
    pub out_degree: usize,
    pub has_loop: bool,
}

impl WeightedDigraph {
    /// Build a graph, summing repeated `(from, to)` entries and dropping edges
    /// whose total weight is zero.
    pub fn build<V, E, S>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (S, S, RationalFunction)>,
        S: AsRef<str>,
    {
        let mut g = Self::with_vertices(vertices)?;
        let mut sums: BTreeMap<(usize, usize), RationalFunction> = BTreeMap::new();
        for (from, to, w) in edges {
            let key = (g.require(from.as_ref())?, g.require(to.as_ref())?);
            let total = match sums.remove(&key) {
                Some(prev) => prev.checked_add(&w)?,
                None => w,
            };
            sums.insert(key, total);
        }
        sums.retain(|_, w| !w.is_zero());
        g.edges = sums;
        Ok(g)
    }

    /// [`build`](Self::build) with weights given as expression strings.
    pub fn build_parsed<V, E, S, W>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (S, S, W)>,
        S: AsRef<str>,
        W: AsRef<str>,
    {
        let parsed = edges
            .into_iter()
            .map(|(a, b, w)| Ok((a, b, w.as_ref().parse::<RationalFunction>()?)))
            .collect::<Result<Vec<_>>>()?;
        Self::build(vertices, parsed)
    }

    /// A graph with the given vertices and no edges.
    pub fn with_vertices<V>(vertices: V) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
    {
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        for v in vertices {
            let label: String = v.into();
            if label.is_empty() {
                return Err(Error::UnknownVertex(label));
            }
            if index.insert(label.clone(), labels.len()).is_some() {
                return Err(Error::DuplicateVertex(label));
            }
            labels.push(label);
        }
        Ok(WeightedDigraph {
            labels,
            index,
            edges: BTreeMap::new(),
        })
    }

    /// Crate-internal constructor from already-canonical parts; zero weights
    /// are still filtered out.
    pub(crate) fn from_parts(
        labels: Vec<String>,
        mut edges: BTreeMap<(usize, usize), RationalFunction>,
    ) -> Self {
        edges.retain(|_, w| !w.is_zero());
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        debug_assert!(edges
            .keys()
            .all(|&(i, j)| i < labels.len() && j < labels.len()));
        WeightedDigraph {
            labels,
            index,
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// Resolve labels to indices, deduplicated and sorted into vertex order.
    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let set = labels
            .iter()
            .map(|l| self.require(l.as_ref()))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(set.into_iter().collect())
    }

    pub fn labels_of(&self, indices: &[usize]) -> Vec<String> {
        indices.iter().map(|&i| self.labels[i].clone()).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<&RationalFunction> {
        self.edges.get(&(from, to))
    }

    pub fn weight_or_zero(&self, from: usize, to: usize) -> RationalFunction {
        self.weight(from, to).cloned().unwrap_or_default()
    }

    /// Loop weight of `v`, zero when `v` has no loop.
    pub fn loop_weight(&self, v: usize) -> RationalFunction {
        self.weight_or_zero(v, v)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.edges.contains_key(&(v, v))
    }

    /// Edges in `(from, to)` index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &RationalFunction)> + '_ {
        self.edges.iter().map(|(&(i, j), w)| (i, j, w))
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, &RationalFunction)> + '_ {
        self.edges
            .range((v, 0)..=(v, usize::MAX))
            .map(|(&(_, j), w)| (j, w))
    }

    /// Edge list with labels, in `(from, to)` vertex order.
    pub fn edge_list(&self) -> Vec<(String, String, RationalFunction)> {
        self.edges()
            .map(|(i, j, w)| (self.labels[i].clone(), self.labels[j].clone(), w.clone()))
            .collect()
    }

    /// The weighted adjacency matrix `M(G)`.
    pub fn adjacency(&self) -> AdjacencyMatrix {
        let n = self.len();
        let mut m = AdjacencyMatrix::zeros(n);
        for (i, j, w) in self.edges() {
            m.set(i, j, w.clone());
        }
        m
    }

    pub fn degree_stats(&self) -> Vec<DegreeStats> {
        let mut stats = vec![
            DegreeStats {
                in_degree: 0,
                out_degree: 0,
                has_loop: false,
            };
            self.len()
        ];
        for (i, j, _) in self.edges() {
            stats[i].out_degree += 1;
            stats[j].in_degree += 1;
            if i == j {
                stats[i].has_loop = true;
            }
        }
        stats
    }

    /// Same graph minus every loop.
    pub fn without_loops(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .filter(|((i, j), _)| i != j)
            .map(|(k, w)| (*k, w.clone()))
            .collect();
        Self::from_parts(self.labels.clone(), edges)
    }

    /// Reorder vertices: the new graph's `k`-th vertex is `self`'s
    /// `order[k]`-th. `order` must be a permutation.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len(), "not a permutation");
        let mut position = vec![usize::MAX; self.len()];
        for (k, &old) in order.iter().enumerate() {
            position[old] = k;
        }
        assert!(
            position.iter().all(|&p| p != usize::MAX),
            "not a permutation"
        );
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .map(|(&(i, j), w)| ((position[i], position[j]), w.clone()))
            .collect();
        Self::from_parts(labels, edges)
    }

    /// Rename vertices through `rename`, keeping order and edges.
    pub fn relabeled<F: FnMut(&str) -> String>(&self, mut rename: F) -> Result<Self> {
        let labels: Vec<String> = self.labels.iter().map(|l| rename(l)).collect();
        let mut g = Self::with_vertices(labels)?;
        g.edges = self.edges.clone();
        Ok(g)
    }

    /// Subgraph induced on `keep` (indices, any order; output keeps vertex order).
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut position = vec![usize::MAX; self.len()];
        for (k, &old) in keep.iter().enumerate() {
            position[old] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|((i, j), _)| position[*i] != usize::MAX && position[*j] != usize::MAX)
            .map(|(&(i, j), w)| ((position[i], position[j]), w.clone()))
            .collect();
        Self::from_parts(self.labels_of(&keep), edges)
    }
}

impl PartialEq for WeightedDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for WeightedDigraph {}

impl fmt::Debug for WeightedDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .map(|(i, j, w)| format!("{}->{}: {}", self.labels[i], self.labels[j], w))
            .collect();
        f.debug_struct("WeightedDigraph")
            .field("vertices", &self.labels)
            .field("edges", &edges)
            .finish()
    }
}

/// Dense `n x n` matrix of rational functions, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<RationalFunction>,
}

impl AdjacencyMatrix {
    pub fn zeros(n: usize) -> Self {
        AdjacencyMatrix {
            n,
            entries: vec![RationalFunction::zero(); n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RationalFunction) {
        self.entries[i * self.n + j] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[RationalFunction]> + '_ {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }
}

impl fmt::Debug for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        f.debug_tuple("AdjacencyMatrix").field(&rows).finish()
    }
}
