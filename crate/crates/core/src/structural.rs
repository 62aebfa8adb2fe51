//! Structural sets and the path bundles between their vertices.
//!
//! `S` is structural for `G` when the loop-stripped graph has no cycle on the
//! complement `V - S`, and no complement vertex carries a loop identically
//! equal to `l`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::netgraph::WeightedDigraph;

/// Outcome of checking a candidate structural set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuralVerdict {
    Ok,
    /// A cycle on the complement, listed in traversal order.
    CycleWitness(Vec<String>),
    /// A complement vertex whose loop weight is exactly `l`.
    LambdaLoopWitness(String),
}

impl StructuralVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, StructuralVerdict::Ok)
    }
}

impl fmt::Display for StructuralVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuralVerdict::Ok => f.write_str("structural"),
            StructuralVerdict::CycleWitness(c) => {
                write!(f, "cycle {} -> {}", c.join(" -> "), c[0])
            }
            StructuralVerdict::LambdaLoopWitness(v) => write!(f, "loop l at {v}"),
        }
    }
}

/// A validated structural set, tied to the graph it was checked against by
/// vertex count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralSet {
    members: Vec<usize>,
    in_set: Vec<bool>,
}

impl StructuralSet {
    /// Validate `labels` against `g`.
    pub fn new<S: AsRef<str>>(g: &WeightedDigraph, labels: &[S]) -> Result<Self> {
        let members = g.subset(labels)?;
        Self::from_indices(g, &members)
    }

    pub fn from_indices(g: &WeightedDigraph, members: &[usize]) -> Result<Self> {
        let set = Self::unchecked(g.len(), members);
        if set.members.is_empty() {
            return Err(Error::EmptySet);
        }
        match check(g, &set.in_set) {
            StructuralVerdict::Ok => Ok(set),
            verdict => Err(Error::NotStructural(verdict)),
        }
    }

    fn unchecked(n: usize, members: &[usize]) -> Self {
        let mut in_set = vec![false; n];
        for &m in members {
            in_set[m] = true;
        }
        let members = (0..n).filter(|&i| in_set[i]).collect();
        StructuralSet { members, in_set }
    }

    /// Member indices in vertex order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.in_set.len())
            .filter(|&i| !self.in_set[i])
            .collect()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.in_set[v]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn graph_order(&self) -> usize {
        self.in_set.len()
    }
}

/// The graph `G` with all loops removed.
pub fn strip_loops(g: &WeightedDigraph) -> WeightedDigraph {
    g.without_loops()
}

/// Check whether `labels` is a structural set of `g`, with a witness when not.
pub fn is_structural<S: AsRef<str>>(
    g: &WeightedDigraph,
    labels: &[S],
) -> Result<StructuralVerdict> {
    let members = g.subset(labels)?;
    if members.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut in_set = vec![false; g.len()];
    for m in members {
        in_set[m] = true;
    }
    Ok(check(g, &in_set))
}

fn check(g: &WeightedDigraph, in_set: &[bool]) -> StructuralVerdict {
    let outside: Vec<bool> = in_set.iter().map(|&b| !b).collect();
    for v in (0..g.len()).filter(|&v| outside[v]) {
        if g.weight(v, v).is_some_and(|w| w.is_lambda()) {
            return StructuralVerdict::LambdaLoopWitness(g.label(v).to_string());
        }
    }
    match find_cycle(g, &outside) {
        Some(cycle) => StructuralVerdict::CycleWitness(g.labels_of(&cycle)),
        None => StructuralVerdict::Ok,
    }
}

/// Strongly connected components of the loop-free subgraph induced on the
/// vertices with `within[v]`. Components come out in reverse topological
/// order; vertices inside a component are sorted.
pub(crate) fn strongly_connected_components(
    g: &WeightedDigraph,
    within: &[bool],
) -> Vec<Vec<usize>> {
    struct Tarjan<'a> {
        g: &'a WeightedDigraph,
        within: &'a [bool],
        counter: usize,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        out: Vec<Vec<usize>>,
    }

    impl Tarjan<'_> {
        fn visit(&mut self, v: usize) {
            self.index[v] = Some(self.counter);
            self.low[v] = self.counter;
            self.counter += 1;
            self.stack.push(v);
            self.on_stack[v] = true;
            let succ: Vec<usize> = self
                .g
                .out_edges(v)
                .map(|(w, _)| w)
                .filter(|&w| w != v && self.within[w])
                .collect();
            for w in succ {
                match self.index[w] {
                    None => {
                        self.visit(w);
                        self.low[v] = self.low[v].min(self.low[w]);
                    }
                    Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                    Some(_) => {}
                }
            }
            if Some(self.low[v]) == self.index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = self.stack.pop().expect("tarjan stack");
                    self.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                self.out.push(comp);
            }
        }
    }

    let n = g.len();
    let mut t = Tarjan {
        g,
        within,
        counter: 0,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        out: Vec::new(),
    };
    for (v, &inside) in within.iter().enumerate() {
        if inside && t.index[v].is_none() {
            t.visit(v);
        }
    }
    t.out
}

/// A shortest cycle through the lowest-indexed vertex of the first nontrivial
/// component, or `None` when the loop-free induced subgraph is acyclic.
fn find_cycle(g: &WeightedDigraph, within: &[bool]) -> Option<Vec<usize>> {
    let comp = strongly_connected_components(g, within)
        .into_iter()
        .filter(|c| c.len() > 1)
        .min_by_key(|c| c[0])?;
    let mut in_comp = vec![false; g.len()];
    for &v in &comp {
        in_comp[v] = true;
    }
    let start = comp[0];
    let mut parent: Vec<Option<usize>> = vec![None; g.len()];
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for (w, _) in g.out_edges(v) {
            if w == v || !in_comp[w] {
                continue;
            }
            if w == start {
                let mut cycle = vec![v];
                let mut cur = v;
                while let Some(p) = parent[cur] {
                    cycle.push(p);
                    cur = p;
                }
                cycle.reverse();
                return Some(cycle);
            }
            if parent[w].is_none() {
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    unreachable!("nontrivial strongly connected component without a cycle")
}

/// A path `v_a, u_1, ..., u_k, v_b` between structural-set vertices whose
/// interior avoids the set. `v_a == v_b` is allowed (a cycle based at `v_a`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SPath {
    vertices: Vec<usize>,
}

impl SPath {
    pub fn new(vertices: Vec<usize>) -> Self {
        assert!(vertices.len() >= 2, "a path needs at least one edge");
        SPath { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn source(&self) -> usize {
        self.vertices[0]
    }

    pub fn target(&self) -> usize {
        *self.vertices.last().expect("nonempty path")
    }

    pub fn interior(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    /// Consecutive `(from, to)` pairs.
    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn labels(&self, g: &WeightedDigraph) -> Vec<String> {
        g.labels_of(&self.vertices)
    }
}

/// All bundle paths, keyed by `(source, target)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathBundle {
    paths: BTreeMap<(usize, usize), Vec<SPath>>,
}

impl PathBundle {
    pub fn get(&self, source: usize, target: usize) -> &[SPath] {
        self.paths
            .get(&(source, target))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Nonempty `(source, target)` groups in key order.
    pub fn groups(&self) -> impl Iterator<Item = ((usize, usize), &[SPath])> + '_ {
        self.paths.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &SPath> + '_ {
        self.paths.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.paths.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Enumerate every path between members of `s` with no interior member.
pub fn enumerate_bundle(g: &WeightedDigraph, s: &StructuralSet) -> PathBundle {
    assert_eq!(
        s.graph_order(),
        g.len(),
        "structural set belongs to another graph"
    );
    let mut bundle = PathBundle::default();
    let mut on_path = vec![false; g.len()];
    for &source in s.members() {
        let mut prefix = vec![source];
        extend(g, s, &mut prefix, &mut on_path, &mut bundle);
    }
    bundle
}

fn extend(
    g: &WeightedDigraph,
    s: &StructuralSet,
    prefix: &mut Vec<usize>,
    on_path: &mut [bool],
    bundle: &mut PathBundle,
) {
    let last = *prefix.last().expect("nonempty prefix");
    for (next, _) in g.out_edges(last) {
        if s.contains(next) {
            let mut path = prefix.clone();
            path.push(next);
            bundle
                .paths
                .entry((prefix[0], next))
                .or_default()
                .push(SPath::new(path));
        } else if next != last && !on_path[next] {
            // Interior loops are folded into the path weight, never walked.
            on_path[next] = true;
            prefix.push(next);
            extend(g, s, prefix, on_path, bundle);
            prefix.pop();
            on_path[next] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vs: &[&str], es: &[(&str, &str, &str)]) -> WeightedDigraph {
        WeightedDigraph::build_parsed(vs.iter().copied(), es.iter().copied()).unwrap()
    }

    fn two_cycle() -> WeightedDigraph {
        graph(&["v1", "v2"], &[("v1", "v2", "1"), ("v2", "v1", "1")])
    }

    #[test]
    fn strip_loops_examples() {
        let looped = graph(&["v1"], &[("v1", "v1", "1")]);
        assert_eq!(strip_loops(&looped).edge_count(), 0);
        assert_eq!(strip_loops(&two_cycle()), two_cycle());
        let mixed = graph(
            &["v1", "v2"],
            &[("v1", "v2", "1"), ("v2", "v1", "1"), ("v1", "v1", "3")],
        );
        assert_eq!(strip_loops(&mixed), two_cycle());
    }

    #[test]
    fn structural_examples() {
        let g = two_cycle();
        assert_eq!(is_structural(&g, &["v1"]).unwrap(), StructuralVerdict::Ok);
        assert_eq!(
            is_structural(&g, &["v1", "v2"]).unwrap(),
            StructuralVerdict::Ok
        );
        assert!(matches!(
            is_structural(&g, &[] as &[&str]),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn cycle_witness_on_complement() {
        let ring = [
            ("v1", "v2", "1"),
            ("v2", "v3", "1"),
            ("v3", "v4", "1"),
            ("v4", "v1", "1"),
        ];
        let g = graph(&["v1", "v2", "v3", "v4"], &ring);
        assert!(is_structural(&g, &["v1"]).unwrap().is_ok());
        let mut with_back = ring.to_vec();
        with_back.push(("v3", "v2", "1"));
        let g = graph(&["v1", "v2", "v3", "v4"], &with_back);
        assert_eq!(
            is_structural(&g, &["v1"]).unwrap(),
            StructuralVerdict::CycleWitness(vec!["v2".into(), "v3".into()])
        );
    }

    #[test]
    fn lambda_loop_witness() {
        let g = graph(
            &["a", "b"],
            &[("a", "b", "1"), ("b", "a", "1"), ("b", "b", "l")],
        );
        assert_eq!(
            is_structural(&g, &["a"]).unwrap(),
            StructuralVerdict::LambdaLoopWitness("b".into())
        );
        // A loop that only agrees with l at some points is fine.
        let g = graph(
            &["a", "b"],
            &[("a", "b", "1"), ("b", "a", "1"), ("b", "b", "2*l-1")],
        );
        assert!(is_structural(&g, &["a"]).unwrap().is_ok());
        // Complement loops are not cycles.
        let g = graph(&["a", "b"], &[("b", "b", "1")]);
        assert!(is_structural(&g, &["a"]).unwrap().is_ok());
    }

    #[test]
    fn bundle_of_two_cycle() {
        let g = two_cycle();
        let s = StructuralSet::new(&g, &["v1"]).unwrap();
        let b = enumerate_bundle(&g, &s);
        assert_eq!(b.len(), 1);
        assert_eq!(b.get(0, 0), &[SPath::new(vec![0, 1, 0])]);
    }

    #[test]
    fn bundle_of_triangle() {
        let g = graph(
            &["v1", "v2", "v3"],
            &[("v1", "v2", "1"), ("v2", "v3", "1"), ("v3", "v1", "1")],
        );
        let s = StructuralSet::new(&g, &["v1", "v2"]).unwrap();
        let b = enumerate_bundle(&g, &s);
        assert_eq!(b.get(0, 1), &[SPath::new(vec![0, 1])]);
        assert_eq!(b.get(1, 0), &[SPath::new(vec![1, 2, 0])]);
        assert!(b.get(0, 0).is_empty());
        assert!(b.get(1, 1).is_empty());
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn bundle_of_edgeless_graph() {
        let g = WeightedDigraph::with_vertices(["a", "b"]).unwrap();
        let s = StructuralSet::new(&g, &["a"]).unwrap();
        assert!(enumerate_bundle(&g, &s).is_empty());
    }

    #[test]
    fn loops_at_set_members_are_direct_paths() {
        let g = graph(
            &["a", "b"],
            &[
                ("a", "a", "2"),
                ("a", "b", "1"),
                ("b", "b", "5"),
                ("b", "a", "1"),
            ],
        );
        let s = StructuralSet::new(&g, &["a"]).unwrap();
        let b = enumerate_bundle(&g, &s);
        assert_eq!(
            b.get(0, 0),
            &[SPath::new(vec![0, 0]), SPath::new(vec![0, 1, 0])]
        );
    }

    #[test]
    fn not_structural_error_carries_witness() {
        let g = graph(
            &["x", "v1", "v2"],
            &[("v1", "v2", "1"), ("v2", "v1", "1"), ("x", "v1", "1")],
        );
        match StructuralSet::new(&g, &["x"]) {
            Err(Error::NotStructural(StructuralVerdict::CycleWitness(c))) => {
                assert_eq!(c, vec!["v1".to_string(), "v2".to_string()])
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
