//! Transformations that keep the original edge weights.
//!
//! [`fixed_weight_reduce`] shrinks a graph while every new weight stays a sum
//! of products of the old ones; only the multiplicity of the eigenvalue 0
//! changes. [`expand`] goes the other way: it gives every bundle path its own
//! copy of each interior vertex, which makes the graph sparser and adds a
//! known list of eigenvalues.

use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::netgraph::WeightedDigraph;
use crate::ratfun::RationalFunction;
use crate::structural::{enumerate_bundle, strongly_connected_components, StructuralSet};

/// A bundle path after reweighting: its whole weight sits on the first edge
/// and the remaining edges carry 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReweightedPath {
    pub source: usize,
    pub interior_count: usize,
    pub entry_weight: RationalFunction,
}

/// Reweighted bundle paths grouped by terminal vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReweightedBundle {
    pub by_target: BTreeMap<usize, Vec<ReweightedPath>>,
}

pub fn reweighted_bundle(g: &WeightedDigraph, s: &StructuralSet) -> Result<ReweightedBundle> {
    let mut by_target: BTreeMap<usize, Vec<ReweightedPath>> = BTreeMap::new();
    for path in enumerate_bundle(g, s).iter() {
        let mut product = RationalFunction::one();
        for (a, b) in path.steps() {
            product = product.checked_mul(&g.weight_or_zero(a, b))?;
        }
        by_target
            .entry(path.target())
            .or_default()
            .push(ReweightedPath {
                source: path.source(),
                interior_count: path.interior().len(),
                entry_weight: product,
            });
    }
    Ok(ReweightedBundle { by_target })
}

/// Reduction over the weight set.
///
/// Every vertex outside `s` must be loopless. For each terminal `v_j` the
/// interior vertices of all paths ending at `v_j` are merged by their
/// distance from the end into one chain `c_K -> ... -> c_1 -> v_j` of weight-1
/// edges; a path with `k` interior vertices becomes one edge from its source
/// to `c_k` carrying the product of its weights. Edges between members of `s`
/// are kept as they are.
pub fn fixed_weight_reduce(g: &WeightedDigraph, s: &StructuralSet) -> Result<WeightedDigraph> {
    if let Some(v) = s.complement().into_iter().find(|&v| g.has_loop(v)) {
        return Err(Error::LoopInComplement(g.label(v).to_string()));
    }
    let bundle = reweighted_bundle(g, s)?;

    let mut labels: Vec<String> = g.labels_of(s.members());
    let position: BTreeMap<usize, usize> = s
        .members()
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, k))
        .collect();
    let mut taken: HashSet<String> = g.labels().iter().cloned().collect();
    let mut edges: BTreeMap<(usize, usize), RationalFunction> = BTreeMap::new();

    for (&target, paths) in &bundle.by_target {
        let depth = paths.iter().map(|p| p.interior_count).max().unwrap_or(0);
        // chain[d - 1] is the node at distance d from the terminal.
        let mut chain = Vec::with_capacity(depth);
        for d in 1..=depth {
            let label = fresh_label(&format!("{}~{}", g.label(target), d), &mut taken);
            chain.push(labels.len());
            labels.push(label);
        }
        for d in 0..depth {
            let next = if d == 0 {
                position[&target]
            } else {
                chain[d - 1]
            };
            edges.insert((chain[d], next), RationalFunction::one());
        }
        for p in paths {
            let to = match p.interior_count {
                0 => position[&target],
                k => chain[k - 1],
            };
            let key = (position[&p.source], to);
            let total = match edges.remove(&key) {
                Some(prev) => prev.checked_add(&p.entry_weight)?,
                None => p.entry_weight.clone(),
            };
            edges.insert(key, total);
        }
    }
    Ok(WeightedDigraph::from_parts(labels, edges))
}

fn fresh_label(base: &str, taken: &mut HashSet<String>) -> String {
    let mut label = base.to_string();
    while taken.contains(&label) {
        label.push('\'');
    }
    taken.insert(label.clone());
    label
}

/// An offending edge found by [`weight_set_closure_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureViolation {
    pub from: String,
    pub to: String,
    pub weight: RationalFunction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureVerdict {
    pub violations: Vec<ClosureViolation>,
    /// Whether the reduced graph has fewer vertices than the original.
    pub fewer_vertices: bool,
}

impl ClosureVerdict {
    /// Every reduced weight lies in the set generated by the original ones.
    pub fn is_closed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Closed and strictly smaller: a genuine reduction over the weight set.
    pub fn is_reduction_over_weight_set(&self) -> bool {
        self.is_closed() && self.fewer_vertices
    }
}

const MAX_FACTORS: usize = 6;
const MAX_MONOMIALS: usize = 256;
const MAX_TERMS: usize = 8;
const MAX_STATES: usize = 50_000;

/// Check that every weight of `reduced` is 1, or a finite sum of finite
/// products of weights of `g`.
///
/// With integer weights the answer is exact: the generated set is every
/// positive integer, or every integer once a negative weight is present.
/// Otherwise a bounded search over sums of products is used, so a reported
/// violation means "not found within the bound".
pub fn weight_set_closure_check(g: &WeightedDigraph, reduced: &WeightedDigraph) -> ClosureVerdict {
    let mut generators: Vec<RationalFunction> = Vec::new();
    for (_, _, w) in g.edges() {
        if !generators.contains(w) {
            generators.push(w.clone());
        }
    }
    let integer_generators: Option<Vec<i64>> = generators
        .iter()
        .map(|w| {
            w.as_constant()
                .filter(|c| c.is_integer())
                .and_then(|c| num_traits::ToPrimitive::to_i64(&c.to_integer()))
        })
        .collect();
    let mut search: Option<SumOfProducts> = None;

    let violations = reduced
        .edges()
        .filter(|&(_, _, w)| {
            if w.is_one() || generators.contains(w) {
                return false;
            }
            if let (Some(ints), Some(c)) = (&integer_generators, w.as_constant()) {
                if c.is_integer() {
                    let any_negative = ints.iter().any(|&i| i < 0);
                    return !(c.is_positive() || (any_negative && !c.is_zero()));
                }
            }
            let search = search.get_or_insert_with(|| SumOfProducts::new(&generators, g.len()));
            !search.contains(w)
        })
        .map(|(i, j, w)| ClosureViolation {
            from: reduced.label(i).to_string(),
            to: reduced.label(j).to_string(),
            weight: w.clone(),
        })
        .collect();
    ClosureVerdict {
        violations,
        fewer_vertices: reduced.len() < g.len(),
    }
}

/// Bounded enumeration of sums of products of generators.
struct SumOfProducts {
    monomials: Vec<RationalFunction>,
    reachable: Vec<HashSet<RationalFunction>>,
}

impl SumOfProducts {
    fn new(generators: &[RationalFunction], order: usize) -> Self {
        let mut monomials = vec![RationalFunction::one()];
        let mut frontier = vec![RationalFunction::one()];
        for _ in 0..order.clamp(1, MAX_FACTORS) {
            let mut next = Vec::new();
            for m in &frontier {
                for gen in generators {
                    if let Ok(p) = m.checked_mul(gen) {
                        if !monomials.contains(&p) && monomials.len() < MAX_MONOMIALS {
                            monomials.push(p.clone());
                            next.push(p);
                        }
                    }
                }
            }
            frontier = next;
        }
        SumOfProducts {
            monomials,
            reachable: Vec::new(),
        }
    }

    fn contains(&mut self, target: &RationalFunction) -> bool {
        if self.reachable.is_empty() {
            let first: HashSet<RationalFunction> = self.monomials.iter().cloned().collect();
            self.reachable.push(first);
            let mut seen = self.reachable[0].len();
            for _ in 1..MAX_TERMS {
                let last = self.reachable.last().expect("nonempty");
                let mut next = HashSet::new();
                for s in last {
                    for m in &self.monomials {
                        if seen >= MAX_STATES {
                            break;
                        }
                        if let Ok(v) = s.checked_add(m) {
                            if next.insert(v) {
                                seen += 1;
                            }
                        }
                    }
                }
                self.reachable.push(next);
            }
        }
        self.reachable.iter().any(|level| level.contains(target))
    }
}

/// Result of [`expand`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub expanded: WeightedDigraph,
    /// Loop weights (zero when loopless) of the added copies: `n_i - 1`
    /// entries per shared interior vertex `v_i`, where `n_i` counts the
    /// bundle paths through `v_i`. These are the eigenvalues the expansion
    /// adds.
    pub delta: Vec<RationalFunction>,
    /// `(vertex, n_i)` for every interior vertex, in vertex order.
    pub path_counts: Vec<(String, usize)>,
}

/// Make all bundle paths over `s` pairwise independent by giving each path
/// private copies of its interior vertices (loops included). Members of `s`
/// and the edges between them are shared. Complement vertices that lie on no
/// bundle path are kept once; their edges to interior vertices attach to the
/// first copy.
pub fn expand(g: &WeightedDigraph, s: &StructuralSet) -> Result<ExpansionReport> {
    let bundle = enumerate_bundle(g, s);
    let paths: Vec<_> = bundle.iter().cloned().collect();

    let mut through: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    for (k, p) in paths.iter().enumerate() {
        for &u in p.interior() {
            through[u].push(k);
        }
    }

    let mut taken: HashSet<String> = g.labels().iter().cloned().collect();
    let mut labels = Vec::new();
    // copies[u][c] is the new index of the copy of u on path through[u][c].
    let mut copies: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    for v in 0..g.len() {
        let count = through[v].len().max(1);
        for c in 0..count {
            copies[v].push(labels.len());
            labels.push(if c == 0 {
                g.label(v).to_string()
            } else {
                fresh_label(&format!("{}#{}", g.label(v), c + 1), &mut taken)
            });
        }
    }
    let copy_on = |u: usize, path: usize| -> usize {
        let c = through[u]
            .iter()
            .position(|&k| k == path)
            .expect("vertex on path");
        copies[u][c]
    };
    let is_interior = |v: usize| !through[v].is_empty();

    let mut edges = BTreeMap::new();
    for (k, p) in paths.iter().enumerate() {
        let verts = p.vertices();
        let last = verts.len() - 1;
        for (pos, (a, b)) in p.steps().enumerate() {
            let from = if pos == 0 {
                copies[a][0]
            } else {
                copy_on(a, k)
            };
            let to = if pos + 1 == last {
                copies[b][0]
            } else {
                copy_on(b, k)
            };
            edges.insert((from, to), g.weight_or_zero(a, b));
        }
        for &u in p.interior() {
            if let Some(w) = g.weight(u, u) {
                let c = copy_on(u, k);
                edges.insert((c, c), w.clone());
            }
        }
    }
    for (a, b, w) in g.edges() {
        let touches_off_path =
            (!s.contains(a) && !is_interior(a)) || (!s.contains(b) && !is_interior(b));
        if touches_off_path {
            edges.insert((copies[a][0], copies[b][0]), w.clone());
        }
    }

    let mut delta = Vec::new();
    let mut path_counts = Vec::new();
    for u in (0..g.len()).filter(|&u| is_interior(u)) {
        let n = through[u].len();
        path_counts.push((g.label(u).to_string(), n));
        delta.extend(std::iter::repeat_n(g.loop_weight(u), n - 1));
    }

    Ok(ExpansionReport {
        expanded: WeightedDigraph::from_parts(labels, edges),
        delta,
        path_counts,
    })
}

/// Whether two distinct cycles (not loops) share a vertex. That happens
/// exactly when some strongly connected component of the loop-free graph has
/// more internal edges than vertices.
pub fn sparsifiable(g: &WeightedDigraph) -> bool {
    let everything = vec![true; g.len()];
    let mut component = vec![usize::MAX; g.len()];
    let comps = strongly_connected_components(g, &everything);
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            component[v] = c;
        }
    }
    let mut internal = vec![0usize; comps.len()];
    for (a, b, _) in g.edges() {
        if a != b && component[a] == component[b] {
            internal[component[a]] += 1;
        }
    }
    comps
        .iter()
        .zip(&internal)
        .any(|(members, &e)| members.len() > 1 && e > members.len())
}
