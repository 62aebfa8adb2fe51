use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::netgraph::{DegreeStats, WeightedDigraph};
use crate::reduce::reduce_subset;

/// Largest graph `weighted_isomorphic` will search.
pub const ISOMORPHISM_BUDGET: usize = 12;

type Selector = dyn Fn(&WeightedDigraph) -> Vec<usize> + Send + Sync;

/// A named, deterministic choice of vertices. The selector may return an
/// empty list; `apply_rule` then falls back to every vertex.
#[derive(Clone)]
pub struct SelectionRule {
    name: String,
    selector: Arc<Selector>,
}

/// Names accepted by [`SelectionRule::builtin`].
pub const BUILTIN_RULES: &[&str] = &[
    "min-out-degree",
    "max-out-degree",
    "min-in-degree",
    "max-in-degree",
    "has-loop",
    "all-vertices",
];

impl SelectionRule {
    /// A custom rule. The selector must depend only on the graph's weighted
    /// structure, never on labels or vertex order, for equivalence to be
    /// meaningful.
    pub fn new<F>(name: impl Into<String>, selector: F) -> Self
    where
        F: Fn(&WeightedDigraph) -> Vec<usize> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            selector: Arc::new(selector),
        }
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let rule = match name {
            "min-out-degree" => Self::new(name, |g| extremal(g, |d| d.out_degree, false)),
            "max-out-degree" => Self::new(name, |g| extremal(g, |d| d.out_degree, true)),
            "min-in-degree" => Self::new(name, |g| extremal(g, |d| d.in_degree, false)),
            "max-in-degree" => Self::new(name, |g| extremal(g, |d| d.in_degree, true)),
            "has-loop" => Self::new(name, |g| (0..g.len()).filter(|&v| g.has_loop(v)).collect()),
            "all-vertices" => Self::new(name, |g| (0..g.len()).collect()),
            other => return Err(Error::UnknownRule(other.to_string())),
        };
        Ok(rule)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for SelectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelectionRule")
            .field("name", &self.name)
            .finish()
    }
}

fn extremal(g: &WeightedDigraph, key: fn(&DegreeStats) -> usize, max: bool) -> Vec<usize> {
    let stats = g.degree_stats();
    let values: Vec<usize> = stats.iter().map(key).collect();
    let best = if max {
        values.iter().max()
    } else {
        values.iter().min()
    };
    match best {
        Some(&b) => (0..g.len()).filter(|&v| values[v] == b).collect(),
        None => Vec::new(),
    }
}

/// Vertex labels chosen by `rule`, in declaration order.
pub fn apply_rule(rule: &SelectionRule, g: &WeightedDigraph) -> Result<Vec<String>> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut chosen: Vec<usize> = (rule.selector)(g)
        .into_iter()
        .filter(|&v| v < g.len())
        .collect();
    chosen.sort_unstable();
    chosen.dedup();
    if chosen.is_empty() {
        chosen = (0..g.len()).collect();
    }
    Ok(g.labels_of(&chosen))
}

/// Per-vertex invariant used to prune the isomorphism search.
#[derive(PartialEq, Eq)]
struct Profile {
    out_degree: usize,
    in_degree: usize,
    loop_weight: String,
    out_weights: Vec<String>,
    in_weights: Vec<String>,
}

fn profiles(g: &WeightedDigraph) -> Vec<Profile> {
    let mut p: Vec<Profile> = (0..g.len())
        .map(|v| Profile {
            out_degree: 0,
            in_degree: 0,
            loop_weight: g.loop_weight(v).to_string(),
            out_weights: Vec::new(),
            in_weights: Vec::new(),
        })
        .collect();
    for (a, b, w) in g.edges() {
        if a == b {
            continue;
        }
        p[a].out_degree += 1;
        p[a].out_weights.push(w.to_string());
        p[b].in_degree += 1;
        p[b].in_weights.push(w.to_string());
    }
    for q in &mut p {
        q.out_weights.sort();
        q.in_weights.sort();
    }
    p
}

/// A bijection `g -> h` (as label pairs in `g`'s vertex order) under which
/// every edge and weight matches exactly, if one exists.
pub fn weighted_isomorphic(
    g: &WeightedDigraph,
    h: &WeightedDigraph,
) -> Result<Option<Vec<(String, String)>>> {
    let n = g.len().max(h.len());
    if n > ISOMORPHISM_BUDGET {
        return Err(Error::SearchBudgetExceeded {
            vertices: n,
            budget: ISOMORPHISM_BUDGET,
        });
    }
    if g.len() != h.len() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let pg = profiles(g);
    let ph = profiles(h);
    let candidates: Vec<Vec<usize>> = pg
        .iter()
        .map(|p| (0..h.len()).filter(|&u| ph[u] == *p).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut map = vec![usize::MAX; g.len()];
    let mut used = vec![false; h.len()];
    if extend(g, h, &candidates, 0, &mut map, &mut used) {
        Ok(Some(
            map.iter()
                .enumerate()
                .map(|(v, &u)| (g.label(v).to_string(), h.label(u).to_string()))
                .collect(),
        ))
    } else {
        Ok(None)
    }
}

fn extend(
    g: &WeightedDigraph,
    h: &WeightedDigraph,
    candidates: &[Vec<usize>],
    v: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == g.len() {
        return true;
    }
    for &u in &candidates[v] {
        if used[u] {
            continue;
        }
        let consistent = (0..v).all(|w| {
            let x = map[w];
            g.weight(v, w) == h.weight(u, x) && g.weight(w, v) == h.weight(x, u)
        });
        if !consistent {
            continue;
        }
        map[v] = u;
        used[u] = true;
        if extend(g, h, candidates, v + 1, map, used) {
            return true;
        }
        used[u] = false;
    }
    map[v] = usize::MAX;
    false
}

#[derive(Debug, Clone)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// Bijection from `left_reduced` to `right_reduced` when equivalent.
    pub witness: Option<Vec<(String, String)>>,
    pub left_reduced: WeightedDigraph,
    pub right_reduced: WeightedDigraph,
}

/// Reduce each graph over the vertices `rule` selects and compare the
/// results up to weighted isomorphism.
pub fn spectrally_equivalent(
    g: &WeightedDigraph,
    h: &WeightedDigraph,
    rule: &SelectionRule,
) -> Result<EquivalenceVerdict> {
    let left = reduce_side(g, rule, "left")?;
    let right = reduce_side(h, rule, "right")?;
    let witness = weighted_isomorphic(&left, &right)?;
    Ok(EquivalenceVerdict {
        equivalent: witness.is_some(),
        witness,
        left_reduced: left,
        right_reduced: right,
    })
}

fn reduce_side(g: &WeightedDigraph, rule: &SelectionRule, side: &str) -> Result<WeightedDigraph> {
    let keep = apply_rule(rule, g)?;
    match reduce_subset(g, &keep) {
        Ok(r) => Ok(r.reduced),
        Err(Error::LambdaLoop { vertex, graph, .. }) => Err(Error::LambdaLoop {
            vertex,
            graph,
            origin: Some(side.to_string()),
        }),
        Err(e) => Err(e),
    }
}
