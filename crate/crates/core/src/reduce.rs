//! Isospectral reduction.
//!
//! Over a structural set `S`, the reduced graph lives on `S` and the edge
//! `v_i -> v_j` carries the sum, over every bundle path from `v_i` to `v_j`,
//! of the product of the path's edge weights divided by `(l - w(u, u))` for
//! each interior vertex `u`. Reducing over an arbitrary subset is done one
//! vertex at a time; the result does not depend on the elimination order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::netgraph::{AdjacencyMatrix, WeightedDigraph};
use crate::ratfun::RationalFunction;
use crate::structural::{enumerate_bundle, SPath, StructuralSet};

/// A reduced graph together with what is needed to account for the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionResult {
    /// Graph on the kept vertices, in their original order.
    pub reduced: WeightedDigraph,
    /// Loop weights of the removed vertices (zero for loopless ones), taken
    /// at the moment each vertex was removed.
    pub correction: Vec<RationalFunction>,
    /// The kept set after each reduction step.
    pub provenance: Vec<Vec<String>>,
}

/// Weight contributed by a single bundle path. Panics if a step of `path`
/// is not an edge of `g`.
pub fn path_weight(g: &WeightedDigraph, path: &SPath) -> Result<RationalFunction> {
    let mut num = RationalFunction::one();
    for (a, b) in path.steps() {
        let w = g
            .weight(a, b)
            .expect("path step is not an edge of the graph");
        num = num.checked_mul(w)?;
    }
    let mut den = RationalFunction::one();
    for &u in path.interior() {
        den = den.checked_mul(&RationalFunction::lambda().checked_sub(&g.loop_weight(u))?)?;
    }
    num.checked_div(&den)
}

/// The path-bundle reduction over a structural set.
pub fn reduce_structural(g: &WeightedDigraph, s: &StructuralSet) -> Result<ReductionResult> {
    let bundle = enumerate_bundle(g, s);
    let position: BTreeMap<usize, usize> = s
        .members()
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, k))
        .collect();
    let mut edges = BTreeMap::new();
    for ((from, to), paths) in bundle.groups() {
        let mut total = RationalFunction::zero();
        for p in paths {
            total = total.checked_add(&path_weight(g, p)?)?;
        }
        edges.insert((position[&from], position[&to]), total);
    }
    let kept = g.labels_of(s.members());
    Ok(ReductionResult {
        reduced: WeightedDigraph::from_parts(kept.clone(), edges),
        correction: s
            .complement()
            .into_iter()
            .map(|v| g.loop_weight(v))
            .collect(),
        provenance: vec![kept],
    })
}

/// Remove a single vertex `v`, folding every two-step path through it into
/// a direct edge.
pub fn eliminate_vertex(g: &WeightedDigraph, label: &str) -> Result<WeightedDigraph> {
    eliminate_index(g, g.require(label)?)
}

pub(crate) fn eliminate_index(g: &WeightedDigraph, v: usize) -> Result<WeightedDigraph> {
    let loop_w = g.loop_weight(v);
    if loop_w.is_lambda() {
        return Err(Error::LambdaLoop {
            vertex: g.label(v).to_string(),
            graph: Some(Box::new(g.clone())),
            origin: None,
        });
    }
    let shift = |i: usize| if i > v { i - 1 } else { i };
    let factor = RationalFunction::lambda().checked_sub(&loop_w)?.recip()?;

    let mut edges: BTreeMap<(usize, usize), RationalFunction> = g
        .edges()
        .filter(|&(i, j, _)| i != v && j != v)
        .map(|(i, j, w)| ((shift(i), shift(j)), w.clone()))
        .collect();
    let incoming: Vec<(usize, RationalFunction)> = g
        .edges()
        .filter(|&(i, j, _)| j == v && i != v)
        .map(|(i, _, w)| (i, w.checked_mul(&factor)))
        .map(|(i, w)| w.map(|w| (i, w)))
        .collect::<Result<_>>()?;
    let outgoing: Vec<(usize, &RationalFunction)> =
        g.out_edges(v).filter(|&(j, _)| j != v).collect();
    for (i, w_in) in &incoming {
        for &(j, w_out) in &outgoing {
            let key = (shift(*i), shift(j));
            let term = w_in.checked_mul(w_out)?;
            let total = match edges.remove(&key) {
                Some(prev) => prev.checked_add(&term)?,
                None => term,
            };
            edges.insert(key, total);
        }
    }
    let labels = g
        .labels()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != v)
        .map(|(_, l)| l.clone())
        .collect();
    Ok(WeightedDigraph::from_parts(labels, edges))
}

/// Reduce onto `keep` by eliminating the other vertices in declaration order.
pub fn reduce_subset<S: AsRef<str>>(g: &WeightedDigraph, keep: &[S]) -> Result<ReductionResult> {
    reduce_subset_in_order(g, keep, &[] as &[&str])
}

/// Reduce onto `keep`, eliminating the vertices listed in `order` first and
/// any remaining ones in declaration order.
pub fn reduce_subset_in_order<S: AsRef<str>, T: AsRef<str>>(
    g: &WeightedDigraph,
    keep: &[S],
    order: &[T],
) -> Result<ReductionResult> {
    let kept = g.subset(keep)?;
    if kept.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut is_kept = vec![false; g.len()];
    for &k in &kept {
        is_kept[k] = true;
    }
    let mut schedule: Vec<String> = Vec::new();
    for label in order {
        let v = g.require(label.as_ref())?;
        if is_kept[v] {
            return Err(Error::UnknownVertex(label.as_ref().to_string()));
        }
        if !schedule.iter().any(|s| s == label.as_ref()) {
            schedule.push(label.as_ref().to_string());
        }
    }
    for v in (0..g.len()).filter(|&v| !is_kept[v]) {
        if !schedule.iter().any(|s| s == g.label(v)) {
            schedule.push(g.label(v).to_string());
        }
    }

    let mut current = g.clone();
    let mut correction = Vec::with_capacity(schedule.len());
    let mut provenance = Vec::with_capacity(schedule.len());
    for label in &schedule {
        let v = current.require(label)?;
        correction.push(current.loop_weight(v));
        current = eliminate_index(&current, v)?;
        provenance.push(current.labels().to_vec());
    }
    Ok(ReductionResult {
        reduced: current,
        correction,
        provenance,
    })
}

/// `A_SS + A_SC (l I - A_CC)^{-1} A_CS` with `C` the complement of `S`,
/// computed by Gauss-Jordan elimination over the rational-function field.
/// Independent of the path enumeration; used to cross-check it.
pub fn schur_oracle<S: AsRef<str>>(g: &WeightedDigraph, keep: &[S]) -> Result<AdjacencyMatrix> {
    let kept = g.subset(keep)?;
    if kept.is_empty() {
        return Err(Error::EmptySet);
    }
    let rest: Vec<usize> = (0..g.len()).filter(|v| !kept.contains(v)).collect();
    let a = g.adjacency();
    let (k, m) = (kept.len(), rest.len());

    // Augmented system [l I - A_CC | A_CS].
    let mut rows: Vec<Vec<RationalFunction>> = Vec::with_capacity(m);
    for (r, &ci) in rest.iter().enumerate() {
        let mut row = Vec::with_capacity(m + k);
        for (c, &cj) in rest.iter().enumerate() {
            let entry = a.get(ci, cj).neg();
            row.push(if r == c {
                entry.checked_add(&RationalFunction::lambda())?
            } else {
                entry
            });
        }
        for &sj in &kept {
            row.push(a.get(ci, sj).clone());
        }
        rows.push(row);
    }
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or(Error::SingularBlock)?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip()?;
        for entry in rows[col].iter_mut() {
            *entry = entry.checked_mul(&inv)?;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (entry, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *entry = entry.checked_sub(&f.checked_mul(p)?)?;
            }
        }
    }

    let mut out = AdjacencyMatrix::zeros(k);
    for (i, &si) in kept.iter().enumerate() {
        for j in 0..k {
            let mut acc = a.get(si, kept[j]).clone();
            for (c, &cj) in rest.iter().enumerate() {
                let left = a.get(si, cj);
                if !left.is_zero() && !rows[c][m + j].is_zero() {
                    acc = acc.checked_add(&left.checked_mul(&rows[c][m + j])?)?;
                }
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}
