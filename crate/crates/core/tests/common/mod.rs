#![allow(dead_code)]

use std::path::{Path, PathBuf};

use isoreduce::equivalence::{apply_rule, spectrally_equivalent, SelectionRule};
use isoreduce::reduce::{reduce_structural, reduce_subset, reduce_subset_in_order, schur_oracle};
use isoreduce::spectrum::{
    correction_set, spectra_match, spectrum, CorrectionSet, SpectrumMultiset,
};
use isoreduce::structural::is_structural;
use isoreduce::transform::{expand, fixed_weight_reduce, weight_set_closure_check};
use isoreduce::StructuralSet;
use isoreduce::{RationalFunction, StructuralVerdict, WeightedDigraph};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub struct GraphSpec {
    pub max_n: usize,
    pub min_n: usize,
    pub edge_prob: f64,
    pub loop_prob: f64,
    /// Weights drawn uniformly from `-w..=w` excluding zero; `None` means all ones.
    pub weight_range: Option<i64>,
}

impl GraphSpec {
    pub fn integer(max_n: usize) -> Self {
        GraphSpec {
            max_n,
            min_n: 2,
            edge_prob: 0.4,
            loop_prob: 0.3,
            weight_range: Some(3),
        }
    }

    pub fn unweighted(max_n: usize) -> Self {
        GraphSpec {
            weight_range: None,
            ..Self::integer(max_n)
        }
    }
}

pub fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

pub fn random_graph(rng: &mut TestRng, spec: &GraphSpec) -> WeightedDigraph {
    let n = rng.gen_range(spec.min_n..=spec.max_n);
    let names = labels(n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = if i == j {
                spec.loop_prob
            } else {
                spec.edge_prob
            };
            if rng.gen_bool(p) {
                let w = match spec.weight_range {
                    Some(r) => loop {
                        let w = rng.gen_range(-r..=r);
                        if w != 0 {
                            break w;
                        }
                    },
                    None => 1,
                };
                edges.push((
                    names[i].clone(),
                    names[j].clone(),
                    RationalFunction::integer(w),
                ));
            }
        }
    }
    WeightedDigraph::build(names.iter().cloned(), edges).unwrap()
}

/// Grow a random nonempty seed set until it is structural, adding one vertex
/// from each reported cycle witness.
pub fn random_structural_set(rng: &mut TestRng, g: &WeightedDigraph) -> Vec<String> {
    let mut set: Vec<String> = g
        .labels()
        .iter()
        .filter(|_| rng.gen_bool(0.3))
        .cloned()
        .collect();
    if set.is_empty() {
        set.push(g.labels().choose(rng).unwrap().clone());
    }
    loop {
        match is_structural(g, &set).unwrap() {
            StructuralVerdict::Ok => break,
            StructuralVerdict::CycleWitness(c) => set.push(c.choose(rng).unwrap().clone()),
            StructuralVerdict::LambdaLoopWitness(v) => set.push(v),
        }
    }
    order_like(g, set)
}

pub fn random_subset(rng: &mut TestRng, g: &WeightedDigraph) -> Vec<String> {
    let mut set: Vec<String> = g
        .labels()
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    if set.is_empty() {
        set.push(g.labels().choose(rng).unwrap().clone());
    }
    set
}

/// Drop every loop on a vertex outside `keep`.
pub fn clear_complement_loops(g: &WeightedDigraph, keep: &[String]) -> WeightedDigraph {
    let edges: Vec<_> = g
        .edge_list()
        .into_iter()
        .filter(|(a, b, _)| a != b || keep.contains(a))
        .collect();
    WeightedDigraph::build(g.labels().iter().cloned(), edges).unwrap()
}

pub fn order_like(g: &WeightedDigraph, mut set: Vec<String>) -> Vec<String> {
    set.sort_by_key(|l| g.index_of(l).unwrap());
    set.dedup();
    set
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

/// One CLI invocation with its expected exit status and, when `expected` is
/// set, the golden file its standard output must match byte for byte.
pub struct GoldenCase {
    pub args: &'static [&'static str],
    pub code: i32,
    pub expected: Option<&'static str>,
}

pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        args: &["reduce", "two_cycle.json", "--keep", "v1"],
        code: 0,
        expected: Some("reduce_two_cycle.out"),
    },
    GoldenCase {
        args: &[
            "reduce",
            "two_cycle.json",
            "--keep",
            "v1",
            "--structural-only",
        ],
        code: 0,
        expected: Some("reduce_two_cycle_structural.out"),
    },
    GoldenCase {
        args: &[
            "reduce",
            "three_cycle.json",
            "--keep",
            "v1",
            "--tol",
            "1e-10",
        ],
        code: 0,
        expected: Some("reduce_three_cycle.out"),
    },
    GoldenCase {
        args: &["spectrum", "three_cycle.json"],
        code: 0,
        expected: Some("spectrum_three_cycle.out"),
    },
    GoldenCase {
        args: &["spectrum", "quartic.json"],
        code: 0,
        expected: Some("spectrum_quartic.out"),
    },
    GoldenCase {
        args: &["validate", "four_cycle.json", "--set", "v1,v2"],
        code: 0,
        expected: Some("validate_ok.out"),
    },
    GoldenCase {
        args: &["validate", "four_cycle.json", "--set", "v1"],
        code: 2,
        expected: Some("validate_cycle.out"),
    },
    GoldenCase {
        args: &[
            "equiv",
            "exp_a.json",
            "exp_b.json",
            "--rule",
            "min-out-degree",
        ],
        code: 0,
        expected: Some("equiv_expansions.out"),
    },
    GoldenCase {
        args: &[
            "equiv",
            "two_cycle.json",
            "three_cycle.json",
            "--rule",
            "all-vertices",
        ],
        code: 3,
        expected: Some("equiv_cycles.out"),
    },
    GoldenCase {
        args: &["fixed-reduce", "fixed.json", "--set", "v1,v2"],
        code: 0,
        expected: Some("fixed_reduce.out"),
    },
    GoldenCase {
        args: &["sparsify", "shared.json", "--set", "v1"],
        code: 0,
        expected: Some("sparsify_shared.out"),
    },
    GoldenCase {
        args: &["dot", "loop.json"],
        code: 0,
        expected: Some("dot_loop.out"),
    },
    GoldenCase {
        args: &["dot", "two_cycle.json"],
        code: 0,
        expected: Some("dot_two_cycle.out"),
    },
    // error paths
    GoldenCase {
        args: &[
            "reduce",
            "four_cycle.json",
            "--keep",
            "v1",
            "--structural-only",
        ],
        code: 2,
        expected: None,
    },
    GoldenCase {
        args: &["spectrum", "bad_syntax.json"],
        code: 4,
        expected: None,
    },
    GoldenCase {
        args: &["spectrum", "bad_weight.json"],
        code: 5,
        expected: None,
    },
    GoldenCase {
        args: &["validate", "two_cycle.json", "--set", "v9"],
        code: 6,
        expected: None,
    },
    GoldenCase {
        args: &["spectrum", "duplicate.json"],
        code: 7,
        expected: None,
    },
    GoldenCase {
        args: &["validate", "two_cycle.json", "--set", ""],
        code: 8,
        expected: None,
    },
    GoldenCase {
        args: &["equiv", "empty.json", "two_cycle.json"],
        code: 9,
        expected: None,
    },
    GoldenCase {
        args: &["reduce", "lambda_loop.json", "--keep", "v1"],
        code: 10,
        expected: None,
    },
    GoldenCase {
        args: &["spectrum", "big_exponent.json"],
        code: 14,
        expected: None,
    },
    GoldenCase {
        args: &["spectrum", "lambda_diagonal.json"],
        code: 16,
        expected: None,
    },
    GoldenCase {
        args: &["fixed-reduce", "loop_outside.json", "--set", "v1"],
        code: 18,
        expected: None,
    },
    GoldenCase {
        args: &["equiv", "big.json", "big.json", "--rule", "all-vertices"],
        code: 19,
        expected: None,
    },
    GoldenCase {
        args: &[
            "equiv",
            "two_cycle.json",
            "two_cycle.json",
            "--rule",
            "betweenness",
        ],
        code: 20,
        expected: None,
    },
    GoldenCase {
        args: &["spectrum", "missing.json"],
        code: 74,
        expected: None,
    },
    GoldenCase {
        args: &["spectrum"],
        code: 64,
        expected: None,
    },
    GoldenCase {
        args: &["frobnicate"],
        code: 64,
        expected: None,
    },
];

pub struct Ran {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

pub fn run_cli(args: &[&str], stdin: &[u8]) -> Ran {
    let dir = golden_dir();
    let mut full: Vec<String> = vec!["isoreduce".into()];
    for a in args {
        if a.ends_with(".json") {
            full.push(dir.join(a).to_string_lossy().into_owned());
        } else {
            full.push((*a).to_string());
        }
    }
    let mut input = stdin;
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let code = isoreduce::cli::run(full, &mut input, &mut stdout, &mut stderr);
    Ran {
        code,
        stdout,
        stderr,
    }
}

/// Check one golden case; `Err` carries a human-readable reason.
pub fn check_golden(case: &GoldenCase) -> Result<(), String> {
    let ran = run_cli(case.args, b"");
    if ran.code != case.code {
        return Err(format!(
            "{:?}: exit {} (expected {}), stderr: {}",
            case.args,
            ran.code,
            case.code,
            String::from_utf8_lossy(&ran.stderr)
        ));
    }
    match case.expected {
        Some(name) => {
            let want =
                std::fs::read(golden_dir().join(name)).map_err(|e| format!("{name}: {e}"))?;
            if ran.stdout != want {
                return Err(format!(
                    "{:?}: output differs from {name}:\n{}",
                    case.args,
                    String::from_utf8_lossy(&ran.stdout)
                ));
            }
        }
        None => {
            let err = String::from_utf8_lossy(&ran.stderr);
            if case.code != 64
                && (!err.starts_with("isoreduce: error[") || err.trim_end().lines().count() != 1)
            {
                return Err(format!(
                    "{:?}: diagnostic is not one line: {err}",
                    case.args
                ));
            }
        }
    }
    Ok(())
}

// Checks shared by the property suites and the acceptance runner. Each
// returns `Err` with a description of the first discrepancy.

pub const TOL: f64 = 1e-8;

fn complement(g: &WeightedDigraph, s: &[String]) -> Vec<String> {
    g.labels()
        .iter()
        .filter(|l| !s.contains(l))
        .cloned()
        .collect()
}

pub fn check_reduction_spectrum(g: &WeightedDigraph, s: &[String]) -> Result<(), String> {
    let set = StructuralSet::new(g, s).map_err(|e| e.to_string())?;
    let r = reduce_structural(g, &set).map_err(|e| e.to_string())?;
    let before = spectrum(g, TOL).map_err(|e| e.to_string())?;
    let after = spectrum(&r.reduced, TOL).map_err(|e| e.to_string())?;
    let corr = correction_set(g, s).map_err(|e| e.to_string())?;
    let verdict = spectra_match(&before, &after, &corr, TOL);
    if verdict.is_match() {
        Ok(())
    } else {
        Err(format!("{g:?} over {s:?}: {verdict:?}"))
    }
}

pub fn check_order_independence(
    rng: &mut TestRng,
    g: &WeightedDigraph,
    keep: &[String],
) -> Result<(), String> {
    let mut order = complement(g, keep);
    order.shuffle(rng);
    let a = reduce_subset_in_order(g, keep, &order).map_err(|e| e.to_string())?;
    order.shuffle(rng);
    let b = reduce_subset_in_order(g, keep, &order).map_err(|e| e.to_string())?;
    if a.reduced == b.reduced {
        Ok(())
    } else {
        Err(format!(
            "{g:?} onto {keep:?}: {:?} vs {:?}",
            a.reduced, b.reduced
        ))
    }
}

pub fn check_nesting(rng: &mut TestRng, g: &WeightedDigraph) -> Result<(), String> {
    let outer = random_subset(rng, g);
    let mut inner: Vec<String> = outer
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    if inner.is_empty() {
        inner.push(outer.choose(rng).unwrap().clone());
    }
    let staged = reduce_subset(g, &outer).and_then(|r| reduce_subset(&r.reduced, &inner));
    let direct = reduce_subset(g, &inner);
    match (staged, direct) {
        (Ok(a), Ok(b)) if a.reduced == b.reduced => Ok(()),
        (a, b) => Err(format!("{g:?}: {outer:?} then {inner:?}: {a:?} vs {b:?}")),
    }
}

pub fn check_oracle(g: &WeightedDigraph, s: &[String]) -> Result<(), String> {
    let set = StructuralSet::new(g, s).map_err(|e| e.to_string())?;
    let r = reduce_structural(g, &set).map_err(|e| e.to_string())?;
    let m = schur_oracle(g, s).map_err(|e| e.to_string())?;
    let paths = r.reduced.adjacency();
    for i in 0..s.len() {
        for j in 0..s.len() {
            if paths.get(i, j) != m.get(i, j) {
                return Err(format!(
                    "{g:?} over {s:?}: entry ({i},{j}) {} vs {}",
                    paths.get(i, j),
                    m.get(i, j)
                ));
            }
        }
    }
    Ok(())
}

/// Greedy nearest pairing; returns what is left of `a` and of `b`.
pub fn leftovers(
    a: &SpectrumMultiset,
    b: &SpectrumMultiset,
    tol: f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut rest: Vec<Complex64> = b.values();
    let mut left = Vec::new();
    for z in a.values() {
        let best = rest
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((k, d)) if d <= tol => {
                rest.swap_remove(k);
            }
            _ => left.push(z),
        }
    }
    (left, rest)
}

/// For all-one weights and a loopless complement, only zeros go missing,
/// at most one per removed vertex.
pub fn check_zero_difference(g: &WeightedDigraph, s: &[String]) -> Result<(), String> {
    let set = StructuralSet::new(g, s).map_err(|e| e.to_string())?;
    let r = reduce_structural(g, &set).map_err(|e| e.to_string())?;
    let before = spectrum(g, TOL).map_err(|e| e.to_string())?;
    let after = spectrum(&r.reduced, TOL).map_err(|e| e.to_string())?;
    let (lost, gained) = leftovers(&before, &after, TOL);
    let removed = g.len() - s.len();
    if gained.is_empty() && lost.len() <= removed && lost.iter().all(|z| z.norm() <= TOL) {
        Ok(())
    } else {
        Err(format!(
            "{g:?} over {s:?}: lost {lost:?}, gained {gained:?}"
        ))
    }
}

pub fn all_ones(g: &WeightedDigraph) -> bool {
    g.edges().all(|(_, _, w)| w.is_one())
}

pub fn check_fixed_weight(g: &WeightedDigraph, s: &[String]) -> Result<(), String> {
    let set = StructuralSet::new(g, s).map_err(|e| e.to_string())?;
    let l = fixed_weight_reduce(g, &set).map_err(|e| e.to_string())?;
    let before = spectrum(g, TOL).map_err(|e| e.to_string())?.without_zeros();
    let after = spectrum(&l, TOL)
        .map_err(|e| e.to_string())?
        .without_zeros();
    let verdict = spectra_match(&before, &after, &CorrectionSet::default(), TOL);
    if !verdict.is_match() {
        return Err(format!(
            "{g:?} over {s:?}: nonzero spectra differ: {verdict:?}"
        ));
    }
    let closure = weight_set_closure_check(g, &l);
    if !closure.is_closed() {
        return Err(format!(
            "{g:?} over {s:?}: weights escape: {:?}",
            closure.violations
        ));
    }
    if all_ones(g) {
        let positive_integers = l.edges().all(|(_, _, w)| {
            w.as_constant().is_some_and(|c| {
                c.is_integer() && c > num_rational::BigRational::from_integer(0.into())
            })
        });
        if !positive_integers {
            return Err(format!("{g:?} over {s:?}: non-integer weight in {l:?}"));
        }
    }
    Ok(())
}

pub fn check_expansion(g: &WeightedDigraph, s: &[String]) -> Result<usize, String> {
    let set = StructuralSet::new(g, s).map_err(|e| e.to_string())?;
    let x = expand(g, &set).map_err(|e| e.to_string())?;
    let extra: Vec<Complex64> = x
        .delta
        .iter()
        .map(|w| {
            let c = w.as_constant().expect("constant loop");
            Complex64::new(num_traits::ToPrimitive::to_f64(&c).unwrap(), 0.0)
        })
        .collect();
    let before = spectrum(g, TOL)
        .map_err(|e| e.to_string())?
        .with_extra(&extra);
    let after = spectrum(&x.expanded, TOL).map_err(|e| e.to_string())?;
    let verdict = spectra_match(&before, &after, &CorrectionSet::default(), TOL);
    if !verdict.is_match() {
        return Err(format!("{g:?} over {s:?}: {verdict:?}"));
    }
    let added: usize = x.path_counts.iter().map(|(_, n)| n - 1).sum();
    if x.expanded.len() - g.len() != added {
        return Err(format!(
            "{g:?} over {s:?}: vertex count {} vs {}",
            x.expanded.len(),
            g.len() + added
        ));
    }
    let set_x = StructuralSet::new(&x.expanded, s)
        .map_err(|e| format!("set not structural after expansion: {e}"))?;
    let back = reduce_structural(&x.expanded, &set_x).map_err(|e| e.to_string())?;
    let direct = reduce_structural(g, &set).map_err(|e| e.to_string())?;
    if back.reduced != direct.reduced {
        return Err(format!("{g:?} over {s:?}: reduction of expansion differs"));
    }
    Ok(x.expanded.len())
}

/// A base graph plus several graphs built from it by expansion, permutation
/// and relabeling. All members have at most `cap` vertices.
pub fn expansion_family(rng: &mut TestRng, cap: usize) -> Vec<WeightedDigraph> {
    loop {
        let base = random_graph(
            rng,
            &GraphSpec {
                max_n: 5,
                min_n: 2,
                edge_prob: 0.4,
                loop_prob: 0.2,
                weight_range: Some(2),
            },
        );
        let mut family = vec![base.clone()];
        for _ in 0..3 {
            let s = random_structural_set(rng, &base);
            let set = StructuralSet::new(&base, &s).unwrap();
            let x = expand(&base, &set).unwrap().expanded;
            family.push(shuffled(rng, &x));
        }
        family.push(shuffled(rng, &base));
        if family.iter().all(|g| g.len() <= cap) {
            return family;
        }
    }
}

pub fn shuffled(rng: &mut TestRng, g: &WeightedDigraph) -> WeightedDigraph {
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.shuffle(rng);
    let tag: u32 = rng.gen();
    g.permuted(&order)
        .relabeled(|l| format!("{l}_{tag:x}"))
        .unwrap()
}

pub fn check_equivalence_laws(
    family: &[WeightedDigraph],
    rule: &SelectionRule,
) -> Result<(), String> {
    let n = family.len();
    let mut eq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            eq[i][j] = spectrally_equivalent(&family[i], &family[j], rule)
                .map_err(|e| e.to_string())?
                .equivalent;
        }
    }
    for i in 0..n {
        if !eq[i][i] {
            return Err(format!("{}: not reflexive on {:?}", rule.name(), family[i]));
        }
        for j in 0..n {
            if eq[i][j] != eq[j][i] {
                return Err(format!(
                    "{}: not symmetric on members {i}, {j}",
                    rule.name()
                ));
            }
            for k in 0..n {
                if eq[i][j] && eq[j][k] && !eq[i][k] {
                    return Err(format!(
                        "{}: not transitive on members {i}, {j}, {k}",
                        rule.name()
                    ));
                }
            }
        }
    }
    Ok(())
}

pub fn check_rule_equivariance(
    rng: &mut TestRng,
    g: &WeightedDigraph,
    rule: &SelectionRule,
) -> Result<(), String> {
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.shuffle(rng);
    let h = g.permuted(&order);
    let mut a = apply_rule(rule, g).map_err(|e| e.to_string())?;
    let mut b = apply_rule(rule, &h).map_err(|e| e.to_string())?;
    a.sort();
    b.sort();
    if a == b {
        Ok(())
    } else {
        Err(format!(
            "{}: {a:?} vs {b:?} after permuting {g:?}",
            rule.name()
        ))
    }
}
