//! Command-line front end. `run` is the whole program minus process
//! plumbing, so it can be driven from tests.

mod document;
mod dot;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

pub use document::{emit, parse_graph, EdgeDocument, GraphDocument, FORMAT_VERSION};
pub use dot::emit_dot;

use crate::equivalence::{spectrally_equivalent, SelectionRule};
use crate::error::Error;
use crate::netgraph::WeightedDigraph;
use crate::reduce::{reduce_structural, reduce_subset, ReductionResult};
use crate::spectrum::{
    spectra_match, spectrum, CorrectionSet, MatchVerdict, SpectrumMultiset, DEFAULT_TOL,
};
use crate::structural::{is_structural, StructuralSet};
use crate::transform::{expand, fixed_weight_reduce, weight_set_closure_check};

/// Environment variable overriding the default eigenvalue tolerance.
pub const TOL_ENV: &str = "ISOREDUCE_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_STRUCTURAL: i32 = 2;
pub const EXIT_NOT_EQUIVALENT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// Stable exit code and diagnostic tag for each library error.
pub fn error_code(e: &Error) -> (i32, &'static str) {
    match e {
        Error::NotStructural(_) => (2, "not-structural"),
        Error::Syntax { .. } => (4, "syntax"),
        Error::Expression { .. } => (5, "expression"),
        Error::UnknownVertex(_) => (6, "unknown-vertex"),
        Error::DuplicateVertex(_) => (7, "duplicate-vertex"),
        Error::EmptySet => (8, "empty-set"),
        Error::EmptyGraph => (9, "empty-graph"),
        Error::LambdaLoop { .. } => (10, "lambda-loop"),
        Error::DivisionByZero => (11, "division-by-zero"),
        Error::PoleAtPoint(_) => (12, "pole"),
        Error::RootFindingFailed { .. } => (13, "root-finding"),
        Error::DegreeCapExceeded { .. } => (14, "degree-cap"),
        Error::SingularBlock => (15, "singular-block"),
        Error::IdenticallyZeroDeterminant => (16, "zero-determinant"),
        Error::NonConstantLoop(_) => (17, "non-constant-loop"),
        Error::LoopInComplement(_) => (18, "loop-in-complement"),
        Error::SearchBudgetExceeded { .. } => (19, "search-budget"),
        Error::UnknownRule(_) => (20, "unknown-rule"),
    }
}

#[derive(Parser)]
#[command(
    name = "isoreduce",
    version,
    about = "Isospectral reduction and expansion of weighted digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a vertex set is structural.
    Validate {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Reduce a graph onto a vertex set and report both spectra.
    Reduce {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<String>,
        /// Require the set to be structural and reduce in one step.
        #[arg(long)]
        structural_only: bool,
        /// Write the report here and print only the reduced graph.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print eigenvalues with multiplicities.
    Spectrum {
        file: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compare two graphs after reducing each over a selection rule.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value = "min-out-degree")]
        rule: String,
    },
    /// Reduce while keeping weights in the ring the input weights generate.
    FixedReduce {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Expand so that no two bundle paths share an interior vertex.
    Sparsify {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Print the graph in Graphviz DOT format.
    Dot { file: PathBuf },
}

enum Failure {
    Lib(Error),
    Io(PathBuf, io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Run the program on `args` (including the program name). Returns the
/// process exit status.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut env = Env { stdin, stdout };
    match dispatch(cli.command, &mut env) {
        Ok(code) => code,
        Err(f) => {
            let (code, tag, msg) = match f {
                Failure::Lib(e) => {
                    let (code, tag) = error_code(&e);
                    (code, tag, e.to_string())
                }
                Failure::Io(path, e) => (EXIT_IO, "io", format!("{}: {e}", path.display())),
                Failure::Usage(m) => (EXIT_USAGE, "usage", m),
            };
            let msg = msg.replace('\n', " ");
            let _ = writeln!(stderr, "isoreduce: error[{tag}]: {msg}");
            code
        }
    }
}

struct Env<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Env<'_> {
    fn load(&mut self, path: &Path) -> std::result::Result<WeightedDigraph, Failure> {
        let bytes = if path.as_os_str() == "-" {
            let mut buf = Vec::new();
            self.stdin
                .read_to_end(&mut buf)
                .map_err(|e| Failure::Io(path.to_path_buf(), e))?;
            buf
        } else {
            fs::read(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?
        };
        Ok(parse_graph(&bytes)?)
    }

    fn print(&mut self, text: &str) -> std::result::Result<(), Failure> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))
    }
}

fn resolve_tol(flag: Option<f64>) -> std::result::Result<f64, Failure> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{TOL_ENV} is not a number: {v}")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Usage(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(tol)
}

/// Drop blanks left by stray commas so `--set ""` means the empty set.
fn vertex_list(raw: Vec<String>) -> Vec<String> {
    raw.into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn dispatch(command: Command, env: &mut Env<'_>) -> Outcome {
    match command {
        Command::Validate { file, set } => {
            let g = env.load(&file)?;
            let verdict = is_structural(&g, &vertex_list(set))?;
            if verdict.is_ok() {
                env.print("structural\n")?;
                Ok(EXIT_OK)
            } else {
                env.print(&format!("not structural: {verdict}\n"))?;
                Ok(EXIT_NOT_STRUCTURAL)
            }
        }
        Command::Reduce {
            file,
            keep,
            structural_only,
            report,
            tol,
        } => {
            let tol = resolve_tol(tol)?;
            let g = env.load(&file)?;
            let keep = vertex_list(keep);
            let result = if structural_only {
                let s = StructuralSet::new(&g, &keep)?;
                reduce_structural(&g, &s)?
            } else {
                reduce_subset(&g, &keep)?
            };
            let rep = ReductionReport::build(&g, &result, structural_only, tol)?;
            let json = format!(
                "{}\n",
                serde_json::to_string_pretty(&rep).expect("report serializes")
            );
            match report {
                Some(path) => {
                    fs::write(&path, json).map_err(|e| Failure::Io(path, e))?;
                    env.print(&emit(&result.reduced))?;
                }
                None => env.print(&json)?,
            }
            Ok(EXIT_OK)
        }
        Command::Spectrum { file, tol } => {
            let tol = resolve_tol(tol)?;
            let g = env.load(&file)?;
            let sp = spectrum(&g, tol)?;
            let mut out = String::new();
            for (z, m) in sp.entries() {
                out.push_str(&format!("{} {}\n", format_complex(*z), m));
            }
            env.print(&out)?;
            Ok(EXIT_OK)
        }
        Command::Equiv { left, right, rule } => {
            let rule = SelectionRule::builtin(&rule)?;
            let g = env.load(&left)?;
            let h = env.load(&right)?;
            let v = spectrally_equivalent(&g, &h, &rule)?;
            let mut out = String::new();
            if let Some(pairs) = &v.witness {
                out.push_str("equivalent\n");
                for (a, b) in pairs {
                    out.push_str(&format!("{a} -> {b}\n"));
                }
            } else {
                out.push_str("not equivalent\n");
            }
            env.print(&out)?;
            Ok(if v.equivalent {
                EXIT_OK
            } else {
                EXIT_NOT_EQUIVALENT
            })
        }
        Command::FixedReduce { file, set } => {
            let g = env.load(&file)?;
            let s = StructuralSet::new(&g, &vertex_list(set))?;
            let reduced = fixed_weight_reduce(&g, &s)?;
            let closure = weight_set_closure_check(&g, &reduced);
            let out = FixedReduceOutput {
                graph: GraphDocument::from_graph(&reduced),
                closure: ClosureOutput {
                    closed: closure.is_closed(),
                    fewer_vertices: closure.fewer_vertices,
                    violations: closure
                        .violations
                        .iter()
                        .map(|v| EdgeDocument {
                            from: v.from.clone(),
                            to: v.to.clone(),
                            weight: v.weight.to_string(),
                        })
                        .collect(),
                },
            };
            env.print(&format!(
                "{}\n",
                serde_json::to_string_pretty(&out).expect("serializes")
            ))?;
            Ok(EXIT_OK)
        }
        Command::Sparsify { file, set } => {
            let g = env.load(&file)?;
            let s = StructuralSet::new(&g, &vertex_list(set))?;
            let x = expand(&g, &s)?;
            let out = SparsifyOutput {
                graph: GraphDocument::from_graph(&x.expanded),
                delta: x.delta.iter().map(ToString::to_string).collect(),
                path_counts: x
                    .path_counts
                    .iter()
                    .map(|(v, n)| PathCount {
                        vertex: v.clone(),
                        paths: *n,
                    })
                    .collect(),
            };
            env.print(&format!(
                "{}\n",
                serde_json::to_string_pretty(&out).expect("serializes")
            ))?;
            Ok(EXIT_OK)
        }
        Command::Dot { file } => {
            let g = env.load(&file)?;
            env.print(&emit_dot(&g))?;
            Ok(EXIT_OK)
        }
    }
}

/// Round to ten decimals and print as `a`, `bi` or `a+bi`.
pub fn format_complex(z: Complex64) -> String {
    fn fmt(x: f64) -> String {
        let s = format!("{:.10}", x);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".to_string()
        } else {
            s.to_string()
        }
    }
    let re = fmt(z.re);
    let im = fmt(z.im);
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

#[derive(Serialize)]
struct SpectrumEntry {
    value: String,
    multiplicity: usize,
}

fn spectrum_entries(sp: &SpectrumMultiset) -> Vec<SpectrumEntry> {
    sp.entries()
        .iter()
        .map(|(z, m)| SpectrumEntry {
            value: format_complex(*z),
            multiplicity: *m,
        })
        .collect()
}

/// Everything needed to re-check a reduction without the input file.
#[derive(Serialize)]
pub struct ReductionReport {
    input: GraphDocument,
    subset: Vec<String>,
    method: &'static str,
    reduced: GraphDocument,
    tolerance: f64,
    spectrum_original: Vec<SpectrumEntry>,
    spectrum_reduced: Vec<SpectrumEntry>,
    removed_loops: Vec<String>,
    correction: Vec<String>,
    verdict: String,
    unexplained: Vec<String>,
}

impl ReductionReport {
    fn build(
        g: &WeightedDigraph,
        r: &ReductionResult,
        structural: bool,
        tol: f64,
    ) -> crate::Result<Self> {
        let before = spectrum(g, tol)?;
        let after = spectrum(&r.reduced, tol)?;
        let corr = CorrectionSet::from_loop_weights(&r.correction)?;
        let verdict = spectra_match(&before, &after, &corr, tol);
        let mut correction: Vec<Complex64> = corr.entries.clone();
        correction.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let (verdict, unexplained) = match verdict {
            MatchVerdict::Match => ("match", Vec::new()),
            MatchVerdict::Mismatch { unexplained } => (
                "mismatch",
                unexplained.into_iter().map(format_complex).collect(),
            ),
        };
        Ok(ReductionReport {
            input: GraphDocument::from_graph(g),
            subset: r.reduced.labels().to_vec(),
            method: if structural {
                "structural"
            } else {
                "sequential"
            },
            reduced: GraphDocument::from_graph(&r.reduced),
            tolerance: tol,
            spectrum_original: spectrum_entries(&before),
            spectrum_reduced: spectrum_entries(&after),
            removed_loops: r.correction.iter().map(ToString::to_string).collect(),
            correction: correction.into_iter().map(format_complex).collect(),
            verdict: verdict.to_string(),
            unexplained,
        })
    }
}

#[derive(Serialize)]
struct ClosureOutput {
    closed: bool,
    fewer_vertices: bool,
    violations: Vec<EdgeDocument>,
}

#[derive(Serialize)]
struct FixedReduceOutput {
    graph: GraphDocument,
    closure: ClosureOutput,
}

#[derive(Serialize)]
struct PathCount {
    vertex: String,
    paths: usize,
}

#[derive(Serialize)]
struct SparsifyOutput {
    graph: GraphDocument,
    delta: Vec<String>,
    path_counts: Vec<PathCount>,
}
