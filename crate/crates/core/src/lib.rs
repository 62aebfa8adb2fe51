//! Isospectral reduction, expansion and comparison of weighted directed
//! networks whose edge weights are rational functions of `l`.
//!
//! ```
//! use isoreduce::{reduce_subset, spectrum, spectra_match, CorrectionSet, WeightedDigraph};
//!
//! let g = WeightedDigraph::build_parsed(["v1", "v2"], [("v1", "v2", "1"), ("v2", "v1", "1")])?;
//! let r = reduce_subset(&g, &["v1"])?;
//! assert_eq!(r.reduced.loop_weight(0).to_string(), "1/l");
//!
//! let corr = CorrectionSet::from_loop_weights(&r.correction)?;
//! let verdict = spectra_match(&spectrum(&g, 1e-8)?, &spectrum(&r.reduced, 1e-8)?, &corr, 1e-8);
//! assert!(verdict.is_match());
//! # Ok::<(), isoreduce::Error>(())
//! ```

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod netgraph;
pub mod ratfun;
pub mod reduce;
pub mod spectrum;
pub mod structural;
pub mod transform;

pub use equivalence::{apply_rule, spectrally_equivalent, weighted_isomorphic, SelectionRule};
pub use error::{Error, Result};
pub use netgraph::WeightedDigraph;
pub use ratfun::{Polynomial, RationalFunction};
pub use reduce::{reduce_structural, reduce_subset, ReductionResult};
pub use spectrum::{spectra_match, spectrum, CorrectionSet, MatchVerdict, SpectrumMultiset};
pub use structural::{StructuralSet, StructuralVerdict};
pub use transform::{expand, fixed_weight_reduce, sparsifiable, weight_set_closure_check};
