//! Expander-style codes from stacked permuted layers of short constituent
//! codes over GF(q): construction and sampling, exhaustive spectrum
//! analysis, ensemble-average spectra, and distance bounds (existence,
//! finite-length and asymptotic upper caps, ensemble lower bounds from
//! exponent functionals with parameter optimization).
//!
//! All randomized entries are driven by a seeded ChaCha stream, so every
//! sample is reproducible byte for byte. The heavier grid computations run
//! data-parallel under the default `parallel` feature and fall back to
//! sequential execution (identical outputs) without it.

pub mod analysis;
pub mod bounds;
pub mod constituent;
pub mod ensemble;
pub mod error;
pub mod exec;
pub mod galois;
pub mod matrix;

/// Exact rationals used for rates and dimension bookkeeping.
pub type Rational = num_rational::Ratio<i64>;

pub use analysis::{analyze, ensemble_average_spectrum, layer_enumerator, CodeReport};
pub use bounds::{
    default_delta0_grid, default_ell_range, entropy_q, eval_f, inner_max, layer_rate,
    lower_bound_root, optimize_delta0, plotkin_term, upper_asymptotic, upper_finite,
    upper_finite_with_rate, vg_bound, Achiever, BoundKind, BoundQuery, BoundResult, FKind,
};
pub use constituent::{
    eval_log_g0, exact_weight_enumerator, g0_estimate_expurgated, g0_estimate_rs, rs_parity_check,
    CodeFamily, ConstituentCode, EstimateKind, WeightEnumerator,
};
pub use ensemble::{
    assemble_expander, block_diagonal, embed_subcode_word, sample, truncated_subcode, CodeSample,
    EnsembleKind, EnsembleSpec, ExpanderParams,
};
pub use error::{Error, Result};
pub use galois::{make_field, make_field_from_order, Field, FieldElement, FieldSpec};
pub use matrix::{ColumnMap, MatrixGF};
