//! Exact arithmetic in Galois rings Z_{p^e}[x]/(f), additive character
//! sums with certified cyclotomic bookkeeping, configuration counts for
//! dot-product constraint systems over subsets of R^d, and rigorous
//! comparison of counting thresholds against ambient cardinalities.
//!
//! Everything is exact: ring arithmetic works on residues, character sums
//! on integer coordinates in a cyclotomic basis, and threshold comparisons
//! on rationals and certified square-root enclosures. Floating point only
//! appears in optional display output.

pub mod bounds;
pub mod charsum;
pub mod count;
pub mod countio;
pub mod error;
mod magnitude;
mod modp;
pub mod ring;
pub mod scalar;
mod teich;

pub use bounds::{
    ambient_size, check_conclusion, forest_thresholds, nontrivial_dimension, pair_threshold_closed,
    pair_thresholds, single_dot_ceiling, single_threshold_closed, single_threshold_refined,
    BoundReport, CeilingPair, ConclusionCheck, ForestThresholds, NontrivialDimension,
    PairThresholds, ThresholdFamily,
};
pub use charsum::{
    char_sum, char_sum_full, ideal_sum_reduction_check, steele_bound_check, unit_sum,
    CyclotomicSum, IdealReductionReport, SteeleReport,
};
pub use count::{
    dot, k_chain, matrix_solutions, matrix_solutions_brute, nu, nu_char_decomposition,
    nu_from_table, nu_spectrum, pi_forest, pi_forest_brute, pi_pair, pi_pair_brute, star,
    DotTable, ForestSpec, NuDecomposition, PointSet, DEFAULT_WORK_BUDGET,
};
pub use countio::{parse_forest, parse_point_set, render_forest, render_point_set};
pub use error::{Error, Result};
pub use magnitude::Magnitude;
pub use ring::{ElementsIter, Ring, RingElement};
pub use scalar::Residue;
pub use teich::{PadicDigits, TeichmullerSet};

/// Galois rings with machine-word coefficient residues; fits p^e < 2^64.
pub type Ring64 = Ring<u64>;
pub type Element64 = RingElement<u64>;

/// Arbitrary-precision coefficient residues for p^e beyond 2^64.
pub type RingBig = Ring<num_bigint::BigUint>;
pub type ElementBig = RingElement<num_bigint::BigUint>;
