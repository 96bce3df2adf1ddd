//! Dense Weyl and Wick quantization on a periodic one-dimensional grid.

mod cache;
mod composition;
mod grid;
mod matrix;
mod weyl;
mod wick;


pub use cache::{CacheKey, MatrixCache};
pub use composition::{
    check_weyl_composition, composition_grid, empirical_opnorm, lanczos_norm, log_log_fit, poisson_bracket,
    CompositionReport, CompositionRow, LinearOperator, ProductDefect,
};
pub use grid::GridSpec;
pub use matrix::{OperatorMatrix, Provenance, QuantKind};
pub use weyl::{fourier_multiplier, weyl_from_values, weyl_general, weyl_poly};
pub use wick::{
    check_wick_identities, coherent_state, default_battery, resolve_normalization, weyl_of_wick_symbol, wick,
    wick_remainder, wick_remainder_smoothed, wick_suite_grid, BatterySymbol, CoherentFrame, Normalization,
    NormalizationFinding, WickIdentityReport, WickIdentityRow, ADJOINT_TOL, FRAME_DEFECT_LIMIT, NORM_SLACK,
};
