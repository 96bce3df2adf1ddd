//! Smallest singular values of `P - z` across `(h, z)` sweeps inside the
//! admissible region, with lower-bound certification and exponent fits.

mod pq;
mod region;
mod sampler;
mod sweep;


pub use pq::{compare_pq, PacketBox, PqComparison, PACKETS};
pub use region::{
    ensure_in_region, region_contains, region_violation, RegionParams, MODULUS_CONDITION, PARABOLA_CONDITION,
};
pub use sampler::{SamplerInput, SamplerRegistry, ZSampler, BOUNDARY_INSET};
pub use sweep::{
    certify_lower_bound, choose_half_width, fit_exponents, quasimode_tail, sigma_min, sweep, sweep_with, Certification,
    ExponentFit, FitAxis, GridPolicy, HalfWidthRule, SweepOutcome, SweepRecord, DEFAULT_CERTIFICATION_FLOOR,
    MIN_FIT_RECORDS, SWEEP_CSV_HEADER,
};
