//! Constructed phase-space symbols: cutoffs, the truncated symbol, weights,
//! the ratio symbol, and the constants fixed from them.

mod constants;
mod cutoff;
mod field;
mod symbols;

pub use constants::{
    b_constant, calibrate_constants, choose_r, weight_terms, Calibration, ProofConstants, WeightParams,
};
pub use cutoff::{
    transition_by_name, transition_names, CutoffProfile, PolynomialStep, Transition, SMOOTHSTEP7, SMOOTHSTEP9,
};
pub use field::{hamilton_derivative, ClosureSymbol, JetSymbol, SymbolField};
pub use symbols::{SymbolKit, Variant, F_DENOMINATOR_FLOOR};

use std::sync::Arc;

use crate::error::Result;
use crate::model_registry::{default_sample, PotentialModel};

/// Kit with both cutoffs drawn from the named transition and `R` from the
/// default spatial sample.
pub fn kit_for(model: Arc<dyn PotentialModel>, profile: &str) -> Result<SymbolKit> {
    let shape = transition_by_name(profile)?;
    let r = choose_r(model.as_ref(), &default_sample(model.dim()))?;
    Ok(SymbolKit::new(model, CutoffProfile::chi(shape.clone()), CutoffProfile::psi(shape), r))
}

#[cfg(test)]
mod tests;
