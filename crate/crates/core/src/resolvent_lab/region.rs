use num_complex::Complex64;

use crate::error::{LabError, Result};

/// Constants delimiting the admissible spectral parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionParams {
    pub k: f64,
    pub m: f64,
    pub c0: f64,
    pub t: f64,
}

impl Default for RegionParams {
    fn default() -> Self {
        RegionParams { k: 2.0, m: 2.0, c0: 1.0, t: 0.0 }
    }
}

pub const MODULUS_CONDITION: &str = "|z| >= K*T + M*h";
pub const PARABOLA_CONDITION: &str = "Re z <= C0*h^(2/3)*(|z|-T)^(1/3)";

impl RegionParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(LabError::InvalidParameter(what));
        if !(self.k > 1.0) {
            return bad(format!("K must exceed 1, got {}", self.k));
        }
        if !(self.m >= 2.0) {
            return bad(format!("M must be at least 2, got {}", self.m));
        }
        if !(self.c0 > 0.0 && self.c0 <= 1.0) {
            return bad(format!("C0 must lie in (0, 1], got {}", self.c0));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return bad(format!("T must be nonnegative, got {}", self.t));
        }
        Ok(())
    }

    /// `C0 h^{2/3} y^{1/3}`, the largest admissible real part at distance `y`.
    pub fn parabola(&self, h: f64, y: f64) -> f64 {
        self.c0 * h.powf(2.0 / 3.0) * y.cbrt()
    }
}

/// The first violated condition, if any.
pub fn region_violation(z: Complex64, h: f64, params: &RegionParams) -> Option<&'static str> {
    let modulus = z.norm();
    if modulus < params.k * params.t + params.m * h {
        return Some(MODULUS_CONDITION);
    }
    if z.re > params.parabola(h, modulus - params.t) {
        return Some(PARABOLA_CONDITION);
    }
    None
}

pub fn region_contains(z: Complex64, h: f64, params: &RegionParams) -> bool {
    region_violation(z, h, params).is_none()
}

/// Errors naming the violated condition.
pub fn ensure_in_region(z: Complex64, h: f64, params: &RegionParams) -> Result<()> {
    match region_violation(z, h, params) {
        None => Ok(()),
        Some(condition) => Err(LabError::Region { z: format!("{z} at h = {h}"), condition: condition.into() }),
    }
}
