use num_complex::Complex64;

use super::{SymbolKit, Variant};
use crate::error::{LabError, Result};
use crate::model_registry::PotentialModel;
use crate::phase::{spatial_bracket, MultiIndex, PhasePoint};

/// Smallest `R = 2 R0`, with `R0` a power of two, such that
/// `|A|^2, |V| <= R0^2 <x>^2 / 16` on the sample.
pub fn choose_r(model: &dyn PotentialModel, sample: &[Vec<f64>]) -> Result<f64> {
    if sample.is_empty() {
        return Err(LabError::EmptySample);
    }
    let zero = MultiIndex::zero(model.dim());
    let mut required = 0.0f64;
    for x in sample {
        let w = spatial_bracket(x).powi(2);
        let a2: f64 = (0..model.dim()).map(|k| model.a(k, x, &zero).powi(2)).sum();
        let v = Complex64::new(model.v1(x, &zero), model.v2(x, &zero)).norm();
        required = required.max(a2 / w).max(v / w);
    }
    (0..20)
        .map(|k| 2f64.powi(k))
        .find(|r0| r0 * r0 / 16.0 >= required)
        .map(|r0| 2.0 * r0)
        .ok_or(LabError::NoTruncationRadius { required })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightParams {
    pub epsilon: f64,
    pub r: f64,
    pub c2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProofConstants {
    pub c0: f64,
    pub c1: f64,
    pub b: f64,
    pub k: f64,
    pub m: f64,
    pub t: f64,
    /// `|z| - T` for the spectral parameter currently in use.
    pub y: f64,
}

impl ProofConstants {
    pub fn new(c0: f64, c1: f64, k: f64, m: f64, t: f64) -> Self {
        ProofConstants { c0, c1, b: b_constant(c0, c1), k, m, t, y: f64::NAN }
    }

    pub fn at(mut self, z: Complex64) -> Self {
        self.y = z.norm() - self.t;
        self
    }
}

/// `B = 1/(4 C0 C1)^3`.
pub fn b_constant(c0: f64, c1: f64) -> f64 {
    (4.0 * c0 * c1).powi(-3)
}

#[derive(Clone, Debug)]
pub struct Calibration {
    pub weight: WeightParams,
    /// `min(1, 1/(2 sup |g/eps|))`.
    pub epsilon_sup: f64,
    /// Smallest ratio of the weight inequality at the chosen epsilon.
    pub weight_min_ratio: f64,
    /// `sup 2 (|q| - T)_+ / lambda_q`.
    pub required_b: f64,
    pub constants: ProofConstants,
}

/// Per-point terms of the weight inequality, split as `a + eps b` after
/// dividing by `h^(2/3) lambda^(1/3)`.
pub fn weight_terms(
    kit: &SymbolKit,
    points: &[PhasePoint],
    h: f64,
    c2: f64,
    variant: Variant,
) -> Vec<(f64, f64, usize)> {
    points
        .iter()
        .enumerate()
        .filter_map(|(i, x)| {
            let lambda = kit.lambda(x, variant);
            if lambda <= 0.0 {
                return None;
            }
            let den = h.powf(2.0 / 3.0) * lambda.cbrt();
            let re = kit.symbol(x, variant).re;
            Some(((re + c2 * h) / den, h * kit.hamilton_im_g(x, h, 1.0) / den, i))
        })
        .collect()
}

fn min_ratio(terms: &[Vec<(f64, f64, usize)>], eps: f64) -> f64 {
    terms.iter().flatten().map(|(a, b, _)| a + eps * b).fold(f64::INFINITY, f64::min)
}

/// Fixes `epsilon`, `C1`, `C0` and `B` from grid scans.
///
/// `epsilon` is the value in `[eps_sup / 64, eps_sup]` maximizing the smallest
/// weight-inequality ratio (a concave function of `epsilon`), `C1` is the
/// reciprocal of that ratio, and `C0` is the largest power of two below 1 whose
/// `B` dominates `sup 2 (|q| - T)_+ / lambda_q`.
pub fn calibrate_constants(
    kit: &SymbolKit,
    h_list: &[f64],
    points: &[PhasePoint],
    c2: f64,
    k: f64,
    m: f64,
) -> Result<Calibration> {
    if points.is_empty() || h_list.is_empty() {
        return Err(LabError::EmptySample);
    }
    let g_max = h_list
        .iter()
        .flat_map(|&h| points.iter().map(move |x| kit.g(x, h, 1.0).abs()))
        .fold(0.0, f64::max);
    let epsilon_sup = if g_max > 0.0 { (0.5 / g_max).min(1.0) } else { 1.0 };

    let terms: Vec<_> = h_list.iter().map(|&h| weight_terms(kit, points, h, c2, Variant::Q)).collect();
    let (mut lo, mut hi) = (epsilon_sup / 64.0, epsilon_sup);
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if min_ratio(&terms, m1) < min_ratio(&terms, m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let epsilon = 0.5 * (lo + hi);
    let ratio = min_ratio(&terms, epsilon);
    if !(ratio > 0.0) {
        return Err(LabError::WeightInequalityUnsatisfiable(ratio));
    }
    let c1 = 1.0 / ratio;

    let t = kit.model.offset();
    let mut required_b = 0.0f64;
    for x in points {
        let excess = (kit.q(x).norm() - t).max(0.0);
        if excess == 0.0 {
            continue;
        }
        let lambda = kit.lambda(x, Variant::Q);
        required_b = required_b.max(if lambda > 0.0 { 2.0 * excess / lambda } else { f64::INFINITY });
    }
    let c0 = (0..=20)
        .map(|j| 2f64.powi(-j))
        .find(|&c0| b_constant(c0, c1) >= required_b)
        .ok_or(LabError::NoC0 { required_b })?;

    Ok(Calibration {
        weight: WeightParams { epsilon, r: kit.r, c2 },
        epsilon_sup,
        weight_min_ratio: ratio,
        required_b,
        constants: ProofConstants::new(c0, c1, k, m, t),
    })
}
