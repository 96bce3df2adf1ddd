use std::sync::Arc;

use super::{ModelParams, ModelRegistry, PotentialModel, Profile1d};
use crate::error::{LabError, Result};
use crate::phase::MultiIndex;

/// `coeff * prod_k factors[k](x_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub factors: Vec<Profile1d>,
}

/// A finite sum of separable terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeparableField {
    pub terms: Vec<Term>,
}

impl SeparableField {
    pub fn zero() -> Self {
        SeparableField::default()
    }

    /// `coeff * f(x_axis)` in `n` variables.
    pub fn along(n: usize, axis: usize, coeff: f64, f: Profile1d) -> Self {
        let mut factors = vec![Profile1d::ONE; n];
        factors[axis] = f;
        SeparableField { terms: vec![Term { coeff, factors }] }
    }

    /// `coeff * sum_k f(x_k)`.
    pub fn sum_over_axes(n: usize, coeff: f64, f: Profile1d) -> Self {
        (0..n).fold(SeparableField::zero(), |acc, k| acc.plus(SeparableField::along(n, k, coeff, f)))
    }

    /// `coeff * prod_k f(x_k)`.
    pub fn product_over_axes(n: usize, coeff: f64, f: Profile1d) -> Self {
        SeparableField { terms: vec![Term { coeff, factors: vec![f; n] }] }
    }

    pub fn plus(mut self, other: SeparableField) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0.0)
    }

    pub fn eval(&self, x: &[f64], alpha: &MultiIndex) -> f64 {
        let orders = alpha.orders();
        self.terms
            .iter()
            .map(|t| {
                t.factors
                    .iter()
                    .zip(x)
                    .zip(orders)
                    .fold(t.coeff, |acc, ((f, &xk), &o)| acc * f.derivative(o, xk))
            })
            .sum()
    }
}

#[derive(Clone, Debug)]
pub struct SeparableModel {
    pub name: String,
    pub n: usize,
    pub t: f64,
    pub v1: SeparableField,
    pub v2: SeparableField,
    pub a: Vec<SeparableField>,
}

impl PotentialModel for SeparableModel {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn offset(&self) -> f64 {
        self.t
    }
    fn v1(&self, x: &[f64], alpha: &MultiIndex) -> f64 {
        self.v1.eval(x, alpha)
    }
    fn v2(&self, x: &[f64], alpha: &MultiIndex) -> f64 {
        self.v2.eval(x, alpha)
    }
    fn a(&self, component: usize, x: &[f64], alpha: &MultiIndex) -> f64 {
        self.a[component].eval(x, alpha)
    }
    fn is_magnetic(&self) -> bool {
        self.a.iter().any(|f| !f.is_zero())
    }
}

fn model(
    name: &str,
    p: &ModelParams,
    t: f64,
    v1: SeparableField,
    v2: SeparableField,
    a: Vec<SeparableField>,
) -> Result<Arc<dyn PotentialModel>> {
    Ok(Arc::new(SeparableModel { name: name.into(), n: p.dim, t, v1, v2, a }))
}

fn checked_dim(p: &ModelParams) -> Result<usize> {
    if (1..=2).contains(&p.dim) {
        Ok(p.dim)
    } else {
        Err(LabError::InvalidParameter(format!("model dimension must be 1 or 2, got {}", p.dim)))
    }
}

const SQUARE: Profile1d = Profile1d::Monomial(2);
const LINEAR: Profile1d = Profile1d::Monomial(1);

fn no_field(n: usize) -> Vec<SeparableField> {
    vec![SeparableField::zero(); n]
}

fn davies(p: &ModelParams) -> Result<Arc<dyn PotentialModel>> {
    let n = checked_dim(p)?;
    let v2 = SeparableField::sum_over_axes(n, 1.0, SQUARE);
    model("davies", p, 0.0, SeparableField::zero(), v2, no_field(n))
}

fn harmonic_complex(p: &ModelParams) -> Result<Arc<dyn PotentialModel>> {
    let n = checked_dim(p)?;
    let v1 = SeparableField::sum_over_axes(n, 1.0, SQUARE);
    let v2 = SeparableField::along(n, 0, 1.0, LINEAR);
    model("harmonic_complex", p, 0.0, v1, v2, no_field(n))
}

fn harmonic(p: &ModelParams) -> Result<Arc<dyn PotentialModel>> {
    let n = checked_dim(p)?;
    let v1 = SeparableField::sum_over_axes(n, 1.0, SQUARE);
    model("harmonic", p, 0.0, v1, SeparableField::zero(), no_field(n))
}

fn free(p: &ModelParams) -> Result<Arc<dyn PotentialModel>> {
    let n = checked_dim(p)?;
    model("free", p, 0.0, SeparableField::zero(), SeparableField::zero(), no_field(n))
}

fn magnetic_sqrt(p: &ModelParams) -> Result<Arc<dyn PotentialModel>> {
    // Componentwise square roots only decay along their own axis, so the
    // second derivatives of A fail to decay in |x| once n > 1.
    if p.dim != 1 {
        return Err(LabError::InvalidParameter("magnetic_sqrt is one-dimensional".into()));
    }
    let n = 1;
    let v1 = SeparableField::sum_over_axes(n, 1.0, SQUARE);
    let v2 = SeparableField::along(n, 0, 1.0, LINEAR);
    let a = (0..n).map(|k| SeparableField::along(n, k, 1.0, Profile1d::Sqrt1p)).collect();
    model("magnetic_sqrt", p, 0.0, v1, v2, a)
}

fn magnetic_linear(p: &ModelParams) -> Result<Arc<dyn PotentialModel>> {
    let n = checked_dim(p)?;
    if !p.alpha.is_finite() {
        return Err(LabError::InvalidParameter("alpha must be finite".into()));
    }
    let v1 = SeparableField::sum_over_axes(n, 1.0, SQUARE);
    let v2 = SeparableField::along(n, 0, 1.0, LINEAR);
    let a = (0..n).map(|k| SeparableField::along(n, k, p.alpha, LINEAR)).collect();
    model("magnetic_linear", p, 0.0, v1, v2, a)
}

fn bounded_imag(p: &ModelParams) -> Result<Arc<dyn PotentialModel>> {
    let n = checked_dim(p)?;
    let v2 = SeparableField::product_over_axes(n, 1.0, Profile1d::Lorentz);
    model("bounded_imag", p, 1.0, SeparableField::zero(), v2, no_field(n))
}

fn imag_linear(p: &ModelParams) -> Result<Arc<dyn PotentialModel>> {
    let n = checked_dim(p)?;
    let v2 = SeparableField::along(n, 0, 1.0, LINEAR);
    model("imag_linear", p, 0.0, SeparableField::zero(), v2, no_field(n))
}

pub(super) fn registry() -> ModelRegistry {
    let mut r = ModelRegistry::empty();
    r.register("davies", "V = i|x|^2, A = 0", davies);
    r.register("harmonic_complex", "V = |x|^2 + i x_1, A = 0", harmonic_complex);
    r.register("harmonic", "V = |x|^2, A = 0 (self-adjoint)", harmonic);
    r.register("free", "V = 0, A = 0", free);
    r.register("magnetic_sqrt", "V = |x|^2 + i x_1, A_k = (1 + x_k^2)^(1/2)", magnetic_sqrt);
    r.register("magnetic_linear", "V = |x|^2 + i x_1, A = alpha x", magnetic_linear);
    r.register("bounded_imag", "V = i prod_k 1/(1 + x_k^2), T = 1", bounded_imag);
    r.register("imag_linear", "V = i x_1 (violates the growth condition on V2)", imag_linear);
    r
}
