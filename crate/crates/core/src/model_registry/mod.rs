//! Potential and magnetic models with closed-form derivatives, and audits of
//! their standing growth conditions on finite samples.

mod audit;
mod builtin;
mod profile1d;

pub use audit::{
    audit_conditions, default_sample, derivative_check, growth_factor, ConditionRow,
    DerivativeCheck, ModelConditionReport, DEFAULT_CEILING, GROWTH_LIMIT,
};
pub use builtin::{SeparableField, SeparableModel, Term};
pub use profile1d::Profile1d;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::jet::Jet;
use crate::phase::MultiIndex;

/// Data `(V1, V2, A)` of a magnetic Schrödinger operator with the offset `T`.
///
/// Derivatives are indexed by spatial multi-indices of length `dim()` and
/// must be exact up to total order 4.
pub trait PotentialModel: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn offset(&self) -> f64;
    fn v1(&self, x: &[f64], alpha: &MultiIndex) -> f64;
    fn v2(&self, x: &[f64], alpha: &MultiIndex) -> f64;
    fn a(&self, component: usize, x: &[f64], alpha: &MultiIndex) -> f64;
    /// `false` when `A` vanishes identically.
    fn is_magnetic(&self) -> bool;
}

/// Values of `V1`, `V2` and `A` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialValues {
    pub v1: f64,
    pub v2: f64,
    pub a: Vec<f64>,
}

pub fn eval_potentials(model: &dyn PotentialModel, x: &[f64]) -> Result<PotentialValues> {
    if x.len() != model.dim() || x.iter().any(|v| !v.is_finite()) {
        return Err(LabError::InvalidParameter(format!(
            "spatial point {x:?} must be finite with dimension {}",
            model.dim()
        )));
    }
    let zero = MultiIndex::zero(x.len());
    let out = PotentialValues {
        v1: model.v1(x, &zero),
        v2: model.v2(x, &zero),
        a: (0..model.dim()).map(|k| model.a(k, x, &zero)).collect(),
    };
    if !out.v1.is_finite() || !out.v2.is_finite() || out.a.iter().any(|v| !v.is_finite()) {
        return Err(LabError::NonFiniteModel { model: model.name().into(), x: x.to_vec() });
    }
    Ok(out)
}

/// Lifts a spatial function to a jet in the `2n` phase-space variables,
/// using its derivatives up to order 2 at `x`.
pub fn spatial_jet(x: &[f64], f: impl Fn(&MultiIndex) -> f64) -> Jet {
    let n = x.len();
    let zero = MultiIndex::zero(n);
    let mut j = Jet::constant(2 * n, f(&zero));
    for a in 0..n {
        let ea = zero.bumped(a);
        j.g[a] = f(&ea);
        for b in a..n {
            let v = f(&ea.bumped(b));
            j.h[a][b] = v;
            j.h[b][a] = v;
        }
    }
    j
}

/// Parameters accepted by model constructors.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub dim: usize,
    /// Slope of the linear vector potential.
    pub alpha: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams { dim: 1, alpha: 1.0 }
    }
}

type Constructor = fn(&ModelParams) -> Result<Arc<dyn PotentialModel>>;

/// Name-indexed registry of model constructors.
pub struct ModelRegistry {
    entries: BTreeMap<&'static str, (Constructor, &'static str)>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        ModelRegistry { entries: BTreeMap::new() }
    }

    pub fn register(&mut self, name: &'static str, summary: &'static str, ctor: Constructor) {
        self.entries.insert(name, (ctor, summary));
    }

    pub fn names(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.entries.iter().map(|(n, (_, s))| (*n, *s))
    }

    pub fn build(&self, name: &str, params: &ModelParams) -> Result<Arc<dyn PotentialModel>> {
        let (ctor, _) = self
            .entries
            .get(name)
            .ok_or_else(|| LabError::Unknown { kind: "model", name: name.into() })?;
        ctor(params)
    }
}

impl Default for ModelRegistry {
    fn default() -> Self {
        builtin::registry()
    }
}
