use std::collections::BTreeMap;

use num_complex::Complex64;

use super::RegionParams;
use crate::error::{LabError, Result};

/// Produces the spectral parameters probed at a given `h`.
pub trait ZSampler: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &str;
    fn sample(&self, h: f64, params: &RegionParams) -> Vec<Complex64>;
}

#[derive(Debug)]
struct Fixed(Vec<Complex64>);

impl ZSampler for Fixed {
    fn name(&self) -> &str {
        "fixed"
    }
    fn sample(&self, _: f64, _: &RegionParams) -> Vec<Complex64> {
        self.0.clone()
    }
}

/// `z = T + iy` shifted onto the imaginary axis: `z = i (T + y)`.
#[derive(Debug)]
struct ImaginaryAxis(Vec<f64>);

impl ZSampler for ImaginaryAxis {
    fn name(&self) -> &str {
        "imaginary_axis"
    }
    fn sample(&self, _: f64, p: &RegionParams) -> Vec<Complex64> {
        self.0.iter().map(|&y| Complex64::new(0.0, p.t + y)).collect()
    }
}

/// `|z| = T + y` with the real part on the parabola, pulled inward by a
/// relative `1e-12` so that rounding cannot push it outside.
#[derive(Debug)]
struct ParabolaBoundary(Vec<f64>);

pub const BOUNDARY_INSET: f64 = 1e-12;

impl ZSampler for ParabolaBoundary {
    fn name(&self) -> &str {
        "parabola_boundary"
    }
    fn sample(&self, h: f64, p: &RegionParams) -> Vec<Complex64> {
        self.0
            .iter()
            .map(|&y| {
                let modulus = p.t + y;
                let re = p.parabola(h, y) * (1.0 - BOUNDARY_INSET);
                Complex64::new(re, (modulus * modulus - re * re).max(0.0).sqrt())
            })
            .collect()
    }
}

/// `z = -(T + y)`.
#[derive(Debug)]
struct NegativeReal(Vec<f64>);

impl ZSampler for NegativeReal {
    fn name(&self) -> &str {
        "negative_real"
    }
    fn sample(&self, _: f64, p: &RegionParams) -> Vec<Complex64> {
        self.0.iter().map(|&y| Complex64::new(-(p.t + y), 0.0)).collect()
    }
}

/// What a sampler is built from.
#[derive(Clone, Debug, PartialEq)]
pub enum SamplerInput {
    Points(Vec<Complex64>),
    Distances(Vec<f64>),
}

type Ctor = fn(SamplerInput) -> Result<Box<dyn ZSampler>>;

fn distances(input: SamplerInput, name: &str) -> Result<Vec<f64>> {
    match input {
        SamplerInput::Distances(ys) if ys.iter().all(|y| *y > 0.0 && y.is_finite()) => Ok(ys),
        SamplerInput::Distances(_) => Err(LabError::InvalidParameter(format!("{name}: distances must be positive"))),
        SamplerInput::Points(_) => Err(LabError::InvalidParameter(format!("{name} takes distances y, not points"))),
    }
}

/// Named z-samplers selectable at runtime.
pub struct SamplerRegistry {
    entries: BTreeMap<String, Ctor>,
}

impl SamplerRegistry {
    pub fn register(&mut self, name: &str, ctor: Ctor) {
        self.entries.insert(name.to_string(), ctor);
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(|s| s.as_str()).collect()
    }

    pub fn build(&self, name: &str, input: SamplerInput) -> Result<Box<dyn ZSampler>> {
        let ctor = self
            .entries
            .get(name)
            .ok_or_else(|| LabError::Unknown { kind: "z-sampler", name: name.to_string() })?;
        ctor(input)
    }
}

impl Default for SamplerRegistry {
    fn default() -> Self {
        let mut r = SamplerRegistry { entries: BTreeMap::new() };
        r.register("fixed", |input| match input {
            SamplerInput::Points(zs) => Ok(Box::new(Fixed(zs))),
            SamplerInput::Distances(_) => Err(LabError::InvalidParameter("fixed takes points z".into())),
        });
        r.register("imaginary_axis", |i| Ok(Box::new(ImaginaryAxis(distances(i, "imaginary_axis")?))));
        r.register("parabola_boundary", |i| Ok(Box::new(ParabolaBoundary(distances(i, "parabola_boundary")?))));
        r.register("negative_real", |i| Ok(Box::new(NegativeReal(distances(i, "negative_real")?))));
        r
    }
}
