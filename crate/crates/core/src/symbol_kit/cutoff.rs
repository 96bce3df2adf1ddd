use std::fmt;
use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::jet::Jet;

/// Monotone transition `S: [0, 1] -> [0, 1]` with `S(0) = 0`, `S(1) = 1`
/// and flat derivatives at both ends.
pub trait Transition: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    /// `S^(order)(u)` for `u` in `[0, 1]`.
    fn eval(&self, u: f64, order: usize) -> f64;
}

/// Transition given by a polynomial in `u`, stored as `(power, coefficient)`.
#[derive(Debug)]
pub struct PolynomialStep {
    name: &'static str,
    terms: &'static [(i32, f64)],
}

impl Transition for PolynomialStep {
    fn name(&self) -> &str {
        self.name
    }

    fn eval(&self, u: f64, order: usize) -> f64 {
        let k = order as i32;
        self.terms
            .iter()
            .filter(|(p, _)| *p >= k)
            .map(|&(p, c)| {
                let falling: f64 = ((p - k + 1)..=p).map(f64::from).product();
                c * falling * u.powi(p - k)
            })
            .sum()
    }
}

pub static SMOOTHSTEP7: PolynomialStep = PolynomialStep {
    name: "smoothstep7",
    terms: &[(4, 35.0), (5, -84.0), (6, 70.0), (7, -20.0)],
};

pub static SMOOTHSTEP9: PolynomialStep = PolynomialStep {
    name: "smoothstep9",
    terms: &[(5, 126.0), (6, -420.0), (7, 540.0), (8, -315.0), (9, 70.0)],
};

pub fn transition_names() -> [&'static str; 2] {
    ["smoothstep7", "smoothstep9"]
}

pub fn transition_by_name(name: &str) -> Result<Arc<dyn Transition>> {
    match name {
        "smoothstep7" => Ok(Arc::new(PolynomialStep { ..SMOOTHSTEP7 })),
        "smoothstep9" => Ok(Arc::new(PolynomialStep { ..SMOOTHSTEP9 })),
        _ => Err(LabError::Unknown { kind: "cutoff profile", name: name.into() }),
    }
}

/// Radial cutoff equal to 1 on `|s| <= r0` and 0 on `|s| >= r1`.
#[derive(Clone, Debug)]
pub struct CutoffProfile {
    shape: Arc<dyn Transition>,
    pub r0: f64,
    pub r1: f64,
}

impl CutoffProfile {
    pub fn new(shape: Arc<dyn Transition>, r0: f64, r1: f64) -> Self {
        assert!(0.0 < r0 && r0 < r1);
        CutoffProfile { shape, r0, r1 }
    }

    /// Plateau 1, support 2.
    pub fn chi(shape: Arc<dyn Transition>) -> Self {
        CutoffProfile::new(shape, 1.0, 2.0)
    }

    /// Plateau 1/2, support 1.
    pub fn psi(shape: Arc<dyn Transition>) -> Self {
        CutoffProfile::new(shape, 0.5, 1.0)
    }

    pub fn shape_name(&self) -> &str {
        self.shape.name()
    }

    pub fn value(&self, s: f64) -> f64 {
        self.derivative(s, 0)
    }

    /// `d^k/ds^k` of the cutoff, `k <= 4`.
    pub fn derivative(&self, s: f64, k: usize) -> f64 {
        let a = s.abs();
        if a <= self.r0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        if a >= self.r1 {
            return 0.0;
        }
        let w = self.r1 - self.r0;
        let u = (a - self.r0) / w;
        let sign = if s < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        let d = -self.shape.eval(u, k) * sign / w.powi(k as i32);
        if k == 0 {
            1.0 + d
        } else {
            d
        }
    }

    pub fn jet(&self, s: &Jet) -> Jet {
        s.map(self.derivative(s.v, 0), self.derivative(s.v, 1), self.derivative(s.v, 2))
    }
}
