use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::jet::Jet;
use crate::phase::{MultiIndex, PhasePoint};

/// A scalar or complex function on phase space with exact derivatives up to
/// `analytic_order()`.
pub trait SymbolField: Send + Sync {
    fn dim(&self) -> usize;
    fn label(&self) -> String;
    fn value(&self, x: &PhasePoint) -> Complex64;

    fn analytic_order(&self) -> usize {
        0
    }

    /// `d^alpha` at `x`, or `None` beyond `analytic_order()`.
    fn derivative(&self, x: &PhasePoint, alpha: &MultiIndex) -> Option<Complex64> {
        (alpha.order() == 0).then(|| self.value(x))
    }
}

type ValueFn = dyn Fn(&PhasePoint) -> Complex64 + Send + Sync;
type JetFn = dyn Fn(&PhasePoint) -> (Jet, Jet) + Send + Sync;

/// Field known only through its values.
#[derive(Clone)]
pub struct ClosureSymbol {
    n: usize,
    label: String,
    f: Arc<ValueFn>,
}

impl ClosureSymbol {
    pub fn new(
        n: usize,
        label: impl Into<String>,
        f: impl Fn(&PhasePoint) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        ClosureSymbol { n, label: label.into(), f: Arc::new(f) }
    }

    pub fn real(
        n: usize,
        label: impl Into<String>,
        f: impl Fn(&PhasePoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ClosureSymbol::new(n, label, move |x| Complex64::new(f(x), 0.0))
    }
}

impl SymbolField for ClosureSymbol {
    fn dim(&self) -> usize {
        self.n
    }
    fn label(&self) -> String {
        self.label.clone()
    }
    fn value(&self, x: &PhasePoint) -> Complex64 {
        (self.f)(x)
    }
}

/// Field carried by second-order jets of its real and imaginary parts.
#[derive(Clone)]
pub struct JetSymbol {
    n: usize,
    label: String,
    f: Arc<JetFn>,
}

fn coordinate_jets(x: &PhasePoint) -> Vec<Jet> {
    let d = 2 * x.dim();
    (0..d).map(|i| Jet::variable(d, i, x.coord(i))).collect()
}

impl JetSymbol {
    /// Real field from a jet-valued map of the point.
    pub fn real(
        n: usize,
        label: impl Into<String>,
        f: impl Fn(&PhasePoint) -> Jet + Send + Sync + 'static,
    ) -> Self {
        JetSymbol::complex(n, label, move |x| {
            let re = f(x);
            (re, Jet::constant(re.d, 0.0))
        })
    }

    pub fn complex(
        n: usize,
        label: impl Into<String>,
        f: impl Fn(&PhasePoint) -> (Jet, Jet) + Send + Sync + 'static,
    ) -> Self {
        JetSymbol { n, label: label.into(), f: Arc::new(f) }
    }

    /// Real field written in terms of the coordinates `(x_1.., xi_1..)`.
    pub fn from_coords(
        n: usize,
        label: impl Into<String>,
        f: impl Fn(&[Jet]) -> Jet + Send + Sync + 'static,
    ) -> Self {
        JetSymbol::real(n, label, move |x| f(&coordinate_jets(x)))
    }

    /// Complex field `re + i im` written in terms of the coordinates.
    pub fn complex_from_coords(
        n: usize,
        label: impl Into<String>,
        f: impl Fn(&[Jet]) -> (Jet, Jet) + Send + Sync + 'static,
    ) -> Self {
        JetSymbol::complex(n, label, move |x| f(&coordinate_jets(x)))
    }

    pub fn jets(&self, x: &PhasePoint) -> (Jet, Jet) {
        (self.f)(x)
    }
}

impl SymbolField for JetSymbol {
    fn dim(&self) -> usize {
        self.n
    }
    fn label(&self) -> String {
        self.label.clone()
    }
    fn value(&self, x: &PhasePoint) -> Complex64 {
        let (re, im) = self.jets(x);
        Complex64::new(re.v, im.v)
    }
    fn analytic_order(&self) -> usize {
        2
    }
    fn derivative(&self, x: &PhasePoint, alpha: &MultiIndex) -> Option<Complex64> {
        let (re, im) = self.jets(x);
        let c = alpha.coordinates();
        match c.len() {
            0 => Some(Complex64::new(re.v, im.v)),
            1 => Some(Complex64::new(re.g[c[0]], im.g[c[0]])),
            2 => Some(Complex64::new(re.h[c[0]][c[1]], im.h[c[0]][c[1]])),
            _ => None,
        }
    }
}

/// `H_f u = d_xi f . d_x u - d_x f . d_xi u` for real fields.
pub fn hamilton_derivative(f: &dyn SymbolField, u: &dyn SymbolField, x: &PhasePoint) -> Result<f64> {
    if f.analytic_order() < 1 || u.analytic_order() < 1 {
        return Err(LabError::InvalidParameter(format!(
            "Hamilton derivative needs first derivatives of `{}` and `{}`",
            f.label(),
            u.label()
        )));
    }
    let n = x.dim();
    let d = |s: &dyn SymbolField, i: usize| s.derivative(x, &MultiIndex::unit(2 * n, i)).map(|c| c.re).unwrap_or(0.0);
    Ok((0..n).map(|k| d(f, n + k) * d(u, k) - d(f, k) * d(u, n + k)).sum())
}
