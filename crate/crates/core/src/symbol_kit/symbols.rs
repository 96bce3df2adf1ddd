use std::sync::Arc;

use num_complex::Complex64;

use super::{CutoffProfile, JetSymbol};
use crate::error::{LabError, Result};
use crate::jet::Jet;
use crate::model_registry::{spatial_jet, PotentialModel};
use crate::phase::{MultiIndex, PhasePoint};

/// Which principal symbol a weight is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `p = |xi - A|^2 + V`.
    P,
    /// `q = |xi - chi_2R A|^2 + V`.
    Q,
}

/// Smallest admissible `|p - z|` where the quotient in `F` is formed.
pub const F_DENOMINATOR_FLOOR: f64 = 1e-12;

/// Symbols built from one model, one pair of cutoffs and a truncation radius.
#[derive(Clone, Debug)]
pub struct SymbolKit {
    pub model: Arc<dyn PotentialModel>,
    pub chi: CutoffProfile,
    pub psi: CutoffProfile,
    pub r: f64,
}

impl SymbolKit {
    pub fn new(model: Arc<dyn PotentialModel>, chi: CutoffProfile, psi: CutoffProfile, r: f64) -> Self {
        SymbolKit { model, chi, psi, r }
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    /// `chi(xi / (t <x>))`.
    pub fn chi_t(&self, x: &PhasePoint, t: f64) -> f64 {
        let xi = x.xi().iter().map(|v| v * v).sum::<f64>().sqrt();
        self.chi.value(xi / (t * x.spatial_bracket()))
    }

    pub fn chi_t_jet(&self, x: &PhasePoint, t: f64) -> Jet {
        let d = 2 * x.dim();
        let xi = x.xi().iter().map(|v| v * v).sum::<f64>().sqrt();
        let s = xi / (t * x.spatial_bracket());
        if s <= self.chi.r0 {
            return Jet::constant(d, 1.0);
        }
        if s >= self.chi.r1 {
            return Jet::constant(d, 0.0);
        }
        let vars = coords(x);
        let n = x.dim();
        let xi_sq = vars[n..].iter().fold(Jet::constant(d, 0.0), |acc, v| acc + *v * *v);
        let bracket_sq = vars[..n].iter().fold(Jet::constant(d, 1.0), |acc, v| acc + *v * *v);
        let s = (xi_sq / bracket_sq).sqrt() / t;
        self.chi.jet(&s)
    }

    fn potential_jets(&self, x: &PhasePoint) -> (Jet, Jet, Vec<Jet>) {
        let m = self.model.as_ref();
        let pt = x.x();
        let v1 = spatial_jet(pt, |a| m.v1(pt, a));
        let v2 = spatial_jet(pt, |a| m.v2(pt, a));
        let a = (0..x.dim()).map(|k| spatial_jet(pt, |al| m.a(k, pt, al))).collect();
        (v1, v2, a)
    }

    /// Jets of the components of `grad V2`.
    fn v2_gradient_jets(&self, x: &PhasePoint) -> Vec<Jet> {
        let m = self.model.as_ref();
        let pt = x.x();
        (0..x.dim()).map(|j| spatial_jet(pt, |a| m.v2(pt, &a.bumped(j)))).collect()
    }

    fn kinetic_jet(&self, x: &PhasePoint, variant: Variant) -> Jet {
        let n = x.dim();
        let vars = coords(x);
        let (_, _, a) = self.potential_jets(x);
        let cut = match variant {
            Variant::P => None,
            Variant::Q => Some(self.chi_t_jet(x, 2.0 * self.r)),
        };
        (0..n).fold(Jet::constant(2 * n, 0.0), |acc, k| {
            let ak = match cut {
                Some(c) => c * a[k],
                None => a[k],
            };
            let d = vars[n + k] - ak;
            acc + d * d
        })
    }

    /// Jet of `Re p` or `Re q`.
    pub fn re_jet(&self, x: &PhasePoint, variant: Variant) -> Jet {
        let (v1, _, _) = self.potential_jets(x);
        self.kinetic_jet(x, variant) + v1
    }

    /// Jet of `Im p = Im q = V2`.
    pub fn im_jet(&self, x: &PhasePoint) -> Jet {
        self.potential_jets(x).1
    }

    pub fn p(&self, x: &PhasePoint) -> Complex64 {
        self.symbol(x, Variant::P)
    }

    pub fn q(&self, x: &PhasePoint) -> Complex64 {
        self.symbol(x, Variant::Q)
    }

    pub fn symbol(&self, x: &PhasePoint, variant: Variant) -> Complex64 {
        let m = self.model.as_ref();
        let pt = x.x();
        let zero = MultiIndex::zero(x.dim());
        let cut = match variant {
            Variant::P => 1.0,
            Variant::Q => self.chi_t(x, 2.0 * self.r),
        };
        let kinetic: f64 = (0..x.dim()).map(|k| (x.xi()[k] - cut * m.a(k, pt, &zero)).powi(2)).sum();
        Complex64::new(kinetic + m.v1(pt, &zero), m.v2(pt, &zero))
    }

    /// `|grad V2|^2` at the spatial projection of `x`.
    pub fn v2_gradient_sq(&self, x: &PhasePoint) -> f64 {
        let pt = x.x();
        (0..x.dim()).map(|j| self.model.v2(pt, &MultiIndex::unit(x.dim(), j)).powi(2)).sum()
    }

    /// `Re(variant) + 2 |V2'|^2`.
    pub fn lambda(&self, x: &PhasePoint, variant: Variant) -> f64 {
        self.symbol(x, variant).re + 2.0 * self.v2_gradient_sq(x)
    }

    pub fn lambda_jet(&self, x: &PhasePoint, variant: Variant) -> Jet {
        let grad = self.v2_gradient_jets(x);
        let g2 = grad.iter().fold(Jet::constant(2 * x.dim(), 0.0), |acc, j| acc + *j * *j);
        self.re_jet(x, variant) + g2 * 2.0
    }

    /// `H_{Im p} Re p = -2 V2' . (xi - A)` as a jet.
    pub fn hamilton_im_re_jet(&self, x: &PhasePoint) -> Jet {
        let n = x.dim();
        let vars = coords(x);
        let (_, _, a) = self.potential_jets(x);
        let grad = self.v2_gradient_jets(x);
        (0..n).fold(Jet::constant(2 * n, 0.0), |acc, k| acc + grad[k] * (vars[n + k] - a[k]) * -2.0)
    }

    pub fn hamilton_im_re(&self, x: &PhasePoint) -> f64 {
        let pt = x.x();
        let zero = MultiIndex::zero(x.dim());
        (0..x.dim())
            .map(|k| {
                -2.0 * self.model.v2(pt, &MultiIndex::unit(x.dim(), k)) * (x.xi()[k] - self.model.a(k, pt, &zero))
            })
            .sum()
    }

    /// `G` on `{lambda_p >= h}`.
    pub fn big_g(&self, x: &PhasePoint, h: f64, epsilon: f64) -> Result<f64> {
        let lambda = self.lambda(x, Variant::P);
        if lambda < h {
            return Err(LabError::OutsideDomain { lambda, h });
        }
        Ok(self.big_g_jet_inner(x, h, epsilon).v)
    }

    fn big_g_jet_inner(&self, x: &PhasePoint, h: f64, epsilon: f64) -> Jet {
        let lambda = self.lambda_jet(x, Variant::P);
        let re = self.re_jet(x, Variant::P);
        let arg = re / (lambda.powf(1.0 / 3.0) * h.powf(2.0 / 3.0));
        let cut = self.psi.jet(&arg);
        let d = 2 * x.dim();
        if cut.v == 0.0 && cut.gradient_norm() == 0.0 {
            return Jet::constant(d, 0.0);
        }
        self.hamilton_im_re_jet(x) / lambda.powf(2.0 / 3.0) * cut * (epsilon * h.powf(-1.0 / 3.0))
    }

    /// Jet of `g = (1 - psi(lambda_p / 2h)) G`, identically zero on `{lambda_p <= h}`.
    pub fn g_jet(&self, x: &PhasePoint, h: f64, epsilon: f64) -> Jet {
        let lambda = self.lambda_jet(x, Variant::P);
        if lambda.v <= h {
            return Jet::constant(2 * x.dim(), 0.0);
        }
        let outer = (-self.psi.jet(&(lambda / (2.0 * h)))) + 1.0;
        outer * self.big_g_jet_inner(x, h, epsilon)
    }

    pub fn g(&self, x: &PhasePoint, h: f64, epsilon: f64) -> f64 {
        self.g_jet(x, h, epsilon).v
    }

    /// `H_{Im q} g = -V2' . d_xi g`.
    pub fn hamilton_im_g(&self, x: &PhasePoint, h: f64, epsilon: f64) -> f64 {
        let n = x.dim();
        let g = self.g_jet(x, h, epsilon);
        let pt = x.x();
        (0..n).map(|k| -self.model.v2(pt, &MultiIndex::unit(n, k)) * g.g[n + k]).sum()
    }

    /// `F = (q - z)/(p - z) (1 - chi_R) + chi_R`.
    pub fn f_ratio(&self, x: &PhasePoint, z: Complex64) -> Result<Complex64> {
        let c = self.chi_t(x, self.r);
        if c == 1.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let den = self.p(x) - z;
        if den.norm() < F_DENOMINATOR_FLOOR {
            return Err(LabError::EllipticityBreakdown(den.norm()));
        }
        Ok((self.q(x) - z) / den * (1.0 - c) + c)
    }

    /// `Psi(X) = psi(B lambda_q(sqrt(h) X) / y)`.
    pub fn psi_weight(&self, x: &PhasePoint, h: f64, y: f64, b: f64) -> f64 {
        self.psi.value(b * self.lambda(&x.scaled(h.sqrt()), Variant::Q) / y)
    }

    /// `Re p`, `Re q`, `lambda_p`, `lambda_q` and `g` as jet-backed fields.
    pub fn re_field(&self, variant: Variant) -> JetSymbol {
        let kit = self.clone();
        JetSymbol::real(self.dim(), format!("Re {variant:?}").to_lowercase(), move |x| kit.re_jet(x, variant))
    }

    pub fn im_field(&self) -> JetSymbol {
        let kit = self.clone();
        JetSymbol::real(self.dim(), "V2", move |x| kit.im_jet(x))
    }

    pub fn lambda_field(&self, variant: Variant) -> JetSymbol {
        let kit = self.clone();
        JetSymbol::real(self.dim(), format!("lambda_{variant:?}").to_lowercase(), move |x| {
            kit.lambda_jet(x, variant)
        })
    }

    pub fn g_field(&self, h: f64, epsilon: f64) -> JetSymbol {
        let kit = self.clone();
        JetSymbol::real(self.dim(), format!("g(h={h})"), move |x| kit.g_jet(x, h, epsilon))
    }
}

fn coords(x: &PhasePoint) -> Vec<Jet> {
    let d = 2 * x.dim();
    (0..d).map(|i| Jet::variable(d, i, x.coord(i))).collect()
}
