use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{weyl_from_values, wick::spectral_norm, GridSpec, OperatorMatrix};
use crate::class_audit::centered_difference;
use crate::error::{LabError, Result};
use crate::phase::{MultiIndex, PhasePoint};
use crate::symbol_kit::SymbolField;

type CVec = DVector<Complex64>;

/// Something that can be applied, together with its adjoint, to grid vectors.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &CVec) -> CVec;
    fn apply_adjoint(&self, x: &CVec) -> CVec;
}

impl LinearOperator for DMatrix<Complex64> {
    fn dim(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &CVec) -> CVec {
        self * x
    }
    fn apply_adjoint(&self, x: &CVec) -> CVec {
        self.ad_mul(x)
    }
}

/// `A B - C` without forming `A B`.
pub struct ProductDefect<'a> {
    pub a: &'a DMatrix<Complex64>,
    pub b: &'a DMatrix<Complex64>,
    pub c: &'a DMatrix<Complex64>,
}

impl LinearOperator for ProductDefect<'_> {
    fn dim(&self) -> usize {
        self.a.nrows()
    }
    fn apply(&self, x: &CVec) -> CVec {
        self.a * (self.b * x) - self.c * x
    }
    fn apply_adjoint(&self, x: &CVec) -> CVec {
        self.b.ad_mul(&self.a.ad_mul(x)) - self.c.ad_mul(x)
    }
}

fn orthogonalize(v: &mut CVec, basis: &[CVec]) {
    for _ in 0..2 {
        for b in basis {
            let c = b.dotc(v);
            v.axpy(-c, b, Complex64::new(1.0, 0.0));
        }
    }
}

/// Largest singular value by Golub-Kahan-Lanczos bidiagonalization with full
/// reorthogonalization, started from a seeded random vector.
pub fn lanczos_norm(op: &dyn LinearOperator, max_steps: usize, seed: u64) -> f64 {
    let n = op.dim();
    let steps = max_steps.min(n).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = CVec::from_fn(n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    v /= Complex64::new(v.norm(), 0.0);
    let (mut vs, mut us) = (vec![v.clone()], Vec::<CVec>::new());
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut u = op.apply(&v);
    let mut estimate = 0.0;
    for k in 0..steps {
        orthogonalize(&mut u, &us);
        let a = u.norm();
        alpha.push(a);
        if a <= f64::MIN_POSITIVE {
            break;
        }
        u /= Complex64::new(a, 0.0);
        us.push(u.clone());
        let mut w = op.apply_adjoint(&u);
        orthogonalize(&mut w, &vs);
        let b = w.norm();
        let bidiag = DMatrix::<f64>::from_fn(k + 1, k + 1, |i, j| {
            if i == j {
                alpha[i]
            } else if j == i + 1 {
                beta[i]
            } else {
                0.0
            }
        });
        let next = bidiag.singular_values().max();
        let converged = k > 2 && (next - estimate).abs() <= 1e-13 * next;
        estimate = next;
        if converged || b <= 1e-14 * next {
            break;
        }
        beta.push(b);
        w /= Complex64::new(b, 0.0);
        vs.push(w.clone());
        u = op.apply(&w) - &us[k] * Complex64::new(b, 0.0);
    }
    estimate
}

/// Largest singular value: dense SVD for small matrices, Lanczos otherwise.
pub fn empirical_opnorm(m: &OperatorMatrix) -> f64 {
    if m.dim() <= 512 {
        spectral_norm(&m.data)
    } else {
        lanczos_norm(&m.data, 200, 0x5eed)
    }
}

/// Least-squares line through `(ln x, ln y)`: `(slope, intercept, rms residual)`.
pub fn log_log_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(LabError::TooFewRecords { needed: 2, got: x.len().min(y.len()) });
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(LabError::InvalidParameter("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(LabError::InvalidParameter("log-log fit needs distinct abscissae".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx.iter().zip(&ly).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    Ok((slope, intercept, (rss / n).sqrt()))
}

/// Grid with half-width `half_width` whose frequency band reaches at least `edge`.
pub fn composition_grid(h: f64, half_width: f64, edge: f64) -> Result<GridSpec> {
    let needed = 2.0 * half_width * edge / (std::f64::consts::PI * h);
    GridSpec::new(half_width, (needed.ceil() as usize).next_power_of_two().max(16), h)
}

#[derive(Clone, Debug)]
pub struct CompositionRow {
    pub h: f64,
    pub points: usize,
    /// `|| f^w g^w - (fg)^w ||`
    pub first_order: f64,
    /// `|| f^w g^w - (fg + (h/2i){f,g})^w ||`
    pub second_order: f64,
}

#[derive(Clone, Debug)]
pub struct CompositionReport {
    pub f: String,
    pub g: String,
    pub rows: Vec<CompositionRow>,
    /// Fitted slopes, absent when fewer than two rows have positive defects.
    pub first_slope: Option<f64>,
    pub second_slope: Option<f64>,
}

fn gradient(a: &dyn SymbolField, p: &PhasePoint) -> [Complex64; 2] {
    [0, 1].map(|i| {
        let alpha = MultiIndex::unit(2, i);
        a.derivative(p, &alpha).unwrap_or_else(|| centered_difference(a, p, &alpha, 1e-4))
    })
}

/// `{f, g} = f_xi g_x - f_x g_xi`.
pub fn poisson_bracket(f: &dyn SymbolField, g: &dyn SymbolField, p: &PhasePoint) -> Complex64 {
    let (df, dg) = (gradient(f, p), gradient(g, p));
    df[1] * dg[0] - df[0] * dg[1]
}

/// Operator norms of the first- and second-order Moyal defects for each `h`,
/// with log-log slopes against `h`.
pub fn check_weyl_composition(
    f: &dyn SymbolField,
    g: &dyn SymbolField,
    h_list: &[f64],
    grid_for: impl Fn(f64) -> Result<GridSpec>,
) -> Result<CompositionReport> {
    let mut rows = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let grid = grid_for(h)?;
        let at = |x: f64, xi: f64| PhasePoint::one_d(x, xi);
        let fw = weyl_from_values(&grid, f.label(), |x, xi| f.value(&at(x, xi))).data;
        let gw = weyl_from_values(&grid, g.label(), |x, xi| g.value(&at(x, xi))).data;
        let plain = weyl_from_values(&grid, "fg".into(), |x, xi| f.value(&at(x, xi)) * g.value(&at(x, xi))).data;
        let factor = Complex64::new(0.0, -h / 2.0);
        let moyal = weyl_from_values(&grid, "f#g".into(), |x, xi| {
            let p = at(x, xi);
            f.value(&p) * g.value(&p) + factor * poisson_bracket(f, g, &p)
        })
        .data;
        let first = lanczos_norm(&ProductDefect { a: &fw, b: &gw, c: &plain }, 80, 17);
        let second = lanczos_norm(&ProductDefect { a: &fw, b: &gw, c: &moyal }, 80, 17);
        rows.push(CompositionRow { h, points: grid.points, first_order: first, second_order: second });
    }
    let slope = |pick: fn(&CompositionRow) -> f64| {
        let (hs, ds): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.h, pick(r))).filter(|(_, d)| *d > 0.0).unzip();
        log_log_fit(&hs, &ds).ok().map(|fit| fit.0)
    };
    Ok(CompositionReport {
        f: f.label(),
        g: g.label(),
        first_slope: slope(|r| r.first_order),
        second_slope: slope(|r| r.second_order),
        rows,
    })
}
