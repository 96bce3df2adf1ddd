use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{GridSpec, OperatorMatrix, Provenance, QuantKind};
use crate::error::{LabError, Result};
use crate::model_registry::PotentialModel;
use crate::phase::{MultiIndex, PhasePoint};
use crate::symbol_kit::SymbolField;

fn inverse_fft(n: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_inverse(n)
}

/// Circulant matrix of the Fourier multiplier `f(xi)` on the grid.
pub fn fourier_multiplier(grid: &GridSpec, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
    let n = grid.points;
    let mut col: Vec<Complex64> = (0..n).map(|k| Complex64::new(f(grid.frequency(k)) / n as f64, 0.0)).collect();
    inverse_fft(n).process(&mut col);
    DMatrix::from_fn(n, n, |j, k| col[(j + n - k) % n])
}

/// `(hD - A)^2 + V` assembled from the Fourier multipliers `hD`, `(hD)^2` and
/// multiplication operators.
///
/// When the model carries a magnetic potential the grid must keep every
/// frequency on the plateau of `chi_2R`, so that the matrix also realizes the
/// truncated symbol.
pub fn weyl_poly(model: &dyn PotentialModel, grid: &GridSpec, r: f64) -> Result<OperatorMatrix> {
    if model.dim() != 1 {
        return Err(LabError::Grid("quantization is one-dimensional".into()));
    }
    if model.is_magnetic() && grid.max_frequency() > 2.0 * r {
        return Err(LabError::Grid(format!(
            "max |xi| = {} exceeds 2R = {} for the magnetic model `{}`",
            grid.max_frequency(),
            2.0 * r,
            model.name()
        )));
    }
    let n = grid.points;
    let zero = MultiIndex::zero(1);
    let xs = grid.positions();
    let a: Vec<f64> = xs.iter().map(|&x| model.a(0, &[x], &zero)).collect();
    let mut m = fourier_multiplier(grid, |xi| xi * xi);
    if model.is_magnetic() {
        let d = fourier_multiplier(grid, |xi| xi);
        for j in 0..n {
            for k in 0..n {
                m[(j, k)] -= d[(j, k)] * (a[j] + a[k]);
            }
        }
    }
    for j in 0..n {
        let x = [xs[j]];
        m[(j, j)] += Complex64::new(a[j] * a[j] + model.v1(&x, &zero), model.v2(&x, &zero));
    }
    Ok(OperatorMatrix {
        data: m,
        grid: *grid,
        provenance: Provenance { symbol: model.name().into(), kind: QuantKind::WeylPoly },
    })
}

/// Weyl quantization by trapezoid quadrature over the grid frequencies.
///
/// The symbol is sampled at the periodic midpoint of `x_j` and `x_k`: the point
/// `x_k + d dx / 2` reduced into the box, where `d` is `j - k` wrapped into
/// `[-N/2, N/2)`. At lag `N/2` the two admissible midpoints are averaged.
pub fn weyl_general(a: &dyn SymbolField, grid: &GridSpec) -> OperatorMatrix {
    weyl_from_values(grid, a.label(), |x, xi| a.value(&PhasePoint::one_d(x, xi)))
}

/// Weyl quantization of a symbol given as a plain function of `(x, xi)`.
pub fn weyl_from_values(
    grid: &GridSpec,
    label: String,
    a: impl Fn(f64, f64) -> Complex64,
) -> OperatorMatrix {
    let n = grid.points;
    let (ni, two_n) = (n as i64, 2 * n as i64);
    let fft = inverse_fft(n);
    let dx = grid.dx();
    let freqs = grid.frequencies();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut nyquist = vec![Complex64::new(0.0, 0.0); 2 * n];
    // s indexes the half-grid midpoints -L + s dx / 2
    for s in 0..two_n {
        let mid = -grid.half_width + s as f64 * dx / 2.0;
        for (slot, &xi) in buf.iter_mut().zip(&freqs) {
            *slot = a(mid, xi) / n as f64;
        }
        fft.process(&mut buf);
        nyquist[s as usize] = buf[n / 2];
        let mut d = -(ni / 2) + (s + ni / 2).rem_euclid(2);
        while d < ni / 2 {
            let k = ((s - d).rem_euclid(two_n) / 2) as usize;
            let j = (k as i64 + d).rem_euclid(ni) as usize;
            m[(j, k)] = buf[d.rem_euclid(ni) as usize];
            d += 2;
        }
    }
    for k in 0..n {
        let j = (k + n / 2) % n;
        let s1 = (2 * k as i64 - ni / 2).rem_euclid(two_n) as usize;
        let s2 = (2 * j as i64 - ni / 2).rem_euclid(two_n) as usize;
        m[(j, k)] = (nyquist[s1] + nyquist[s2]) * 0.5;
    }
    OperatorMatrix { data: m, grid: *grid, provenance: Provenance { symbol: label, kind: QuantKind::WeylGeneral } }
}
