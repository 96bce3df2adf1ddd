use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{weyl_from_values, GridSpec, OperatorMatrix, Provenance, QuantKind};
use crate::class_audit::centered_difference;
use crate::error::{LabError, Result};
use crate::phase::{MultiIndex, PhasePoint};
use crate::quadrature::{gauss_hermite, gauss_legendre, GaussRule};
use crate::symbol_kit::{ClosureSymbol, SymbolField};

/// Largest resolution-of-identity defect accepted by [`wick`].
pub const FRAME_DEFECT_LIMIT: f64 = 1e-6;

/// Gaussian wave packets on a uniform phase-space lattice covering the
/// periodic box and the grid's frequency band.
///
/// Positions are spaced `2L / Q` and frequencies `band / P`, with `Q` and `P`
/// the nearest integers to the nominal spacing `delta * sqrt(h)`, so that the
/// lattice tiles the torus exactly.
#[derive(Clone, Debug)]
pub struct CoherentFrame {
    pub grid: GridSpec,
    pub delta: f64,
    pub nodes: Vec<(f64, f64)>,
    pub weight: f64,
    /// Column `k` is the state at `nodes[k]`.
    pub states: DMatrix<Complex64>,
    pub defect: f64,
}

/// Coherent state `(pi h)^{-1/4} e^{-(x-y)^2/2h} e^{i(x-y)eta/h}` sampled on the
/// grid, summed over periodic images and scaled to unit discrete norm.
pub fn coherent_state(grid: &GridSpec, y: f64, eta: f64) -> Vec<Complex64> {
    let h = grid.h;
    let period = 2.0 * grid.half_width;
    let images = 1 + (9.0 * h.sqrt() / period).ceil() as i64;
    let scale = grid.dx().sqrt() * (PI * h).powf(-0.25);
    (0..grid.points)
        .map(|j| {
            let x = grid.x(j);
            let mut s = Complex64::new(0.0, 0.0);
            for m in -images..=images {
                let d = x + m as f64 * period - y;
                s += Complex64::from_polar((-d * d / (2.0 * h)).exp(), d * eta / h);
            }
            s * scale
        })
        .collect()
}

impl CoherentFrame {
    pub fn new(grid: &GridSpec, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(LabError::InvalidParameter(format!("frame spacing must be positive, got {delta}")));
        }
        let step = delta * grid.h.sqrt();
        let q = ((2.0 * grid.half_width / step).round() as usize).max(1);
        let p = ((grid.band() / step).round() as usize).max(1);
        let (dy, deta) = (2.0 * grid.half_width / q as f64, grid.band() / p as f64);
        let eta0 = -grid.band() / 2.0;
        let mut nodes = Vec::with_capacity(p * q);
        for a in 0..q {
            for b in 0..p {
                nodes.push((grid.x(0) + a as f64 * dy, eta0 + b as f64 * deta));
            }
        }
        let columns: Vec<Vec<Complex64>> = nodes.par_iter().map(|&(y, eta)| coherent_state(grid, y, eta)).collect();
        let states = DMatrix::from_fn(grid.points, nodes.len(), |j, k| columns[k][j]);
        let mut frame = CoherentFrame {
            grid: *grid,
            delta,
            nodes,
            weight: dy * deta / (2.0 * PI * grid.h),
            states,
            defect: f64::NAN,
        };
        frame.defect = frame.identity_defect();
        Ok(frame)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_Y w_Y c_Y |phi_Y><phi_Y|`.
    pub fn weighted_sum(&self, coefficients: &[Complex64]) -> DMatrix<Complex64> {
        let mut scaled = self.states.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= coefficients[k] * self.weight;
        }
        scaled * self.states.adjoint()
    }

    pub fn frame_operator(&self) -> DMatrix<Complex64> {
        self.weighted_sum(&vec![Complex64::new(1.0, 0.0); self.len()])
    }

    /// Spectral distance of the frame operator from the identity.
    pub fn identity_defect(&self) -> f64 {
        let s = self.frame_operator();
        let eig = SymmetricEigen::new(hermitian_part(&s)).eigenvalues;
        eig.iter().map(|e| (e - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest deviation of a state norm from one.
    pub fn norm_defect(&self) -> f64 {
        self.states.column_iter().map(|c| (c.norm() - 1.0).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Anti-Wick matrix `sum_Y w_Y a(Y) |phi_Y><phi_Y|`.
pub fn wick(a: &dyn SymbolField, frame: &CoherentFrame) -> Result<OperatorMatrix> {
    if !(frame.defect <= FRAME_DEFECT_LIMIT) {
        return Err(LabError::FrameDefect { defect: frame.defect, limit: FRAME_DEFECT_LIMIT });
    }
    let values: Vec<Complex64> = frame.nodes.iter().map(|&(y, eta)| a.value(&PhasePoint::one_d(y, eta))).collect();
    Ok(OperatorMatrix {
        data: frame.weighted_sum(&values),
        grid: frame.grid,
        provenance: Provenance { symbol: a.label(), kind: QuantKind::Wick },
    })
}

/// Prefactor in front of the Gaussian remainder integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `pi^{-n/2}`
    HalfPower,
    /// `pi^{-n}`
    FullPower,
}

impl Normalization {
    pub const ALL: [Normalization; 2] = [Normalization::HalfPower, Normalization::FullPower];

    /// Prefactor for one phase-space pair (`n = 1`).
    pub fn prefactor(&self) -> f64 {
        match self {
            Normalization::HalfPower => PI.powf(-0.5),
            Normalization::FullPower => 1.0 / PI,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Normalization::HalfPower => "pi^(-n/2)",
            Normalization::FullPower => "pi^(-n)",
        }
    }
}

/// Tensor Gauss-Hermite nodes in the plane with negligible weights dropped.
fn plane_rule(nodes: usize) -> Vec<(f64, f64, f64)> {
    let GaussRule { nodes: t, weights: w } = gauss_hermite(nodes);
    let top = w.iter().cloned().fold(0.0, f64::max).powi(2);
    let mut out = Vec::new();
    for i in 0..t.len() {
        for j in 0..t.len() {
            let weight = w[i] * w[j];
            if weight > 1e-18 * top {
                out.push((t[i], t[j], weight));
            }
        }
    }
    out
}

/// Second derivative of `a` along `y`, exact when available.
fn hessian_form(a: &dyn SymbolField, x: &PhasePoint, y: (f64, f64), step: f64) -> Complex64 {
    let second = |alpha: MultiIndex| {
        a.derivative(x, &alpha).unwrap_or_else(|| centered_difference(a, x, &alpha, step))
    };
    let (y0, y1) = y;
    second(MultiIndex::from_orders(&[2, 0])) * y0 * y0
        + second(MultiIndex::from_orders(&[1, 1])) * (2.0 * y0 * y1)
        + second(MultiIndex::from_orders(&[0, 2])) * y1 * y1
}

/// `c int_0^1 int (1-t) a''(X+tY) Y.Y e^{-|Y|^2} dY dt` with 32 Gauss-Hermite nodes
/// per phase variable and 16 Gauss-Legendre nodes in `t`.
pub fn wick_remainder(a: &dyn SymbolField, x: &PhasePoint, norm: Normalization) -> Complex64 {
    let plane = plane_rule(32);
    let time = gauss_legendre(16).on_interval(0.0, 1.0);
    let mut total = Complex64::new(0.0, 0.0);
    for (&t, &wt) in time.nodes.iter().zip(&time.weights) {
        for &(y0, y1, w) in &plane {
            let at = PhasePoint::one_d(x.x()[0] + t * y0, x.xi()[0] + t * y1);
            total += hessian_form(a, &at, (y0, y1), 1e-3) * (w * wt * (1.0 - t));
        }
    }
    total * norm.prefactor()
}

/// The same remainder after integrating the Taylor formula in `t`:
/// `c int a(X+Y) e^{-|Y|^2} dY - c pi a(X)`.
pub fn wick_remainder_smoothed(a: &dyn SymbolField, x: &PhasePoint, norm: Normalization, nodes: usize) -> Complex64 {
    let plane = plane_rule(nodes);
    let smoothed: Complex64 = plane
        .iter()
        .map(|&(y0, y1, w)| a.value(&PhasePoint::one_d(x.x()[0] + y0, x.xi()[0] + y1)) * w)
        .sum();
    (smoothed - a.value(x) * PI) * norm.prefactor()
}

/// Weyl matrix of `a + r(a)`.
pub fn weyl_of_wick_symbol(a: &dyn SymbolField, grid: &GridSpec, norm: Normalization) -> OperatorMatrix {
    let plane = plane_rule(32);
    let c = norm.prefactor();
    weyl_from_values(grid, format!("{}+r", a.label()), |x, xi| {
        let smoothed: Complex64 =
            plane.iter().map(|&(y0, y1, w)| a.value(&PhasePoint::one_d(x + y0, xi + y1)) * w).sum();
        a.value(&PhasePoint::one_d(x, xi)) * (1.0 - c * PI) + smoothed * c
    })
}

/// Outcome of comparing the two remainder prefactors on `a = |X|^2`.
#[derive(Clone, Debug)]
pub struct NormalizationFinding {
    /// `(candidate, r(|X|^2), defect)` per candidate.
    pub candidates: Vec<(Normalization, f64, f64)>,
    pub adopted: Normalization,
    pub grid: GridSpec,
    pub probes: usize,
}

impl NormalizationFinding {
    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str("Wick-to-Weyl remainder prefactor, tested on a = x^2 + xi^2 (n = 1, h = 1)\n");
        s.push_str(&format!(
            "grid: L = {}, N = {}; {} coherent probe states centred in [-1, 1]^2\n",
            self.grid.half_width, self.grid.points, self.probes
        ));
        s.push_str("measured quantity: max over probes of |<u, (a^Wick - a^w) u> - r(a)|\n");
        for (norm, r, defect) in &self.candidates {
            s.push_str(&format!("candidate {:<10} r(a) = {:.12}  defect = {:.3e}\n", norm.name(), r, defect));
        }
        s.push_str(&format!("adopted: {} (prefactor {:.15})\n", self.adopted.name(), self.adopted.prefactor()));
        s
    }
}

/// Decides the remainder prefactor by an independent oracle: the frame Wick
/// matrix of `|X|^2` against its Weyl matrix, probed with localized states far
/// from the box edges.
pub fn resolve_normalization() -> Result<NormalizationFinding> {
    let grid = GridSpec::new(8.0, 128, 1.0)?;
    let frame = CoherentFrame::new(&grid, 0.5)?;
    let square = ClosureSymbol::real(1, "x^2+xi^2", |p: &PhasePoint| p.norm_sq());
    let aw = wick(&square, &frame)?.data;
    let weyl = weyl_from_values(&grid, "x^2+xi^2".into(), |x, xi| Complex64::new(x * x + xi * xi, 0.0)).data;
    let diff = aw - weyl;
    let mut gaps = Vec::new();
    for y in [-1.0, 0.0, 1.0] {
        for eta in [-1.0, 0.0, 1.0] {
            let u = nalgebra::DVector::from_vec(coherent_state(&grid, y, eta));
            gaps.push((u.dotc(&(&diff * &u)) / u.dotc(&u)).re);
        }
    }
    let candidates: Vec<(Normalization, f64, f64)> = Normalization::ALL
        .iter()
        .map(|&norm| {
            let r = wick_remainder(&square, &PhasePoint::origin(1), norm).re;
            let defect = gaps.iter().map(|g| (g - r).abs()).fold(0.0, f64::max);
            (norm, r, defect)
        })
        .collect();
    let adopted = candidates.iter().min_by(|a, b| a.2.total_cmp(&b.2)).map(|c| c.0).unwrap_or(Normalization::FullPower);
    Ok(NormalizationFinding { candidates, adopted, grid, probes: gaps.len() })
}

/// A symbol in the identity battery.
#[derive(Clone)]
pub struct BatterySymbol {
    pub symbol: Arc<dyn SymbolField>,
    pub nonnegative: bool,
}

impl BatterySymbol {
    fn new(label: &str, nonnegative: bool, f: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static) -> Self {
        let symbol = ClosureSymbol::new(1, label, move |p: &PhasePoint| f(p.x()[0], p.xi()[0]));
        BatterySymbol { symbol: Arc::new(symbol), nonnegative }
    }

    fn real(label: &str, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(label, true, move |x, xi| Complex64::new(f(x, xi), 0.0))
    }
}

/// Smooth bounded symbols, `2 pi`-periodic in `x` and Gaussian in `xi`.
///
/// The first twenty are nonnegative; the rest are signed or complex.
pub fn default_battery() -> Vec<BatterySymbol> {
    let g = |xi: f64, c: f64, s: f64| (-(xi - c) * (xi - c) / s).exp();
    let i = Complex64::new(0.0, 1.0);
    vec![
        BatterySymbol::real("exp(-xi^2)", move |_, xi| g(xi, 0.0, 1.0)),
        BatterySymbol::real("(1+cos x)exp(-xi^2)", move |x, xi| (1.0 + x.cos()) * g(xi, 0.0, 1.0)),
        BatterySymbol::real("(1+sin x)exp(-xi^2/2)", move |x, xi| (1.0 + x.sin()) * g(xi, 0.0, 2.0)),
        BatterySymbol::real("(1-cos 2x)exp(-xi^2)", move |x, xi| (1.0 - (2.0 * x).cos()) * g(xi, 0.0, 1.0)),
        BatterySymbol::real("cos^2(x)exp(-(xi-1)^2)", move |x, xi| x.cos().powi(2) * g(xi, 1.0, 1.0)),
        BatterySymbol::real("exp(cos x-1)exp(-xi^2/4)", move |x, xi| (x.cos() - 1.0).exp() * g(xi, 0.0, 4.0)),
        BatterySymbol::real("exp(-xi^2)/(2+sin x)", move |x, xi| g(xi, 0.0, 1.0) / (2.0 + x.sin())),
        BatterySymbol::real("xi^2 exp(-xi^2)", move |_, xi| xi * xi * g(xi, 0.0, 1.0)),
        BatterySymbol::real("sin^2(x) xi^2 exp(-xi^2)", move |x, xi| (x.sin() * xi).powi(2) * g(xi, 0.0, 1.0)),
        BatterySymbol::real("(1+cos 3x)exp(-2xi^2)", move |x, xi| (1.0 + (3.0 * x).cos()) * g(xi, 0.0, 0.5)),
        BatterySymbol::real("exp(-(xi+2)^2)", move |_, xi| g(xi, -2.0, 1.0)),
        BatterySymbol::real("(1+cos x)exp(-(xi-2)^2/2)", move |x, xi| (1.0 + x.cos()) * g(xi, 2.0, 2.0)),
        BatterySymbol::real("1/(1+sin^2 x) exp(-xi^2)", move |x, xi| g(xi, 0.0, 1.0) / (1.0 + x.sin().powi(2))),
        BatterySymbol::real("sech^2(xi)(1+cos x)", move |x, xi| (1.0 + x.cos()) / xi.cosh().powi(2)),
        BatterySymbol::real("xi^4 exp(-xi^2)", move |_, xi| xi.powi(4) * g(xi, 0.0, 1.0)),
        BatterySymbol::real("(2+cos x+sin 2x)exp(-xi^2/2)", move |x, xi| {
            (2.0 + x.cos() + (2.0 * x).sin()) * g(xi, 0.0, 2.0)
        }),
        BatterySymbol::real("exp(-xi^2-cos^2 x)", move |x, xi| g(xi, 0.0, 1.0) * (-x.cos().powi(2)).exp()),
        BatterySymbol::real("(1+cos(x-xi))exp(-xi^2)", move |x, xi| (1.0 + (x - xi).cos()) * g(xi, 0.0, 1.0)),
        BatterySymbol::real("(sin x+xi)^2 exp(-xi^2)", move |x, xi| (x.sin() + xi).powi(2) * g(xi, 0.0, 1.0)),
        BatterySymbol::real("1", |_, _| 1.0),
        BatterySymbol::new("sin(x)exp(-xi^2)", false, move |x, xi| Complex64::new(x.sin() * g(xi, 0.0, 1.0), 0.0)),
        BatterySymbol::new("xi cos(2x)exp(-xi^2/2)", false, move |x, xi| {
            Complex64::new(xi * (2.0 * x).cos() * g(xi, 0.0, 2.0), 0.0)
        }),
        BatterySymbol::new("exp(ix)exp(-xi^2)", false, move |x, xi| (i * x).exp() * g(xi, 0.0, 1.0)),
        BatterySymbol::new("(cos x+i xi)exp(-xi^2)", false, move |x, xi| (x.cos() + i * xi) * g(xi, 0.0, 1.0)),
    ]
}

/// One row of the identity suite.
#[derive(Clone, Debug)]
pub struct WickIdentityRow {
    pub symbol: String,
    pub nonnegative: bool,
    pub sup_abs: f64,
    pub sup_second: f64,
    pub matrix_norm: f64,
    /// Smallest eigenvalue of the Hermitian part (nonnegative symbols only).
    pub min_eigenvalue: Option<f64>,
    pub positivity_tol: f64,
    pub adjoint_defect: f64,
    pub ww_defect: f64,
    pub ww_tol: f64,
}

pub const NORM_SLACK: f64 = 1e-4;
pub const ADJOINT_TOL: f64 = 1e-12;

impl WickIdentityRow {
    pub fn positivity_ok(&self) -> bool {
        self.min_eigenvalue.is_none_or(|m| m >= -self.positivity_tol)
    }
    pub fn norm_ok(&self) -> bool {
        self.matrix_norm <= self.sup_abs + NORM_SLACK
    }
    pub fn adjoint_ok(&self) -> bool {
        self.adjoint_defect <= ADJOINT_TOL * (1.0 + self.matrix_norm)
    }
    pub fn ww_ok(&self) -> bool {
        self.ww_defect <= self.ww_tol
    }
    pub fn passed(&self) -> bool {
        self.positivity_ok() && self.norm_ok() && self.adjoint_ok() && self.ww_ok()
    }
}

#[derive(Clone, Debug)]
pub struct WickIdentityReport {
    pub grid: GridSpec,
    pub frame_delta: f64,
    pub frame_defect: f64,
    pub normalization: Normalization,
    pub rows: Vec<WickIdentityRow>,
}

impl WickIdentityReport {
    pub fn frame_ok(&self) -> bool {
        self.frame_defect <= FRAME_DEFECT_LIMIT
    }
    pub fn passed(&self) -> bool {
        self.frame_ok() && !self.rows.is_empty() && self.rows.iter().all(|r| r.passed())
    }
}

/// `sup |a|` over the frame nodes and `sup |a''|` over a coarser subset.
fn sampled_sups(a: &dyn SymbolField, frame: &CoherentFrame) -> (f64, f64) {
    let sup = frame.nodes.iter().map(|&(y, e)| a.value(&PhasePoint::one_d(y, e)).norm()).fold(0.0, f64::max);
    let second = [[2u8, 0], [1, 1], [0, 2]].map(|o| MultiIndex::from_orders(&o));
    let sup2 = frame
        .nodes
        .iter()
        .step_by(3)
        .map(|&(y, e)| {
            let p = PhasePoint::one_d(y, e);
            second.iter().map(|al| centered_difference(a, &p, al, 1e-3).norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    (sup, sup2)
}

/// Largest singular value of a dense matrix.
pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Positivity, adjoint, norm and Wick-to-Weyl checks for each symbol.
pub fn check_wick_identities(
    battery: &[BatterySymbol],
    frame: &CoherentFrame,
    norm: Normalization,
) -> Result<WickIdentityReport> {
    let mut rows = Vec::with_capacity(battery.len());
    for entry in battery {
        let a = entry.symbol.as_ref();
        let m = wick(a, frame)?.data;
        let conj = ClosureSymbol::new(1, "conj", {
            let s = entry.symbol.clone();
            move |p: &PhasePoint| s.value(p).conj()
        });
        let adjoint_defect = max_entry(&(m.adjoint() - wick(&conj, frame)?.data));
        let matrix_norm = spectral_norm(&m);
        let min_eigenvalue = entry.nonnegative.then(|| {
            SymmetricEigen::new(hermitian_part(&m)).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
        });
        let (sup_abs, sup_second) = sampled_sups(a, frame);
        let ww = m - weyl_of_wick_symbol(a, &frame.grid, norm).data;
        rows.push(WickIdentityRow {
            symbol: a.label(),
            nonnegative: entry.nonnegative,
            sup_abs,
            sup_second,
            matrix_norm,
            min_eigenvalue,
            positivity_tol: 1e-8 * matrix_norm,
            adjoint_defect,
            ww_defect: spectral_norm(&ww),
            ww_tol: 1e-3 * (sup_second + 1.0),
        });
    }
    Ok(WickIdentityReport {
        grid: frame.grid,
        frame_delta: frame.delta,
        frame_defect: frame.defect,
        normalization: norm,
        rows,
    })
}

/// Grid used by the identity suite: a box of two periods of the battery
/// symbols at unit scale.
pub fn wick_suite_grid(points: usize) -> Result<GridSpec> {
    GridSpec::new(4.0 * PI, points, 1.0)
}
