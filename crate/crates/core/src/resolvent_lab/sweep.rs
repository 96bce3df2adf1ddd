use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ensure_in_region, RegionParams, ZSampler};
use crate::error::{LabError, Result};
use crate::model_registry::PotentialModel;
use crate::quantizer::{log_log_fit, weyl_poly, GridSpec, OperatorMatrix};

/// Smallest singular value of `P - z`.
pub fn sigma_min(p: &OperatorMatrix, z: Complex64) -> f64 {
    sigma_min_dense(&p.shifted(z))
}

pub(crate) fn sigma_min_dense(m: &DMatrix<Complex64>) -> f64 {
    m.clone().singular_values().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// How the box half-width is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum HalfWidthRule {
    Fixed(f64),
    /// Smallest candidate at which the pilot quasimode has decayed below
    /// `threshold` (density relative to its peak).
    GroundState { candidates: Vec<f64>, threshold: f64 },
}

impl Default for HalfWidthRule {
    fn default() -> Self {
        HalfWidthRule::GroundState { candidates: vec![8.0, 12.0, 16.0], threshold: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridPolicy {
    pub half_width: HalfWidthRule,
    pub n_min: usize,
    pub n_cap: usize,
    /// Also solve on the grid with `N/2` points and record the relative change.
    pub doubling_check: bool,
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy { half_width: HalfWidthRule::default(), n_min: 256, n_cap: 1024, doubling_check: true }
    }
}

impl GridPolicy {
    /// `N = max(n_min, 8 L^2 / h)` rounded up to a power of two, capped at
    /// `n_cap`; the flag reports whether the cap was hit.
    pub fn points(&self, half_width: f64, h: f64) -> (usize, bool) {
        let wanted = (8.0 * half_width * half_width / h).ceil().max(self.n_min as f64) as usize;
        let n = wanted.next_power_of_two();
        if n > self.n_cap {
            (self.n_cap.next_power_of_two(), true)
        } else {
            (n, false)
        }
    }
}

/// Relative density `|u|^2 / max |u|^2` of the quasimode of `P - z` at the grid
/// points closest to `x = +-edge`.
pub fn quasimode_tail(p: &OperatorMatrix, z: Complex64, edge: f64) -> f64 {
    let svd = p.shifted(z).svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let idx = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let u: Vec<f64> = v_t.row(idx).iter().map(|c| c.norm_sqr()).collect();
    let peak = u.iter().cloned().fold(0.0, f64::max);
    let grid = &p.grid;
    let nearest = |x: f64| {
        let j = ((x + grid.half_width) / grid.dx()).round() as i64;
        u[j.rem_euclid(grid.points as i64) as usize]
    };
    nearest(edge).max(nearest(-edge)) / peak
}

/// Applies the half-width rule with a pilot solve at `h` and `z` on the
/// widest candidate box.
pub fn choose_half_width(model: &dyn PotentialModel, r: f64, rule: &HalfWidthRule, h: f64, z: Complex64) -> Result<f64> {
    match rule {
        HalfWidthRule::Fixed(l) => Ok(*l),
        HalfWidthRule::GroundState { candidates, threshold } => {
            let widest = candidates.iter().cloned().fold(f64::NAN, f64::max);
            if !widest.is_finite() {
                return Err(LabError::InvalidParameter("no half-width candidates".into()));
            }
            let grid = GridSpec::new(widest, 256, h)?;
            let p = weyl_poly(model, &grid, r)?;
            let mut sorted = candidates.clone();
            sorted.sort_by(|a, b| a.total_cmp(b));
            Ok(sorted.into_iter().find(|&l| quasimode_tail(&p, z, l) <= *threshold).unwrap_or(widest))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub model: String,
    pub h: f64,
    pub z: Complex64,
    pub y: f64,
    pub sigma_min: f64,
    pub bound: f64,
    pub ratio: f64,
    pub grid: GridSpec,
    /// `|sigma(N) - sigma(N/2)| / sigma(N)` when the doubling check ran.
    pub doubling_delta: Option<f64>,
    pub capped: bool,
}

pub const SWEEP_CSV_HEADER: &str = "model,h,re_z,im_z,y,sigma_min,bound,ratio,N,L";

impl SweepRecord {
    pub fn new(model: &str, h: f64, z: Complex64, t: f64, sigma_min: f64, grid: GridSpec) -> Self {
        let y = z.norm() - t;
        let bound = h.powf(2.0 / 3.0) * y.cbrt();
        SweepRecord {
            model: model.to_string(),
            h,
            z,
            y,
            sigma_min,
            bound,
            ratio: sigma_min / bound,
            grid,
            doubling_delta: None,
            capped: false,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{}",
            self.model,
            self.h,
            self.z.re,
            self.z.im,
            self.y,
            self.sigma_min,
            self.bound,
            self.ratio,
            self.grid.points,
            self.grid.half_width
        )
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub warnings: Vec<String>,
    pub half_width: Option<f64>,
}

/// One record per `(h, z)`, sorted by `(h, |z|)`.
///
/// Every sampled `z` must lie in the region; the half-width rule is applied
/// once, at the largest `h` and its first sample.
pub fn sweep(
    model: &dyn PotentialModel,
    r: f64,
    h_list: &[f64],
    sampler: &dyn ZSampler,
    policy: &GridPolicy,
    params: &RegionParams,
) -> Result<SweepOutcome> {
    sweep_with(model, r, h_list, sampler, policy, params, &|grid| weyl_poly(model, grid, r))
}

/// [`sweep`] with a caller-supplied assembly of `P` on each grid.
pub fn sweep_with(
    model: &dyn PotentialModel,
    r: f64,
    h_list: &[f64],
    sampler: &dyn ZSampler,
    policy: &GridPolicy,
    params: &RegionParams,
    assemble_on: &dyn Fn(&GridSpec) -> Result<OperatorMatrix>,
) -> Result<SweepOutcome> {
    params.validate()?;
    let mut samples = Vec::new();
    for &h in h_list {
        if !(h > 0.0 && h <= 1.0) {
            return Err(LabError::InvalidParameter(format!("h must lie in (0, 1], got {h}")));
        }
        for z in sampler.sample(h, params) {
            ensure_in_region(z, h, params)?;
            samples.push((h, z));
        }
    }
    let Some(&(h_pilot, z_pilot)) = samples.iter().max_by(|a, b| a.0.total_cmp(&b.0)) else {
        return Ok(SweepOutcome { records: Vec::new(), warnings: Vec::new(), half_width: None });
    };
    let half_width = choose_half_width(model, r, &policy.half_width, h_pilot, z_pilot)?;
    let mut warnings = Vec::new();
    let mut records = Vec::with_capacity(samples.len());
    for &h in h_list {
        let (n, capped) = policy.points(half_width, h);
        if capped {
            warnings.push(format!(
                "h = {h}: resolution wants N = {} but the cap is {n}",
                (8.0 * half_width * half_width / h).ceil() as usize
            ));
        }
        let assemble = |points: usize| -> Result<OperatorMatrix> {
            assemble_on(&GridSpec::new(half_width, points, h)?)
        };
        let zs: Vec<Complex64> = samples.iter().filter(|s| s.0 == h).map(|s| s.1).collect();
        let wrap = |z: Complex64, e: LabError| LabError::Grid(format!("h = {h}, z = {z}: {e}"));
        let p = assemble(n).map_err(|e| wrap(zs[0], e))?;
        let coarse = if policy.doubling_check && n >= 4 { Some(assemble(n / 2).map_err(|e| wrap(zs[0], e))?) } else { None };
        for z in zs {
            let sigma = sigma_min(&p, z);
            let mut rec = SweepRecord::new(model.name(), h, z, params.t, sigma, p.grid);
            rec.capped = capped;
            rec.doubling_delta = coarse.as_ref().map(|c| (sigma - sigma_min(c, z)).abs() / sigma);
            records.push(rec);
        }
    }
    records.sort_by(|a, b| a.h.total_cmp(&b.h).then(a.z.norm().total_cmp(&b.z.norm())));
    Ok(SweepOutcome { records, warnings, half_width: Some(half_width) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitAxis {
    H,
    Y,
}

impl FitAxis {
    pub fn name(&self) -> &'static str {
        match self {
            FitAxis::H => "h",
            FitAxis::Y => "y",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentFit {
    pub axis: FitAxis,
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub count: usize,
}

pub const MIN_FIT_RECORDS: usize = 4;

/// Least-squares fit of `ln sigma_min` against the log of the chosen axis.
pub fn fit_exponents(records: &[SweepRecord], axis: FitAxis) -> Result<ExponentFit> {
    if records.len() < MIN_FIT_RECORDS {
        return Err(LabError::TooFewRecords { needed: MIN_FIT_RECORDS, got: records.len() });
    }
    let (along, fixed): (Vec<f64>, Vec<f64>) = match axis {
        FitAxis::H => records.iter().map(|r| (r.h, r.y)).unzip(),
        FitAxis::Y => records.iter().map(|r| (r.y, r.h)).unzip(),
    };
    let f0 = fixed[0];
    if fixed.iter().any(|f| (f - f0).abs() > 1e-9 * f0.abs().max(1.0)) {
        return Err(LabError::InvalidParameter(format!(
            "records must vary only along {}; the other coordinate is not fixed",
            axis.name()
        )));
    }
    let sigma: Vec<f64> = records.iter().map(|r| r.sigma_min).collect();
    let (slope, intercept, residual) = log_log_fit(&along, &sigma)?;
    Ok(ExponentFit { axis, slope, intercept, residual, count: records.len() })
}

#[derive(Clone, Debug)]
pub struct Certification {
    pub c_min: f64,
    pub worst: SweepRecord,
    pub floor: f64,
    pub passed: bool,
}

pub const DEFAULT_CERTIFICATION_FLOOR: f64 = 1e-2;

/// Smallest ratio over the records; passes when it reaches `floor`.
pub fn certify_lower_bound(records: &[SweepRecord], floor: f64) -> Result<Certification> {
    let worst = records
        .iter()
        .min_by(|a, b| {
            let key = |r: &SweepRecord| if r.ratio.is_nan() { f64::NEG_INFINITY } else { r.ratio };
            key(a).total_cmp(&key(b))
        })
        .ok_or(LabError::EmptySample)?;
    let c_min = worst.ratio;
    Ok(Certification { c_min, worst: worst.clone(), floor, passed: c_min >= floor })
}
