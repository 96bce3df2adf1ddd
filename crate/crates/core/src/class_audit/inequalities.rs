use num_complex::Complex64;
use rayon::prelude::*;

use super::report::{extremal, Extremum, InequalityReport};
use super::symbol_class::centered_difference;
use super::PhaseGrid;
use crate::error::{LabError, Result};
use crate::phase::{MultiIndex, PhasePoint};
use crate::symbol_kit::{ClosureSymbol, SymbolKit, Variant, WeightParams};

/// Default range `[1/ceiling, ceiling]` for two-sided comparisons.
pub const DEFAULT_TWO_SIDED: f64 = 1e3;

fn report(
    id: impl Into<String>,
    points: &[PhasePoint],
    ratios: &[Option<f64>],
    which: Extremum,
    bound: f64,
    passes: impl Fn(f64) -> bool,
) -> InequalityReport {
    let (value, i) = extremal(ratios, which).unwrap_or((match which {
        Extremum::Max => 0.0,
        Extremum::Min => f64::INFINITY,
    }, 0));
    InequalityReport {
        id: id.into(),
        h: None,
        y: None,
        z: None,
        extremum: which,
        value,
        point: points[i],
        bound,
        passed: passes(value),
    }
}

fn two_sided(
    id: &str,
    points: &[PhasePoint],
    ratios: &[Option<f64>],
    ceiling: f64,
) -> [InequalityReport; 2] {
    let inside = move |v: f64| v.is_finite() && v >= 1.0 / ceiling && v <= ceiling;
    [
        report(format!("{id}_min"), points, ratios, Extremum::Min, 1.0 / ceiling, inside),
        report(format!("{id}_max"), points, ratios, Extremum::Max, ceiling, inside),
    ]
}

/// `(Re p, Re q) / <X>^2` and `(|p - z|, |q - z|) / (<X>^2 + |z|)` at `x`,
/// or `None` on the plateau of `chi_R`.
pub fn ellipticity_ratios(kit: &SymbolKit, x: &PhasePoint, z: Complex64) -> Option<[f64; 4]> {
    if kit.chi_t(x, kit.r) >= 1.0 {
        return None;
    }
    let w = 1.0 + x.norm_sq();
    let (p, q) = (kit.p(x), kit.q(x));
    Some([p.re / w, q.re / w, (p - z).norm() / (w + z.norm()), (q - z).norm() / (w + z.norm())])
}

/// Two-sided comparisons of `p`, `q`, `p - z`, `q - z` with `<X>^2` off the
/// plateau of `chi_R`. Each ratio yields a min and a max report.
pub fn audit_ellipticity(
    kit: &SymbolKit,
    z_samples: &[Complex64],
    grid: &PhaseGrid,
    ceiling: f64,
) -> Result<Vec<InequalityReport>> {
    if let Some(z) = z_samples.iter().find(|z| z.re > z.im.abs()) {
        return Err(LabError::InvalidParameter(format!("z = {z} violates Re z <= |Im z|")));
    }
    let points = grid.points();
    let ids = ["re_p_elliptic", "re_q_elliptic", "p_minus_z_elliptic", "q_minus_z_elliptic"];
    let mut out = Vec::new();
    for (slot, id) in ids.iter().enumerate() {
        if slot < 2 {
            let ratios: Vec<Option<f64>> =
                points.par_iter().map(|x| ellipticity_ratios(kit, x, Complex64::new(0.0, 0.0)).map(|r| r[slot])).collect();
            out.extend(two_sided(id, &points, &ratios, ceiling));
            continue;
        }
        for &z in z_samples {
            let ratios: Vec<Option<f64>> =
                points.par_iter().map(|x| ellipticity_ratios(kit, x, z).map(|r| r[slot])).collect();
            for mut r in two_sided(id, &points, &ratios, ceiling) {
                r.z = Some(z);
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// `(Re s + h H_{Im s} g + C2 h) / (h^(2/3) lambda_s^(1/3))` for `s = p, q`.
pub fn weight_ratio(kit: &SymbolKit, x: &PhasePoint, h: f64, params: &WeightParams, variant: Variant) -> Option<f64> {
    let lambda = kit.lambda(x, variant);
    if lambda <= 0.0 {
        return None;
    }
    let num = kit.symbol(x, variant).re + h * kit.hamilton_im_g(x, h, params.epsilon) + params.c2 * h;
    Some(num / (h.powf(2.0 / 3.0) * lambda.cbrt()))
}

/// Smallest weight-inequality ratio per `h`, for `q` (`weight_q`) and `p` (`weight_p`).
pub fn audit_weight_inequality(
    kit: &SymbolKit,
    h_list: &[f64],
    grid: &PhaseGrid,
    params: &WeightParams,
    floor: f64,
) -> Vec<InequalityReport> {
    let points = grid.points();
    let mut out = Vec::new();
    for &h in h_list {
        for (variant, id) in [(Variant::Q, "weight_q"), (Variant::P, "weight_p")] {
            let ratios: Vec<Option<f64>> =
                points.par_iter().map(|x| weight_ratio(kit, x, h, params, variant)).collect();
            let mut r = report(id, &points, &ratios, Extremum::Min, floor, |v| v >= floor);
            r.h = Some(h);
            out.push(r);
        }
    }
    out
}

/// `|g|` and `h^(1/2) |g'|` with `g'` from centered differences.
pub fn weight_bound_ratios(kit: &SymbolKit, x: &PhasePoint, h: f64, epsilon: f64, fd_step: f64) -> [f64; 2] {
    let field = kit.g_field(h, epsilon);
    let step = fd_step * x.bracket();
    let d = 2 * x.dim();
    let grad: f64 = (0..d)
        .map(|i| centered_difference(&field, x, &MultiIndex::unit(d, i), step).re.powi(2))
        .sum::<f64>()
        .sqrt();
    [kit.g(x, h, epsilon).abs(), h.sqrt() * grad]
}

/// `sup |g| <= 1` and `sup h^(1/2) |g'|` per `h`.
pub fn audit_weight_bounds(
    kit: &SymbolKit,
    h_list: &[f64],
    grid: &PhaseGrid,
    epsilon: f64,
    ceiling: f64,
) -> Vec<InequalityReport> {
    let points = grid.points();
    let mut out = Vec::new();
    for &h in h_list {
        let vals: Vec<[f64; 2]> = points.par_iter().map(|x| weight_bound_ratios(kit, x, h, epsilon, 1e-3)).collect();
        let sup: Vec<Option<f64>> = vals.iter().map(|v| Some(v[0])).collect();
        let grad: Vec<Option<f64>> = vals.iter().map(|v| Some(v[1])).collect();
        let mut a = report("g_sup", &points, &sup, Extremum::Max, 1.0, |v| v <= 1.0);
        let mut b = report("g_gradient_scaled", &points, &grad, Extremum::Max, ceiling, |v| v <= ceiling);
        a.h = Some(h);
        b.h = Some(h);
        out.push(a);
        out.push(b);
    }
    out
}

/// `(y/h)^(1/2) max_{1 <= |alpha| <= 2} |d^alpha Psi|` with difference quotients.
pub fn localizer_derivative_ratio(kit: &SymbolKit, x: &PhasePoint, h: f64, y: f64, b: f64, fd_step: f64) -> f64 {
    let k = kit.clone();
    let psi = ClosureSymbol::real(x.dim(), "Psi", move |p| k.psi_weight(p, h, y, b));
    let step = fd_step * x.bracket();
    let d = 2 * x.dim();
    let mut best = 0.0f64;
    for order in 1..=2 {
        for alpha in MultiIndex::all_of_order(d, order) {
            best = best.max(centered_difference(&psi, x, &alpha, step).norm());
        }
    }
    best * (y / h).sqrt()
}

/// Scaled derivative bound of the localizer for each `(h, y)` pair, each on
/// a grid reaching its transition region.
pub fn audit_psi_derivatives(
    kit: &SymbolKit,
    h_list: &[f64],
    y_list: &[f64],
    b: f64,
    ceiling: f64,
) -> Vec<InequalityReport> {
    let mut out = Vec::new();
    for &h in h_list {
        for &y in y_list {
            let points = PhaseGrid::for_localizer(kit.dim(), h, y, b).points();
            let ratios: Vec<Option<f64>> =
                points.par_iter().map(|x| Some(localizer_derivative_ratio(kit, x, h, y, b, 1e-3))).collect();
            let mut r = report("psi_derivative", &points, &ratios, Extremum::Max, ceiling, |v| v <= ceiling);
            r.h = Some(h);
            r.y = Some(y);
            out.push(r);
        }
    }
    out
}

pub const REP_FLOOR: f64 = 1e-8;

/// `|Re p'| / (Re p)^(1/2)` and `|lambda_p'| / lambda_p^(1/2)` where the
/// denominators are at least `1e-8`.
pub fn rep_ratios(kit: &SymbolKit, x: &PhasePoint) -> [Option<f64>; 2] {
    let re = kit.re_jet(x, Variant::P);
    let la = kit.lambda_jet(x, Variant::P);
    let f = |j: crate::jet::Jet| (j.v >= REP_FLOOR).then(|| j.gradient_norm() / j.v.sqrt());
    [f(re), f(la)]
}

pub fn audit_rep_bounds(kit: &SymbolKit, grid: &PhaseGrid, ceiling: f64) -> Vec<InequalityReport> {
    let points = grid.points();
    let vals: Vec<[Option<f64>; 2]> = points.par_iter().map(|x| rep_ratios(kit, x)).collect();
    ["re_p_gradient", "lambda_p_gradient"]
        .iter()
        .enumerate()
        .map(|(k, id)| {
            let ratios: Vec<Option<f64>> = vals.iter().map(|v| v[k]).collect();
            report(*id, &points, &ratios, Extremum::Max, ceiling, |v| v <= ceiling)
        })
        .collect()
}

/// Entries of the Hessian of `q` as fields, for the `q'' in S(1)` audit.
pub fn q_hessian_fields(kit: &SymbolKit) -> Vec<ClosureSymbol> {
    let d = 2 * kit.dim();
    let mut out = Vec::new();
    for a in 0..d {
        for b in a..d {
            let k = kit.clone();
            out.push(ClosureSymbol::new(kit.dim(), format!("d{a}d{b} q"), move |x| {
                let re = k.re_jet(x, Variant::Q);
                let im = k.im_jet(x);
                Complex64::new(re.h[a][b], im.h[a][b])
            }));
        }
    }
    out
}

/// The ratio symbol `F` for a fixed `z`; a vanishing denominator shows up as NaN.
pub fn ratio_symbol_field(kit: &SymbolKit, z: Complex64) -> ClosureSymbol {
    let k = kit.clone();
    ClosureSymbol::new(kit.dim(), format!("F(z={z})"), move |x| {
        k.f_ratio(x, z).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
}
