//! Acceptance criteria 1-9, one PASS/FAIL line each.
//!
//! Runs as a plain binary so that every line is printed. The process fails
//! when a criterion outside `KNOWN_FAILING` fails; a known failure is still
//! printed as FAIL.

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use magres_core::class_audit::{
    audit_psi_derivatives, audit_weight_inequality, check_symbol_class, q_hessian_fields, ratio_symbol_field,
    ClassAuditOptions, OrderFunction, PhaseGrid,
};
use magres_core::model_registry::{audit_conditions, default_sample, ModelParams, ModelRegistry, PotentialModel};
use magres_core::quantizer::{
    check_weyl_composition, check_wick_identities, composition_grid, default_battery, resolve_normalization,
    weyl_poly, wick_suite_grid, CoherentFrame, GridSpec, FRAME_DEFECT_LIMIT,
};
use magres_core::resolvent_lab::{
    certify_lower_bound, fit_exponents, sigma_min, sweep, FitAxis, GridPolicy, HalfWidthRule, RegionParams,
    SamplerInput, SamplerRegistry,
};
use magres_core::symbol_kit::{calibrate_constants, kit_for, ClosureSymbol, SymbolKit};
use magres_core::PhasePoint;
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CERT_FLOOR: f64 = 1e-2;
const H_SLOPE_WINDOW: (f64, f64) = (0.60, 0.75);
const RUNTIME_LIMIT_S: f64 = 300.0;
const GAUGE_TOL: f64 = 1e-3;
const SELF_ADJOINT_TOL: f64 = 1e-6;
const NONNEGATIVE_SYMBOLS: usize = 20;
const FIRST_WINDOW: (f64, f64) = (0.9, 1.1);
const SECOND_WINDOW: (f64, f64) = (1.8, 2.2);
const WEIGHT_FLOOR: f64 = 0.1;
const CLASS_CEILING: f64 = 1e3;

/// Criteria that fail for reasons recorded in the project notes.
const KNOWN_FAILING: [u32; 1] = [8];

struct Outcome {
    passed: bool,
    detail: String,
}

fn pow2(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(-k)).collect()
}

fn model(name: &str) -> Arc<dyn PotentialModel> {
    ModelRegistry::default().build(name, &ModelParams::default()).unwrap()
}

fn kit(name: &str) -> SymbolKit {
    kit_for(model(name), "smoothstep7").unwrap()
}

fn within(v: f64, w: (f64, f64)) -> bool {
    v >= w.0 && v <= w.1
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let m = model("davies");
    let policy = GridPolicy { half_width: HalfWidthRule::Fixed(8.0), ..GridPolicy::default() };
    let sampler = SamplerRegistry::default().build("fixed", SamplerInput::Points(vec![Complex64::i()])).unwrap();
    let out = sweep(m.as_ref(), 8.0, &pow2(4, 9), sampler.as_ref(), &policy, &RegionParams::default()).unwrap();
    let cert = certify_lower_bound(&out.records, CERT_FLOOR).unwrap();
    let fit = fit_exponents(&out.records, FitAxis::H).unwrap();
    let n_max = out.records.iter().map(|r| r.grid.points).max().unwrap();
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: cert.passed && within(fit.slope, H_SLOPE_WINDOW) && n_max <= 1024 && secs <= RUNTIME_LIMIT_S,
        detail: format!(
            "c_min {:.4} >= {CERT_FLOOR}, slope {:.4} in [{}, {}], N <= {n_max}, {secs:.1} s",
            cert.c_min, fit.slope, H_SLOPE_WINDOW.0, H_SLOPE_WINDOW.1
        ),
    }
}

fn criterion_2() -> Outcome {
    let m = model("davies");
    let policy = GridPolicy { half_width: HalfWidthRule::Fixed(8.0), ..GridPolicy::default() };
    let ys = vec![1.0, 2.0, 4.0, 8.0, 16.0];
    let sampler = SamplerRegistry::default().build("imaginary_axis", SamplerInput::Distances(ys)).unwrap();
    let out = sweep(m.as_ref(), 8.0, &[2f64.powi(-6)], sampler.as_ref(), &policy, &RegionParams::default()).unwrap();
    let cert = certify_lower_bound(&out.records, CERT_FLOOR).unwrap();
    let ratios: Vec<String> = out.records.iter().map(|r| format!("{:.3}", r.ratio)).collect();
    Outcome {
        passed: cert.passed && out.records.len() == 5,
        detail: format!("ratios [{}] >= {CERT_FLOOR}", ratios.join(", ")),
    }
}

fn criterion_3() -> Outcome {
    let grid = GridSpec::new(8.0, 512, 2f64.powi(-5)).unwrap();
    let r = kit("magnetic_linear").r;
    let a = sigma_min(&weyl_poly(model("magnetic_linear").as_ref(), &grid, r).unwrap(), Complex64::i());
    let b = sigma_min(&weyl_poly(model("harmonic_complex").as_ref(), &grid, r).unwrap(), Complex64::i());
    let rel = (a - b).abs() / b;
    Outcome { passed: rel <= GAUGE_TOL, detail: format!("sigma_min {a:.6e} vs {b:.6e}, relative gap {rel:.1e} <= {GAUGE_TOL}") }
}

fn criterion_4() -> Outcome {
    let grid = GridSpec::new(10.0, 256, 1.0).unwrap();
    let p = weyl_poly(model("harmonic").as_ref(), &grid, 8.0).unwrap();
    let spectrum = SymmetricEigen::new(p.data.clone()).eigenvalues;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let z = Complex64::new(rng.random_range(-5.0..25.0), rng.random_range(-3.0..3.0));
        let distance = spectrum.iter().map(|e| (z - e).norm()).fold(f64::INFINITY, f64::min);
        worst = worst.max((sigma_min(&p, z) - distance).abs() / distance);
    }
    Outcome { passed: worst <= SELF_ADJOINT_TOL, detail: format!("worst relative gap {worst:.1e} <= {SELF_ADJOINT_TOL} over 10 z") }
}

fn criterion_5() -> Outcome {
    let norm = resolve_normalization().unwrap().adopted;
    let frame = CoherentFrame::new(&wick_suite_grid(64).unwrap(), 0.5).unwrap();
    let battery = default_battery();
    let nonnegative = battery.iter().filter(|b| b.nonnegative).count();
    let report = check_wick_identities(&battery, &frame, norm).unwrap();
    let failing: Vec<&str> = report.rows.iter().filter(|r| !r.passed()).map(|r| r.symbol.as_str()).collect();
    let worst_ww = report.rows.iter().map(|r| r.ww_defect / r.ww_tol).fold(0.0, f64::max);
    Outcome {
        passed: report.passed() && frame.defect <= FRAME_DEFECT_LIMIT && nonnegative >= NONNEGATIVE_SYMBOLS,
        detail: format!(
            "{} symbols ({nonnegative} nonnegative), normalization {}, frame defect {:.1e}, worst Wick-Weyl defect/tol {worst_ww:.1e}, failing {failing:?}",
            report.rows.len(),
            norm.name(),
            frame.defect
        ),
    }
}

fn criterion_6() -> Outcome {
    let f = ClosureSymbol::real(1, "exp(-x^2)", |p: &PhasePoint| (-p.x()[0].powi(2)).exp());
    let g = ClosureSymbol::real(1, "exp(-xi^2)", |p: &PhasePoint| (-p.xi()[0].powi(2)).exp());
    let report = check_weyl_composition(&f, &g, &pow2(3, 8), |h| composition_grid(h, 4.0, 2.0)).unwrap();
    let (s1, s2) = (report.first_slope.unwrap_or(f64::NAN), report.second_slope.unwrap_or(f64::NAN));
    Outcome {
        passed: within(s1, FIRST_WINDOW) && within(s2, SECOND_WINDOW),
        detail: format!("slopes {s1:.4} in [{}, {}], {s2:.4} in [{}, {}]", FIRST_WINDOW.0, FIRST_WINDOW.1, SECOND_WINDOW.0, SECOND_WINDOW.1),
    }
}

fn criterion_7() -> Outcome {
    let grid = PhaseGrid::default_for(1);
    let hs = pow2(3, 9);
    let mut passed = true;
    let mut parts = Vec::new();
    for name in ["davies", "magnetic_sqrt"] {
        let k = kit(name);
        let cal = calibrate_constants(&k, &hs, &grid.points(), 1.0, 2.0, 2.0).unwrap();
        let min = audit_weight_inequality(&k, &hs, &grid, &cal.weight, WEIGHT_FLOOR)
            .iter()
            .map(|r| r.value)
            .fold(f64::INFINITY, f64::min);
        passed &= min >= WEIGHT_FLOOR;
        parts.push(format!("{name} min ratio {min:.3}"));
    }
    Outcome { passed, detail: format!("{} >= {WEIGHT_FLOOR}", parts.join(", ")) }
}

fn criterion_8() -> Outcome {
    let grid = PhaseGrid::default_for(1);
    let options = ClassAuditOptions { ceiling: CLASS_CEILING, ..Default::default() };
    let hs = pow2(3, 9);
    let ys = vec![1.0, 4.0, 16.0];
    let sampler = SamplerRegistry::default().build("parabola_boundary", SamplerInput::Distances(ys.clone())).unwrap();
    let mut passed = true;
    let mut parts = Vec::new();
    for name in ["davies", "magnetic_sqrt"] {
        let k = kit(name);
        let mut q_worst = (0.0f64, 0usize);
        let mut q_ok = true;
        for f in q_hessian_fields(&k) {
            let r = check_symbol_class(&f, &OrderFunction::one(), 0, 2, &grid, options).unwrap();
            q_ok &= r.passed();
            for row in &r.rows {
                if row.worst_ratio > q_worst.0 {
                    q_worst = (row.worst_ratio, row.order);
                }
            }
        }
        let params = RegionParams { t: k.model.offset(), ..RegionParams::default() };
        let (mut f_ok, mut f_worst, mut df_worst) = (true, 0.0f64, 0.0f64);
        for &h in &hs {
            for z in sampler.sample(h, &params) {
                let f = ratio_symbol_field(&k, z);
                let r = check_symbol_class(&f, &OrderFunction::one(), 0, 1, &grid, options).unwrap();
                f_ok &= r.passed();
                f_worst = f_worst.max(r.rows.iter().map(|row| row.worst_ratio).fold(0.0, f64::max));
                let r = check_symbol_class(&f, &OrderFunction::bracket_pow(-1.0), 1, 1, &grid, options).unwrap();
                f_ok &= r.passed();
                df_worst = df_worst.max(r.rows[0].worst_ratio);
            }
        }
        let b = calibrate_constants(&k, &hs, &grid.points(), 1.0, 2.0, 2.0).unwrap().constants.b;
        let psi = audit_psi_derivatives(&k, &hs, &ys, b, CLASS_CEILING);
        let psi_ok = psi.iter().all(|r| r.passed);
        let psi_worst = psi.iter().max_by(|a, b| a.value.total_cmp(&b.value)).unwrap();
        passed &= q_ok && f_ok && psi_ok;
        parts.push(format!(
            "{name}: q'' {} (worst {:.0} at order {}), F {} (sup {:.3}, <X>|F'| {:.3}), Psi {} (worst {:.0} at h/y = {}, B = {b:.2})",
            if q_ok { "ok" } else { "FAIL" },
            q_worst.0,
            q_worst.1,
            if f_ok { "ok" } else { "FAIL" },
            f_worst,
            df_worst,
            if psi_ok { "ok" } else { "FAIL" },
            psi_worst.value,
            psi_worst.h.unwrap() / psi_worst.y.unwrap(),
        ));
    }
    Outcome { passed, detail: format!("ceiling {CLASS_CEILING}; {}", parts.join("; ")) }
}

fn criterion_9() -> Outcome {
    let m = model("imag_linear");
    let report = audit_conditions(m.as_ref(), &default_sample(1), 1e3).unwrap();
    let failing = report.row("v2_growth").is_some_and(|r| !r.passed);
    let dir = std::env::temp_dir().join(format!("magres-acceptance-{}", std::process::id()));
    let status = Command::new(env!("CARGO_BIN_EXE_magres"))
        .args(["audit-model", "--config"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/imag_linear.toml"))
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap()
        .status;
    let _ = std::fs::remove_dir_all(&dir);
    Outcome {
        passed: failing && status.code() == Some(1),
        detail: format!("v2_growth fails: {failing}, audit-model exit status {:?}", status.code()),
    }
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "h-scaling, davies", criterion_1),
        (2, "y-scaling, davies", criterion_2),
        (3, "gauge invariance", criterion_3),
        (4, "self-adjoint distance", criterion_4),
        (5, "Wick identities", criterion_5),
        (6, "composition slopes", criterion_6),
        (7, "weight inequality", criterion_7),
        (8, "symbol classes", criterion_8),
        (9, "negative control", criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let o = run();
        println!("criterion {id} ({name}): {} | {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        if !o.passed && !KNOWN_FAILING.contains(&id) {
            unexpected.push(id);
        }
        if o.passed && KNOWN_FAILING.contains(&id) {
            println!("criterion {id} now passes; remove it from KNOWN_FAILING");
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance results: {unexpected:?}");
        std::process::exit(1);
    }
}
