use num_complex::Complex64;

use super::*;
use crate::model_registry::{ModelParams, ModelRegistry};
use crate::phase::PhasePoint;
use crate::symbol_kit::{calibrate_constants, kit_for, SymbolField, SymbolKit, Variant, WeightParams};

fn kit(name: &str) -> SymbolKit {
    let m = ModelRegistry::default().build(name, &ModelParams::default()).unwrap();
    kit_for(m, "smoothstep7").unwrap()
}

fn find<'a>(reports: &'a [InequalityReport], id: &str) -> &'a InequalityReport {
    reports.iter().find(|r| r.id == id).unwrap()
}

#[test]
fn ellipticity_for_unmagnetic_models_pairs_up() {
    let k = kit("harmonic_complex");
    let z = [Complex64::new(0.0, 1.0), Complex64::new(-4.0, 2.0)];
    let reps = audit_ellipticity(&k, &z, &PhaseGrid::default_for(1), DEFAULT_TWO_SIDED).unwrap();
    assert!(reps.iter().all(|r| r.passed));
    for ext in ["min", "max"] {
        assert_eq!(find(&reps, &format!("re_p_elliptic_{ext}")).value, find(&reps, &format!("re_q_elliptic_{ext}")).value);
    }
    for r in reps.iter().filter(|r| r.id.starts_with("p_minus")) {
        let twin = reps.iter().find(|s| s.z == r.z && s.id == r.id.replace("p_minus", "q_minus")).unwrap();
        assert_eq!(r.value, twin.value);
    }
}

#[test]
fn ellipticity_reference_point_and_plateau() {
    let k = kit("magnetic_sqrt");
    let z = Complex64::new(0.0, 1.0);
    let r = ellipticity_ratios(&k, &PhasePoint::one_d(0.0, 40.0), z).unwrap();
    let oracle = (1521.0f64 * 1521.0 + 1.0).sqrt() / 1602.0;
    assert!((r[2] - oracle).abs() < 1e-15);
    assert!((r[2] - 0.9494).abs() < 1e-4);
    assert!(ellipticity_ratios(&k, &PhasePoint::one_d(3.0, 5.0), z).is_none());
    let reps = audit_ellipticity(&k, &[z], &PhaseGrid::default_for(1), DEFAULT_TWO_SIDED).unwrap();
    assert!(reps.iter().all(|r| r.passed), "{reps:?}");
}

#[test]
fn ellipticity_rejects_spectral_side() {
    let k = kit("davies");
    assert!(audit_ellipticity(&k, &[Complex64::new(5.0, 1.0)], &PhaseGrid::default_for(1), 1e3).is_err());
}

#[test]
fn gradient_bounds_match_closed_forms() {
    let reps = audit_rep_bounds(&kit("harmonic_complex"), &PhaseGrid::default_for(1), 1e3);
    assert!((find(&reps, "re_p_gradient").value - 2.0).abs() < 1e-12);
    let d = kit("davies");
    let reps = audit_rep_bounds(&d, &PhaseGrid::default_for(1), 1e3);
    let v = find(&reps, "lambda_p_gradient").value;
    assert!(v <= 32f64.sqrt() + 1e-12 && v > 32f64.sqrt() - 1e-9, "{v}");
    let r = find(&reps, "lambda_p_gradient");
    assert_eq!(rep_ratios(&d, &r.point)[1], Some(r.value));
    assert_eq!(rep_ratios(&d, &PhasePoint::one_d(0.0, 0.0)), [None, None]);
}

#[test]
fn self_adjoint_weight_inequality_has_calculus_floor() {
    let k = kit("harmonic");
    let params = WeightParams { epsilon: 0.5, r: k.r, c2: 1.0 };
    let hs = [1.0 / 8.0, 1.0 / 64.0, 1.0 / 512.0];
    let reps = audit_weight_inequality(&k, &hs, &PhaseGrid::default_for(1), &params, 0.1);
    // min over t > 0 of (t + c h) / (h^(2/3) t^(1/3)) = (3/2) 2^(1/3) c^(2/3)
    let floor = 1.5 * 2f64.cbrt();
    for r in &reps {
        assert!(r.value >= floor - 1e-12, "{r:?}");
        assert!(r.value <= floor * 1.2, "{r:?}");
        assert!(r.passed);
    }
}

#[test]
fn davies_weight_inequality_after_calibration() {
    let k = kit("davies");
    let grid = PhaseGrid::default_for(1);
    let hs: Vec<f64> = (3..=9).map(|j| 2f64.powi(-j)).collect();
    let cal = calibrate_constants(&k, &hs, &grid.points(), 1.0, 2.0, 2.0).unwrap();
    let reps = audit_weight_inequality(&k, &[1.0 / 64.0], &grid, &cal.weight, 0.1);
    for r in &reps {
        assert!(r.passed, "{r:?}");
        let again = weight_ratio(&k, &r.point, 1.0 / 64.0, &cal.weight, if r.id == "weight_q" { Variant::Q } else { Variant::P });
        assert!((again.unwrap() - r.value).abs() <= 1e-10 * r.value.abs());
    }
    let bounds = audit_weight_bounds(&k, &hs, &grid, cal.weight.epsilon, 1e3);
    let mut scaled = Vec::new();
    for r in &bounds {
        assert!(r.passed, "{r:?}");
        if r.id == "g_gradient_scaled" {
            scaled.push(r.value);
        }
    }
    // one constant across h: the scaled gradient does not drift by more than a small factor
    let (lo, hi) = scaled.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi / lo < 4.0, "{scaled:?}");
}

#[test]
fn localizer_derivatives_peak_in_the_annulus() {
    let k = kit("davies");
    let (h, y, b) = (1.0 / 64.0, 1.0, 1.0);
    let reps = audit_psi_derivatives(&k, &[h], &[y], b, 1e3);
    let r = &reps[0];
    assert!(r.passed && r.value > 0.0, "{r:?}");
    let s = b * k.lambda(&r.point.scaled(h.sqrt()), Variant::Q) / y;
    assert!((0.45..=1.05).contains(&s), "{s}");
    let again = localizer_derivative_ratio(&k, &r.point, h, y, b, 1e-3);
    assert!((again - r.value).abs() <= 1e-10 * r.value);
    assert_eq!(localizer_derivative_ratio(&k, &PhasePoint::one_d(0.0, 0.0), h, y, b, 1e-3), 0.0);
    assert_eq!(localizer_derivative_ratio(&k, &PhasePoint::one_d(30.0, 30.0), h, y, b, 1e-3), 0.0);
}

#[test]
fn truncated_symbol_has_bounded_hessian() {
    let k = kit("magnetic_sqrt");
    let grid = PhaseGrid::default_for(1);
    for f in q_hessian_fields(&k) {
        let r = check_symbol_class(&f, &OrderFunction::one(), 0, 2, &grid, Default::default()).unwrap();
        assert!(r.rows[0].passed && r.rows[1].passed, "{}: {:?}", f.label(), r.rows);
        // bounded: the largest values sit in the cutoff transition and decay outward
        assert!(r.rows.iter().all(|row| row.growth < 1.0), "{}: {:?}", f.label(), r.rows);
    }
}

#[test]
fn ratio_symbol_is_bounded_with_decaying_gradient() {
    let k = kit("magnetic_sqrt");
    let grid = PhaseGrid::default_for(1);
    for z in [Complex64::new(0.0, 1.0), Complex64::new(0.5, 3.0), Complex64::new(-2.0, 0.5)] {
        let f = ratio_symbol_field(&k, z);
        let r = check_symbol_class(&f, &OrderFunction::one(), 0, 1, &grid, Default::default()).unwrap();
        assert!(r.passed(), "{:?}", r.rows);
        let r = check_symbol_class(&f, &OrderFunction::bracket_pow(-1.0), 1, 1, &grid, Default::default()).unwrap();
        assert!(r.passed(), "{:?}", r.rows);
    }
}
