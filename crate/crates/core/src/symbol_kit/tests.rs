use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::model_registry::{ModelParams, ModelRegistry};
use crate::phase::PhasePoint;

fn kit(name: &str) -> SymbolKit {
    let m = ModelRegistry::default().build(name, &ModelParams::default()).unwrap();
    kit_for(m, "smoothstep7").unwrap()
}

fn pt(x: f64, xi: f64) -> PhasePoint {
    PhasePoint::one_d(x, xi)
}

/// Plain-formula cutoff with plateau `r0` and support `r1`.
fn psi_oracle(s: f64, r0: f64, r1: f64) -> f64 {
    let u = ((s.abs() - r0) / (r1 - r0)).clamp(0.0, 1.0);
    1.0 - u.powi(4) * (35.0 - 84.0 * u + 70.0 * u * u - 20.0 * u.powi(3))
}

#[test]
fn chi_reference_values() {
    let k = kit("davies");
    assert_eq!(k.chi_t(&pt(0.0, 0.0), 1.0), 1.0);
    assert_eq!(k.chi_t(&pt(0.0, 3.0), 1.0), 0.0);
    assert!((k.chi_t(&pt(0.0, 1.5), 1.0) - psi_oracle(1.5, 1.0, 2.0)).abs() < 1e-15);
    // <x> enters the scaling: |xi|/<x> = 3/sqrt(5)
    let v = k.chi_t(&pt(2.0, 3.0), 1.0);
    assert!((v - psi_oracle(3.0 / 5f64.sqrt(), 1.0, 2.0)).abs() < 1e-14);
}

#[test]
fn truncation_radius() {
    assert_eq!(kit("davies").r, 8.0);
    assert_eq!(kit("magnetic_sqrt").r, 8.0);
    assert_eq!(kit("free").r, 2.0);
}

#[test]
fn p_and_q_reference_values() {
    let h = kit("harmonic_complex");
    assert_eq!(h.p(&pt(1.0, 1.0)), Complex64::new(2.0, 1.0));
    assert_eq!(h.q(&pt(1.0, 1.0)), h.p(&pt(1.0, 1.0)));
    let m = kit("magnetic_sqrt");
    assert_eq!(m.q(&pt(0.0, 1.0)), Complex64::new(0.0, 0.0));
    assert_eq!(m.p(&pt(0.0, 1.0)), Complex64::new(0.0, 0.0));
    assert_eq!(m.q(&pt(0.0, 40.0)), Complex64::new(1600.0, 0.0));
    assert_eq!(m.p(&pt(0.0, 40.0)), Complex64::new(1521.0, 0.0));
}

#[test]
fn lambda_reference_values() {
    assert_eq!(kit("davies").lambda(&pt(1.0, 1.0), Variant::P), 9.0);
    // |xi|^2 + x^2 + 2 |1|^2 at (2, 0)
    assert_eq!(kit("harmonic_complex").lambda(&pt(2.0, 0.0), Variant::P), 6.0);
    assert_eq!(kit("free").lambda(&pt(3.0, 0.0), Variant::Q), 0.0);
}

#[test]
fn ratio_symbol_outside_plateau() {
    let m = kit("magnetic_sqrt");
    let z = Complex64::new(0.0, 1.0);
    let f = m.f_ratio(&pt(0.0, 40.0), z).unwrap();
    let oracle = Complex64::new(1600.0, -1.0) / Complex64::new(1521.0, -1.0);
    assert!((f - oracle).norm() < 1e-15);
    assert!((f.re - 1.0519).abs() < 1e-4 && (f.im - 3.42e-5).abs() < 1e-7, "{f}");
    assert_eq!(m.f_ratio(&pt(0.5, 3.0), z).unwrap(), Complex64::new(1.0, 0.0));
    let d = kit("davies");
    for &(x, xi) in &[(0.0, 100.0), (3.0, -70.0), (0.1, 0.1)] {
        assert!((d.f_ratio(&pt(x, xi), z).unwrap() - 1.0).norm() < 1e-15);
    }
}

#[test]
fn ratio_symbol_reports_vanishing_denominator() {
    // free model: p = xi^2 equals z = 900 at xi = 30, which lies outside the plateau of chi_R.
    let f = kit("free");
    let err = f.f_ratio(&pt(0.0, 30.0), Complex64::new(900.0, 0.0)).unwrap_err();
    assert!(matches!(err, crate::error::LabError::EllipticityBreakdown(_)));
}

#[test]
fn weight_vanishes_on_gradient_free_points() {
    let d = kit("davies");
    assert_eq!(d.big_g(&pt(1.0, 0.0), 1e-2, 0.1).unwrap(), 0.0);
    assert!(d.big_g(&pt(0.0, 0.01), 1e-2, 0.1).is_err());
    assert_eq!(d.g(&pt(0.0, 0.01), 1e-2, 0.1), 0.0);
}

fn davies_g_oracle(x: f64, xi: f64, h: f64, eps: f64) -> f64 {
    let lambda = xi * xi + 8.0 * x * x;
    if lambda <= h {
        return 0.0;
    }
    let big = eps * h.powf(-1.0 / 3.0) * (-4.0 * x * xi) / lambda.powf(2.0 / 3.0)
        * psi_oracle(xi * xi / (h.powf(2.0 / 3.0) * lambda.cbrt()), 0.5, 1.0);
    (1.0 - psi_oracle(lambda / (2.0 * h), 0.5, 1.0)) * big
}

#[test]
fn weight_matches_closed_form_for_davies() {
    let d = kit("davies");
    let h = 1.0 / 64.0;
    for &(x, xi) in &[(0.3, 0.05), (0.05, 0.02), (1.0, 0.2), (-0.7, 0.11), (0.04, -0.03)] {
        let g = d.g(&pt(x, xi), h, 0.3);
        assert!((g - davies_g_oracle(x, xi, h, 0.3)).abs() < 1e-13, "{x} {xi}");
    }
}

#[test]
fn weight_jet_gradient_matches_differences() {
    let d = kit("davies");
    let h = 1.0 / 64.0;
    let s = 1e-6;
    for &(x, xi) in &[(0.3, 0.05), (0.05, 0.02), (-0.7, 0.11)] {
        let j = d.g_jet(&pt(x, xi), h, 0.3);
        let fx = (davies_g_oracle(x + s, xi, h, 0.3) - davies_g_oracle(x - s, xi, h, 0.3)) / (2.0 * s);
        let fxi = (davies_g_oracle(x, xi + s, h, 0.3) - davies_g_oracle(x, xi - s, h, 0.3)) / (2.0 * s);
        assert!((j.g[0] - fx).abs() < 1e-6 * (1.0 + fx.abs()), "{} vs {fx}", j.g[0]);
        assert!((j.g[1] - fxi).abs() < 1e-6 * (1.0 + fxi.abs()));
    }
}

#[test]
fn second_hamilton_derivative_reproduces_lambda() {
    for name in ["davies", "harmonic_complex", "magnetic_sqrt", "magnetic_linear"] {
        let k = kit(name);
        let im = k.im_field();
        let kk = k.clone();
        let first = JetSymbol::real(1, "H Re p", move |x| kk.hamilton_im_re_jet(x));
        for &(x, xi) in &[(0.4, -1.2), (2.0, 0.5), (-1.5, 3.0)] {
            let p = pt(x, xi);
            let h1 = hamilton_derivative(&im, &k.re_field(Variant::P), &p).unwrap();
            assert!((h1 - k.hamilton_im_re(&p)).abs() < 1e-12);
            let h2 = hamilton_derivative(&im, &first, &p).unwrap();
            let re = k.p(&p).re;
            assert!((re + h2 - k.lambda(&p, Variant::P)).abs() < 1e-12, "{name}");
        }
    }
}

#[test]
fn localizing_weight_values() {
    let d = kit("davies");
    assert_eq!(d.psi_weight(&pt(1.0, 1.0), 1e-2, 1.0, 1.0), 1.0);
    assert_eq!(d.psi_weight(&pt(0.0, 0.0), 1e-2, 1.0, 1.0), 1.0);
    assert_eq!(d.psi_weight(&pt(10.0, 10.0), 1e-2, 1.0, 1.0), 0.0);
    // lambda_q(sqrt(h) X) = h (xi^2 + 8 x^2): equal on (0, a) and (a / sqrt 8, 0)
    let h = 0.01;
    for a in [3.0, 7.5, 8.5, 9.9] {
        let u = d.psi_weight(&pt(0.0, a), h, 1.0, 1.0);
        let v = d.psi_weight(&pt(a / 8f64.sqrt(), 0.0), h, 1.0, 1.0);
        assert!((u - v).abs() < 1e-14);
        assert!((u - psi_oracle(h * a * a, 0.5, 1.0)).abs() < 1e-14);
    }
}

fn small_grid() -> Vec<PhasePoint> {
    let mut pts = Vec::new();
    for i in -40..=40 {
        for j in -40..=40 {
            pts.push(pt(i as f64 * 0.25, j as f64 * 0.25));
        }
    }
    pts
}

#[test]
fn zero_potential_needs_b_equal_two() {
    let f = kit("free");
    let c = calibrate_constants(&f, &[0.125, 0.0625], &small_grid(), 1.0, 2.0, 2.0).unwrap();
    assert!((c.required_b - 2.0).abs() < 1e-12);
    assert!(c.constants.b >= 2.0);
}

#[test]
fn calibrated_constants_are_consistent() {
    let d = kit("davies");
    let hs = [0.125, 0.0625, 0.03125];
    let c = calibrate_constants(&d, &hs, &small_grid(), 1.0, 2.0, 2.0).unwrap();
    assert!(c.required_b <= 2.0 + 1e-12);
    assert!(c.constants.b >= c.required_b);
    let b = c.constants.b;
    assert_eq!(b, (4.0 * c.constants.c0 * c.constants.c1).powi(-3));
    assert!(c.weight.epsilon <= c.epsilon_sup && c.epsilon_sup <= 1.0);
    for &h in &hs {
        for x in small_grid() {
            assert!(d.g(&x, h, c.weight.epsilon).abs() <= 0.5 + 1e-12);
        }
    }
    // the weight inequality holds with constant 1 / C1 at the chosen epsilon
    for &h in &hs {
        let terms = weight_terms(&d, &small_grid(), h, 1.0, Variant::Q);
        for (a, bb, _) in terms {
            assert!(a + c.weight.epsilon * bb >= c.weight_min_ratio - 1e-12);
        }
    }
    assert!(c.weight_min_ratio > 0.05);
}

#[test]
fn bounded_imaginary_part_calibrates() {
    let b = kit("bounded_imag");
    let c = calibrate_constants(&b, &[0.125], &small_grid(), 1.0, 2.0, 2.0).unwrap();
    assert!(c.required_b <= 2.0 + 1e-12, "{}", c.required_b);
}

proptest! {
    #[test]
    fn hamilton_derivative_is_antisymmetric_and_bilinear(
        x in -3.0f64..3.0, xi in -3.0f64..3.0, a in -2.0f64..2.0, b in -2.0f64..2.0
    ) {
        let f = JetSymbol::from_coords(1, "f", |c| c[0].sin() * c[1]);
        let u = JetSymbol::from_coords(1, "u", |c| c[0] * c[0] + (c[1] * 0.5).exp());
        let v = JetSymbol::from_coords(1, "v", |c| c[0] * c[1] * c[1]);
        let uv = JetSymbol::from_coords(1, "a u + b v", move |c| {
            (c[0] * c[0] + (c[1] * 0.5).exp()) * a + c[0] * c[1] * c[1] * b
        });
        let p = pt(x, xi);
        let fu = hamilton_derivative(&f, &u, &p).unwrap();
        let uf = hamilton_derivative(&u, &f, &p).unwrap();
        prop_assert!((fu + uf).abs() < 1e-12 * (1.0 + fu.abs()));
        prop_assert_eq!(hamilton_derivative(&f, &f, &p).unwrap(), 0.0);
        let lin = hamilton_derivative(&f, &uv, &p).unwrap();
        let fv = hamilton_derivative(&f, &v, &p).unwrap();
        prop_assert!((lin - a * fu - b * fv).abs() < 1e-10 * (1.0 + lin.abs()));
    }

    #[test]
    fn weight_support_structure(x in -2.0f64..2.0, xi in -2.0f64..2.0, k in 3i32..10) {
        let d = kit("harmonic_complex");
        let h = 2f64.powi(-k);
        let p = pt(x * 0.3, xi * 0.3);
        let lambda = d.lambda(&p, Variant::P);
        let g = d.g(&p, h, 0.2);
        if lambda <= h {
            prop_assert_eq!(g, 0.0);
        }
        if lambda >= 2.0 * h {
            prop_assert!((g - d.big_g(&p, h, 0.2).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn q_equals_p_on_the_plateau(x in -50.0f64..50.0, xi in -500.0f64..500.0) {
        let m = kit("magnetic_sqrt");
        let p = pt(x, xi);
        if m.chi_t(&p, 2.0 * m.r) == 1.0 {
            prop_assert_eq!(m.p(&p), m.q(&p));
        }
        prop_assert!(m.lambda(&p, Variant::Q) >= 0.0);
    }

    #[test]
    fn cutoff_is_monotone_in_range(s in 0.0f64..3.0, ds in 0.0f64..0.5) {
        let c = CutoffProfile::chi(transition_by_name("smoothstep7").unwrap());
        let (a, b) = (c.value(s), c.value(s + ds));
        prop_assert!(b <= a + 1e-15);
        prop_assert!((0.0..=1.0).contains(&a));
    }
}
