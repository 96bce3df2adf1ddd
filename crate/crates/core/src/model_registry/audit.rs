use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PotentialModel;
use crate::error::{LabError, Result};
use crate::phase::{spatial_bracket, MultiIndex};

pub const DEFAULT_CEILING: f64 = 1e3;

/// A ratio whose maximum grows by more than this factor from one radial
/// decade to the next is treated as unbounded (growth at least `|x|^(1/2)`).
pub const GROWTH_LIMIT: f64 = 3.162_277_660_168_379_5;

const V1_FLOOR: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionRow {
    pub id: &'static str,
    pub description: &'static str,
    /// Maximum of the pointwise ratio over the sample.
    pub constant: f64,
    pub worst_point: Vec<f64>,
    /// Ratio of the maxima over the outermost radial decade and the one inside it.
    pub growth: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct ModelConditionReport {
    pub model: String,
    pub sample_size: usize,
    pub ceiling: f64,
    pub rows: Vec<ConditionRow>,
    pub note: &'static str,
}

impl ModelConditionReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn row(&self, id: &str) -> Option<&ConditionRow> {
        self.rows.iter().find(|r| r.id == id)
    }
}

/// 400 log-spaced radii in `[1e-2, 1e3]` along every sign or direction.
pub fn default_sample(n: usize) -> Vec<Vec<f64>> {
    let radii: Vec<f64> = (0..400).map(|i| 10f64.powf(-2.0 + 5.0 * i as f64 / 399.0)).collect();
    let directions: Vec<Vec<f64>> = match n {
        1 => vec![vec![1.0], vec![-1.0]],
        _ => {
            let mut d = Vec::new();
            for k in 0..8 {
                let th = std::f64::consts::FRAC_PI_4 * k as f64;
                let mut v = vec![0.0; n];
                v[0] = th.cos();
                v[1] = th.sin();
                d.push(v);
            }
            d
        }
    };
    directions
        .iter()
        .flat_map(|dir| radii.iter().map(move |&r| dir.iter().map(|c| c * r).collect()))
        .collect()
}

/// Largest ratio on the outermost radial decade divided by the largest ratio on
/// the decade inside it. Returns 1 when the sample spans less than two decades.
pub fn growth_factor(radii: &[f64], ratios: &[f64]) -> f64 {
    let r_max = radii.iter().cloned().fold(0.0, f64::max);
    let r_min = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(r_max > 0.0) || r_max < 100.0 * r_min.max(f64::MIN_POSITIVE) {
        return 1.0;
    }
    let (mut outer, mut inner) = (0.0f64, 0.0f64);
    for (&r, &q) in radii.iter().zip(ratios) {
        if r >= r_max / 10.0 {
            outer = outer.max(q);
        } else if r >= r_max / 100.0 {
            inner = inner.max(q);
        }
    }
    if inner > 0.0 {
        outer / inner
    } else if outer > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

struct Condition {
    id: &'static str,
    description: &'static str,
    ratio: fn(&dyn PotentialModel, &[f64]) -> Option<f64>,
}

fn orders(n: usize, lo: usize, hi: usize) -> Vec<MultiIndex> {
    (lo..=hi).flat_map(|k| MultiIndex::all_of_order(n, k)).collect()
}

fn grad_sq(n: usize, f: impl Fn(&MultiIndex) -> f64) -> f64 {
    (0..n).map(|i| f(&MultiIndex::unit(n, i)).powi(2)).sum()
}

fn v1_negative_part(m: &dyn PotentialModel, x: &[f64]) -> Option<f64> {
    Some((-m.v1(x, &MultiIndex::zero(x.len()))).max(0.0))
}

fn v_hessian(m: &dyn PotentialModel, x: &[f64]) -> Option<f64> {
    let r = orders(x.len(), 2, 4)
        .iter()
        .map(|a| m.v1(x, a).abs().max(m.v2(x, a).abs()))
        .fold(0.0, f64::max);
    Some(r)
}

fn a_jacobian(m: &dyn PotentialModel, x: &[f64]) -> Option<f64> {
    let n = x.len();
    let s: f64 = (0..n).map(|k| grad_sq(n, |a| m.a(k, x, a))).sum();
    Some(s.sqrt())
}

fn a_hessian_decay(m: &dyn PotentialModel, x: &[f64]) -> Option<f64> {
    let w = spatial_bracket(x);
    let r = orders(x.len(), 2, 4)
        .iter()
        .flat_map(|a| (0..x.len()).map(move |k| m.a(k, x, a).abs()))
        .fold(0.0, f64::max);
    Some(r * w)
}

fn v2_growth(m: &dyn PotentialModel, x: &[f64]) -> Option<f64> {
    let z = MultiIndex::zero(x.len());
    let den = 1.0 + m.v1(x, &z) + grad_sq(x.len(), |a| m.v2(x, a));
    Some(m.v2(x, &z).abs() / den)
}

fn v1_gradient_sqrt(m: &dyn PotentialModel, x: &[f64]) -> Option<f64> {
    let v1 = m.v1(x, &MultiIndex::zero(x.len()));
    (v1 > V1_FLOOR).then(|| grad_sq(x.len(), |a| m.v1(x, a)).sqrt() / v1.sqrt())
}

fn v2_growth_shifted(m: &dyn PotentialModel, x: &[f64]) -> Option<f64> {
    let z = MultiIndex::zero(x.len());
    let num = (m.v2(x, &z).abs() - m.offset()).max(0.0);
    let den = m.v1(x, &z) + grad_sq(x.len(), |a| m.v2(x, a));
    Some(if num == 0.0 {
        0.0
    } else if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    })
}

const CONDITIONS: [Condition; 7] = [
    Condition { id: "v1_nonnegative", description: "negative part of V1", ratio: v1_negative_part },
    Condition {
        id: "v_hessian_bounded",
        description: "|d^a V| for 2 <= |a| <= 4",
        ratio: v_hessian,
    },
    Condition { id: "a_jacobian_bounded", description: "|A'(x)|", ratio: a_jacobian },
    Condition {
        id: "a_hessian_decay",
        description: "<x> |d^a A| for 2 <= |a| <= 4",
        ratio: a_hessian_decay,
    },
    Condition { id: "v2_growth", description: "|V2| / (1 + V1 + |V2'|^2)", ratio: v2_growth },
    Condition {
        id: "v1_gradient_sqrt",
        description: "|V1'| / V1^(1/2) where V1 > 1e-8",
        ratio: v1_gradient_sqrt,
    },
    Condition {
        id: "v2_growth_shifted",
        description: "(|V2| - T)_+ / (V1 + |V2'|^2)",
        ratio: v2_growth_shifted,
    },
];

/// Measures the constant of every standing condition on `sample`.
///
/// A condition fails when its constant is non-finite, exceeds `ceiling`, or
/// keeps growing across the outer radial decades of the sample. The nonnegativity
/// row fails on any negative value of `V1`.
pub fn audit_conditions(
    model: &dyn PotentialModel,
    sample: &[Vec<f64>],
    ceiling: f64,
) -> Result<ModelConditionReport> {
    if sample.is_empty() {
        return Err(LabError::EmptySample);
    }
    if let Some(bad) = sample.iter().find(|x| x.len() != model.dim() || x.iter().any(|v| !v.is_finite())) {
        return Err(LabError::InvalidParameter(format!("bad sample point {bad:?}")));
    }
    let radii: Vec<f64> = sample.iter().map(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    let mut rows = Vec::with_capacity(CONDITIONS.len());
    for c in &CONDITIONS {
        let mut ratios = vec![0.0; sample.len()];
        let mut worst = (f64::NEG_INFINITY, 0usize);
        for (i, x) in sample.iter().enumerate() {
            let Some(r) = (c.ratio)(model, x) else { continue };
            if r.is_nan() {
                return Err(LabError::NonFiniteModel { model: model.name().into(), x: x.clone() });
            }
            ratios[i] = r;
            if r > worst.0 {
                worst = (r, i);
            }
        }
        let constant = worst.0.max(0.0);
        let growth = growth_factor(&radii, &ratios);
        let passed = if c.id == "v1_nonnegative" {
            constant == 0.0
        } else {
            constant.is_finite() && constant <= ceiling && growth <= GROWTH_LIMIT
        };
        rows.push(ConditionRow {
            id: c.id,
            description: c.description,
            constant,
            worst_point: sample[worst.1].clone(),
            growth,
            passed,
        });
    }
    Ok(ModelConditionReport {
        model: model.name().into(),
        sample_size: sample.len(),
        ceiling,
        rows,
        note: "constants are certified on the finite sample only",
    })
}

#[derive(Clone, Debug)]
pub struct DerivativeCheck {
    pub max_rel_error: f64,
    pub worst: String,
}

/// Compares every derivative of order 1..=4 against a fourth-order centered
/// difference of the evaluator one level below, at `points` random points in
/// `[-5, 5]^n`. The error is measured relative to `max(1, |exact|)`.
pub fn derivative_check(model: &dyn PotentialModel, points: usize, seed: u64) -> DerivativeCheck {
    let n = model.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = DerivativeCheck { max_rel_error: 0.0, worst: String::new() };
    type Eval<'a> = Box<dyn Fn(&[f64], &MultiIndex) -> f64 + 'a>;
    let mut fields: Vec<(String, Eval)> = vec![
        ("V1".into(), Box::new(|x, a| model.v1(x, a))),
        ("V2".into(), Box::new(|x, a| model.v2(x, a))),
    ];
    for k in 0..n {
        fields.push((format!("A{k}"), Box::new(move |x, a| model.a(k, x, a))));
    }
    for _ in 0..points {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        for (label, f) in &fields {
            for alpha in orders(n, 1, 4) {
                for i in (0..n).filter(|&i| alpha.orders()[i] > 0) {
                    let mut lower = alpha;
                    let mut o = lower.orders().to_vec();
                    o[i] -= 1;
                    lower = MultiIndex::from_orders(&o);
                    let step = 1e-3 * x[i].abs().max(1.0);
                    let at = |s: f64| {
                        let mut y = x.clone();
                        y[i] += s * step;
                        f(&y, &lower)
                    };
                    let fd = (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * step);
                    let exact = f(&x, &alpha);
                    let err = (fd - exact).abs() / exact.abs().max(1.0);
                    if err > out.max_rel_error {
                        out.max_rel_error = err;
                        out.worst = format!("{label} d{alpha} at {x:?}");
                    }
                }
            }
        }
    }
    out
}
