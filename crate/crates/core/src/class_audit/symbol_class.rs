use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::PhaseGrid;
use crate::error::{LabError, Result};
use crate::model_registry::{growth_factor, GROWTH_LIMIT};
use crate::phase::{MultiIndex, PhasePoint};
use crate::symbol_kit::SymbolField;

/// Positive weight `m` defining the class `S(m)`.
#[derive(Clone)]
pub struct OrderFunction {
    pub label: String,
    f: Arc<dyn Fn(&PhasePoint) -> f64 + Send + Sync>,
}

impl OrderFunction {
    pub fn new(label: impl Into<String>, f: impl Fn(&PhasePoint) -> f64 + Send + Sync + 'static) -> Self {
        OrderFunction { label: label.into(), f: Arc::new(f) }
    }

    pub fn one() -> Self {
        OrderFunction::new("1", |_| 1.0)
    }

    /// `<X>^k`.
    pub fn bracket_pow(k: f64) -> Self {
        OrderFunction::new(format!("<X>^{k}"), move |x| x.bracket().powf(k))
    }

    pub fn eval(&self, x: &PhasePoint) -> f64 {
        (self.f)(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassAuditOptions {
    pub ceiling: f64,
    /// Difference step relative to `<X>`.
    pub fd_step: f64,
}

impl Default for ClassAuditOptions {
    fn default() -> Self {
        ClassAuditOptions { ceiling: 1e3, fd_step: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderRow {
    pub order: usize,
    pub worst_ratio: f64,
    pub point: PhasePoint,
    pub alpha: MultiIndex,
    pub growth: f64,
    /// `true` when every derivative of this order came from an exact evaluator.
    pub analytic: bool,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct SymbolClassReport {
    pub symbol: String,
    pub order_function: String,
    pub grid: String,
    pub options: ClassAuditOptions,
    pub rows: Vec<OrderRow>,
    /// Orders with neither an exact evaluator nor a stable difference quotient.
    pub skipped_orders: Vec<usize>,
}

impl SymbolClassReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

/// Centered difference approximation of `d^alpha a` for `|alpha| <= 2`.
pub fn centered_difference(a: &dyn SymbolField, x: &PhasePoint, alpha: &MultiIndex, step: f64) -> Complex64 {
    let c = alpha.coordinates();
    let f = |p: PhasePoint| a.value(&p);
    match c.len() {
        0 => f(*x),
        1 => (f(x.shifted(c[0], step)) - f(x.shifted(c[0], -step))) / (2.0 * step),
        2 if c[0] == c[1] => {
            (f(x.shifted(c[0], step)) - f(*x) * 2.0 + f(x.shifted(c[0], -step))) / (step * step)
        }
        2 => {
            let (i, j) = (c[0], c[1]);
            (f(x.shifted(i, step).shifted(j, step)) - f(x.shifted(i, step).shifted(j, -step))
                - f(x.shifted(i, -step).shifted(j, step))
                + f(x.shifted(i, -step).shifted(j, -step)))
                / (4.0 * step * step)
        }
        _ => panic!("difference quotients are limited to second order"),
    }
}

/// Measures `sup |d^alpha a| / m` on the grid for each order in `min_order..=max_order`.
///
/// Exact evaluators are used up to `a.analytic_order()`; beyond that, orders 1 and 2
/// use centered differences with step `fd_step * <X>`, and higher orders are skipped.
/// An order fails when its ratio exceeds the ceiling or keeps growing across the
/// outer radial decades of the grid.
pub fn check_symbol_class(
    a: &dyn SymbolField,
    m: &OrderFunction,
    min_order: usize,
    max_order: usize,
    grid: &PhaseGrid,
    options: ClassAuditOptions,
) -> Result<SymbolClassReport> {
    if max_order > 4 || min_order > max_order {
        return Err(LabError::InvalidParameter(format!("orders {min_order}..={max_order} not in 0..=4")));
    }
    let points = grid.points();
    let radii: Vec<f64> = points.iter().map(|p| p.norm()).collect();
    let d = 2 * a.dim();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for order in min_order..=max_order {
        let analytic = order <= a.analytic_order();
        if !analytic && order > 2 {
            skipped.push(order);
            continue;
        }
        let alphas = MultiIndex::all_of_order(d, order);
        let per_point: Vec<Result<(f64, MultiIndex)>> = points
            .par_iter()
            .map(|x| {
                let step = options.fd_step * x.bracket();
                let w = m.eval(x);
                let mut best = (0.0f64, alphas[0]);
                for alpha in &alphas {
                    let v = if analytic {
                        a.derivative(x, alpha).expect("declared analytic order")
                    } else {
                        centered_difference(a, x, alpha, step)
                    };
                    if !v.re.is_finite() || !v.im.is_finite() {
                        return Err(LabError::NonFiniteDifference {
                            point: format!("{x} for {} d{alpha}", a.label()),
                        });
                    }
                    let r = v.norm() / w;
                    if r > best.0 {
                        best = (r, *alpha);
                    }
                }
                Ok(best)
            })
            .collect();
        let per_point = per_point.into_iter().collect::<Result<Vec<_>>>()?;
        let ratios: Vec<f64> = per_point.iter().map(|r| r.0).collect();
        let mut worst = 0usize;
        for (i, r) in ratios.iter().enumerate() {
            if *r > ratios[worst] {
                worst = i;
            }
        }
        let growth = growth_factor(&radii, &ratios);
        let worst_ratio = ratios[worst];
        rows.push(OrderRow {
            order,
            worst_ratio,
            point: points[worst],
            alpha: per_point[worst].1,
            growth,
            analytic,
            passed: worst_ratio <= options.ceiling && growth <= GROWTH_LIMIT,
        });
    }
    Ok(SymbolClassReport {
        symbol: a.label(),
        order_function: m.label.clone(),
        grid: grid.descriptor(),
        options,
        rows,
        skipped_orders: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol_kit::{ClosureSymbol, JetSymbol};

    fn grid() -> PhaseGrid {
        PhaseGrid::default_for(1)
    }

    #[test]
    fn squared_bracket_is_its_own_order() {
        let a = ClosureSymbol::real(1, "<X>^2", |x| 1.0 + x.norm_sq());
        let r = check_symbol_class(&a, &OrderFunction::bracket_pow(2.0), 0, 2, &grid(), Default::default())
            .unwrap();
        assert!(r.passed());
        for row in &r.rows {
            assert!(row.worst_ratio <= 2.0 + 1e-6, "{row:?}");
        }
        assert!((r.rows[0].worst_ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_of_coordinates_is_not_bounded() {
        let a = JetSymbol::from_coords(1, "x xi", |c| c[0] * c[1]);
        let r = check_symbol_class(&a, &OrderFunction::one(), 1, 1, &grid(), Default::default()).unwrap();
        assert!(!r.passed());
        assert!(r.rows[0].growth > 5.0);
    }

    #[test]
    fn constants_have_vanishing_differences() {
        let a = ClosureSymbol::real(1, "3", |_| 3.0);
        let m = OrderFunction::new("1 + |x|", |x| 1.0 + x.x()[0].abs());
        let r = check_symbol_class(&a, &m, 0, 2, &grid(), Default::default()).unwrap();
        assert_eq!(r.rows[0].worst_ratio, 3.0);
        assert!(r.rows[1].worst_ratio <= 1e-6 && r.rows[2].worst_ratio <= 1e-6);
    }

    #[test]
    fn high_orders_need_exact_evaluators() {
        let a = ClosureSymbol::real(1, "x", |x| x.x()[0]);
        let r = check_symbol_class(&a, &OrderFunction::one(), 3, 4, &grid(), Default::default()).unwrap();
        assert_eq!(r.skipped_orders, vec![3, 4]);
        assert!(check_symbol_class(&a, &OrderFunction::one(), 0, 5, &grid(), Default::default()).is_err());
    }

    #[test]
    fn non_finite_values_are_located() {
        let a = ClosureSymbol::real(1, "1/x", |x| 1.0 / x.x()[0]);
        let err = check_symbol_class(&a, &OrderFunction::one(), 0, 0, &grid(), Default::default()).unwrap_err();
        assert!(err.to_string().contains("x=0"), "{err}");
    }

    #[test]
    fn mixed_second_difference() {
        let a = JetSymbol::from_coords(1, "x^2 xi", |c| c[0] * c[0] * c[1]);
        let x = PhasePoint::one_d(0.7, -1.3);
        let v = centered_difference(&a, &x, &MultiIndex::from_orders(&[1, 1]), 1e-3);
        assert!((v.re - 1.4).abs() < 1e-8);
    }
}
