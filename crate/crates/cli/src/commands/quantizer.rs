use std::sync::Arc;

use magres_core::quantizer::{
    check_weyl_composition, check_wick_identities, composition_grid, default_battery, resolve_normalization,
    wick_suite_grid, BatterySymbol, CoherentFrame, Normalization, FRAME_DEFECT_LIMIT, NORM_SLACK, ADJOINT_TOL,
};
use magres_core::symbol_kit::ClosureSymbol;
use magres_core::PhasePoint;

use super::{pass_cell, Verdict, SKIPPED};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{num, opt_num, Reporter};

fn x_only(label: &str, f: fn(f64) -> f64) -> BatterySymbol {
    BatterySymbol { symbol: Arc::new(ClosureSymbol::real(1, label, move |p: &PhasePoint| f(p.x()[0]))), nonnegative: true }
}

/// Nonnegative `2 pi`-periodic multiplication symbols.
pub fn x_only_battery() -> Vec<BatterySymbol> {
    vec![
        x_only("1+cos x", |x| 1.0 + x.cos()),
        x_only("cos^2 x", |x| x.cos().powi(2)),
        x_only("exp(cos x-1)", |x| (x.cos() - 1.0).exp()),
        x_only("1/(2+sin x)", |x| 1.0 / (2.0 + x.sin())),
    ]
}

fn composition_pair(name: &str) -> (ClosureSymbol, ClosureSymbol) {
    match name {
        "x_only" => (
            ClosureSymbol::real(1, "cos x", |p: &PhasePoint| p.x()[0].cos()),
            ClosureSymbol::real(1, "exp(-x^2)", |p: &PhasePoint| (-p.x()[0].powi(2)).exp()),
        ),
        _ => (
            ClosureSymbol::real(1, "exp(-x^2)", |p: &PhasePoint| (-p.x()[0].powi(2)).exp()),
            ClosureSymbol::real(1, "exp(-xi^2)", |p: &PhasePoint| (-p.xi()[0].powi(2)).exp()),
        ),
    }
}

pub fn audit_wick(cfg: &RunConfig, rep: &Reporter) -> CliResult<Verdict> {
    let w = &cfg.wick;
    let finding = resolve_normalization()?;
    let norm = match w.normalization.as_str() {
        "resolve" => finding.adopted,
        name => *Normalization::ALL.iter().find(|n| n.name() == name).expect("validated name"),
    };
    let mut text = finding.render();
    if norm != finding.adopted {
        text.push_str(&format!("override: {} (from configuration)\n", norm.name()));
    }
    rep.write_text("normalization_finding.txt", &text)?;

    let grid = wick_suite_grid(w.points)?;
    let frame = CoherentFrame::new(&grid, w.delta)?;
    let frame_ok = frame.defect <= FRAME_DEFECT_LIMIT;
    let mut t = rep.table(&["check", "symbol", "value", "tolerance", "pass"]);
    t.row(["frame_identity", "", &num(frame.defect), &num(FRAME_DEFECT_LIMIT), pass_cell(frame_ok)])?;
    let mut ok = frame_ok;
    let battery = if w.battery == "x_only" { x_only_battery() } else { default_battery() };
    if frame_ok {
        let report = check_wick_identities(&battery, &frame, norm)?;
        for r in &report.rows {
            if !r.passed() {
                ok = false;
                println!("audit-wick: {} fails an identity", r.symbol);
            }
            if let Some(min) = r.min_eigenvalue {
                t.row(["positivity", &r.symbol, &num(min), &num(-r.positivity_tol), pass_cell(r.positivity_ok())])?;
            }
            t.row(["norm", &r.symbol, &num(r.matrix_norm), &num(r.sup_abs + NORM_SLACK), pass_cell(r.norm_ok())])?;
            t.row(["adjoint", &r.symbol, &num(r.adjoint_defect), &num(ADJOINT_TOL), pass_cell(r.adjoint_ok())])?;
            t.row(["wick_to_weyl", &r.symbol, &num(r.ww_defect), &num(r.ww_tol), pass_cell(r.ww_ok())])?;
        }
    } else {
        println!("audit-wick: frame defect {} exceeds {}", num(frame.defect), num(FRAME_DEFECT_LIMIT));
        for b in &battery {
            t.row(["identities", &b.symbol.label(), "", "", SKIPPED])?;
        }
    }
    t.footer_line(&format!(
        "# grid L={} N={} h={} frame delta={} nodes={} normalization {}",
        num(grid.half_width),
        grid.points,
        num(grid.h),
        num(w.delta),
        frame.len(),
        norm.name()
    ));
    rep.write_table("wick_identities.csv", t)?;

    let (f, g) = composition_pair(&w.composition_pair);
    let report = check_weyl_composition(&f, &g, &w.composition_h_list, |h| {
        composition_grid(h, w.composition_half_width, w.composition_edge)
    })?;
    let mut t = rep.table(&["quantity", "h", "N", "value", "lower", "upper", "pass"]);
    for r in &report.rows {
        t.row(["first_order_defect", &num(r.h), &r.points.to_string(), &num(r.first_order), "", "", ""])?;
        t.row(["second_order_defect", &num(r.h), &r.points.to_string(), &num(r.second_order), "", "", ""])?;
    }
    let largest = report.rows.iter().map(|r| r.first_order.max(r.second_order)).fold(0.0, f64::max);
    if largest <= w.noise_floor {
        t.row(["noise_floor", "", "", &num(largest), "", &num(w.noise_floor), "true"])?;
    } else {
        for (name, slope, window) in [
            ("first_order_slope", report.first_slope, w.first_window),
            ("second_order_slope", report.second_slope, w.second_window),
        ] {
            let pass = slope.is_some_and(|s| s >= window[0] && s <= window[1]);
            ok &= pass;
            if !pass {
                println!("audit-wick: {name} {} outside [{}, {}]", opt_num(slope), window[0], window[1]);
            }
            t.row([name, "", "", &opt_num(slope), &num(window[0]), &num(window[1]), pass_cell(pass)])?;
        }
    }
    t.footer_line(&format!(
        "# f = {}, g = {}, L = {}, band edge {}",
        report.f,
        report.g,
        num(w.composition_half_width),
        num(w.composition_edge)
    ));
    rep.write_table("composition_slopes.csv", t)?;
    Ok(Verdict::from_pass(ok))
}
