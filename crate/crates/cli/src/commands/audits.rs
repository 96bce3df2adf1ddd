use magres_core::class_audit::{
    audit_ellipticity, audit_psi_derivatives, audit_rep_bounds, audit_weight_bounds, audit_weight_inequality,
    check_symbol_class, q_hessian_fields, ratio_symbol_field, ClassAuditOptions, InequalityReport, OrderFunction,
    PhaseGrid, SymbolClassReport,
};
use magres_core::model_registry::{audit_conditions, default_sample, derivative_check};
use magres_core::resolvent_lab::{SamplerInput, SamplerRegistry};
use magres_core::symbol_kit::{calibrate_constants, kit_for, SymbolKit};
use num_complex::Complex64;

use super::{pass_cell, Verdict, SKIPPED};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{coords, num, opt_num, Reporter, Table};

pub fn audit_model(cfg: &RunConfig, rep: &Reporter) -> CliResult<Verdict> {
    let model = cfg.build_model()?;
    let report = audit_conditions(model.as_ref(), &default_sample(model.dim()), cfg.audit.ceiling)?;
    let check = derivative_check(model.as_ref(), cfg.audit.derivative_points, cfg.seed);
    let mut t = rep.table(&["model", "condition_id", "description", "constant", "worst_point", "growth", "pass"]);
    for r in &report.rows {
        t.row([
            report.model.as_str(),
            r.id,
            r.description,
            &num(r.constant),
            &coords(&r.worst_point),
            &num(r.growth),
            pass_cell(r.passed),
        ])?;
    }
    let derivatives_ok = check.max_rel_error <= cfg.audit.derivative_tol;
    t.row([
        report.model.as_str(),
        "derivative_check",
        &format!("closed-form derivatives against differences, worst {}", check.worst),
        &num(check.max_rel_error),
        "",
        "",
        pass_cell(derivatives_ok),
    ])?;
    t.footer_line(&format!("# {} ({} sample points, ceiling {})", report.note, report.sample_size, num(report.ceiling)));
    rep.write_table("model_conditions.csv", t)?;
    for r in report.rows.iter().filter(|r| !r.passed) {
        println!("audit-model: {} fails {} (constant {}, growth {})", report.model, r.id, num(r.constant), num(r.growth));
    }
    Ok(Verdict::from_pass(report.passed() && derivatives_ok))
}

/// Spectral parameters on the parabola boundary for every audit `(h, y)`.
pub fn boundary_samples(cfg: &RunConfig) -> CliResult<Vec<(f64, Complex64)>> {
    let params = cfg.region_params()?;
    let sampler = SamplerRegistry::default()
        .build("parabola_boundary", SamplerInput::Distances(cfg.audit.y_list.clone()))?;
    Ok(cfg.audit.h_list.iter().flat_map(|&h| sampler.sample(h, &params).into_iter().map(move |z| (h, z))).collect())
}

fn kit(cfg: &RunConfig) -> CliResult<SymbolKit> {
    Ok(kit_for(cfg.build_model()?, &cfg.model.profile)?)
}

const CLASS_COLUMNS: [&str; 10] =
    ["symbol", "order_function", "order", "worst_ratio", "x", "xi", "alpha", "growth", "analytic", "pass"];

fn class_rows(t: &mut Table, r: &SymbolClassReport) -> CliResult<()> {
    for row in &r.rows {
        let alpha: Vec<String> = row.alpha.orders().iter().map(|o| o.to_string()).collect();
        t.row([
            r.symbol.as_str(),
            &r.order_function,
            &row.order.to_string(),
            &num(row.worst_ratio),
            &coords(row.point.x()),
            &coords(row.point.xi()),
            &alpha.join(" "),
            &num(row.growth),
            pass_cell(row.analytic),
            pass_cell(row.passed),
        ])?;
    }
    for order in &r.skipped_orders {
        t.row([r.symbol.as_str(), &r.order_function, &order.to_string(), "", "", "", "", "", "", SKIPPED])?;
    }
    Ok(())
}

pub fn audit_symbols(cfg: &RunConfig, rep: &Reporter) -> CliResult<Verdict> {
    let kit = kit(cfg)?;
    let grid = PhaseGrid::default_for(kit.dim());
    let options = ClassAuditOptions { ceiling: cfg.audit.ceiling, ..Default::default() };
    let mut t = rep.table(&CLASS_COLUMNS);
    let mut ok = true;
    let mut record = |t: &mut Table, r: SymbolClassReport| -> CliResult<()> {
        if !r.passed() {
            ok = false;
            println!("audit-symbols: {} fails in S({})", r.symbol, r.order_function);
        }
        class_rows(t, &r)
    };
    for f in q_hessian_fields(&kit) {
        record(&mut t, check_symbol_class(&f, &OrderFunction::one(), 0, 2, &grid, options)?)?;
    }
    let zs = boundary_samples(cfg)?;
    if zs.is_empty() {
        t.row(["F", "1", "", "", "", "", "", "", "", SKIPPED])?;
    }
    for (_, z) in zs {
        let f = ratio_symbol_field(&kit, z);
        record(&mut t, check_symbol_class(&f, &OrderFunction::one(), 0, 1, &grid, options)?)?;
        record(&mut t, check_symbol_class(&f, &OrderFunction::bracket_pow(-1.0), 1, 1, &grid, options)?)?;
    }
    t.footer_line(&format!("# grid {} profile {} R {}", grid.descriptor(), cfg.model.profile, num(kit.r)));
    rep.write_table("symbol_classes.csv", t)?;
    Ok(Verdict::from_pass(ok))
}

fn inequality_row(t: &mut Table, r: &InequalityReport, offset: f64, samples: &[(f64, Complex64)]) -> CliResult<()> {
    let y = r.y.or(r.z.map(|z| z.norm() - offset));
    let h = r.h.or_else(|| r.z.and_then(|z| samples.iter().find(|s| s.1 == z).map(|s| s.0)));
    t.row([
        r.id.as_str(),
        &opt_num(h),
        &opt_num(y),
        &num(r.value),
        &coords(r.point.x()),
        &coords(r.point.xi()),
        pass_cell(r.passed),
    ])
}

pub fn audit_weight(cfg: &RunConfig, rep: &Reporter) -> CliResult<Verdict> {
    let kit = kit(cfg)?;
    let region = cfg.region_params()?;
    let grid = PhaseGrid::default_for(kit.dim());
    let a = &cfg.audit;
    let mut reports = Vec::new();
    let mut skipped: Vec<&str> = Vec::new();
    let mut footer = Vec::new();
    let mut ok = true;

    if a.h_list.is_empty() {
        skipped.extend(["weight_q", "weight_p", "g_sup", "g_gradient_scaled", "psi_derivative"]);
    } else {
        match calibrate_constants(&kit, &a.h_list, &grid.points(), a.c2, region.k, region.m) {
            Ok(cal) => {
                let c = &cal.constants;
                footer.push(format!(
                    "# calibration epsilon={} C0={} C1={} B={} required_B={}",
                    num(cal.weight.epsilon),
                    num(c.c0),
                    num(c.c1),
                    num(c.b),
                    num(cal.required_b)
                ));
                reports.extend(audit_weight_inequality(&kit, &a.h_list, &grid, &cal.weight, a.weight_floor));
                reports.extend(audit_weight_bounds(&kit, &a.h_list, &grid, cal.weight.epsilon, a.ceiling));
                reports.extend(audit_psi_derivatives(&kit, &a.h_list, &a.y_list, c.b, a.ceiling));
            }
            Err(e) => {
                ok = false;
                println!("audit-weight: calibration failed: {e}");
                footer.push(format!("# calibration failed: {e}"));
                skipped.extend(["weight_q", "weight_p", "g_sup", "g_gradient_scaled", "psi_derivative"]);
            }
        }
    }
    reports.extend(audit_rep_bounds(&kit, &grid, a.ceiling));
    let samples = boundary_samples(cfg)?;
    let zs: Vec<Complex64> = samples.iter().map(|s| s.1).collect();
    reports.extend(audit_ellipticity(&kit, &zs, &grid, a.ceiling)?);

    let mut t = rep.table(&InequalityReport::CSV_HEADER.split(',').collect::<Vec<_>>());
    for r in &reports {
        if !r.passed {
            ok = false;
            println!("audit-weight: {} fails (value {}, bound {})", r.id, num(r.value), num(r.bound));
        }
        inequality_row(&mut t, r, region.t, &samples)?;
    }
    for id in skipped {
        t.row([id, "", "", "", "", "", SKIPPED])?;
    }
    for line in footer {
        t.footer_line(&line);
    }
    rep.write_table("inequalities.csv", t)?;
    Ok(Verdict::from_pass(ok))
}
