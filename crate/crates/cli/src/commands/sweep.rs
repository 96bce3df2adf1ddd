use std::collections::BTreeMap;

use magres_core::quantizer::{weyl_poly, CacheKey, MatrixCache, OperatorMatrix, Provenance, QuantKind};
use magres_core::resolvent_lab::{
    certify_lower_bound, fit_exponents, sweep_with, ExponentFit, FitAxis, SweepRecord, MIN_FIT_RECORDS,
    SWEEP_CSV_HEADER,
};
use magres_core::symbol_kit::kit_for;

use super::Verdict;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{num, opt_num, Reporter};
use crate::plot::{Chart, Series};

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// A fit together with the coordinate held fixed, e.g. `y=1e0`.
pub struct LabeledFit {
    pub fixed: String,
    pub fit: ExponentFit,
}

/// Fits along `h` for each repeated `z`, and along `y` for each repeated `h`.
pub fn exponent_fits(records: &[SweepRecord]) -> Vec<LabeledFit> {
    let mut by_z: BTreeMap<(u64, u64), Vec<SweepRecord>> = BTreeMap::new();
    let mut by_h: BTreeMap<u64, Vec<SweepRecord>> = BTreeMap::new();
    for r in records {
        by_z.entry((r.z.re.to_bits(), r.z.im.to_bits())).or_default().push(r.clone());
        by_h.entry(r.h.to_bits()).or_default().push(r.clone());
    }
    let mut out = Vec::new();
    for group in by_z.values().filter(|g| g.len() >= MIN_FIT_RECORDS) {
        if let Ok(fit) = fit_exponents(group, FitAxis::H) {
            out.push(LabeledFit { fixed: format!("z={}{:+e}i", num(group[0].z.re), group[0].z.im), fit });
        }
    }
    for group in by_h.values().rev().filter(|g| g.len() >= MIN_FIT_RECORDS) {
        if let Ok(fit) = fit_exponents(group, FitAxis::Y) {
            out.push(LabeledFit { fixed: format!("h={}", num(group[0].h)), fit });
        }
    }
    out
}

pub fn run_sweep(cfg: &RunConfig, rep: &Reporter) -> CliResult<Verdict> {
    let model = cfg.build_model()?;
    let r = kit_for(model.clone(), &cfg.model.profile)?.r;
    let params = cfg.region_params()?;
    let sampler = cfg.sampler()?;
    let policy = cfg.policy()?;
    let cache = if cfg.cache { Some(MatrixCache::new(rep.dir().join("cache"))?) } else { None };
    let model_id = format!("{}(dim={},alpha={:?})", model.name(), cfg.model.dim, cfg.model.alpha);
    let assemble = |grid: &magres_core::quantizer::GridSpec| -> magres_core::Result<OperatorMatrix> {
        let Some(cache) = &cache else { return weyl_poly(model.as_ref(), grid, r) };
        let key = CacheKey {
            model: model_id.clone(),
            kind: QuantKind::WeylPoly,
            half_width: grid.half_width,
            points: grid.points,
            h: grid.h,
            r,
        };
        if let Some(data) = cache.load(&key)? {
            let provenance = Provenance { symbol: model.name().to_string(), kind: QuantKind::WeylPoly };
            return Ok(OperatorMatrix { data, grid: *grid, provenance });
        }
        let m = weyl_poly(model.as_ref(), grid, r)?;
        cache.store(&key, &m.data)?;
        Ok(m)
    };
    let outcome = sweep_with(model.as_ref(), r, &cfg.sweep.h_list, sampler.as_ref(), &policy, &params, &assemble)?;
    for w in &outcome.warnings {
        eprintln!("sweep: warning: {w}");
    }
    let records = &outcome.records;
    let cert = certify_lower_bound(records, cfg.sweep.floor)?;
    let fits = exponent_fits(records);

    let columns: Vec<&str> = SWEEP_CSV_HEADER.split(',').collect();
    let mut t = rep.table(&columns);
    for rec in records {
        t.row([
            rec.model.clone(),
            num(rec.h),
            num(rec.z.re),
            num(rec.z.im),
            num(rec.y),
            num(rec.sigma_min),
            num(rec.bound),
            num(rec.ratio),
            rec.grid.points.to_string(),
            num(rec.grid.half_width),
        ])?;
    }
    t.footer_line("# exponent fits");
    t.footer_line("# fit,axis,fixed,slope,intercept,residual,count");
    for f in &fits {
        t.footer_line(&format!(
            "# fit,{},{},{},{},{},{}",
            f.fit.axis.name(),
            f.fixed,
            num(f.fit.slope),
            num(f.fit.intercept),
            num(f.fit.residual),
            f.fit.count
        ));
    }
    t.footer_line(&format!(
        "# certification,c_min={},floor={},worst_h={},worst_y={},pass={}",
        num(cert.c_min),
        num(cert.floor),
        num(cert.worst.h),
        num(cert.worst.y),
        cert.passed
    ));
    rep.write_table("sweep.csv", t)?;

    let mut t = rep.table(&["axis", "fixed", "slope", "intercept", "residual", "count"]);
    for f in &fits {
        t.row([
            f.fit.axis.name().to_string(),
            f.fixed.clone(),
            num(f.fit.slope),
            num(f.fit.intercept),
            num(f.fit.residual),
            f.fit.count.to_string(),
        ])?;
    }
    rep.write_table("exponents.csv", t)?;

    let mut t = rep.table(&["h", "re_z", "im_z", "N", "L", "sigma_min", "doubling_delta", "capped"]);
    for rec in records {
        t.row([
            num(rec.h),
            num(rec.z.re),
            num(rec.z.im),
            rec.grid.points.to_string(),
            num(rec.grid.half_width),
            num(rec.sigma_min),
            opt_num(rec.doubling_delta),
            rec.capped.to_string(),
        ])?;
    }
    for w in &outcome.warnings {
        t.footer_line(&format!("# warning: {w}"));
    }
    rep.write_table("grid_convergence.csv", t)?;

    rep.write_svg("sigma_vs_h.svg", &sigma_chart(records, &cfg.model.name).render())?;
    rep.write_svg("ratio_vs_y.svg", &ratio_chart(records, &cfg.model.name).render())?;

    println!(
        "sweep: {} records, c_min {} (floor {}), {}",
        records.len(),
        num(cert.c_min),
        num(cert.floor),
        if cert.passed { "certified" } else { "NOT certified" }
    );
    for f in &fits {
        println!("sweep: slope along {} at {}: {:.4}", f.fit.axis.name(), f.fixed, f.fit.slope);
    }
    Ok(Verdict::from_pass(cert.passed))
}

fn sigma_chart(records: &[SweepRecord], model: &str) -> Chart {
    let mut by_y: BTreeMap<u64, Vec<&SweepRecord>> = BTreeMap::new();
    for r in records {
        by_y.entry(r.y.to_bits()).or_default().push(r);
    }
    let mut series = Vec::new();
    for (i, group) in by_y.values().enumerate().take(COLORS.len() / 2) {
        let y = group[0].y;
        series.push(Series {
            label: format!("sigma_min, y = {y}"),
            points: group.iter().map(|r| (r.h, r.sigma_min)).collect(),
            color: COLORS[2 * i],
            scatter: false,
        });
        series.push(Series {
            label: format!("h^(2/3) y^(1/3), y = {y}"),
            points: group.iter().map(|r| (r.h, r.bound)).collect(),
            color: COLORS[2 * i + 1],
            scatter: false,
        });
    }
    Chart {
        title: format!("{model}: smallest singular value of P - z"),
        x_label: "h".into(),
        y_label: "sigma_min".into(),
        log_x: true,
        log_y: true,
        series,
    }
}

fn ratio_chart(records: &[SweepRecord], model: &str) -> Chart {
    let mut by_h: BTreeMap<u64, Vec<&SweepRecord>> = BTreeMap::new();
    for r in records {
        by_h.entry(r.h.to_bits()).or_default().push(r);
    }
    let series = by_h
        .values()
        .rev()
        .enumerate()
        .map(|(i, group)| Series {
            label: format!("h = {}", group[0].h),
            points: group.iter().map(|r| (r.y, r.ratio)).collect(),
            color: COLORS[i % COLORS.len()],
            scatter: group.len() < 2,
        })
        .collect();
    Chart {
        title: format!("{model}: sigma_min / (h^(2/3) y^(1/3))"),
        x_label: "y = |z| - T".into(),
        y_label: "ratio".into(),
        log_x: true,
        log_y: false,
        series,
    }
}
