use std::path::{Path, PathBuf};

use magres_core::model_registry::{ModelParams, ModelRegistry, PotentialModel};
use magres_core::resolvent_lab::{GridPolicy, HalfWidthRule, RegionParams, SamplerInput, SamplerRegistry};
use magres_core::symbol_kit::transition_names;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

fn pow2_list(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(-k)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub cache: bool,
    pub model: ModelSection,
    pub grid: GridSection,
    pub sweep: SweepSection,
    pub region: RegionSection,
    pub audit: AuditSection,
    pub wick: WickSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            out: PathBuf::from("magres-out"),
            cache: true,
            model: ModelSection::default(),
            grid: GridSection::default(),
            sweep: SweepSection::default(),
            region: RegionSection::default(),
            audit: AuditSection::default(),
            wick: WickSection::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub name: String,
    pub dim: usize,
    pub alpha: f64,
    /// Transition shape of both cutoffs.
    pub profile: String,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection { name: "davies".into(), dim: 1, alpha: 1.0, profile: "smoothstep7".into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HalfWidth {
    Fixed(f64),
    Rule(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    /// A number, or "auto" for the ground-state rule over `candidates`.
    pub half_width: HalfWidth,
    pub candidates: Vec<f64>,
    pub threshold: f64,
    pub n_min: usize,
    pub n_cap: usize,
    pub doubling_check: bool,
}

impl Default for GridSection {
    fn default() -> Self {
        let p = GridPolicy::default();
        let HalfWidthRule::GroundState { candidates, threshold } = p.half_width else { unreachable!() };
        GridSection {
            half_width: HalfWidth::Rule("auto".into()),
            candidates,
            threshold,
            n_min: p.n_min,
            n_cap: p.n_cap,
            doubling_check: p.doubling_check,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub h_list: Vec<f64>,
    pub sampler: String,
    /// Distances `y = |z| - T` for the distance-driven samplers.
    pub distances: Vec<f64>,
    /// `[re, im]` pairs for the `fixed` sampler.
    pub points: Vec<[f64; 2]>,
    pub floor: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            h_list: pow2_list(4, 9),
            sampler: "imaginary_axis".into(),
            distances: vec![1.0],
            points: Vec::new(),
            floor: magres_core::resolvent_lab::DEFAULT_CERTIFICATION_FLOOR,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionSection {
    pub k: f64,
    pub m: f64,
    pub c0: f64,
    /// Defaults to the offset of the model.
    pub t: Option<f64>,
}

impl Default for RegionSection {
    fn default() -> Self {
        let r = RegionParams::default();
        RegionSection { k: r.k, m: r.m, c0: r.c0, t: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditSection {
    pub ceiling: f64,
    pub derivative_points: usize,
    pub derivative_tol: f64,
    pub weight_floor: f64,
    pub c2: f64,
    pub h_list: Vec<f64>,
    /// Distances used for the localizer and for `z` on the parabola boundary.
    pub y_list: Vec<f64>,
}

impl Default for AuditSection {
    fn default() -> Self {
        AuditSection {
            ceiling: magres_core::model_registry::DEFAULT_CEILING,
            derivative_points: 16,
            derivative_tol: 1e-6,
            weight_floor: 0.1,
            c2: 1.0,
            h_list: pow2_list(3, 9),
            y_list: vec![1.0, 4.0, 16.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WickSection {
    pub points: usize,
    /// Frame spacing in units of `h^(1/2)`.
    pub delta: f64,
    /// "default" or "x_only".
    pub battery: String,
    /// "resolve", or a normalization name.
    pub normalization: String,
    /// "gaussian" or "x_only".
    pub composition_pair: String,
    pub composition_h_list: Vec<f64>,
    pub composition_half_width: f64,
    pub composition_edge: f64,
    pub first_window: [f64; 2],
    pub second_window: [f64; 2],
    pub noise_floor: f64,
}

impl Default for WickSection {
    fn default() -> Self {
        WickSection {
            points: 64,
            delta: 0.5,
            battery: "default".into(),
            normalization: "resolve".into(),
            composition_pair: "gaussian".into(),
            composition_h_list: pow2_list(3, 8),
            composition_half_width: 4.0,
            composition_edge: 2.0,
            first_window: [0.9, 1.1],
            second_window: [1.8, 2.2],
            noise_floor: 1e-10,
        }
    }
}

pub const BATTERIES: [&str; 2] = ["default", "x_only"];
pub const COMPOSITION_PAIRS: [&str; 2] = ["gaussian", "x_only"];
pub const NORMALIZATIONS: [&str; 3] = ["resolve", "pi^(-n/2)", "pi^(-n)"];

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn check_h_list(what: &str, hs: &[f64]) -> CliResult<()> {
    if let Some(h) = hs.iter().find(|h| !(**h > 0.0 && **h <= 1.0)) {
        return Err(bad(format!("{what}: h = {h} is not in (0, 1]")));
    }
    if hs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(bad(format!("{what} must be strictly decreasing")));
    }
    Ok(())
}

fn check_positive(what: &str, v: &[f64]) -> CliResult<()> {
    match v.iter().find(|y| !(**y > 0.0 && y.is_finite())) {
        Some(y) => Err(bad(format!("{what}: {y} is not a positive number"))),
        None => Ok(()),
    }
}

fn one_of(what: &str, value: &str, allowed: &[&str]) -> CliResult<()> {
    if allowed.contains(&value) {
        Ok(())
    } else {
        Err(bad(format!("unknown {what} `{value}`; expected one of {}", allowed.join(", "))))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let as_config = |e: CliError| match e {
            CliError::Lab(e) => bad(e.to_string()),
            other => other,
        };
        self.build_model().map_err(as_config)?;
        one_of("cutoff profile", &self.model.profile, &transition_names())?;
        check_h_list("sweep.h_list", &self.sweep.h_list)?;
        check_h_list("audit.h_list", &self.audit.h_list)?;
        check_h_list("wick.composition_h_list", &self.wick.composition_h_list)?;
        check_positive("audit.y_list", &self.audit.y_list)?;
        check_positive("grid.candidates", &self.grid.candidates)?;
        self.sampler().map_err(as_config)?;
        self.policy()?;
        let t = self.region_params().map_err(as_config)?.t;
        if !(self.sweep.floor > 0.0) || !(self.audit.ceiling > 0.0) || !(self.audit.weight_floor > 0.0) || t < 0.0 {
            return Err(bad("floors, ceilings and T must be positive"));
        }
        if !self.wick.points.is_power_of_two() || self.wick.points < 2 {
            return Err(bad(format!("wick.points = {} is not a power of two", self.wick.points)));
        }
        if !(self.wick.delta > 0.0) || !(self.wick.composition_half_width > 0.0) || !(self.wick.composition_edge > 0.0) {
            return Err(bad("wick.delta, composition_half_width and composition_edge must be positive"));
        }
        one_of("battery", &self.wick.battery, &BATTERIES)?;
        one_of("composition pair", &self.wick.composition_pair, &COMPOSITION_PAIRS)?;
        one_of("normalization", &self.wick.normalization, &NORMALIZATIONS)?;
        Ok(())
    }

    pub fn build_model(&self) -> CliResult<std::sync::Arc<dyn PotentialModel>> {
        let params = ModelParams { dim: self.model.dim, alpha: self.model.alpha };
        Ok(ModelRegistry::default().build(&self.model.name, &params)?)
    }

    pub fn region_params(&self) -> CliResult<RegionParams> {
        let t = match self.region.t {
            Some(t) => t,
            None => self.build_model()?.offset(),
        };
        let p = RegionParams { k: self.region.k, m: self.region.m, c0: self.region.c0, t };
        p.validate()?;
        Ok(p)
    }

    pub fn sampler(&self) -> CliResult<Box<dyn magres_core::resolvent_lab::ZSampler>> {
        let input = if self.sweep.sampler == "fixed" {
            SamplerInput::Points(self.sweep.points.iter().map(|p| Complex64::new(p[0], p[1])).collect())
        } else {
            SamplerInput::Distances(self.sweep.distances.clone())
        };
        Ok(SamplerRegistry::default().build(&self.sweep.sampler, input)?)
    }

    pub fn policy(&self) -> CliResult<GridPolicy> {
        let half_width = match &self.grid.half_width {
            HalfWidth::Fixed(l) if *l > 0.0 => HalfWidthRule::Fixed(*l),
            HalfWidth::Fixed(l) => return Err(bad(format!("grid.half_width = {l} must be positive"))),
            HalfWidth::Rule(s) if s == "auto" => {
                HalfWidthRule::GroundState { candidates: self.grid.candidates.clone(), threshold: self.grid.threshold }
            }
            HalfWidth::Rule(s) => return Err(bad(format!("grid.half_width must be a number or \"auto\", got `{s}`"))),
        };
        if self.grid.n_min < 2 || self.grid.n_cap < self.grid.n_min {
            return Err(bad("grid.n_min must be at least 2 and at most grid.n_cap"));
        }
        Ok(GridPolicy {
            half_width,
            n_min: self.grid.n_min,
            n_cap: self.grid.n_cap,
            doubling_check: self.grid.doubling_check,
        })
    }

    /// SHA-256 of the serialized settings, leaving out where results go and
    /// whether the cache is used.
    pub fn hash(&self) -> String {
        let mut view = self.clone();
        view.out = PathBuf::new();
        view.cache = true;
        view.seed = 0;
        let text = toml::to_string(&view).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Annotated TOML listing every setting at its default.
pub fn reference() -> String {
    let d = RunConfig::default();
    let list = |v: &[f64]| format!("[{}]", v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(", "));
    let names = |it: Vec<&str>| it.join(", ");
    let models: Vec<&str> = ModelRegistry::default().names().map(|(n, _)| n).collect();
    let samplers = SamplerRegistry::default();
    format!(
        r#"# magres run configuration: every key with its default value.

# Recorded in every output header; seeds the randomized checks.
seed = {seed}
# Output directory (overridden by --out).
out = "{out}"
# Store assembled operator matrices under <out>/cache (disabled by --no-cache).
cache = {cache}

[model]
# One of: {models}
name = "{name}"
dim = {dim}
# Slope of the linear vector potential (magnetic_linear).
alpha = {alpha:?}
# Cutoff transition, one of: {profiles}
profile = "{profile}"

[grid]
# Box half-width L: a number, or "auto" to take the smallest candidate at
# which the pilot quasimode has decayed below `threshold`.
half_width = "auto"
candidates = {candidates}
threshold = {threshold:e}
# N = max(n_min, 8 L^2 / h) rounded up to a power of two, at most n_cap.
n_min = {n_min}
n_cap = {n_cap}
# Also solve with N/2 points and record the relative change of sigma_min.
doubling_check = {doubling}

[sweep]
# Strictly decreasing.
h_list = {sweep_h}
# One of: {samplers}
sampler = "{sampler}"
# Distances y = |z| - T for distance-driven samplers.
distances = {distances}
# [re, im] pairs for the fixed sampler.
points = []
# Smallest acceptable sigma_min / (h^(2/3) y^(1/3)).
floor = {floor:e}

[region]
k = {k:?}
m = {m:?}
c0 = {c0:?}
# t defaults to the offset of the model.

[audit]
ceiling = {ceiling:e}
# Random points for the closed-form derivative check and its tolerance.
derivative_points = {dpoints}
derivative_tol = {dtol:e}
# Smallest acceptable weight-inequality ratio.
weight_floor = {wfloor:?}
c2 = {c2:?}
# Strictly decreasing; empty skips the h-dependent audits.
h_list = {audit_h}
y_list = {y_list}

[wick]
points = {wpoints}
# Coherent frame spacing in units of h^(1/2).
delta = {delta:?}
# One of: {batteries}
battery = "{battery}"
# One of: {norms}
normalization = "{norm}"
# One of: {pairs}
composition_pair = "{pair}"
composition_h_list = {comp_h}
composition_half_width = {comp_l:?}
composition_edge = {comp_edge:?}
first_window = {first}
second_window = {second}
# Composition defects below this count as exact.
noise_floor = {noise:e}
"#,
        seed = d.seed,
        out = d.out.display(),
        cache = d.cache,
        models = names(models),
        name = d.model.name,
        dim = d.model.dim,
        alpha = d.model.alpha,
        profiles = names(transition_names().to_vec()),
        profile = d.model.profile,
        candidates = list(&d.grid.candidates),
        threshold = d.grid.threshold,
        n_min = d.grid.n_min,
        n_cap = d.grid.n_cap,
        doubling = d.grid.doubling_check,
        sweep_h = list(&d.sweep.h_list),
        samplers = names(samplers.names()),
        sampler = d.sweep.sampler,
        distances = list(&d.sweep.distances),
        floor = d.sweep.floor,
        k = d.region.k,
        m = d.region.m,
        c0 = d.region.c0,
        ceiling = d.audit.ceiling,
        dpoints = d.audit.derivative_points,
        dtol = d.audit.derivative_tol,
        wfloor = d.audit.weight_floor,
        c2 = d.audit.c2,
        audit_h = list(&d.audit.h_list),
        y_list = list(&d.audit.y_list),
        wpoints = d.wick.points,
        delta = d.wick.delta,
        batteries = names(BATTERIES.to_vec()),
        battery = d.wick.battery,
        norms = names(NORMALIZATIONS.to_vec()),
        norm = d.wick.normalization,
        pairs = names(COMPOSITION_PAIRS.to_vec()),
        pair = d.wick.composition_pair,
        comp_h = list(&d.wick.composition_h_list),
        comp_l = d.wick.composition_half_width,
        comp_edge = d.wick.composition_edge,
        first = list(&d.wick.first_window),
        second = list(&d.wick.second_window),
        noise = d.wick.noise_floor,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_parses_to_the_defaults() {
        assert_eq!(RunConfig::parse(&reference()).unwrap(), RunConfig::default());
    }

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn rejects_bad_settings() {
        for text in [
            "[sweep]\nh_list = [0.1, 0.2]",
            "[audit]\nh_list = [0.5, 0.5]",
            "[model]\nname = \"nope\"",
            "[model]\nprofile = \"nope\"",
            "[sweep]\nsampler = \"nope\"",
            "[grid]\nhalf_width = \"wide\"",
            "[region]\nk = 0.5",
            "[wick]\npoints = 48",
            "typo = 1",
        ] {
            assert!(matches!(RunConfig::parse(text), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn hash_ignores_plumbing_only() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.out = "elsewhere".into();
        b.cache = false;
        b.seed = 7;
        assert_eq!(a.hash(), b.hash());
        b.sweep.floor = 0.5;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn region_offset_follows_the_model() {
        let cfg = RunConfig::parse("[model]\nname = \"bounded_imag\"").unwrap();
        assert_eq!(cfg.region_params().unwrap().t, 1.0);
        let cfg = RunConfig::parse("[model]\nname = \"bounded_imag\"\n[region]\nt = 3.0").unwrap();
        assert_eq!(cfg.region_params().unwrap().t, 3.0);
    }

    #[test]
    fn fixed_half_width() {
        let cfg = RunConfig::parse("[grid]\nhalf_width = 8.0").unwrap();
        assert_eq!(cfg.policy().unwrap().half_width, HalfWidthRule::Fixed(8.0));
    }
}
