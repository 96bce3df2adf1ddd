use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("model `{model}` produced a non-finite value at x = {x:?}")]
    NonFiniteModel { model: String, x: Vec<f64> },

    #[error("sample is empty")]
    EmptySample,

    #[error("G is only defined where lambda_p >= h (lambda_p = {lambda:e}, h = {h:e})")]
    OutsideDomain { lambda: f64, h: f64 },

    #[error("no truncation radius R <= 2^20 satisfies the growth bounds (need R^2/16 >= {required:e})")]
    NoTruncationRadius { required: f64 },

    #[error("|p - z| = {0:e} on the support of 1 - chi_R; model and R are inconsistent")]
    EllipticityBreakdown(f64),

    #[error("no C0 >= 2^-20 satisfies |q| - T <= B lambda_q / 2 (required B = {required_b:e})")]
    NoC0 { required_b: f64 },

    #[error("the weight inequality has no positive lower constant on the grid (best min ratio {0:e})")]
    WeightInequalityUnsatisfiable(f64),

    #[error("non-finite difference quotient at {point}")]
    NonFiniteDifference { point: String },

    #[error("grid invariant violated: {0}")]
    Grid(String),

    #[error("coherent frame defect {defect:e} exceeds {limit:e}")]
    FrameDefect { defect: f64, limit: f64 },

    #[error("z = {z} violates the region condition {condition}")]
    Region { z: String, condition: String },

    #[error("need at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },

    #[error("malformed matrix cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
