use num_complex::Complex64;

use crate::phase::{join, PhasePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

/// Extremal value of one audited ratio over a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub id: String,
    pub h: Option<f64>,
    pub y: Option<f64>,
    pub z: Option<Complex64>,
    pub extremum: Extremum,
    pub value: f64,
    pub point: PhasePoint,
    /// Threshold the value is compared against.
    pub bound: f64,
    pub passed: bool,
}

impl InequalityReport {
    pub const CSV_HEADER: &'static str = "inequality_id,h,y,extremal_value,x,xi,pass";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| format!("{v}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.id,
            opt(self.h),
            opt(self.y),
            self.value,
            join(self.point.x()),
            join(self.point.xi()),
            self.passed
        )
    }
}

/// Deterministic reduction: extremal ratio and the first point attaining it.
/// Entries with `None` are excluded. Returns `None` if nothing qualifies.
pub fn extremal(ratios: &[Option<f64>], which: Extremum) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (i, r) in ratios.iter().enumerate() {
        let Some(r) = *r else { continue };
        let better = match (best, which) {
            (None, _) => true,
            (Some((b, _)), Extremum::Max) => r > b,
            (Some((b, _)), Extremum::Min) => r < b,
        };
        if better {
            best = Some((r, i));
        }
    }
    best
}
