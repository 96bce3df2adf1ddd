use nalgebra::DMatrix;
use num_complex::Complex64;

use super::GridSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuantKind {
    WeylPoly,
    WeylGeneral,
    Wick,
}

impl QuantKind {
    pub fn name(&self) -> &'static str {
        match self {
            QuantKind::WeylPoly => "weyl_poly",
            QuantKind::WeylGeneral => "weyl_general",
            QuantKind::Wick => "wick",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub symbol: String,
    pub kind: QuantKind,
}

/// Dense matrix realizing a quantized symbol on a grid.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub data: DMatrix<Complex64>,
    pub grid: GridSpec,
    pub provenance: Provenance,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `max |M - M^*|` relative to the largest entry.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.data.iter().map(|c| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in j..n {
                worst = worst.max((self.data[(j, k)] - self.data[(k, j)].conj()).norm());
            }
        }
        worst / scale
    }

    /// `M - z I`.
    pub fn shifted(&self, z: Complex64) -> DMatrix<Complex64> {
        let mut m = self.data.clone();
        for i in 0..self.dim() {
            m[(i, i)] -= z;
        }
        m
    }
}
