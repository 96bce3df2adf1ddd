use std::f64::consts::PI;

use crate::error::{LabError, Result};

/// Periodic spectral grid on `[-L, L)` with `N` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
    pub h: f64,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize, h: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(LabError::Grid(format!("half-width must be positive, got {half_width}")));
        }
        if !points.is_power_of_two() || points < 2 {
            return Err(LabError::Grid(format!("N must be a power of two, got {points}")));
        }
        if !(h > 0.0 && h <= 1.0) {
            return Err(LabError::Grid(format!("h must lie in (0, 1], got {h}")));
        }
        Ok(GridSpec { half_width, points, h })
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.x(j)).collect()
    }

    /// Signed frequency index of FFT slot `k`: `0, 1, .., N/2 - 1, -N/2, .., -1`.
    pub fn mode(&self, k: usize) -> i64 {
        let n = self.points as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// `xi = h pi m / L` for FFT slot `k`.
    pub fn frequency(&self, k: usize) -> f64 {
        self.h * PI * self.mode(k) as f64 / self.half_width
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.frequency(k)).collect()
    }

    pub fn max_frequency(&self) -> f64 {
        self.h * PI * (self.points / 2) as f64 / self.half_width
    }

    /// Width of the represented frequency band.
    pub fn band(&self) -> f64 {
        2.0 * PI * self.h / self.dx()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequencies_follow_fft_order() {
        let g = GridSpec::new(PI, 8, 1.0).unwrap();
        assert_eq!(g.frequencies(), vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.max_frequency(), 4.0);
        assert_eq!(g.band(), 8.0);
        assert_eq!(g.x(0), -PI);
    }

    #[test]
    fn invalid_grids() {
        assert!(GridSpec::new(1.0, 12, 0.5).is_err());
        assert!(GridSpec::new(-1.0, 16, 0.5).is_err());
        assert!(GridSpec::new(1.0, 16, 1.5).is_err());
    }
}
