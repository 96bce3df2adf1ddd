//! Second-order forward-mode jets over up to four real variables.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub const MAX_VARS: usize = 4;

/// Value, gradient and Hessian of a real function of `d <= 4` variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub g: [f64; MAX_VARS],
    pub h: [[f64; MAX_VARS]; MAX_VARS],
    pub d: usize,
}

impl Jet {
    pub fn constant(d: usize, c: f64) -> Self {
        assert!(d <= MAX_VARS);
        Jet { v: c, g: [0.0; MAX_VARS], h: [[0.0; MAX_VARS]; MAX_VARS], d }
    }

    pub fn variable(d: usize, i: usize, value: f64) -> Self {
        let mut j = Jet::constant(d, value);
        j.g[i] = 1.0;
        j
    }

    /// Applies a scalar function given its value and first two derivatives at `self.v`.
    pub fn map(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Jet::constant(self.d, f0);
        for a in 0..self.d {
            out.g[a] = f1 * self.g[a];
            for b in 0..self.d {
                out.h[a][b] = f1 * self.h[a][b] + f2 * self.g[a] * self.g[b];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(s * self.v, s, 0.0)
    }

    pub fn recip(&self) -> Self {
        let r = 1.0 / self.v;
        self.map(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sqrt(&self) -> Self {
        let s = self.v.sqrt();
        self.map(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn powf(&self, p: f64) -> Self {
        let v = self.v;
        self.map(v.powf(p), p * v.powf(p - 1.0), p * (p - 1.0) * v.powf(p - 2.0))
    }

    pub fn exp(&self) -> Self {
        let e = self.v.exp();
        self.map(e, e, e)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.map(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.map(c, -s, -c)
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    pub fn gradient(&self) -> &[f64] {
        &self.g[..self.d]
    }

    pub fn gradient_norm(&self) -> f64 {
        self.gradient().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute Hessian entry.
    pub fn hessian_max(&self) -> f64 {
        let mut m = 0.0f64;
        for a in 0..self.d {
            for b in 0..self.d {
                m = m.max(self.h[a][b].abs());
            }
        }
        m
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        self.v += o.v;
        for a in 0..self.d {
            self.g[a] += o.g[a];
            for b in 0..self.d {
                self.h[a][b] += o.h[a][b];
            }
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut out = Jet::constant(self.d, self.v * o.v);
        for a in 0..self.d {
            out.g[a] = self.g[a] * o.v + self.v * o.g[a];
            for b in 0..self.d {
                out.h[a][b] = self.h[a][b] * o.v
                    + self.v * o.h[a][b]
                    + self.g[a] * o.g[b]
                    + self.g[b] * o.g[a];
            }
        }
        out
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, c: f64) -> Jet {
        self.v += c;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, c: f64) -> Jet {
        self.v -= c;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, c: f64) -> Jet {
        self.scale(1.0 / c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn product_and_quotient_rules() {
        // f(x, y) = x^2 y / (1 + y^2) at (1.5, -0.7)
        let (x0, y0) = (1.5, -0.7);
        let x = Jet::variable(2, 0, x0);
        let y = Jet::variable(2, 1, y0);
        let f = x * x * y / (y * y + 1.0);
        let u = 1.0 + y0 * y0;
        assert!(close(f.v, x0 * x0 * y0 / u));
        assert!(close(f.g[0], 2.0 * x0 * y0 / u));
        assert!(close(f.g[1], x0 * x0 * (1.0 - y0 * y0) / (u * u)));
        assert!(close(f.h[0][0], 2.0 * y0 / u));
        assert!(close(f.h[0][1], 2.0 * x0 * (1.0 - y0 * y0) / (u * u)));
        let d2y = x0 * x0 * (2.0 * y0 * (y0 * y0 - 3.0)) / (u * u * u);
        assert!(close(f.h[1][1], d2y));
    }

    #[test]
    fn elementary_functions() {
        let t = Jet::variable(1, 0, 0.3);
        let e = (t.sin() * t.exp()).sqrt();
        let f = |s: f64| (s.sin() * s.exp()).sqrt();
        let hstep = 1e-4;
        let d1 = (f(0.3 + hstep) - f(0.3 - hstep)) / (2.0 * hstep);
        let d2 = (f(0.3 + hstep) - 2.0 * f(0.3) + f(0.3 - hstep)) / (hstep * hstep);
        assert!((e.g[0] - d1).abs() < 1e-7);
        assert!((e.h[0][0] - d2).abs() < 1e-5);
        let p = t.powf(1.5);
        assert!(close(p.h[0][0], 0.75 / 0.3f64.sqrt()));
    }
}
