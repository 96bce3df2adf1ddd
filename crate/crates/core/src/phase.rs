//! Phase-space points and multi-indices.

use std::fmt;

/// Largest spatial dimension handled by the symbol-level code.
pub const MAX_DIM: usize = 2;

/// A point `X = (x, xi)` of the phase space `R^n x R^n`.
///
/// Coordinates are indexed `0..2n`: the first `n` are spatial, the last `n`
/// are frequencies.
#[derive(Clone, Copy, PartialEq)]
pub struct PhasePoint {
    n: usize,
    x: [f64; MAX_DIM],
    xi: [f64; MAX_DIM],
}

impl PhasePoint {
    pub fn new(x: &[f64], xi: &[f64]) -> Self {
        assert!(
            x.len() == xi.len() && (1..=MAX_DIM).contains(&x.len()),
            "phase point needs matching x and xi of dimension 1..={MAX_DIM}"
        );
        let mut p = PhasePoint { n: x.len(), x: [0.0; MAX_DIM], xi: [0.0; MAX_DIM] };
        p.x[..p.n].copy_from_slice(x);
        p.xi[..p.n].copy_from_slice(xi);
        p
    }

    pub fn one_d(x: f64, xi: f64) -> Self {
        PhasePoint::new(&[x], &[xi])
    }

    /// Builds a point from `2n` stacked coordinates.
    pub fn from_coords(coords: &[f64]) -> Self {
        let n = coords.len() / 2;
        PhasePoint::new(&coords[..n], &coords[n..])
    }

    pub fn origin(n: usize) -> Self {
        PhasePoint::new(&[0.0; MAX_DIM][..n], &[0.0; MAX_DIM][..n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &[f64] {
        &self.x[..self.n]
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi[..self.n]
    }

    pub fn coord(&self, i: usize) -> f64 {
        if i < self.n {
            self.x[i]
        } else {
            self.xi[i - self.n]
        }
    }

    pub fn with_coord(mut self, i: usize, value: f64) -> Self {
        if i < self.n {
            self.x[i] = value;
        } else {
            self.xi[i - self.n] = value;
        }
        self
    }

    pub fn shifted(self, i: usize, delta: f64) -> Self {
        let v = self.coord(i);
        self.with_coord(i, v + delta)
    }

    pub fn scaled(mut self, s: f64) -> Self {
        for k in 0..self.n {
            self.x[k] *= s;
            self.xi[k] *= s;
        }
        self
    }

    pub fn norm_sq(&self) -> f64 {
        self.x().iter().chain(self.xi()).map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `<X> = (1 + |X|^2)^(1/2)`.
    pub fn bracket(&self) -> f64 {
        (1.0 + self.norm_sq()).sqrt()
    }

    /// `<x> = (1 + |x|^2)^(1/2)`.
    pub fn spatial_bracket(&self) -> f64 {
        spatial_bracket(self.x())
    }

    pub fn is_finite(&self) -> bool {
        self.x().iter().chain(self.xi()).all(|v| v.is_finite())
    }
}

impl fmt::Debug for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X(x={:?}, xi={:?})", self.x(), self.xi())
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x={}, xi={})", join(self.x()), join(self.xi()))
    }
}

/// Space-separated rendering of a coordinate slice, as used in CSV cells.
pub fn join(v: &[f64]) -> String {
    v.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(" ")
}

pub fn spatial_bracket(x: &[f64]) -> f64 {
    (1.0 + x.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Multi-index over `d` coordinates, stored as per-coordinate orders.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    orders: [u8; 2 * MAX_DIM],
    d: usize,
}

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        assert!(d <= 2 * MAX_DIM);
        MultiIndex { orders: [0; 2 * MAX_DIM], d }
    }

    pub fn from_orders(orders: &[u8]) -> Self {
        let mut m = MultiIndex::zero(orders.len());
        m.orders[..orders.len()].copy_from_slice(orders);
        m
    }

    /// Unit multi-index `e_i` in `d` coordinates.
    pub fn unit(d: usize, i: usize) -> Self {
        MultiIndex::zero(d).bumped(i)
    }

    pub fn bumped(mut self, i: usize) -> Self {
        self.orders[i] += 1;
        self
    }

    pub fn len(&self) -> usize {
        self.d
    }

    pub fn is_empty(&self) -> bool {
        self.d == 0
    }

    pub fn orders(&self) -> &[u8] {
        &self.orders[..self.d]
    }

    pub fn order(&self) -> usize {
        self.orders().iter().map(|&o| o as usize).sum()
    }

    /// Coordinates differentiated, with repetition, in ascending order.
    pub fn coordinates(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order());
        for (i, &o) in self.orders().iter().enumerate() {
            out.extend(std::iter::repeat_n(i, o as usize));
        }
        out
    }

    /// All multi-indices in `d` coordinates with `|alpha| = order`.
    pub fn all_of_order(d: usize, order: usize) -> Vec<MultiIndex> {
        fn rec(d: usize, i: usize, left: usize, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
            if i + 1 == d {
                cur.orders[i] = left as u8;
                out.push(*cur);
                return;
            }
            for k in (0..=left).rev() {
                cur.orders[i] = k as u8;
                rec(d, i + 1, left - k, cur, out);
            }
        }
        let mut out = Vec::new();
        if d == 0 {
            return out;
        }
        let mut cur = MultiIndex::zero(d);
        rec(d, 0, order, &mut cur, &mut out);
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.orders())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders().iter().map(|o| o.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
