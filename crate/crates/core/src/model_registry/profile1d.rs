/// One-dimensional building blocks with closed-form derivatives to order 4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile1d {
    /// `x^k`.
    Monomial(u8),
    /// `(1 + x^2)^(1/2)`.
    Sqrt1p,
    /// `1 / (1 + x^2)`.
    Lorentz,
}

impl Profile1d {
    pub const ONE: Profile1d = Profile1d::Monomial(0);

    pub fn derivative(&self, order: u8, x: f64) -> f64 {
        match *self {
            Profile1d::Monomial(k) => {
                if order > k {
                    return 0.0;
                }
                let falling: f64 = ((k - order + 1)..=k).map(f64::from).product();
                falling * x.powi(i32::from(k - order))
            }
            Profile1d::Sqrt1p => {
                let s = (1.0 + x * x).sqrt();
                match order {
                    0 => s,
                    1 => x / s,
                    2 => s.powi(-3),
                    3 => -3.0 * x * s.powi(-5),
                    4 => (12.0 * x * x - 3.0) * s.powi(-7),
                    _ => panic!("derivative order {order} not available"),
                }
            }
            Profile1d::Lorentz => {
                let u = 1.0 + x * x;
                match order {
                    0 => 1.0 / u,
                    1 => -2.0 * x / (u * u),
                    2 => (6.0 * x * x - 2.0) / u.powi(3),
                    3 => 24.0 * x * (1.0 - x * x) / u.powi(4),
                    4 => 24.0 * (5.0 * x.powi(4) - 10.0 * x * x + 1.0) / u.powi(5),
                    _ => panic!("derivative order {order} not available"),
                }
            }
        }
    }
}
