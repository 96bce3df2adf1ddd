use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::phase::PhasePoint;
use crate::quantizer::{coherent_state, weyl_from_values, GridSpec};
use crate::symbol_kit::{SymbolKit, Variant};

pub const PACKETS: usize = 32;

/// Box of packet centres `(y, eta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketBox {
    pub y: (f64, f64),
    pub eta: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct PqComparison {
    pub h: f64,
    pub z: Complex64,
    pub r: f64,
    pub seed: u64,
    pub centres: Vec<(f64, f64)>,
    pub norms_p: Vec<f64>,
    pub norms_q: Vec<f64>,
    pub max_defect: f64,
}

impl PqComparison {
    pub fn defect_over_h(&self) -> f64 {
        self.max_defect / self.h
    }
}

/// `||(p^w - z)u||` and `||(q^w - z)u||` for seeded random unit wave packets
/// centred in `packets`, with both symbols quantized by the general Weyl rule.
///
/// The kit's own `R` is used for `q`, so callers pass a kit built with the
/// small override they want to exercise.
pub fn compare_pq(kit: &SymbolKit, grid: &GridSpec, z: Complex64, packets: PacketBox, seed: u64) -> Result<PqComparison> {
    let at = |x: f64, xi: f64| PhasePoint::one_d(x, xi);
    let p = weyl_from_values(grid, "p".into(), |x, xi| kit.symbol(&at(x, xi), Variant::P) - z).data;
    let q = weyl_from_values(grid, "q".into(), |x, xi| kit.symbol(&at(x, xi), Variant::Q) - z).data;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centres = Vec::with_capacity(PACKETS);
    let (mut norms_p, mut norms_q) = (Vec::with_capacity(PACKETS), Vec::with_capacity(PACKETS));
    for _ in 0..PACKETS {
        let y = rng.random_range(packets.y.0..=packets.y.1);
        let eta = rng.random_range(packets.eta.0..=packets.eta.1);
        let mut u = DVector::from_vec(coherent_state(grid, y, eta));
        u /= Complex64::new(u.norm(), 0.0);
        centres.push((y, eta));
        norms_p.push((&p * &u).norm());
        norms_q.push((&q * &u).norm());
    }
    let max_defect = norms_p.iter().zip(&norms_q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(PqComparison { h: grid.h, z, r: kit.r, seed, centres, norms_p, norms_q, max_defect })
}
