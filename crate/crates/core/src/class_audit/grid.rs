use crate::phase::PhasePoint;

/// Union of centered tensor blocks and a log-spaced far-field shell.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    pub n: usize,
    /// `(half_width, points_per_axis)` for each tensor block.
    pub blocks: Vec<(f64, usize)>,
    pub shell_radii: usize,
    pub shell_max: f64,
}

impl PhaseGrid {
    /// Coarse block on `[-20, 20]`, fine block on `[-1, 1]`, shell out to `1e3`.
    pub fn default_for(n: usize) -> Self {
        match n {
            1 => PhaseGrid { n, blocks: vec![(20.0, 201), (1.0, 101)], shell_radii: 40, shell_max: 1e3 },
            _ => PhaseGrid { n, blocks: vec![(20.0, 15), (1.0, 9)], shell_radii: 40, shell_max: 1e3 },
        }
    }

    /// Default density stretched so that the coarse block reaches `half_width`.
    pub fn covering(n: usize, half_width: f64) -> Self {
        let mut g = PhaseGrid::default_for(n);
        g.blocks[0].0 = half_width.max(20.0);
        g.shell_max = g.shell_max.max(10.0 * g.blocks[0].0);
        g
    }

    /// Grid for the localizer `psi(B lambda_q(sqrt(h) X)/y)`, whose transition
    /// sits near `|X| ~ (y / (B h))^(1/2)`.
    pub fn for_localizer(n: usize, h: f64, y: f64, b: f64) -> Self {
        PhaseGrid::covering(n, 2.0 * (y / (b * h)).sqrt())
    }

    pub fn outer_radius(&self) -> f64 {
        self.blocks.iter().map(|b| b.0).fold(0.0, f64::max)
    }

    fn directions(&self) -> Vec<Vec<f64>> {
        let d = 2 * self.n;
        if self.n == 1 {
            return (0..32)
                .map(|k| {
                    let th = std::f64::consts::TAU * (k as f64 + 0.5) / 32.0;
                    vec![th.cos(), th.sin()]
                })
                .collect();
        }
        let mut dirs = Vec::new();
        for i in 0..d {
            for s in [1.0, -1.0] {
                let mut v = vec![0.0; d];
                v[i] = s;
                dirs.push(v);
            }
        }
        for mask in 0..(1usize << d) {
            dirs.push((0..d).map(|i| if mask >> i & 1 == 1 { -0.5 } else { 0.5 }).collect());
        }
        dirs
    }

    pub fn points(&self) -> Vec<PhasePoint> {
        let d = 2 * self.n;
        let mut out = Vec::new();
        for &(w, k) in &self.blocks {
            let axis: Vec<f64> = (0..k).map(|i| -w + 2.0 * w * i as f64 / (k - 1) as f64).collect();
            let total = k.pow(d as u32);
            for mut idx in 0..total {
                let mut c = vec![0.0; d];
                for slot in c.iter_mut() {
                    *slot = axis[idx % k];
                    idx /= k;
                }
                out.push(PhasePoint::from_coords(&c));
            }
        }
        let r_in = 1.05 * self.outer_radius();
        if self.shell_radii > 0 && self.shell_max > r_in {
            let dirs = self.directions();
            for i in 0..self.shell_radii {
                let t = i as f64 / (self.shell_radii - 1).max(1) as f64;
                let r = r_in * (self.shell_max / r_in).powf(t);
                for dir in &dirs {
                    let c: Vec<f64> = dir.iter().map(|v| v * r).collect();
                    out.push(PhasePoint::from_coords(&c));
                }
            }
        }
        out
    }

    pub fn descriptor(&self) -> String {
        let blocks: Vec<String> = self.blocks.iter().map(|(w, k)| format!("{k}^{} on [-{w},{w}]", 2 * self.n)).collect();
        format!("{} + shell {} radii to {:e}", blocks.join(" + "), self.shell_radii, self.shell_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_contents() {
        let g = PhaseGrid::default_for(1);
        let pts = g.points();
        assert_eq!(pts.len(), 201 * 201 + 101 * 101 + 40 * 32);
        assert!(pts.iter().any(|p| p.x()[0] == 0.0 && p.xi()[0] == 0.0));
        let r = pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
        assert!((r - 1e3).abs() < 1e-9);
        assert_eq!(PhaseGrid::default_for(2).points().len(), 15usize.pow(4) + 9usize.pow(4) + 40 * 24);
    }

    #[test]
    fn localizer_grid_reaches_the_transition() {
        let g = PhaseGrid::for_localizer(1, 1.0 / 512.0, 16.0, 4.0);
        assert!(g.outer_radius() >= 2.0 * (16.0f64 * 512.0 / 4.0).sqrt() - 1e-9);
    }
}
