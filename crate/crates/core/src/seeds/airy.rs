use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::pauli::{C64, ZERO};
use crate::potential::{sample_smooth, Jet, Potential, PotentialKind, Samples, SmoothPotential};

use super::DEFAULT_POLE_RADIUS;

/// `v = φ′/φ` with `φ″ = −(x/2)·φ`, so that `v′ = −v² − x/2`. This Riccati
/// reduction solves PII at `α = 1/2`.
///
/// `φ` is integrated on the construction grid with the classical four-stage
/// scheme; off-node values take one partial step from the node below.
#[derive(Clone, Debug)]
pub struct AiryRiccati {
    grid: Grid,
    ic: [C64; 2],
    nodes: Vec<[C64; 2]>,
    pole_radius: f64,
}

fn airy_rhs(x: f64, s: [C64; 2]) -> [C64; 2] {
    [s[1], s[0] * (-0.5 * x)]
}

fn rk4_step(x: f64, s: [C64; 2], h: f64) -> [C64; 2] {
    let add = |a: [C64; 2], b: [C64; 2], t: f64| [a[0] + b[0] * t, a[1] + b[1] * t];
    let k1 = airy_rhs(x, s);
    let k2 = airy_rhs(x + 0.5 * h, add(s, k1, 0.5 * h));
    let k3 = airy_rhs(x + 0.5 * h, add(s, k2, 0.5 * h));
    let k4 = airy_rhs(x + h, add(s, k3, h));
    [
        s[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (h / 6.0),
        s[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (h / 6.0),
    ]
}

/// Builds the Riccati/Airy-type solution from `(φ(x0), φ′(x0))` on `grid`.
pub fn riccati_airy_solution(ic: [C64; 2], grid: &Grid) -> Result<AiryRiccati> {
    if ic[0] == ZERO && ic[1] == ZERO {
        return Err(Error::Argument("Airy-type seed needs a nonzero initial condition".into()));
    }
    let h = grid.step();
    let mut nodes = Vec::with_capacity(grid.len());
    let mut s = ic;
    nodes.push(s);
    for i in 0..grid.len() - 1 {
        s = rk4_step(grid.x(i), s, h);
        nodes.push(s);
    }
    Ok(AiryRiccati {
        grid: *grid,
        ic,
        nodes,
        pole_radius: DEFAULT_POLE_RADIUS,
    })
}

impl AiryRiccati {
    pub fn ic(&self) -> [C64; 2] {
        self.ic
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn with_pole_radius(mut self, radius: f64) -> Self {
        self.pole_radius = radius;
        self
    }

    /// `(φ, φ′)` at `x`, or `None` outside the construction interval.
    pub fn phi(&self, x: f64) -> Option<[C64; 2]> {
        if !self.grid.contains(x) {
            return None;
        }
        let k = self.grid.cell(x);
        let xk = self.grid.x(k);
        let dt = x - xk;
        if dt == 0.0 {
            return Some(self.nodes[k]);
        }
        Some(rk4_step(xk, self.nodes[k], dt))
    }
}

impl Potential for AiryRiccati {
    fn kind(&self) -> PotentialKind {
        PotentialKind::OdeDefined
    }

    fn alpha_hint(&self) -> Option<C64> {
        Some(C64::from(0.5))
    }

    fn sample(&self, grid: &Grid) -> Result<Samples> {
        Ok(sample_smooth(self, grid))
    }
}

impl SmoothPotential for AiryRiccati {
    fn jet(&self, x: f64) -> Jet {
        match self.phi(x) {
            Some([p, dp]) => {
                let v = dp / p;
                let dv = -v * v - 0.5 * x;
                let d2v = v * dv * -2.0 - 0.5;
                Jet::new(v, dv, d2v)
            }
            None => {
                let nan = C64::new(f64::NAN, f64::NAN);
                Jet::new(nan, nan, nan)
            }
        }
    }

    fn is_masked(&self, x: f64) -> bool {
        match self.phi(x) {
            Some([p, dp]) => p == ZERO || p.norm() < self.pole_radius * dp.norm(),
            None => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::ONE;

    #[test]
    fn even_start_gives_zero_potential_at_origin() {
        let g = Grid::new(0.0, 2.0, 2001).unwrap();
        let a = riccati_airy_solution([ONE, ZERO], &g).unwrap();
        assert_eq!(a.jet(0.0).v, ZERO);
    }

    #[test]
    fn zero_initial_condition_is_rejected() {
        let g = Grid::new(0.0, 2.0, 11).unwrap();
        assert!(matches!(riccati_airy_solution([ZERO, ZERO], &g), Err(Error::Argument(_))));
    }

    #[test]
    fn riccati_identity_against_differences() {
        let g = Grid::new(-5.0, 5.0, 10001).unwrap();
        let a = riccati_airy_solution([ONE, ZERO], &g).unwrap();
        let h = 1e-4;
        for i in (50..9950).step_by(37) {
            let x = g.x(i);
            if a.is_masked(x) || a.is_masked(x - h) || a.is_masked(x + h) {
                continue;
            }
            let fd = (a.jet(x + h).v - a.jet(x - h).v) / (2.0 * h);
            let j = a.jet(x);
            assert!((fd - j.dv).norm() < 1e-6 * (1.0 + j.v.norm().powi(3)), "x = {x}");
            assert!((j.dv + j.v * j.v + 0.5 * x).norm() < 1e-9);
        }
    }

    #[test]
    fn matches_maclaurin_series_near_start() {
        // φ = 1 − x³/12 + x⁶/720 − x⁹/103680 + … for φ″ = −xφ/2, φ(0) = 1, φ′(0) = 0.
        let g = Grid::new(0.0, 1.0, 1001).unwrap();
        let a = riccati_airy_solution([ONE, ZERO], &g).unwrap();
        let x: f64 = 0.5;
        let series = 1.0 - x.powi(3) / 12.0 + x.powi(6) / 720.0 - x.powi(9) / 103680.0;
        assert!((a.phi(x).unwrap()[0].re - series).abs() < 1e-9);
    }
}
