use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lax::PiiParams;
use crate::pauli::{C64, ZERO};
use crate::potential::{Potential, Samples};

/// PII residual of one potential on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub grid: Grid,
    pub params: PiiParams,
    pub v: Vec<C64>,
    pub residual: Vec<C64>,
    pub masked: Vec<bool>,
    /// Over unmasked points only.
    pub sup_norm: f64,
    /// Discrete `(h Σ |R|²)^{1/2}` over unmasked points.
    pub l2_norm: f64,
    pub masked_fraction: f64,
    /// `false` when `v″` came from finite differences.
    pub d2v_analytic: bool,
}

impl ResidualReport {
    pub fn unmasked(&self) -> impl Iterator<Item = (f64, C64)> + '_ {
        self.grid
            .points()
            .zip(&self.residual)
            .zip(&self.masked)
            .filter(|(_, m)| !**m)
            .map(|((x, r), _)| (x, *r))
    }
}

/// `R(x) = v″ − c·v³ − x·v + α` at every grid point.
pub fn pii_residual(pot: &dyn Potential, params: &PiiParams, grid: &Grid) -> Result<ResidualReport> {
    let samples = pot.sample(grid)?;
    residual_from_samples(&samples, params)
}

pub fn residual_from_samples(samples: &Samples, params: &PiiParams) -> Result<ResidualReport> {
    let grid = samples.grid;
    let mut residual = Vec::with_capacity(grid.len());
    let mut masked = Vec::with_capacity(grid.len());
    for (i, x) in grid.points().enumerate() {
        let r = params.residual(x, samples.v[i], samples.d2v[i]);
        let m = samples.mask[i] || !r.is_finite();
        masked.push(m);
        residual.push(if m { ZERO } else { r });
    }
    let count = masked.iter().filter(|m| !**m).count();
    if count == 0 {
        return Err(Error::EmptyDomain(format!(
            "PII residual on {} has no unmasked points",
            grid.spec_string()
        )));
    }
    let mut sup: f64 = 0.0;
    let mut sum_sq = 0.0;
    for (r, m) in residual.iter().zip(&masked) {
        if !m {
            sup = sup.max(r.norm());
            sum_sq += r.norm_sqr();
        }
    }
    Ok(ResidualReport {
        grid,
        params: *params,
        v: samples.v.clone(),
        residual,
        masked_fraction: 1.0 - count as f64 / grid.len() as f64,
        masked,
        sup_norm: sup,
        l2_norm: (sum_sq * grid.step()).sqrt(),
        d2v_analytic: samples.d2v_analytic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{FnPotential, Jet, Negated, ZeroPotential};
    use crate::seeds::rational_pii_solution;

    #[test]
    fn zero_seed_examples() {
        let g = Grid::new(-5.0, 5.0, 101).unwrap();
        let r = pii_residual(&ZeroPotential, &PiiParams::real(0.0), &g).unwrap();
        assert_eq!(r.sup_norm, 0.0);
        let r = pii_residual(&ZeroPotential, &PiiParams::real(1.0), &g).unwrap();
        assert!(r.residual.iter().all(|z| *z == C64::from(1.0)));
        assert_eq!(r.masked_fraction, 0.0);
    }

    #[test]
    fn reciprocal_solution_passes() {
        let g = Grid::new(1.0, 5.0, 401).unwrap();
        let pot = FnPotential::new("1/x", |x| Jet::new((1.0 / x).into(), (-1.0 / (x * x)).into(), (2.0 / x.powi(3)).into()));
        let r = pii_residual(&pot, &PiiParams::real(1.0), &g).unwrap();
        assert!(r.sup_norm < 1e-10);
    }

    #[test]
    fn sign_flip_symmetry() {
        let g = Grid::new(-5.0, 5.0, 2001).unwrap();
        let s = rational_pii_solution(2).unwrap();
        let r = pii_residual(&Negated(s), &PiiParams::real(-2.0), &g).unwrap();
        assert!(r.sup_norm < 1e-9);
    }

    #[test]
    fn fully_masked_grid_is_an_error() {
        let g = Grid::new(-1e-4, 1e-4, 11).unwrap();
        let s = rational_pii_solution(1).unwrap();
        assert!(matches!(pii_residual(&s, &PiiParams::real(1.0), &g), Err(Error::EmptyDomain(_))));
    }

    #[test]
    fn displayed_cubic_is_configurable() {
        // c = 1 with v = √2/x: v″ = 2√2/x³, v³ = 2√2/x³, so R = −√2 + α.
        let k = std::f64::consts::SQRT_2;
        let pot = FnPotential::new("k/x", move |x| Jet::new((k / x).into(), (-k / (x * x)).into(), (2.0 * k / x.powi(3)).into()));
        let g = Grid::new(1.0, 3.0, 21).unwrap();
        let r = pii_residual(&pot, &PiiParams::real(k).with_cubic(1.0), &g).unwrap();
        assert!(r.sup_norm < 1e-13);
    }
}
