//! The gauged x-part linear system `Ψ′ = B̃Ψ`, i.e.
//! `X′ = vX − λY`, `Y′ = λX − vY`, integrated at fixed λ with the classical
//! four-stage scheme on a fixed grid.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::pauli::{Mat2, C64, ONE, ZERO};
use crate::potential::SmoothPotential;

/// Blow-up threshold for `|X| + |Y|`.
pub const OVERFLOW_GUARD: f64 = 1e150;

/// Eigenfunction samples `(X, Y)` at one spectral value, with their
/// x-derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub lambda: C64,
    pub grid: Grid,
    /// `(X(x0), Y(x0))` the pair was integrated from.
    pub ic: [C64; 2],
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub dx: Vec<C64>,
    pub dy: Vec<C64>,
    /// Points where a transformation that produced this pair divided by a
    /// vanishing quantity. All `false` for integrated pairs.
    pub mask: Vec<bool>,
}

impl EigenPair {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn check_same_grid(&self, other: &EigenPair) -> Result<()> {
        if self.grid != other.grid || self.len() != other.len() {
            return Err(Error::Argument(format!(
                "eigenpairs live on different grids ({} vs {})",
                self.grid.spec_string(),
                other.grid.spec_string()
            )));
        }
        Ok(())
    }
}

/// Seed values at the nodes and midpoints of a grid: entry `2i` is node `i`,
/// entry `2i + 1` the midpoint after it.
#[derive(Clone, Debug)]
pub struct HalfGridSeed {
    grid: Grid,
    v: Vec<C64>,
}

impl HalfGridSeed {
    pub fn new(pot: &dyn SmoothPotential, grid: &Grid) -> Result<Self> {
        let h = grid.step();
        let mut v = Vec::with_capacity(2 * grid.len() - 1);
        for k in 0..2 * grid.len() - 1 {
            let x = if k % 2 == 0 { grid.x(k / 2) } else { grid.x(k / 2) + 0.5 * h };
            if pot.is_masked(x) {
                return Err(Error::Domain {
                    x,
                    reason: "potential has a pole inside the integration interval".into(),
                });
            }
            let jet = pot.jet(x);
            if !jet.v.is_finite() {
                return Err(Error::Domain {
                    x,
                    reason: "potential is not finite".into(),
                });
            }
            v.push(jet.v);
        }
        Ok(HalfGridSeed { grid: *grid, v })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn node(&self, i: usize) -> C64 {
        self.v[2 * i]
    }
}

fn rhs(v: C64, lambda: C64, s: [C64; 2]) -> [C64; 2] {
    [v * s[0] - lambda * s[1], lambda * s[0] - v * s[1]]
}

fn axpy(a: [C64; 2], b: [C64; 2], t: f64) -> [C64; 2] {
    [a[0] + b[0] * t, a[1] + b[1] * t]
}

/// Integrates `Ψ′ = B̃Ψ` from `ic` at the left end of the grid.
pub fn integrate_eigenpair(pot: &dyn SmoothPotential, lambda: C64, ic: [C64; 2], grid: &Grid) -> Result<EigenPair> {
    let seed = HalfGridSeed::new(pot, grid)?;
    integrate_on_seed(&seed, lambda, ic)
}

pub fn integrate_on_seed(seed: &HalfGridSeed, lambda: C64, ic: [C64; 2]) -> Result<EigenPair> {
    if ic[0] == ZERO && ic[1] == ZERO {
        return Err(Error::Argument("eigenfunction initial condition must be nonzero".into()));
    }
    if !(lambda.is_finite() && ic[0].is_finite() && ic[1].is_finite()) {
        return Err(Error::Argument("spectral value and initial condition must be finite".into()));
    }
    let grid = seed.grid;
    let h = grid.step();
    let n = grid.len();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    let mut s = ic;
    xs.push(s[0]);
    ys.push(s[1]);
    for i in 0..n - 1 {
        let (v0, vm, v1) = (seed.v[2 * i], seed.v[2 * i + 1], seed.v[2 * i + 2]);
        let k1 = rhs(v0, lambda, s);
        let k2 = rhs(vm, lambda, axpy(s, k1, 0.5 * h));
        let k3 = rhs(vm, lambda, axpy(s, k2, 0.5 * h));
        let k4 = rhs(v1, lambda, axpy(s, k3, h));
        s = [
            s[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (h / 6.0),
            s[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (h / 6.0),
        ];
        let size = s[0].norm() + s[1].norm();
        if !(size <= OVERFLOW_GUARD) {
            return Err(Error::Domain {
                x: grid.x(i + 1),
                reason: format!("|X| + |Y| = {size:e} exceeds the overflow guard"),
            });
        }
        xs.push(s[0]);
        ys.push(s[1]);
    }
    let (dx, dy) = (0..n)
        .map(|i| {
            let d = rhs(seed.node(i), lambda, [xs[i], ys[i]]);
            (d[0], d[1])
        })
        .unzip();
    Ok(EigenPair {
        lambda,
        grid,
        ic,
        x: xs,
        y: ys,
        dx,
        dy,
        mask: vec![false; n],
    })
}

/// Step-halving estimate of the coarse-grid error, `16/15 · max |Ψ_h − Ψ_{h/2}|`.
pub fn richardson_error(pot: &dyn SmoothPotential, lambda: C64, ic: [C64; 2], grid: &Grid) -> Result<f64> {
    let coarse = integrate_eigenpair(pot, lambda, ic, grid)?;
    let fine = integrate_eigenpair(pot, lambda, ic, &grid.refined())?;
    Ok((0..grid.len())
        .map(|i| (coarse.x[i] - fine.x[2 * i]).norm().max((coarse.y[i] - fine.y[2 * i]).norm()))
        .fold(0.0, f64::max)
        * (16.0 / 15.0))
}

/// Fundamental matrix with columns started from `(1, 0)` and `(0, 1)`.
/// `tr B̃ = 0`, so its determinant stays 1.
pub fn fundamental_matrix(pot: &dyn SmoothPotential, lambda: C64, grid: &Grid) -> Result<Vec<Mat2>> {
    let seed = HalfGridSeed::new(pot, grid)?;
    let c1 = integrate_on_seed(&seed, lambda, [ONE, ZERO])?;
    let c2 = integrate_on_seed(&seed, lambda, [ZERO, ONE])?;
    Ok((0..grid.len())
        .map(|i| Mat2::new(c1.x[i], c2.x[i], c1.y[i], c2.y[i]))
        .collect())
}

/// Moves gauged-frame samples to the original frame: `Ψ_old = G Ψ`.
pub fn to_old_frame(pair: &EigenPair) -> Vec<[C64; 2]> {
    let g = crate::pauli::gauge_matrix();
    pair.x.iter().zip(&pair.y).map(|(x, y)| g.apply([*x, *y])).collect()
}
