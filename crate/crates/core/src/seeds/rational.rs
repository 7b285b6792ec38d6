use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::pauli::C64;
use crate::potential::{sample_smooth, Jet, Potential, PotentialKind, Samples, SmoothPotential};

use super::yv::{yv_sequence, IntPoly, DEFAULT_MAX_INDEX};
use super::DEFAULT_POLE_RADIUS;

/// Double-precision copy of a polynomial and its first three derivatives.
#[derive(Clone, Debug)]
struct Derivs {
    polys: [Vec<f64>; 4],
}

impl Derivs {
    fn new(p: &IntPoly) -> Result<Self> {
        let d1 = p.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        Ok(Derivs {
            polys: [p.to_f64()?, d1.to_f64()?, d2.to_f64()?, d3.to_f64()?],
        })
    }

    fn horner(c: &[f64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, a| acc * x + a)
    }

    /// `(P, P′/P, P″/P, P‴/P)`.
    fn ratios(&self, x: f64) -> (f64, f64, f64, f64) {
        let p = Self::horner(&self.polys[0], x);
        let r = |k: usize| Self::horner(&self.polys[k], x) / p;
        (p, r(1), r(2), r(3))
    }
}

/// `v_n = d/dx ln(Q_n / Q_{n−1})`, an exact solution of
/// `v″ = 2v³ + xv − n`.
#[derive(Clone, Debug)]
pub struct RationalSolution {
    n: usize,
    numer: IntPoly,
    denom: IntPoly,
    numer_f: Derivs,
    denom_f: Derivs,
    pole_radius: f64,
}

impl RationalSolution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.numer
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.denom
    }

    /// Mask points whose Newton distance `|Q/Q′|` to a root of either
    /// polynomial is below `radius`.
    pub fn with_pole_radius(mut self, radius: f64) -> Self {
        self.pole_radius = radius;
        self
    }

    pub fn pole_radius(&self) -> f64 {
        self.pole_radius
    }
}

pub fn rational_pii_solution(n: usize) -> Result<RationalSolution> {
    if n == 0 {
        return Err(Error::Argument("rational solutions are indexed from n = 1".into()));
    }
    let mut seq = yv_sequence(n, DEFAULT_MAX_INDEX.max(n))?;
    let numer = seq.pop().unwrap();
    let denom = seq.pop().unwrap();
    Ok(RationalSolution {
        n,
        numer_f: Derivs::new(&numer)?,
        denom_f: Derivs::new(&denom)?,
        numer,
        denom,
        pole_radius: DEFAULT_POLE_RADIUS,
    })
}

/// Log-derivative pieces `(L′, L″, L‴)` of `ln P` from the ratios.
fn log_derivs(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    (a, b - a * a, c - 3.0 * a * b + 2.0 * a * a * a)
}

impl Potential for RationalSolution {
    fn kind(&self) -> PotentialKind {
        PotentialKind::PolynomialLogDerivative
    }

    fn alpha_hint(&self) -> Option<C64> {
        Some(C64::from(self.n as f64))
    }

    fn sample(&self, grid: &Grid) -> Result<Samples> {
        Ok(sample_smooth(self, grid))
    }
}

impl SmoothPotential for RationalSolution {
    fn jet(&self, x: f64) -> Jet {
        let (_, a, b, c) = self.numer_f.ratios(x);
        let (ad, bd, cd) = {
            let (_, a, b, c) = self.denom_f.ratios(x);
            (a, b, c)
        };
        let (n1, n2, n3) = log_derivs(a, b, c);
        let (m1, m2, m3) = log_derivs(ad, bd, cd);
        Jet::new((n1 - m1).into(), (n2 - m2).into(), (n3 - m3).into())
    }

    fn is_masked(&self, x: f64) -> bool {
        let near = |d: &Derivs| {
            let (p, a, _, _) = d.ratios(x);
            p == 0.0 || !a.is_finite() || a.abs() * self.pole_radius > 1.0
        };
        near(&self.numer_f) || near(&self.denom_f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_solution_is_reciprocal() {
        let s = rational_pii_solution(1).unwrap();
        for x in [0.5, 1.0, 3.0, -2.0] {
            let j = s.jet(x);
            assert!((j.v.re - 1.0 / x).abs() < 1e-15);
            assert!((j.dv.re + 1.0 / (x * x)).abs() < 1e-14);
            assert!((j.d2v.unwrap().re - 2.0 / (x * x * x)).abs() < 1e-13);
        }
        assert!(s.is_masked(0.0));
        assert!(s.is_masked(0.005));
        assert!(!s.is_masked(0.5));
    }

    #[test]
    fn second_solution_closed_form() {
        let s = rational_pii_solution(2).unwrap();
        for x in [0.7f64, 1.9, -0.4, 4.0] {
            let expected = 3.0 * x * x / (x.powi(3) + 4.0) - 1.0 / x;
            assert!((s.jet(x).v.re - expected).abs() < 1e-13);
        }
        assert_eq!(s.alpha_hint(), Some(C64::from(2.0)));
    }

    #[test]
    fn index_zero_is_rejected() {
        assert!(rational_pii_solution(0).is_err());
    }
}
