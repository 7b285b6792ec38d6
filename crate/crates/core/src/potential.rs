//! Candidate solutions `v(x)` of the Painlevé II equation.
//!
//! Smooth potentials evaluate `v`, `v′` and (usually) `v″` anywhere on their
//! domain; grid-sampled ones only exist at the nodes of one [`Grid`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::pauli::{C64, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    ClosedForm,
    PolynomialLogDerivative,
    OdeDefined,
    GridSampled,
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PotentialKind::ClosedForm => "closed-form",
            PotentialKind::PolynomialLogDerivative => "polynomial-log-derivative",
            PotentialKind::OdeDefined => "ode-defined",
            PotentialKind::GridSampled => "grid-sampled",
        };
        f.write_str(s)
    }
}

/// `v`, `v′` and, when known in closed form, `v″` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: C64,
    pub dv: C64,
    pub d2v: Option<C64>,
}

impl Jet {
    pub fn new(v: C64, dv: C64, d2v: C64) -> Self {
        Jet {
            v,
            dv,
            d2v: Some(d2v),
        }
    }

    pub fn zero() -> Self {
        Jet::new(ZERO, ZERO, ZERO)
    }

    pub fn negated(&self) -> Jet {
        Jet {
            v: -self.v,
            dv: -self.dv,
            d2v: self.d2v.map(|z| -z),
        }
    }
}

/// Values of a potential at every node of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    pub grid: Grid,
    pub v: Vec<C64>,
    pub dv: Vec<C64>,
    pub d2v: Vec<C64>,
    /// `false` when `v″` was obtained by differencing `v′`.
    pub d2v_analytic: bool,
    pub mask: Vec<bool>,
}

impl Samples {
    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn jet(&self, i: usize) -> Jet {
        Jet::new(self.v[i], self.dv[i], self.d2v[i])
    }

    pub fn masked_fraction(&self) -> f64 {
        self.mask.iter().filter(|m| **m).count() as f64 / self.mask.len() as f64
    }

    pub fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.grid != *grid {
            return Err(Error::Argument(format!(
                "samples live on grid {} but {} was requested",
                self.grid.spec_string(),
                grid.spec_string()
            )));
        }
        Ok(())
    }
}

pub trait Potential: Send + Sync {
    fn kind(&self) -> PotentialKind;

    /// The `α` this potential is believed to solve PII for.
    fn alpha_hint(&self) -> Option<C64> {
        None
    }

    fn sample(&self, grid: &Grid) -> Result<Samples>;
}

/// A potential with pointwise analytic derivatives.
pub trait SmoothPotential: Potential {
    fn jet(&self, x: f64) -> Jet;

    /// `true` where evaluation is unreliable (near a pole).
    fn is_masked(&self, x: f64) -> bool;
}

/// Samples a smooth potential, filling a missing `v″` by central differences
/// of `v′` (one-sided at the ends).
pub fn sample_smooth<P: SmoothPotential + ?Sized>(pot: &P, grid: &Grid) -> Samples {
    let jets: Vec<Jet> = grid.points().map(|x| pot.jet(x)).collect();
    let mask: Vec<bool> = grid.points().map(|x| pot.is_masked(x)).collect();
    let v: Vec<C64> = jets.iter().map(|j| j.v).collect();
    let dv: Vec<C64> = jets.iter().map(|j| j.dv).collect();
    let d2v_analytic = jets.iter().all(|j| j.d2v.is_some());
    let d2v = if d2v_analytic {
        jets.iter().map(|j| j.d2v.unwrap()).collect()
    } else {
        central_difference(&dv, grid.step())
    };
    Samples {
        grid: *grid,
        v,
        dv,
        d2v,
        d2v_analytic,
        mask,
    }
}

/// Second-order finite-difference derivative on a uniform grid.
pub fn central_difference(values: &[C64], h: f64) -> Vec<C64> {
    let n = values.len();
    assert!(n >= 3, "central differences need at least three samples");
    (0..n)
        .map(|i| {
            if i == 0 {
                (values[0] * -3.0 + values[1] * 4.0 - values[2]) / (2.0 * h)
            } else if i == n - 1 {
                (values[n - 1] * 3.0 - values[n - 2] * 4.0 + values[n - 3]) / (2.0 * h)
            } else {
                (values[i + 1] - values[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// The trivial seed `v ≡ 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroPotential;

impl Potential for ZeroPotential {
    fn kind(&self) -> PotentialKind {
        PotentialKind::ClosedForm
    }

    fn alpha_hint(&self) -> Option<C64> {
        Some(ZERO)
    }

    fn sample(&self, grid: &Grid) -> Result<Samples> {
        Ok(sample_smooth(self, grid))
    }
}

impl SmoothPotential for ZeroPotential {
    fn jet(&self, _x: f64) -> Jet {
        Jet::zero()
    }

    fn is_masked(&self, _x: f64) -> bool {
        false
    }
}

type JetFn = dyn Fn(f64) -> Jet + Send + Sync;

/// Closed-form potential backed by a closure; used for test profiles.
#[derive(Clone)]
pub struct FnPotential {
    name: String,
    f: Arc<JetFn>,
    alpha_hint: Option<C64>,
}

impl FnPotential {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> Jet + Send + Sync + 'static) -> Self {
        FnPotential {
            name: name.into(),
            f: Arc::new(f),
            alpha_hint: None,
        }
    }

    pub fn with_alpha_hint(mut self, alpha: C64) -> Self {
        self.alpha_hint = Some(alpha);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for FnPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnPotential").field("name", &self.name).finish()
    }
}

impl Potential for FnPotential {
    fn kind(&self) -> PotentialKind {
        PotentialKind::ClosedForm
    }

    fn alpha_hint(&self) -> Option<C64> {
        self.alpha_hint
    }

    fn sample(&self, grid: &Grid) -> Result<Samples> {
        Ok(sample_smooth(self, grid))
    }
}

impl SmoothPotential for FnPotential {
    fn jet(&self, x: f64) -> Jet {
        (self.f)(x)
    }

    fn is_masked(&self, x: f64) -> bool {
        let j = (self.f)(x);
        !(j.v.is_finite() && j.dv.is_finite() && j.d2v.is_none_or(|z| z.is_finite()))
    }
}

/// `x ↦ −v(x)`, the image under the PII symmetry `v → −v, α → −α`.
#[derive(Clone, Debug)]
pub struct Negated<P>(pub P);

impl<P: Potential> Potential for Negated<P> {
    fn kind(&self) -> PotentialKind {
        self.0.kind()
    }

    fn alpha_hint(&self) -> Option<C64> {
        self.0.alpha_hint().map(|a| -a)
    }

    fn sample(&self, grid: &Grid) -> Result<Samples> {
        let mut s = self.0.sample(grid)?;
        for z in s.v.iter_mut().chain(s.dv.iter_mut()).chain(s.d2v.iter_mut()) {
            *z = -*z;
        }
        Ok(s)
    }
}

impl<P: SmoothPotential> SmoothPotential for Negated<P> {
    fn jet(&self, x: f64) -> Jet {
        self.0.jet(x).negated()
    }

    fn is_masked(&self, x: f64) -> bool {
        self.0.is_masked(x)
    }
}

/// A potential known only at the nodes of one grid.
#[derive(Clone, Debug)]
pub struct SampledPotential {
    samples: Samples,
    alpha_hint: Option<C64>,
    label: String,
}

impl SampledPotential {
    pub fn new(samples: Samples, label: impl Into<String>) -> Result<Self> {
        if samples.mask.iter().all(|m| *m) {
            return Err(Error::EmptyDomain(format!(
                "{} is masked at every grid point",
                label.into()
            )));
        }
        Ok(SampledPotential {
            samples,
            alpha_hint: None,
            label: label.into(),
        })
    }

    pub fn with_alpha_hint(mut self, alpha: C64) -> Self {
        self.alpha_hint = Some(alpha);
        self
    }

    pub fn samples(&self) -> &Samples {
        &self.samples
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn into_samples(self) -> Samples {
        self.samples
    }
}

impl Potential for SampledPotential {
    fn kind(&self) -> PotentialKind {
        PotentialKind::GridSampled
    }

    fn alpha_hint(&self) -> Option<C64> {
        self.alpha_hint
    }

    fn sample(&self, grid: &Grid) -> Result<Samples> {
        self.samples.check_grid(grid)?;
        Ok(self.samples.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_second_derivative_is_differenced() {
        let p = FnPotential::new("sin", |x| Jet {
            v: x.sin().into(),
            dv: x.cos().into(),
            d2v: None,
        });
        let g = Grid::new(0.0, 1.0, 1001).unwrap();
        let s = p.sample(&g).unwrap();
        assert!(!s.d2v_analytic);
        for (i, x) in g.points().enumerate() {
            assert!((s.d2v[i].re + x.sin()).abs() < 1e-5);
        }
    }

    #[test]
    fn negation_flips_all_derivatives() {
        let p = FnPotential::new("x", |x| Jet::new(x.into(), 1.0.into(), ZERO)).with_alpha_hint(2.0.into());
        let n = Negated(p);
        assert_eq!(n.jet(3.0).v, C64::new(-3.0, 0.0));
        assert_eq!(n.jet(3.0).dv, C64::new(-1.0, 0.0));
        assert_eq!(n.alpha_hint(), Some(C64::new(-2.0, 0.0)));
    }

    #[test]
    fn sampled_potential_refuses_other_grids() {
        let g = Grid::new(0.0, 1.0, 11).unwrap();
        let s = ZeroPotential.sample(&g).unwrap();
        let p = SampledPotential::new(s, "zero").unwrap();
        assert!(p.sample(&g).is_ok());
        assert!(p.sample(&g.refined()).is_err());
    }

    #[test]
    fn fully_masked_samples_are_rejected() {
        let g = Grid::new(0.0, 1.0, 11).unwrap();
        let mut s = ZeroPotential.sample(&g).unwrap();
        s.mask.iter_mut().for_each(|m| *m = true);
        assert!(matches!(SampledPotential::new(s, "all masked"), Err(Error::EmptyDomain(_))));
    }
}
