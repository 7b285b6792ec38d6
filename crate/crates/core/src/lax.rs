//! Lax pairs of PII in the original and gauged frames, kept as Laurent
//! polynomials in the spectral parameter so the zero-curvature residual can
//! be read off power by power.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{commutator, gauge_conjugate, pauli_decompose, Mat2, PauliCoeffs, C64, I, ZERO};
use crate::potential::{Jet, SmoothPotential};

/// Parameters of `v″ = c·v³ + x·v − α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiiParams {
    pub alpha: C64,
    /// Coefficient of the cubic term: 2 is what the Lax pair implies, 1 is
    /// the form `v″ = v³ + xv − α`.
    pub cubic_coeff: f64,
}

impl PiiParams {
    pub const DERIVED_CUBIC: f64 = 2.0;
    pub const DISPLAYED_CUBIC: f64 = 1.0;

    pub fn new(alpha: C64) -> Self {
        PiiParams {
            alpha,
            cubic_coeff: Self::DERIVED_CUBIC,
        }
    }

    pub fn real(alpha: f64) -> Self {
        PiiParams::new(alpha.into())
    }

    pub fn with_cubic(mut self, cubic_coeff: f64) -> Self {
        self.cubic_coeff = cubic_coeff;
        self
    }

    /// `R = v″ − c·v³ − x·v + α`.
    pub fn residual(&self, x: f64, v: C64, d2v: C64) -> C64 {
        d2v - v * v * v * self.cubic_coeff - v * x + self.alpha
    }
}

impl Default for PiiParams {
    fn default() -> Self {
        PiiParams::new(ZERO)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaxFrame {
    Old,
    Gauged,
}

impl LaxFrame {
    /// Pauli direction carried by the λ⁰ residual: σ2 in the old frame and
    /// its gauge image σ1 in the gauged one.
    pub fn residual_direction(self) -> usize {
        match self {
            LaxFrame::Old => 2,
            LaxFrame::Gauged => 1,
        }
    }
}

impl std::str::FromStr for LaxFrame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "old" => Ok(LaxFrame::Old),
            "gauged" => Ok(LaxFrame::Gauged),
            _ => Err(Error::Parse(format!("frame must be old or gauged, got {s:?}"))),
        }
    }
}

/// Finitely supported map from powers of λ to matrix coefficients.
/// Exactly-zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaurentMat {
    terms: BTreeMap<i32, Mat2>,
}

impl LaurentMat {
    pub fn zero() -> Self {
        LaurentMat::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, Mat2)>) -> Self {
        let mut out = LaurentMat::zero();
        for (p, m) in terms {
            out.add_term(p, m);
        }
        out
    }

    pub fn add_term(&mut self, power: i32, m: Mat2) {
        let entry = self.terms.entry(power).or_insert(Mat2::ZERO);
        *entry = *entry + m;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn coeff(&self, power: i32) -> Mat2 {
        self.terms.get(&power).copied().unwrap_or(Mat2::ZERO)
    }

    pub fn powers(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Mat2)> {
        self.terms.iter().map(|(p, m)| (*p, m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ terms[p]·λ^p`; negative powers make λ = 0 a pole.
    pub fn eval(&self, lambda: C64) -> Result<Mat2> {
        if lambda == ZERO && self.powers().any(|p| p < 0) {
            return Err(Error::Domain {
                x: 0.0,
                reason: "negative λ-power evaluated at λ = 0".into(),
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(Mat2::ZERO, |acc, (p, m)| acc + m.scale(lambda.powi(*p))))
    }

    /// Symbolic ∂/∂λ: `p·terms[p]` moves to power `p − 1`.
    pub fn d_lambda(&self) -> LaurentMat {
        LaurentMat::from_terms(
            self.terms
                .iter()
                .map(|(p, m)| (p - 1, m.scale(C64::from(f64::from(*p))))),
        )
    }

    pub fn map_coeffs(&self, f: impl Fn(&Mat2) -> Mat2) -> LaurentMat {
        LaurentMat::from_terms(self.terms.iter().map(|(p, m)| (*p, f(m))))
    }

    /// `[self, other]` by convolution of the coefficient sequences.
    pub fn commutator(&self, other: &LaurentMat) -> LaurentMat {
        let mut out = LaurentMat::zero();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p + q, commutator(a, b));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Mat2::max_abs).fold(0.0, f64::max)
    }
}

impl std::ops::Sub for &LaurentMat {
    type Output = LaurentMat;
    fn sub(self, o: &LaurentMat) -> LaurentMat {
        let mut out = self.clone();
        for (p, m) in &o.terms {
            out.add_term(*p, -*m);
        }
        out
    }
}

impl std::ops::Add for &LaurentMat {
    type Output = LaurentMat;
    fn add(self, o: &LaurentMat) -> LaurentMat {
        let mut out = self.clone();
        for (p, m) in &o.terms {
            out.add_term(*p, *m);
        }
        out
    }
}

fn pc(a1: C64, a2: C64, a3: C64) -> Mat2 {
    PauliCoeffs::new(ZERO, a1, a2, a3).compose()
}

/// Places λ-coefficients of the original pair on σ1, σ2, σ3, or on the
/// permuted directions σ3, σ1, σ2 of the gauged pair.
fn frame_pc(frame: LaxFrame, a1: C64, a2: C64, a3: C64) -> Mat2 {
    match frame {
        LaxFrame::Old => pc(a1, a2, a3),
        // Ã = a2·σ1 + a3·σ2 + a1·σ3 as displayed for the gauged pair.
        LaxFrame::Gauged => pc(a2, a3, a1),
    }
}

/// λ-part matrix at one point:
/// `A = (4λv + αλ⁻¹)σ1 − 2v′σ2 − (4iλ² + ix + 2iv²)σ3` and its gauged form.
pub fn lax_a_at(jet: &Jet, x: f64, params: &PiiParams, frame: LaxFrame) -> LaurentMat {
    let Jet { v, dv, .. } = *jet;
    LaurentMat::from_terms([
        (2, frame_pc(frame, ZERO, ZERO, I * -4.0)),
        (1, frame_pc(frame, v * 4.0, ZERO, ZERO)),
        (0, frame_pc(frame, ZERO, dv * -2.0, -I * (v * v * 2.0 + x))),
        (-1, frame_pc(frame, params.alpha, ZERO, ZERO)),
    ])
}

pub fn lax_a<P: SmoothPotential + ?Sized>(pot: &P, x: f64, params: &PiiParams, frame: LaxFrame) -> LaurentMat {
    lax_a_at(&pot.jet(x), x, params, frame)
}

/// x-part matrix `B = vσ1 − iλσ3`, gauged `B̃ = vσ3 − iλσ2 = [[v, −λ], [λ, −v]]`.
pub fn lax_b_at(jet: &Jet, frame: LaxFrame) -> LaurentMat {
    LaurentMat::from_terms([
        (1, frame_pc(frame, ZERO, ZERO, -I)),
        (0, frame_pc(frame, jet.v, ZERO, ZERO)),
    ])
}

pub fn lax_b<P: SmoothPotential + ?Sized>(pot: &P, x: f64, frame: LaxFrame) -> LaurentMat {
    lax_b_at(&pot.jet(x), frame)
}

/// ∂A/∂x at fixed λ, from the analytic `v′` and `v″`.
fn lax_a_dx(jet: &Jet, frame: LaxFrame) -> Result<LaurentMat> {
    let d2v = jet
        .d2v
        .ok_or_else(|| Error::Argument("zero-curvature residual needs an analytic v″".into()))?;
    let (v, dv) = (jet.v, jet.dv);
    Ok(LaurentMat::from_terms([
        (1, frame_pc(frame, dv * 4.0, ZERO, ZERO)),
        (0, frame_pc(frame, ZERO, d2v * -2.0, -I * (v * dv * 4.0 + 1.0))),
    ]))
}

/// Entrywise construction of `A(λ)` without the Laurent machinery.
pub fn lax_a_dense(jet: &Jet, x: f64, params: &PiiParams, frame: LaxFrame, lambda: C64) -> Result<Mat2> {
    if lambda == ZERO {
        return Err(Error::Domain {
            x,
            reason: "A has a pole at λ = 0".into(),
        });
    }
    let Jet { v, dv, .. } = *jet;
    let a1 = lambda * v * 4.0 + params.alpha / lambda;
    let a2 = dv * -2.0;
    let a3 = -I * (lambda * lambda * 4.0 + x + v * v * 2.0);
    Ok(match frame {
        LaxFrame::Old => Mat2::new(a3, a1 - I * a2, a1 + I * a2, -a3),
        LaxFrame::Gauged => Mat2::new(a1, a2 - I * a3, a2 + I * a3, -a1),
    })
}

pub fn lax_b_dense(jet: &Jet, frame: LaxFrame, lambda: C64) -> Mat2 {
    match frame {
        LaxFrame::Old => Mat2::new(-I * lambda, jet.v, jet.v, I * lambda),
        LaxFrame::Gauged => Mat2::new(jet.v, -lambda, lambda, -jet.v),
    }
}

/// `A_x − B_λ − [B, A]` as a Laurent polynomial in λ.
pub fn zero_curvature_residual_at(jet: &Jet, x: f64, params: &PiiParams, frame: LaxFrame) -> Result<LaurentMat> {
    let a = lax_a_at(jet, x, params, frame);
    let b = lax_b_at(jet, frame);
    let a_x = lax_a_dx(jet, frame)?;
    let b_lambda = b.d_lambda();
    Ok(&(&a_x - &b_lambda) - &b.commutator(&a))
}

pub fn zero_curvature_residual<P: SmoothPotential + ?Sized>(
    pot: &P,
    x: f64,
    params: &PiiParams,
    frame: LaxFrame,
) -> Result<LaurentMat> {
    zero_curvature_residual_at(&pot.jet(x), x, params, frame)
}

/// Applies the gauge map to every Laurent coefficient.
pub fn gauge_laurent(m: &LaurentMat) -> LaurentMat {
    m.map_coeffs(gauge_conjugate)
}

/// Breakdown of a zero-curvature residual into the parts the contract
/// constrains.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualSplit {
    /// Largest entry over every power other than λ⁰.
    pub off_power: f64,
    /// Pauli coefficients of the λ⁰ coefficient.
    pub power0: PauliCoeffs,
    /// Coefficient on the frame's residual direction.
    pub direction_coeff: C64,
    /// Largest coefficient on any other Pauli direction.
    pub leakage: f64,
    /// Magnitude of the terms that cancel in the residual; tolerances scale
    /// with it.
    pub scale: f64,
}

impl ResidualSplit {
    /// The PII residual implied by the λ⁰ coefficient: `−coeff / 2`.
    pub fn implied_residual(&self) -> C64 {
        self.direction_coeff * -0.5
    }
}

pub fn split_residual(res: &LaurentMat, jet: &Jet, x: f64, params: &PiiParams, frame: LaxFrame) -> ResidualSplit {
    let off_power = res
        .terms()
        .filter(|(p, _)| *p != 0)
        .map(|(_, m)| m.max_abs())
        .fold(0.0, f64::max);
    let power0 = pauli_decompose(&res.coeff(0));
    let dir = frame.residual_direction();
    let coeffs = power0.as_array();
    let leakage = (0..4)
        .filter(|k| *k != dir)
        .map(|k| coeffs[k].norm())
        .fold(0.0, f64::max);
    ResidualSplit {
        off_power,
        power0,
        direction_coeff: coeffs[dir],
        leakage,
        scale: term_scale(jet, x, params),
    }
}

/// Size of the terms that cancel inside the residual at λ-powers 0 and 1.
pub fn term_scale(jet: &Jet, x: f64, params: &PiiParams) -> f64 {
    let v = jet.v.norm();
    let dv = jet.dv.norm();
    let d2v = jet.d2v.map_or(0.0, |z| z.norm());
    1.0 + d2v + 2.0_f64.max(params.cubic_coeff.abs()) * v.powi(3) + (x * v).abs() + params.alpha.norm() + 4.0 * v * dv + 8.0 * v
}
