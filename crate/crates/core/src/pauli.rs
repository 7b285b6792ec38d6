//! Complex 2×2 matrices over the Pauli basis and the constant gauge
//! conjugation that carries the original Lax pair to the AKNS-like frame.
//!
//! The gauge matrix is `G = [[1, -i], [1, i]]`. Direct multiplication gives
//!
//! ```text
//! G σ1 G⁻¹ = σ2,   G σ2 G⁻¹ = σ3,   G σ3 G⁻¹ = σ1
//! G⁻¹ σ1 G = σ3,   G⁻¹ σ2 G = σ1,   G⁻¹ σ3 G = σ2
//! ```
//!
//! Only the second family turns `B = vσ1 − iλσ3` into `vσ3 − iλσ2`, the
//! gauged pair the Darboux formulas are written in. [`gauge_conjugate`]
//! therefore applies `M ↦ G⁻¹ M G`; the other direction stays available as
//! [`GaugeDirection::Forward`] for diagnostics.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Mat2 {
        let m = &self.0;
        Mat2([[f(m[0][0]), f(m[0][1])], [f(m[1][0]), f(m[1][1])]])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|z| *z == ZERO)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    /// Inverse, or `None` when the determinant is exactly zero.
    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == ZERO {
            return None;
        }
        let m = &self.0;
        Some(Mat2::new(m[1][1], -m[0][1], -m[1][0], m[0][0]).scale(d.inv()))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.map(|z| -z)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<C64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: C64) -> Mat2 {
        self.scale(s)
    }
}

/// Coefficients of a matrix on `{I, σ1, σ2, σ3}`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PauliCoeffs {
    pub a0: C64,
    pub a1: C64,
    pub a2: C64,
    pub a3: C64,
}

impl PauliCoeffs {
    pub fn new(a0: C64, a1: C64, a2: C64, a3: C64) -> Self {
        PauliCoeffs { a0, a1, a2, a3 }
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    /// `a0·I + a1·σ1 + a2·σ2 + a3·σ3`, assembled entrywise.
    pub fn compose(&self) -> Mat2 {
        let PauliCoeffs { a0, a1, a2, a3 } = *self;
        // σ2 = [[0, -i], [i, 0]] so a2·σ2 contributes ∓i·a2 off the diagonal.
        let ia2 = I * a2;
        Mat2::new(a0 + a3, a1 - ia2, a1 + ia2, a0 - a3)
    }
}

/// The Pauli matrix `σk`; `k = 0` is the identity.
pub fn pauli(k: usize) -> Result<Mat2> {
    match k {
        0 => Ok(Mat2::IDENTITY),
        1 => Ok(Mat2::new(ZERO, ONE, ONE, ZERO)),
        2 => Ok(Mat2::new(ZERO, -I, I, ZERO)),
        3 => Ok(Mat2::new(ONE, ZERO, ZERO, -ONE)),
        _ => Err(Error::Argument(format!(
            "Pauli index must be 0..=3, got {k}"
        ))),
    }
}

#[cfg(test)]
pub(crate) fn sigma(k: usize) -> Mat2 {
    pauli(k).expect("index in range")
}

/// `MN − NM`.
pub fn commutator(m: &Mat2, n: &Mat2) -> Mat2 {
    *m * *n - *n * *m
}

/// Unique Pauli coefficients: `a0 = tr(M)/2`, `ak = tr(σk·M)/2`.
pub fn pauli_decompose(m: &Mat2) -> PauliCoeffs {
    let e = &m.0;
    let half = 0.5;
    PauliCoeffs {
        a0: (e[0][0] + e[1][1]) * half,
        a1: (e[0][1] + e[1][0]) * half,
        // tr(σ2·M) = -i·m10 + i·m01
        a2: (e[0][1] - e[1][0]) * I * half,
        a3: (e[0][0] - e[1][1]) * half,
    }
}

/// Direction of the constant conjugation by `G = [[1, -i], [1, i]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeDirection {
    /// `M ↦ G M G⁻¹`, the form written in the proposition.
    Forward,
    /// `M ↦ G⁻¹ M G`, the form that reproduces the displayed gauged pair.
    Inverse,
}

pub fn gauge_matrix() -> Mat2 {
    Mat2::new(ONE, -I, ONE, I)
}

/// `G⁻¹ = ½ [[1, 1], [i, -i]]`, written out so every entry is exact.
pub fn gauge_matrix_inverse() -> Mat2 {
    let h = C64::new(0.5, 0.0);
    let ih = C64::new(0.0, 0.5);
    Mat2::new(h, h, ih, -ih)
}

pub fn conjugate(m: &Mat2, direction: GaugeDirection) -> Mat2 {
    let (g, gi) = (gauge_matrix(), gauge_matrix_inverse());
    match direction {
        GaugeDirection::Forward => g * *m * gi,
        GaugeDirection::Inverse => gi * *m * g,
    }
}

/// The gauge map used throughout: `M ↦ G⁻¹ M G` (σ1→σ3, σ2→σ1, σ3→σ2).
pub fn gauge_conjugate(m: &Mat2) -> Mat2 {
    conjugate(m, GaugeDirection::Inverse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn levi_civita(a: usize, b: usize, k: usize) -> f64 {
        match (a, b, k) {
            (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
            (2, 1, 3) | (3, 2, 1) | (1, 3, 2) => -1.0,
            _ => 0.0,
        }
    }

    #[test]
    fn basis_matrices() {
        assert_eq!(pauli(0).unwrap(), Mat2::real(1.0, 0.0, 0.0, 1.0));
        assert_eq!(pauli(1).unwrap(), Mat2::real(0.0, 1.0, 1.0, 0.0));
        assert_eq!(pauli(2).unwrap(), Mat2::new(ZERO, -I, I, ZERO));
        assert_eq!(pauli(3).unwrap(), Mat2::real(1.0, 0.0, 0.0, -1.0));
        assert!(matches!(pauli(4), Err(Error::Argument(_))));
    }

    #[test]
    fn commutation_relations_are_exact() {
        for a in 1..=3 {
            for b in 1..=3 {
                let mut expected = Mat2::ZERO;
                for k in 1..=3 {
                    expected = expected + sigma(k).scale(I * 2.0 * levi_civita(a, b, k));
                }
                assert_eq!(commutator(&sigma(a), &sigma(b)), expected, "[s{a}, s{b}]");
            }
        }
        assert_eq!(commutator(&sigma(1), &sigma(2)), sigma(3).scale(I * 2.0));
        assert_eq!(commutator(&sigma(3), &sigma(1)), sigma(2).scale(I * 2.0));
        assert!(commutator(&sigma(1), &sigma(1)).is_zero());
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(pauli_decompose(&Mat2::IDENTITY), PauliCoeffs::new(ONE, ZERO, ZERO, ZERO));
        assert_eq!(pauli_decompose(&sigma(2)), PauliCoeffs::new(ZERO, ZERO, ONE, ZERO));
        // [[v, -λ], [λ, -v]] = v σ3 − iλ σ2
        let (v, lam) = (c(0.7, -0.2), c(1.3, 0.4));
        let m = Mat2::new(v, -lam, lam, -v);
        let p = pauli_decompose(&m);
        assert_eq!(p.a0, ZERO);
        assert_eq!(p.a1, ZERO);
        assert!((p.a2 - (-I * lam)).norm() < 1e-15);
        assert_eq!(p.a3, v);
    }

    #[test]
    fn gauge_permutes_pauli_directions() {
        assert_eq!(gauge_conjugate(&Mat2::IDENTITY), Mat2::IDENTITY);
        assert_eq!(gauge_conjugate(&sigma(1)), sigma(3));
        assert_eq!(gauge_conjugate(&sigma(2)), sigma(1));
        assert_eq!(gauge_conjugate(&sigma(3)), sigma(2));
        // The forward direction cycles the other way round.
        assert_eq!(conjugate(&sigma(1), GaugeDirection::Forward), sigma(2));
        assert_eq!(conjugate(&sigma(2), GaugeDirection::Forward), sigma(3));
        assert_eq!(conjugate(&sigma(3), GaugeDirection::Forward), sigma(1));
        assert_eq!(gauge_matrix() * gauge_matrix_inverse(), Mat2::IDENTITY);
    }

    #[test]
    fn three_applications_are_identity() {
        for k in 0..=3 {
            let s = sigma(k);
            let thrice = gauge_conjugate(&gauge_conjugate(&gauge_conjugate(&s)));
            assert!(thrice.max_abs_diff(&s) < 1e-14);
        }
    }

    fn arb_c64() -> impl Strategy<Value = C64> {
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| C64::new(a, b))
    }

    fn arb_mat() -> impl Strategy<Value = Mat2> {
        (arb_c64(), arb_c64(), arb_c64(), arb_c64()).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn commutator_is_antisymmetric(m in arb_mat(), n in arb_mat()) {
            prop_assert_eq!(commutator(&m, &n), -commutator(&n, &m));
        }

        // Dyadic entries keep every sum and halving exact.
        #[test]
        fn compose_inverts_decompose_exactly(p in proptest::array::uniform8(-512i32..512)) {
            let d = |k: usize| C64::new(f64::from(p[2 * k]) / 64.0, f64::from(p[2 * k + 1]) / 64.0);
            let coeffs = PauliCoeffs::new(d(0), d(1), d(2), d(3));
            prop_assert_eq!(pauli_decompose(&coeffs.compose()), coeffs);
            let m = Mat2::new(d(0), d(1), d(2), d(3));
            prop_assert_eq!(pauli_decompose(&m).compose(), m);
        }

        #[test]
        fn round_trip_within_one_rounding(m in arb_mat()) {
            let back = pauli_decompose(&m).compose();
            prop_assert!(back.max_abs_diff(&m) <= 4.0 * f64::EPSILON * m.max_abs());
        }

        #[test]
        fn gauge_keeps_trace_and_det(m in arb_mat()) {
            let g = gauge_conjugate(&m);
            let scale = 1.0 + m.max_abs() * m.max_abs();
            prop_assert!((g.trace() - m.trace()).norm() <= 1e-14 * scale);
            prop_assert!((g.det() - m.det()).norm() <= 1e-14 * scale);
        }

        #[test]
        fn gauge_is_an_algebra_homomorphism(m in arb_mat(), n in arb_mat()) {
            let lhs = commutator(&gauge_conjugate(&m), &gauge_conjugate(&n));
            let rhs = gauge_conjugate(&commutator(&m, &n));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
        }
    }
}
