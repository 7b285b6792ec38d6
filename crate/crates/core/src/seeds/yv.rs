//! Yablonskii–Vorob'ev polynomials in exact integer arithmetic.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest index accepted by [`yv_polynomial`] unless a caller asks for more.
pub const DEFAULT_MAX_INDEX: usize = 12;

/// Dense integer polynomial, coefficients from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|c| BigInt::from(*c)).collect())
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &IntPoly, k: usize| p.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
        IntPoly::new((0..n).map(|k| get(self, k) - get(other, k)).collect())
    }

    pub fn scale(&self, s: i64) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * BigInt::from(s)).collect())
    }

    /// Quotient of an exact division over the integers. A nonzero remainder
    /// or a non-integral quotient coefficient is an invariant failure.
    pub fn div_exact(&self, divisor: &IntPoly) -> Result<IntPoly> {
        if divisor.is_zero() {
            return Err(Error::Invariant("polynomial division by zero".into()));
        }
        let mut rem = self.coeffs.clone();
        let dlen = divisor.coeffs.len();
        if rem.len() < dlen {
            return if self.is_zero() {
                Ok(IntPoly::new(Vec::new()))
            } else {
                Err(Error::Invariant("divisor has larger degree than dividend".into()))
            };
        }
        let lead = divisor.coeffs.last().unwrap();
        let mut quot = vec![BigInt::zero(); rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dlen - 1];
            if (top % lead) != BigInt::zero() {
                return Err(Error::Invariant(format!(
                    "non-integral quotient coefficient at degree {k}"
                )));
            }
            let q = top / lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::Invariant("nonzero remainder in exact division".into()));
        }
        Ok(IntPoly::new(quot))
    }

    /// Coefficients as doubles; fails if any overflows.
    pub fn to_f64(&self) -> Result<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| {
                c.to_f64()
                    .filter(|f| f.is_finite())
                    .ok_or_else(|| Error::Range(format!("coefficient {c} does not fit a double")))
            })
            .collect()
    }

    pub fn leading_is_one(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// `Q_n` from `Q_0 = 1`, `Q_1 = x` and
/// `Q_{n+1} Q_{n−1} = x Q_n² − 4 (Q_n Q_n″ − Q_n′²)`, with `n` capped at
/// [`DEFAULT_MAX_INDEX`].
pub fn yv_polynomial(n: usize) -> Result<IntPoly> {
    yv_polynomial_with_max(n, DEFAULT_MAX_INDEX)
}

pub fn yv_polynomial_with_max(n: usize, max_index: usize) -> Result<IntPoly> {
    Ok(yv_sequence(n, max_index)?.pop().unwrap())
}

/// `[Q_0, …, Q_n]`.
pub fn yv_sequence(n: usize, max_index: usize) -> Result<Vec<IntPoly>> {
    if n > max_index {
        return Err(Error::Range(format!(
            "Yablonskii-Vorob'ev index {n} exceeds the configured maximum {max_index}"
        )));
    }
    let mut seq = vec![IntPoly::one(), IntPoly::x()];
    while seq.len() <= n {
        let k = seq.len() - 1;
        let (prev, q) = (&seq[k - 1], &seq[k]);
        let dq = q.derivative();
        let d2q = dq.derivative();
        let numer = IntPoly::x()
            .mul(&q.mul(q))
            .sub(&q.mul(&d2q).sub(&dq.mul(&dq)).scale(4));
        let next = numer.div_exact(prev)?;
        seq.push(next);
    }
    seq.truncate(n + 1);
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(yv_polynomial(0).unwrap(), IntPoly::one());
        assert_eq!(yv_polynomial(1).unwrap(), IntPoly::x());
    }

    #[test]
    fn hand_derived_checkpoints() {
        assert_eq!(yv_polynomial(2).unwrap(), IntPoly::from_i64(&[4, 0, 0, 1]));
        assert_eq!(
            yv_polynomial(3).unwrap(),
            IntPoly::from_i64(&[-80, 0, 0, 20, 0, 0, 1])
        );
        assert_eq!(yv_polynomial(3).unwrap().to_string(), "x^6 + 20x^3 - 80");
    }

    #[test]
    fn degrees_are_triangular_numbers() {
        let seq = yv_sequence(12, 12).unwrap();
        for (n, q) in seq.iter().enumerate() {
            assert_eq!(q.degree(), n * (n + 1) / 2, "deg Q_{n}");
            assert!(q.leading_is_one());
            assert!(q.to_f64().is_ok());
        }
    }

    #[test]
    fn index_cap_is_enforced() {
        assert!(matches!(yv_polynomial(13), Err(Error::Range(_))));
        assert!(yv_polynomial_with_max(13, 13).is_ok());
    }

    #[test]
    fn inexact_division_is_reported() {
        let p = IntPoly::from_i64(&[1, 0, 1]);
        let d = IntPoly::from_i64(&[0, 1]);
        assert!(matches!(p.div_exact(&d), Err(Error::Invariant(_))));
        let p = IntPoly::from_i64(&[0, 1]);
        let d = IntPoly::from_i64(&[0, 2]);
        assert!(matches!(p.div_exact(&d), Err(Error::Invariant(_))));
    }
}
