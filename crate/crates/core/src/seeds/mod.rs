//! Ground-truth PII solutions and the residual oracle that judges every
//! constructed candidate.
//!
//! Conventions: the residual is `R = v″ − 2v³ − xv + α`, and the rational
//! family is `v_n = d/dx ln(Q_n/Q_{n−1})` with `α = n`. Flipping `v → −v`
//! flips `α → −α`.

mod airy;
mod rational;
mod residual;
mod yv;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use airy::{riccati_airy_solution, AiryRiccati};
pub use rational::{rational_pii_solution, RationalSolution};
pub use residual::{pii_residual, residual_from_samples, ResidualReport};
pub use yv::{yv_polynomial, yv_polynomial_with_max, yv_sequence, IntPoly, DEFAULT_MAX_INDEX};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::pauli::C64;
use crate::potential::{SmoothPotential, ZeroPotential};

/// Points whose estimated distance to a pole, `|D/D′|` for the defining
/// denominator `D`, is below this are masked.
pub const DEFAULT_POLE_RADIUS: f64 = 1e-2;

/// JSON/CLI description of a seed potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SeedDescriptor {
    Zero,
    Rational {
        n: usize,
    },
    /// `ic = [[re φ, im φ], [re φ′, im φ′]]` at the left end of the run grid.
    Airy {
        ic: [[f64; 2]; 2],
    },
}

impl SeedDescriptor {
    pub fn default_airy() -> Self {
        SeedDescriptor::Airy {
            ic: [[1.0, 0.0], [0.0, 0.0]],
        }
    }

    /// Parses `zero`, `rational:n`, `airy` or `file:path`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "zero" {
            return Ok(SeedDescriptor::Zero);
        }
        if text == "airy" {
            return Ok(SeedDescriptor::default_airy());
        }
        if let Some(n) = text.strip_prefix("rational:") {
            let n = n
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad rational index {n:?}: {e}")))?;
            return Ok(SeedDescriptor::Rational { n });
        }
        if let Some(path) = text.strip_prefix("file:") {
            return SeedDescriptor::from_file(&PathBuf::from(path));
        }
        Err(Error::Parse(format!(
            "seed must be zero, rational:n, airy or file:path, got {text:?}"
        )))
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("seed descriptors serialize")
    }

    pub fn label(&self) -> String {
        match self {
            SeedDescriptor::Zero => "zero".into(),
            SeedDescriptor::Rational { n } => format!("rational:{n}"),
            SeedDescriptor::Airy { .. } => "airy".into(),
        }
    }

    pub fn build(&self, grid: &Grid) -> Result<Box<dyn SmoothPotential>> {
        Ok(match self {
            SeedDescriptor::Zero => Box::new(ZeroPotential),
            SeedDescriptor::Rational { n } => Box::new(rational_pii_solution(*n)?),
            SeedDescriptor::Airy { ic } => {
                let c = |p: [f64; 2]| C64::new(p[0], p[1]);
                Box::new(riccati_airy_solution([c(ic[0]), c(ic[1])], grid)?)
            }
        })
    }
}
