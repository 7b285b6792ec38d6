//! Verification laboratory for the Painlevé II equation
//! `v″ = 2v³ + xv − α`: Lax pairs and their zero-curvature residual, the
//! gauged linear system, Darboux and Wronskian constructions, and a residual
//! oracle that judges every candidate they produce.

pub mod cli;
pub mod darboux;
pub mod error;
pub mod grid;
pub mod linear_system;
pub mod lax;
pub mod pauli;
pub mod potential;
pub mod report;
pub mod seeds;
pub mod selftest;
pub mod wronskian;

pub use error::{Error, Result};
pub use grid::Grid;
pub use lax::{LaurentMat, LaxFrame, PiiParams};
pub use pauli::{Mat2, PauliCoeffs, C64};
pub use potential::{Jet, Potential, Samples, SmoothPotential};
