//! Trusted reference solutions used to quantify patch-scheme error:
//! a Cole-Hopf quadrature for constant diffusivity, and a brute-force
//! fine-grid finite-difference solver for everything else. The two overlap
//! on constant-diffusivity problems, which gives an independent cross-check
//! of both.

mod cole_hopf;
mod fine_grid;

pub use cole_hopf::{argmax_v, cole_hopf_eval, QuadratureConfig, QuadratureOracle};
pub use fine_grid::{
    brute_force_eval, brute_force_solve, FineGridConfig, FineGridOracle, FineGridSolution,
};

use crate::quad::QuadError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("the quadrature solution is only defined for t > 0 (got t={0})")]
    NonPositiveTime(f64),
    #[error("the Cole-Hopf transform needs constant diffusivity, but eps2 = {0}")]
    NonlinearDiffusivity(f64),
    #[error("quadrature denominator underflowed; the peak shift should make this impossible")]
    DenominatorUnderflow,
    #[error("fine-grid step dt={dt} violates the diffusive stability bound {bound}")]
    UnstableStep { dt: f64, bound: f64 },
    #[error("fine-grid solver needs at least 3 points (got {0})")]
    TooFewPoints(usize),
    #[error("snapshot times must be finite, strictly increasing and within [0, t_final]")]
    BadSnapshotTimes,
    #[error("query ({x}, {t}) lies outside the solved region")]
    OutOfRange { x: f64, t: f64 },
    #[error("fine-grid solution blew up at t={time}, grid point {index} (|u| = {value})")]
    FineGridBlowUp { time: f64, index: usize, value: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Anything able to evaluate the reference field u(x, t) at arbitrary points.
pub trait TrustedSolution {
    fn eval(&self, x: f64, t: f64) -> Result<f64, OracleError>;
}

/// Adapter so plain closures can serve as oracles in tests and studies.
pub struct FnOracle<F: Fn(f64, f64) -> f64>(pub F);

impl<F: Fn(f64, f64) -> f64> TrustedSolution for FnOracle<F> {
    fn eval(&self, x: f64, t: f64) -> Result<f64, OracleError> {
        Ok((self.0)(x, t))
    }
}
