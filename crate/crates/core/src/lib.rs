//! Multiscale simulation of viscous Burgers-type equations with the patch
//! dynamics scheme.
//!
//! The full PDE is simulated only on small, well-separated spatial patches.
//! Each patch carries a fine micro-mesh; the patches are closed by
//! prescribing their edge values from polynomial interpolation of the
//! macroscale samples (one centre value per standard patch). A macroscale
//! shock is handled by a single *double patch*: a patch wide enough to
//! contain the whole microscale transition layer, carrying two macroscale
//! nodes ("shock nodes") on either side of the layer. Interpolation stencils
//! never reach across the shock, so the two smooth macro-domains communicate
//! only through the double patch's interior.
//!
//! Modules:
//! - [`model`]: the PDE, its diffusivity law, and the archetype problems.
//! - [`mesh`]: patch geometry and the built-in archetype layouts.
//! - [`coupling`]: Lagrange stencils that set every patch's edge values.
//! - [`dynamics`]: the micro-mesh right-hand side and RK4 time integration.
//! - [`oracle`]: trusted reference solutions (Cole-Hopf quadrature and a
//!   brute-force fine-grid solver).
//! - [`analysis`]: error measurement against oracles and convergence-order
//!   studies.
//! - [`quad`]: adaptive Gauss-Kronrod quadrature used by the oracle.

pub mod analysis;
pub mod coupling;
pub mod dynamics;
pub mod mesh;
pub mod model;
pub mod oracle;
pub mod quad;

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "linspace needs at least two points");
    let step = (hi - lo) / (count - 1) as f64;
    (0..count)
        .map(|k| if k == count - 1 { hi } else { lo + k as f64 * step })
        .collect()
}
