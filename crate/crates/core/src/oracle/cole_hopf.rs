//! Trusted solution for constant-diffusivity problems via the Cole-Hopf
//! transformation, which turns the viscous Burgers equation into linear
//! diffusion and yields the solution as a ratio of two integrals:
//!
//! ```text
//!            int (x - y) exp[ v(x,y) / eps ] dy
//! u(x, t) = ------------------------------------ ,
//!            t * int exp[ v(x,y) / eps ] dy
//! ```
//!
//! with `v(x,y) = -(x-y)^2 / (4t) - (1/2) int_0^y u0(z) dz`. For small eps
//! the integrands are razor-sharp peaks, so a direct quadrature is hopeless.
//! Two adjustments make it robust down to eps ~ 1e-4: integrate only over a
//! window around the maximiser `y*(x) = argmax_y v(x,y)`, and shift the
//! exponent by `C(x) = v(x, y*)` so the peak value is exactly one. The shift
//! cancels between numerator and denominator.

use super::{OracleError, TrustedSolution};
use crate::model::ProblemSpec;
use crate::quad;

/// Controls for the quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Half-width of the integration window around y*. The integrands decay
    /// like exp[-(y - y*)^2 / eps], so 5 is extremely safe.
    pub tol_window: f64,
    /// Sample count of the coarse argmax scan.
    pub opt_samples: usize,
    /// Relative tolerance of the adaptive quadrature.
    pub quad_rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tol_window: 5.0,
            opt_samples: 2001,
            quad_rel_tol: 1e-10,
        }
    }
}

/// The exponent kernel `v(x, y)`; eps is deliberately factored out so the
/// argmax is diffusivity-independent.
fn v_kernel(problem: &ProblemSpec, x: f64, y: f64, t: f64) -> f64 {
    -(x - y) * (x - y) / (4.0 * t) - 0.5 * problem.initial_condition().integral(y)
}

/// `y*(x) = argmax_y v(x, y)`: a dense scan over the domain widened by the
/// integration window brackets the global maximum (v can be multimodal near
/// a shock), then golden-section refines it to 1e-12.
pub fn argmax_v(x: f64, t: f64, problem: &ProblemSpec, cfg: &QuadratureConfig) -> f64 {
    assert!(t > 0.0, "argmax_v needs t > 0");
    let lo = problem.x_lo() - cfg.tol_window;
    let hi = problem.x_hi() + cfg.tol_window;
    let m = cfg.opt_samples.max(3);
    let step = (hi - lo) / (m - 1) as f64;
    let mut best_k = 0;
    let mut best_v = f64::NEG_INFINITY;
    for k in 0..m {
        let y = lo + k as f64 * step;
        let v = v_kernel(problem, x, y, t);
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }
    let mut a = lo + best_k.saturating_sub(1) as f64 * step;
    let mut b = (lo + (best_k + 1) as f64 * step).min(hi);

    // Golden-section maximisation on the bracketing interval.
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = v_kernel(problem, x, c, t);
    let mut fd = v_kernel(problem, x, d, t);
    while b - a > 1e-12 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = v_kernel(problem, x, c, t);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = v_kernel(problem, x, d, t);
        }
    }
    0.5 * (a + b)
}

/// Evaluate the trusted solution, with an extra test hook that perturbs the
/// peak shift C(x); the result must not depend on it.
pub(crate) fn cole_hopf_with_shift(
    x: f64,
    t: f64,
    problem: &ProblemSpec,
    cfg: &QuadratureConfig,
    extra_shift: f64,
) -> Result<f64, OracleError> {
    if t.is_nan() || t <= 0.0 {
        return Err(OracleError::NonPositiveTime(t));
    }
    let diff = problem.diffusivity();
    if !diff.is_constant() {
        return Err(OracleError::NonlinearDiffusivity(diff.eps2()));
    }
    let eps = diff.eps1();
    let y_star = argmax_v(x, t, problem, cfg);
    let shift = v_kernel(problem, x, y_star, t) + extra_shift;
    let kernel = |y: f64| ((v_kernel(problem, x, y, t) - shift) / eps).exp();
    let (a, b) = (y_star - cfg.tol_window, y_star + cfg.tol_window);

    // For small eps the integrands are needle peaks at y*; the peak-seeded
    // quadrature resolves them at any width.
    let den = quad::integrate_peaked(kernel, a, b, y_star, cfg.quad_rel_tol, 0.0)?;
    if !den.value.is_finite() || den.value <= 1e-290 {
        return Err(OracleError::DenominatorUnderflow);
    }
    // The numerator can vanish by symmetry, so give it an absolute floor set
    // by the denominator scale and the window size.
    let num_abs_tol = cfg.quad_rel_tol * den.value * cfg.tol_window;
    let num = quad::integrate_peaked(
        |y| (x - y) * kernel(y),
        a,
        b,
        y_star,
        cfg.quad_rel_tol,
        num_abs_tol,
    )?;
    Ok(num.value / (t * den.value))
}

/// Trusted field value u(x, t) for a constant-diffusivity problem.
pub fn cole_hopf_eval(
    x: f64,
    t: f64,
    problem: &ProblemSpec,
    cfg: &QuadratureConfig,
) -> Result<f64, OracleError> {
    cole_hopf_with_shift(x, t, problem, cfg, 0.0)
}

/// A [`TrustedSolution`] backed by the quadrature; pure, so concurrent calls
/// are safe.
pub struct QuadratureOracle {
    problem: ProblemSpec,
    cfg: QuadratureConfig,
}

impl QuadratureOracle {
    pub fn new(problem: ProblemSpec, cfg: QuadratureConfig) -> Result<Self, OracleError> {
        if !problem.diffusivity().is_constant() {
            return Err(OracleError::NonlinearDiffusivity(
                problem.diffusivity().eps2(),
            ));
        }
        Ok(Self { problem, cfg })
    }
}

impl TrustedSolution for QuadratureOracle {
    fn eval(&self, x: f64, t: f64) -> Result<f64, OracleError> {
        cole_hopf_eval(x, t, &self.problem, &self.cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        make_archetype, ArchetypeId, BoundaryCondition, Diffusivity, InitialCondition,
        ProblemSpec,
    };
    use std::f64::consts::PI;

    fn flat_problem() -> ProblemSpec {
        ProblemSpec::new(
            -PI,
            PI,
            InitialCondition::Zero,
            BoundaryCondition::Constant(0.0),
            BoundaryCondition::Constant(0.0),
            Diffusivity::constant(1e-3).unwrap(),
            3.0,
        )
        .unwrap()
    }

    #[test]
    fn zero_initial_data_peaks_at_x() {
        let problem = flat_problem();
        let cfg = QuadratureConfig::default();
        for x in [-1.0, 0.0, 0.3, 2.0] {
            let y = argmax_v(x, 0.7, &problem, &cfg);
            assert!((y - x).abs() < 1e-9, "y*({x}) = {y}");
        }
    }

    #[test]
    fn argmax_satisfies_the_first_order_condition() {
        let problem = make_archetype(ArchetypeId::M2);
        let cfg = QuadratureConfig::default();
        let y = argmax_v(1.0, 1.0, &problem, &cfg);
        let h = 1e-5;
        let dv = (v_kernel(&problem, 1.0, y + h, 1.0) - v_kernel(&problem, 1.0, y - h, 1.0))
            / (2.0 * h);
        assert!(dv.abs() <= 1e-8, "dv/dy = {dv} at y* = {y}");
    }

    #[test]
    fn symmetric_kernel_maximum_dominates_the_scan() {
        // At x = 0 with odd u0, v(0, .) is even: the returned maximiser must
        // beat every scanned candidate.
        let problem = make_archetype(ArchetypeId::M1);
        let cfg = QuadratureConfig::default();
        let y = argmax_v(0.0, 2.0, &problem, &cfg);
        let vy = v_kernel(&problem, 0.0, y, 2.0);
        for k in 0..=400 {
            let probe = -4.0 + 8.0 * k as f64 / 400.0;
            assert!(vy >= v_kernel(&problem, 0.0, probe, 2.0) - 1e-12);
        }
        // The mirror image is a maximiser too.
        let v_mirror = v_kernel(&problem, 0.0, -y, 2.0);
        assert!((vy - v_mirror).abs() < 1e-10);
    }

    #[test]
    fn odd_data_gives_odd_solutions() {
        let cfg = QuadratureConfig::default();
        let m1 = make_archetype(ArchetypeId::M1);
        for t in [0.5, 3.0] {
            let u0 = cole_hopf_eval(0.0, t, &m1, &cfg).unwrap();
            assert!(u0.abs() <= 1e-9, "u(0, {t}) = {u0}");
        }
        let m2 = make_archetype(ArchetypeId::M2);
        for (x, t) in [(0.5, 0.8), (1.5, 2.0), (2.5, 3.0)] {
            let up = cole_hopf_eval(x, t, &m2, &cfg).unwrap();
            let um = cole_hopf_eval(-x, t, &m2, &cfg).unwrap();
            assert!((up + um).abs() <= 1e-8, "u({x},{t})={up}, mirrored={um}");
        }
    }

    #[test]
    fn peak_shift_cancels_exactly() {
        let problem = make_archetype(ArchetypeId::M2);
        let cfg = QuadratureConfig::default();
        let base = cole_hopf_with_shift(0.8, 1.3, &problem, &cfg, 0.0).unwrap();
        for shift in [-0.2, 0.2] {
            let shifted = cole_hopf_with_shift(0.8, 1.3, &problem, &cfg, shift).unwrap();
            assert!(
                (base - shifted).abs() <= 1e-9,
                "shift {shift}: {base} vs {shifted}"
            );
        }
    }

    #[test]
    fn doubling_the_window_changes_nothing() {
        let problem = make_archetype(ArchetypeId::M1);
        let narrow = QuadratureConfig::default();
        let wide = QuadratureConfig {
            tol_window: 10.0,
            ..narrow
        };
        for (x, t) in [(0.7, 0.5), (-1.9, 2.0), (0.05, 3.0)] {
            let a = cole_hopf_eval(x, t, &problem, &narrow).unwrap();
            let b = cole_hopf_eval(x, t, &problem, &wide).unwrap();
            assert!((a - b).abs() < 1e-9, "window sensitivity at ({x}, {t})");
        }
    }

    #[test]
    fn invalid_queries_are_rejected() {
        let cfg = QuadratureConfig::default();
        let m1 = make_archetype(ArchetypeId::M1);
        assert!(matches!(
            cole_hopf_eval(0.0, 0.0, &m1, &cfg),
            Err(OracleError::NonPositiveTime(_))
        ));
        let m3 = make_archetype(ArchetypeId::M3);
        assert!(matches!(
            cole_hopf_eval(0.0, 1.0, &m3, &cfg),
            Err(OracleError::NonlinearDiffusivity(_))
        ));
        assert!(QuadratureOracle::new(m3, cfg).is_err());
    }
}
