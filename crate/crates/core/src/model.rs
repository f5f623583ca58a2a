//! Problem definitions: the modified Burgers equation
//! `u_t + u u_x = eps(u) u_xx` on `x_lo < x < x_hi` with Dirichlet boundary
//! data, together with the four built-in archetype problems M1..M4.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Tolerance for the initial condition matching the boundary data at t = 0.
const IC_BC_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("diffusivity needs eps1 > 0 and eps2 >= 0 (got eps1={eps1}, eps2={eps2})")]
    InvalidDiffusivity { eps1: f64, eps2: f64 },
    #[error("invalid problem: x_lo={x_lo}, x_hi={x_hi}, t_final={t_final}")]
    InvalidDomain { x_lo: f64, x_hi: f64, t_final: f64 },
    #[error(
        "initial condition disagrees with the {side} boundary value at t=0: \
         u0 gives {ic_value}, boundary gives {bc_value}"
    )]
    InconsistentBoundary {
        side: &'static str,
        ic_value: f64,
        bc_value: f64,
    },
    #[error("{0} has nonlinear diffusivity, so no closed-form initial integral is available")]
    NoClosedFormIntegral(ArchetypeId),
    #[error("unknown archetype name `{0}` (expected one of M1, M2, M3, M4)")]
    UnknownArchetype(String),
}

/// Diffusion law `eps(u) = eps1 + eps2 |u|`.
///
/// `eps1 > 0` keeps the microscale strictly parabolic; `eps2 > 0` makes the
/// equation impossible to write in conservation form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diffusivity {
    eps1: f64,
    eps2: f64,
}

impl Diffusivity {
    pub fn new(eps1: f64, eps2: f64) -> Result<Self, ModelError> {
        if !eps1.is_finite() || !eps2.is_finite() || eps1 <= 0.0 || eps2 < 0.0 {
            return Err(ModelError::InvalidDiffusivity { eps1, eps2 });
        }
        Ok(Self { eps1, eps2 })
    }

    pub fn constant(eps: f64) -> Result<Self, ModelError> {
        Self::new(eps, 0.0)
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    pub fn is_constant(&self) -> bool {
        self.eps2 == 0.0
    }

    #[inline]
    pub fn evaluate(&self, u: f64) -> f64 {
        self.eps1 + self.eps2 * u.abs()
    }
}

/// `ln(cosh(a))` without overflowing for large `|a|`:
/// `cosh(a) = e^{|a|} (1 + e^{-2|a|}) / 2`.
fn ln_cosh(a: f64) -> f64 {
    let a = a.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// The supported family of initial conditions.
///
/// All of them vanish at x = +-pi, so they are compatible with the archetype
/// boundary data u = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// `(x/pi - tanh(2x/eps)) / tanh(2pi/eps)`: a linear ramp carrying a
    /// width-`eps` transition layer at x = 0.
    TanhRamp { eps: f64 },
    /// `amplitude * sin(x)`.
    Sine { amplitude: f64 },
    /// Identically zero.
    Zero,
}

impl InitialCondition {
    pub fn evaluate(&self, x: f64) -> f64 {
        match *self {
            InitialCondition::TanhRamp { eps } => {
                (x / PI - (2.0 * x / eps).tanh()) / (2.0 * PI / eps).tanh()
            }
            InitialCondition::Sine { amplitude } => amplitude * x.sin(),
            InitialCondition::Zero => 0.0,
        }
    }

    /// Closed-form antiderivative `int_0^y u0(z) dz`.
    pub fn integral(&self, y: f64) -> f64 {
        match *self {
            InitialCondition::TanhRamp { eps } => {
                (y * y / (2.0 * PI) - 0.5 * eps * ln_cosh(2.0 * y / eps))
                    / (2.0 * PI / eps).tanh()
            }
            InitialCondition::Sine { amplitude } => amplitude * (1.0 - y.cos()),
            InitialCondition::Zero => 0.0,
        }
    }
}

/// Dirichlet boundary data as a function of time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Constant(f64),
}

impl BoundaryCondition {
    pub fn value(&self, _t: f64) -> f64 {
        match *self {
            BoundaryCondition::Constant(c) => c,
        }
    }
}

/// One instance of the PDE: domain, diffusivity, initial and boundary data,
/// and the final simulation time.
///
/// Immutable after construction; freely shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    x_lo: f64,
    x_hi: f64,
    initial: InitialCondition,
    bc_left: BoundaryCondition,
    bc_right: BoundaryCondition,
    diffusivity: Diffusivity,
    final_time: f64,
}

impl ProblemSpec {
    pub fn new(
        x_lo: f64,
        x_hi: f64,
        initial: InitialCondition,
        bc_left: BoundaryCondition,
        bc_right: BoundaryCondition,
        diffusivity: Diffusivity,
        final_time: f64,
    ) -> Result<Self, ModelError> {
        if !x_lo.is_finite()
            || !x_hi.is_finite()
            || x_lo >= x_hi
            || !final_time.is_finite()
            || final_time <= 0.0
        {
            return Err(ModelError::InvalidDomain {
                x_lo,
                x_hi,
                t_final: final_time,
            });
        }
        let ic_lo = initial.evaluate(x_lo);
        let bc_lo = bc_left.value(0.0);
        if (ic_lo - bc_lo).abs() > IC_BC_TOL {
            return Err(ModelError::InconsistentBoundary {
                side: "left",
                ic_value: ic_lo,
                bc_value: bc_lo,
            });
        }
        let ic_hi = initial.evaluate(x_hi);
        let bc_hi = bc_right.value(0.0);
        if (ic_hi - bc_hi).abs() > IC_BC_TOL {
            return Err(ModelError::InconsistentBoundary {
                side: "right",
                ic_value: ic_hi,
                bc_value: bc_hi,
            });
        }
        Ok(Self {
            x_lo,
            x_hi,
            initial,
            bc_left,
            bc_right,
            diffusivity,
            final_time,
        })
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    pub fn x_hi(&self) -> f64 {
        self.x_hi
    }

    pub fn initial_condition(&self) -> InitialCondition {
        self.initial
    }

    pub fn initial_value(&self, x: f64) -> f64 {
        self.initial.evaluate(x)
    }

    pub fn bc_left(&self) -> BoundaryCondition {
        self.bc_left
    }

    pub fn bc_right(&self) -> BoundaryCondition {
        self.bc_right
    }

    /// Boundary values `(left, right)` at time t.
    pub fn boundary_values(&self, t: f64) -> (f64, f64) {
        (self.bc_left.value(t), self.bc_right.value(t))
    }

    pub fn diffusivity(&self) -> Diffusivity {
        self.diffusivity
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    /// Same problem with a different final time.
    pub fn with_final_time(&self, final_time: f64) -> Result<Self, ModelError> {
        Self::new(
            self.x_lo,
            self.x_hi,
            self.initial,
            self.bc_left,
            self.bc_right,
            self.diffusivity,
            final_time,
        )
    }
}

/// The four built-in archetype problems.
///
/// M1/M3 start from the tanh ramp (a shock present from t = 0); M2/M4 start
/// from `-sin x` and steepen into a shock at t ~ 1.2. M1/M2 have constant
/// diffusivity 0.001; M3/M4 use the nonlinear `0.001 + 0.05 |u|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArchetypeId {
    M1,
    M2,
    M3,
    M4,
}

impl ArchetypeId {
    pub const ALL: [ArchetypeId; 4] = [
        ArchetypeId::M1,
        ArchetypeId::M2,
        ArchetypeId::M3,
        ArchetypeId::M4,
    ];
}

impl fmt::Display for ArchetypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArchetypeId::M1 => "M1",
            ArchetypeId::M2 => "M2",
            ArchetypeId::M3 => "M3",
            ArchetypeId::M4 => "M4",
        };
        f.write_str(s)
    }
}

impl FromStr for ArchetypeId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "M1" => Ok(ArchetypeId::M1),
            "M2" => Ok(ArchetypeId::M2),
            "M3" => Ok(ArchetypeId::M3),
            "M4" => Ok(ArchetypeId::M4),
            other => Err(ModelError::UnknownArchetype(other.to_string())),
        }
    }
}

/// The exact problem instance of the given archetype.
///
/// All four live on `-pi < x < pi` with u = 0 at both boundaries. The default
/// final time is 3, long enough to cover the M2/M4 shock formation at
/// t ~ 1.2 with margin; use [`ProblemSpec::with_final_time`] for other
/// horizons.
pub fn make_archetype(id: ArchetypeId) -> ProblemSpec {
    let eps1 = 1e-3;
    let (diffusivity, initial) = match id {
        ArchetypeId::M1 => (
            Diffusivity::constant(eps1),
            InitialCondition::TanhRamp { eps: eps1 },
        ),
        ArchetypeId::M2 => (
            Diffusivity::constant(eps1),
            InitialCondition::Sine { amplitude: -1.0 },
        ),
        ArchetypeId::M3 => (
            Diffusivity::new(eps1, 0.05),
            InitialCondition::TanhRamp { eps: eps1 },
        ),
        ArchetypeId::M4 => (
            Diffusivity::new(eps1, 0.05),
            InitialCondition::Sine { amplitude: -1.0 },
        ),
    };
    ProblemSpec::new(
        -PI,
        PI,
        initial,
        BoundaryCondition::Constant(0.0),
        BoundaryCondition::Constant(0.0),
        diffusivity.expect("archetype diffusivities are valid"),
        3.0,
    )
    .expect("archetype presets are internally consistent")
}

/// Closed-form `int_0^y u0(z) dz` for the constant-diffusivity archetypes.
///
/// Only M1 and M2 feed the Cole-Hopf quadrature oracle, which is the sole
/// consumer of this integral; the nonlinear archetypes are rejected.
pub fn initial_integral(id: ArchetypeId, y: f64) -> Result<f64, ModelError> {
    match id {
        ArchetypeId::M1 | ArchetypeId::M2 => {
            Ok(make_archetype(id).initial_condition().integral(y))
        }
        ArchetypeId::M3 | ArchetypeId::M4 => Err(ModelError::NoClosedFormIntegral(id)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain recursive Simpson refinement, independent of the quad module.
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, tol: f64) -> f64 {
        let m = 0.5 * (a + b);
        let h = b - a;
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let whole = h / 6.0 * (fa + 4.0 * fm + fb);
        let left = h / 12.0 * (fa + 4.0 * flm + fm);
        let right = h / 12.0 * (fm + 4.0 * frm + fb);
        if (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            simpson(f, a, m, fa, flm, fm, 0.5 * tol) + simpson(f, m, b, fm, frm, fb, 0.5 * tol)
        }
    }

    fn integrate_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
        let m = 0.5 * (a + b);
        simpson(&f, a, b, f(a), f(m), f(b), tol)
    }

    #[test]
    fn m3_uses_nonlinear_diffusivity() {
        let p = make_archetype(ArchetypeId::M3);
        assert_eq!(p.diffusivity().eps1(), 1e-3);
        assert_eq!(p.diffusivity().eps2(), 0.05);
        assert!((p.diffusivity().evaluate(2.0) - 0.101).abs() < 1e-15);
    }

    #[test]
    fn m2_initial_values() {
        let p = make_archetype(ArchetypeId::M2);
        assert!(p.initial_value(0.0).abs() < 1e-15);
        assert!((p.initial_value(-PI / 2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn all_archetype_initial_conditions_are_odd() {
        for id in ArchetypeId::ALL {
            let p = make_archetype(id);
            for k in 1..=1000 {
                let x = PI * k as f64 / 1000.0;
                let asym = (p.initial_value(-x) + p.initial_value(x)).abs();
                assert!(asym <= 1e-12, "{id}: u0 asymmetry {asym} at x={x}");
            }
        }
    }

    #[test]
    fn archetypes_match_their_boundary_data() {
        for id in ArchetypeId::ALL {
            let p = make_archetype(id);
            assert!(p.initial_value(p.x_lo()).abs() <= 1e-8);
            assert!(p.initial_value(p.x_hi()).abs() <= 1e-8);
            assert_eq!(p.final_time(), 3.0);
        }
    }

    #[test]
    fn initial_integral_closed_forms() {
        assert_eq!(initial_integral(ArchetypeId::M2, 0.0).unwrap(), 0.0);
        assert!((initial_integral(ArchetypeId::M2, PI).unwrap() + 2.0).abs() < 1e-14);
        assert!(initial_integral(ArchetypeId::M3, 1.0).is_err());
        assert!(initial_integral(ArchetypeId::M4, 1.0).is_err());
    }

    #[test]
    fn m1_integral_matches_numerical_quadrature() {
        let u0 = make_archetype(ArchetypeId::M1).initial_condition();
        let numeric = integrate_simpson(|z| u0.evaluate(z), 0.0, 1.0, 1e-13);
        let closed = initial_integral(ArchetypeId::M1, 1.0).unwrap();
        assert!(
            (numeric - closed).abs() <= 1e-10,
            "closed form {closed} vs quadrature {numeric}"
        );
    }

    #[test]
    fn initial_integral_is_even() {
        for id in [ArchetypeId::M1, ArchetypeId::M2] {
            for k in 1..=50 {
                let y = 3.2 * k as f64 / 50.0;
                let a = initial_integral(id, y).unwrap();
                let b = initial_integral(id, -y).unwrap();
                assert!((a - b).abs() <= 1e-12, "{id}: integral not even at y={y}");
            }
        }
    }

    #[test]
    fn diffusivity_stays_above_eps1() {
        let d = Diffusivity::new(1e-3, 0.05).unwrap();
        for k in 0..=400 {
            let u = -2.0 + 4.0 * k as f64 / 400.0;
            assert!(d.evaluate(u) >= d.eps1());
        }
        assert!(Diffusivity::new(0.0, 0.0).is_err());
        assert!(Diffusivity::new(1e-3, -0.1).is_err());
        assert!(Diffusivity::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn inconsistent_boundary_rejected() {
        let err = ProblemSpec::new(
            -PI,
            PI,
            InitialCondition::Sine { amplitude: 1.0 },
            BoundaryCondition::Constant(0.5),
            BoundaryCondition::Constant(0.0),
            Diffusivity::constant(1e-3).unwrap(),
            1.0,
        );
        assert!(matches!(
            err,
            Err(ModelError::InconsistentBoundary { side: "left", .. })
        ));
    }

    #[test]
    fn ln_cosh_is_overflow_safe() {
        assert!((ln_cosh(0.5) - 0.5_f64.cosh().ln()).abs() < 1e-15);
        assert!((ln_cosh(-3.0) - 3.0_f64.cosh().ln()).abs() < 1e-14);
        // 2y/eps with eps = 1e-4 easily reaches tens of thousands.
        let big = ln_cosh(20000.0);
        assert!(big.is_finite());
        assert!((big - (20000.0 - LN_2)).abs() < 1e-12);
    }

    #[test]
    fn archetype_names_round_trip() {
        for id in ArchetypeId::ALL {
            assert_eq!(id.to_string().parse::<ArchetypeId>().unwrap(), id);
        }
        assert!("M9".parse::<ArchetypeId>().is_err());
    }
}
