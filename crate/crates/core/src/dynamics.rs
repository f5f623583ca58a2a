//! The microscale right-hand side inside each patch and the method-of-lines
//! time integration of the fully coupled patch system.
//!
//! Each patch evolves the second-order centred discretisation of
//! `u_t + u u_x = eps(u) u_xx` at its 2n-1 interior points. The edge points
//! are algebraically slaved: before every derivative evaluation (every RK
//! stage) they are overwritten with the interpolated coupling values, and
//! they carry zero time derivative.

use crate::coupling::{CouplingError, CouplingStencils, MacroSample};
use crate::mesh::{MacroNode, NodeRole, PatchLayout};
use crate::model::{Diffusivity, ProblemSpec};
use thiserror::Error;

pub const DEFAULT_SAFETY: f64 = 0.5;
pub const DEFAULT_BLOWUP_BOUND: f64 = 10.0;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(
        "field value {value} in patch {patch} at t={time} exceeded the blow-up bound {bound}; run aborted"
    )]
    BlowUp {
        time: f64,
        patch: usize,
        value: f64,
        bound: f64,
    },
    #[error("non-finite field value in patch {patch} at t={time}; run aborted")]
    NonFinite { time: f64, patch: usize },
    #[error("invalid stepper configuration: {0}")]
    BadStepper(String),
    #[error("layout domain [{layout_lo}, {layout_hi}] does not match the problem domain [{problem_lo}, {problem_hi}]")]
    DomainMismatch {
        layout_lo: f64,
        layout_hi: f64,
        problem_lo: f64,
        problem_hi: f64,
    },
    #[error(transparent)]
    Coupling(#[from] CouplingError),
}

/// The instantaneous state of a run: the time and, per patch, the field
/// values on all 2n+1 micro points (storage index i+n for micro index i).
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    time: f64,
    fields: Vec<Vec<f64>>,
}

impl SimulationState {
    /// The initial condition sampled on every micro point.
    pub fn initial(problem: &ProblemSpec, layout: &PatchLayout) -> Self {
        let fields = layout
            .patches()
            .iter()
            .map(|p| p.micro_positions().map(|x| problem.initial_value(x)).collect())
            .collect();
        Self { time: 0.0, fields }
    }

    /// A state from explicit per-patch field values.
    pub fn new(time: f64, fields: Vec<Vec<f64>>) -> Self {
        Self { time, fields }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn fields(&self) -> &[Vec<f64>] {
        &self.fields
    }

    pub fn field(&self, patch: usize) -> &[f64] {
        &self.fields[patch]
    }
}

/// Fixed-step integrator configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub safety: f64,
    pub output_times: Vec<f64>,
    pub blowup_bound: f64,
}

impl StepperConfig {
    /// Explicit step size.
    pub fn fixed(dt: f64, output_times: Vec<f64>) -> Result<Self, DynamicsError> {
        let cfg = Self {
            dt,
            safety: 1.0,
            output_times,
            blowup_bound: DEFAULT_BLOWUP_BOUND,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Stability-derived step size, scaled by `safety`.
    pub fn auto(
        problem: &ProblemSpec,
        layout: &PatchLayout,
        safety: f64,
        output_times: Vec<f64>,
    ) -> Result<Self, DynamicsError> {
        if !(safety > 0.0 && safety <= 1.0) {
            return Err(DynamicsError::BadStepper(format!(
                "safety factor must lie in (0, 1], got {safety}"
            )));
        }
        let cfg = Self {
            dt: default_dt(layout, problem, safety),
            safety,
            output_times,
            blowup_bound: DEFAULT_BLOWUP_BOUND,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(DynamicsError::BadStepper(format!(
                "dt must be positive and finite, got {}",
                self.dt
            )));
        }
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(DynamicsError::BadStepper(format!(
                "safety factor must lie in (0, 1], got {}",
                self.safety
            )));
        }
        if !self.blowup_bound.is_finite() || self.blowup_bound <= 0.0 {
            return Err(DynamicsError::BadStepper(format!(
                "blow-up bound must be positive, got {}",
                self.blowup_bound
            )));
        }
        let ordered = self.output_times.windows(2).all(|w| w[0] < w[1]);
        let in_range = self
            .output_times
            .iter()
            .all(|t| t.is_finite() && *t >= 0.0);
        if !ordered || !in_range {
            return Err(DynamicsError::BadStepper(
                "output times must be finite, non-negative and strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// Time derivative of one interior micro point:
/// `eps(u_i) (u_{i+1} - 2 u_i + u_{i-1}) / d^2 - u_i (u_{i+1} - u_{i-1}) / (2d)`.
#[inline]
pub fn micro_rhs(u_prev: f64, u_here: f64, u_next: f64, d: f64, diff: Diffusivity) -> f64 {
    diff.evaluate(u_here) * (u_next - 2.0 * u_here + u_prev) / (d * d)
        - u_here * (u_next - u_prev) / (2.0 * d)
}

/// Largest |u| the run should encounter, estimated from the initial condition
/// (sampled on a fine grid) and the boundary data.
pub fn field_bound_estimate(problem: &ProblemSpec) -> f64 {
    let samples = 4096;
    let (lo, hi) = (problem.x_lo(), problem.x_hi());
    let mut bound: f64 = 0.0;
    for k in 0..=samples {
        let x = lo + (hi - lo) * k as f64 / samples as f64;
        bound = bound.max(problem.initial_value(x).abs());
    }
    let (bl, br) = problem.boundary_values(0.0);
    bound.max(bl.abs()).max(br.abs())
}

/// Explicit-step bound for one micro spacing: the smaller of the diffusive
/// limit `dx^2 / (2 eps_max)` and the advective limit `dx / u_bound`.
pub fn stable_step_bound(dx: f64, eps_max: f64, u_bound: f64) -> f64 {
    let diffusive = dx * dx / (2.0 * eps_max);
    if u_bound > 0.0 {
        diffusive.min(dx / u_bound)
    } else {
        diffusive
    }
}

/// Stability-derived fixed step: `safety` times the tightest patch bound.
pub fn default_dt(layout: &PatchLayout, problem: &ProblemSpec, safety: f64) -> f64 {
    let u_bound = field_bound_estimate(problem);
    let eps_max = problem.diffusivity().evaluate(u_bound);
    let tightest = layout
        .patches()
        .iter()
        .map(|p| stable_step_bound(p.dx(), eps_max, u_bound))
        .fold(f64::INFINITY, f64::min);
    safety * tightest
}

/// Read the macroscale sample out of a state: centre values from standard
/// patches, shock-node values from the double patch's micro points at the
/// shock-node positions.
pub fn extract_macro_sample(state: &SimulationState, layout: &PatchLayout) -> MacroSample {
    let nodes = layout.macro_nodes();
    let values = macro_values(state.fields(), layout, &nodes);
    MacroSample::from_layout_values(&nodes, values)
}

fn macro_values(fields: &[Vec<f64>], layout: &PatchLayout, nodes: &[MacroNode]) -> Vec<f64> {
    nodes
        .iter()
        .map(|node| {
            let patch = &layout.patches()[node.patch];
            let n = patch.n();
            let idx = match (node.role, patch.kind()) {
                (NodeRole::Centre, _) => n,
                (NodeRole::ShockLeft, crate::mesh::PatchKind::Double { left_inset, .. }) => {
                    left_inset
                }
                (NodeRole::ShockRight, crate::mesh::PatchKind::Double { right_inset, .. }) => {
                    2 * n - right_inset
                }
                _ => unreachable!("shock nodes only belong to double patches"),
            };
            fields[node.patch][idx]
        })
        .collect()
}

/// The coupled patch system with its stencils prepared once.
struct Engine<'a> {
    problem: &'a ProblemSpec,
    layout: &'a PatchLayout,
    stencils: CouplingStencils,
    nodes: Vec<MacroNode>,
}

impl<'a> Engine<'a> {
    fn new(problem: &'a ProblemSpec, layout: &'a PatchLayout) -> Result<Self, DynamicsError> {
        if layout.x_lo() != problem.x_lo() || layout.x_hi() != problem.x_hi() {
            return Err(DynamicsError::DomainMismatch {
                layout_lo: layout.x_lo(),
                layout_hi: layout.x_hi(),
                problem_lo: problem.x_lo(),
                problem_hi: problem.x_hi(),
            });
        }
        Ok(Self {
            problem,
            layout,
            stencils: CouplingStencils::build(layout)?,
            nodes: layout.macro_nodes(),
        })
    }

    /// Overwrite every patch's edge points with the coupled values at time t.
    fn slave_edges(&self, fields: &mut [Vec<f64>], t: f64) {
        let values = macro_values(fields, self.layout, &self.nodes);
        let sample = MacroSample::from_layout_values(&self.nodes, values);
        let (bc_left, bc_right) = self.problem.boundary_values(t);
        let edges = self.stencils.apply(&sample, bc_left, bc_right);
        for (j, field) in fields.iter_mut().enumerate() {
            let (l, r) = edges.get(j);
            field[0] = l;
            *field.last_mut().expect("patches have at least 5 points") = r;
        }
    }

    /// Interior derivatives; edge points get exactly zero.
    fn derivatives(&self, fields: &[Vec<f64>], out: &mut [Vec<f64>]) {
        let diff = self.problem.diffusivity();
        for (patch, (field, d_out)) in self
            .layout
            .patches()
            .iter()
            .zip(fields.iter().zip(out.iter_mut()))
        {
            let d = patch.dx();
            let m = field.len();
            d_out[0] = 0.0;
            d_out[m - 1] = 0.0;
            for i in 1..m - 1 {
                d_out[i] = micro_rhs(field[i - 1], field[i], field[i + 1], d, diff);
            }
        }
    }

    /// Full right-hand side: slave the edges of the stage vector, then
    /// differentiate the interior.
    fn rhs(&self, fields: &mut [Vec<f64>], t: f64, out: &mut [Vec<f64>]) {
        self.slave_edges(fields, t);
        self.derivatives(fields, out);
    }
}

struct Scratch {
    k1: Vec<Vec<f64>>,
    k2: Vec<Vec<f64>>,
    k3: Vec<Vec<f64>>,
    k4: Vec<Vec<f64>>,
    stage: Vec<Vec<f64>>,
}

impl Scratch {
    fn like(fields: &[Vec<f64>]) -> Self {
        let zero: Vec<Vec<f64>> = fields.iter().map(|f| vec![0.0; f.len()]).collect();
        Self {
            k1: zero.clone(),
            k2: zero.clone(),
            k3: zero.clone(),
            k4: zero.clone(),
            stage: zero,
        }
    }
}

fn set_stage(stage: &mut [Vec<f64>], base: &[Vec<f64>], k: &[Vec<f64>], factor: f64) {
    for ((s, b), kk) in stage.iter_mut().zip(base.iter()).zip(k.iter()) {
        for ((sv, bv), kv) in s.iter_mut().zip(b.iter()).zip(kk.iter()) {
            *sv = bv + factor * kv;
        }
    }
}

/// One classical 4-stage Runge-Kutta step. The right-hand side may mutate the
/// stage vector (edge slaving) before producing derivatives.
fn rk4_step<F>(fields: &mut [Vec<f64>], t: f64, dt: f64, rhs: &mut F, scr: &mut Scratch)
where
    F: FnMut(&mut [Vec<f64>], f64, &mut [Vec<f64>]),
{
    rhs(fields, t, &mut scr.k1);
    set_stage(&mut scr.stage, fields, &scr.k1, 0.5 * dt);
    rhs(&mut scr.stage, t + 0.5 * dt, &mut scr.k2);
    set_stage(&mut scr.stage, fields, &scr.k2, 0.5 * dt);
    rhs(&mut scr.stage, t + 0.5 * dt, &mut scr.k3);
    set_stage(&mut scr.stage, fields, &scr.k3, dt);
    rhs(&mut scr.stage, t + dt, &mut scr.k4);
    for (j, field) in fields.iter_mut().enumerate() {
        for (i, v) in field.iter_mut().enumerate() {
            *v += dt / 6.0
                * (scr.k1[j][i] + 2.0 * scr.k2[j][i] + 2.0 * scr.k3[j][i] + scr.k4[j][i]);
        }
    }
}

/// A recorded run: for every output time, the macroscale sample and the full
/// microscale state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub samples: Vec<MacroSample>,
    pub states: Vec<SimulationState>,
}

impl Trajectory {
    /// Index of a recorded time, within floating-point slack.
    pub fn time_index(&self, t: f64) -> Option<usize> {
        self.times
            .iter()
            .position(|&rec| (rec - t).abs() <= 1e-9 * t.abs().max(1.0))
    }
}

/// The time derivative of a state under the coupled patch system. Edge points
/// carry zero derivative (they are slaved, not evolved).
pub fn system_rhs(
    state: &SimulationState,
    layout: &PatchLayout,
    problem: &ProblemSpec,
) -> Result<Vec<Vec<f64>>, DynamicsError> {
    let engine = Engine::new(problem, layout)?;
    let mut fields = state.fields().to_vec();
    let mut out: Vec<Vec<f64>> = fields.iter().map(|f| vec![0.0; f.len()]).collect();
    engine.rhs(&mut fields, state.time(), &mut out);
    Ok(out)
}

fn check_state(
    fields: &[Vec<f64>],
    t: f64,
    bound: f64,
) -> Result<(), DynamicsError> {
    for (patch, field) in fields.iter().enumerate() {
        for &v in field {
            if !v.is_finite() {
                return Err(DynamicsError::NonFinite { time: t, patch });
            }
            if v.abs() > bound {
                return Err(DynamicsError::BlowUp {
                    time: t,
                    patch,
                    value: v,
                    bound,
                });
            }
        }
    }
    Ok(())
}

/// Integrate the coupled patch system with classical RK4 at fixed step
/// `stepper.dt`, stepping exactly onto every output time and recording the
/// macro sample and full state there.
pub fn simulate(
    problem: &ProblemSpec,
    layout: &PatchLayout,
    stepper: &StepperConfig,
) -> Result<Trajectory, DynamicsError> {
    stepper.validate()?;
    let time_tol = 1e-12 * problem.final_time().max(1.0);
    if let Some(&last) = stepper.output_times.last() {
        if last > problem.final_time() + time_tol {
            return Err(DynamicsError::BadStepper(format!(
                "output time {last} lies beyond the final time {}",
                problem.final_time()
            )));
        }
    }
    let engine = Engine::new(problem, layout)?;
    let mut fields: Vec<Vec<f64>> = SimulationState::initial(problem, layout)
        .fields()
        .to_vec();
    check_state(&fields, 0.0, stepper.blowup_bound)?;
    let mut scr = Scratch::like(&fields);
    let mut rhs = |f: &mut [Vec<f64>], t: f64, out: &mut [Vec<f64>]| engine.rhs(f, t, out);

    let mut traj = Trajectory {
        times: Vec::with_capacity(stepper.output_times.len()),
        samples: Vec::with_capacity(stepper.output_times.len()),
        states: Vec::with_capacity(stepper.output_times.len()),
    };
    let mut record = |t: f64, fields: &[Vec<f64>]| {
        let state = SimulationState::new(t, fields.to_vec());
        traj.samples.push(extract_macro_sample(&state, layout));
        traj.times.push(t);
        traj.states.push(state);
    };

    let mut t = 0.0;
    for &target in &stepper.output_times {
        while target - t > time_tol {
            let remaining = target - t;
            // Never leave a sliver shorter than the tolerance behind.
            let step = if remaining > stepper.dt * (1.0 + 1e-9) {
                stepper.dt
            } else {
                remaining
            };
            rk4_step(&mut fields, t, step, &mut rhs, &mut scr);
            t += step;
            if (target - t).abs() <= time_tol {
                t = target;
            }
            check_state(&fields, t, stepper.blowup_bound)?;
        }
        if t > 0.0 {
            // Recorded states carry coupled (slaved) edge values.
            engine.slave_edges(&mut fields, t);
        }
        record(t, &fields);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{archetype_layout, Patch, PatchLayout};
    use crate::model::{
        make_archetype, ArchetypeId, BoundaryCondition, Diffusivity, InitialCondition,
        ProblemSpec,
    };
    use std::f64::consts::PI;

    fn zero_problem() -> ProblemSpec {
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
    fn micro_rhs_worked_examples() {
        let d1 = Diffusivity::new(1e-3, 0.0).unwrap();
        // Constant fields are steady.
        for c in [-2.0, 0.0, 3.5] {
            assert_eq!(micro_rhs(c, c, c, 0.1, d1), 0.0);
        }
        // Zero second difference leaves pure advection.
        assert!((micro_rhs(0.0, 1.0, 2.0, 1.0, d1) + 1.0).abs() < 1e-15);
        // Nonlinear diffusivity: eps(2) = 0.101.
        let d2 = Diffusivity::new(1e-3, 0.05).unwrap();
        assert!((micro_rhs(1.0, 2.0, 4.0, 0.1, d2) + 19.9).abs() < 1e-12);
    }

    #[test]
    fn stability_bounds_match_hand_values() {
        // Standard M1 patch: diffusive 0.003125, advective 0.0025.
        let b = stable_step_bound(0.0025, 1e-3, 1.0);
        assert!((b - 0.0025).abs() < 1e-15);
        assert!((0.5 * b - 0.00125).abs() < 1e-15);
        // M3 double patch: the diffusive bound dominates.
        let dx = 0.6 / 180.0;
        let b = stable_step_bound(dx, 0.051, 1.0);
        assert!((b - dx * dx / (2.0 * 0.051)).abs() < 1e-12);
        assert!(b < dx / 1.0);
    }

    #[test]
    fn default_dt_scales_linearly_with_safety() {
        let problem = make_archetype(ArchetypeId::M1);
        let layout = archetype_layout(ArchetypeId::M1);
        let half = default_dt(&layout, &problem, 0.25);
        let full = default_dt(&layout, &problem, 0.5);
        assert!((full - 2.0 * half).abs() < 1e-15);
        assert!(full > 0.0 && full < 0.0025);
    }

    #[test]
    fn zero_state_is_an_exact_fixed_point() {
        let problem = zero_problem();
        let layout = archetype_layout(ArchetypeId::M1);
        let stepper = StepperConfig::auto(&problem, &layout, 0.5, vec![0.1, 0.2]).unwrap();
        let traj = simulate(&problem, &layout, &stepper).unwrap();
        for state in &traj.states {
            for field in state.fields() {
                assert!(field.iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn system_rhs_vanishes_on_zero_state() {
        let problem = zero_problem();
        let layout = archetype_layout(ArchetypeId::M1);
        let state = SimulationState::initial(&problem, &layout);
        let derivs = system_rhs(&state, &layout, &problem).unwrap();
        for d in &derivs {
            assert!(d.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn system_rhs_preserves_odd_symmetry() {
        let problem = make_archetype(ArchetypeId::M1);
        let layout = archetype_layout(ArchetypeId::M1);
        let state = SimulationState::initial(&problem, &layout);
        let derivs = system_rhs(&state, &layout, &problem).unwrap();
        let p = derivs.len();
        for j in 0..p {
            let mirror = &derivs[p - 1 - j];
            let m = derivs[j].len();
            assert_eq!(m, mirror.len());
            for i in 0..m {
                let asym = (derivs[j][i] + mirror[m - 1 - i]).abs();
                assert!(asym <= 1e-9, "asymmetry {asym} in patch {j} point {i}");
            }
        }
    }

    #[test]
    fn edge_points_carry_zero_derivative() {
        let problem = make_archetype(ArchetypeId::M2);
        let layout = archetype_layout(ArchetypeId::M2);
        let state = SimulationState::initial(&problem, &layout);
        let derivs = system_rhs(&state, &layout, &problem).unwrap();
        for d in &derivs {
            assert_eq!(d[0], 0.0);
            assert_eq!(*d.last().unwrap(), 0.0);
        }
    }

    #[test]
    fn macro_samples_stay_odd_early_in_an_m1_run() {
        let problem = make_archetype(ArchetypeId::M1);
        let layout = archetype_layout(ArchetypeId::M1);
        let stepper = StepperConfig::auto(&problem, &layout, 0.5, vec![0.02, 0.05]).unwrap();
        let traj = simulate(&problem, &layout, &stepper).unwrap();
        for sample in &traj.samples {
            let v = sample.values();
            let m = v.len();
            for k in 0..m / 2 {
                assert!((v[k] + v[m - 1 - k]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn rk4_matches_the_exponential_series_through_dt4() {
        // du/dt = lambda u on a single-entry field.
        let lambda = -0.7;
        let dt = 0.1;
        let mut fields = vec![vec![1.0]];
        let mut scr = Scratch::like(&fields);
        let mut rhs = |f: &mut [Vec<f64>], _t: f64, out: &mut [Vec<f64>]| {
            out[0][0] = lambda * f[0][0];
        };
        rk4_step(&mut fields, 0.0, dt, &mut rhs, &mut scr);
        let z: f64 = lambda * dt;
        let series = 1.0 + z + z * z / 2.0 + z.powi(3) / 6.0 + z.powi(4) / 24.0;
        assert!((fields[0][0] - series).abs() < 1e-15);
        assert!((fields[0][0] - z.exp()).abs() < z.abs().powi(5));
    }

    #[test]
    fn blow_up_is_reported_with_time_and_patch() {
        // Initial data far above the bound trips the check at t = 0.
        let problem = ProblemSpec::new(
            -PI,
            PI,
            InitialCondition::Sine { amplitude: 20.0 },
            BoundaryCondition::Constant(0.0),
            BoundaryCondition::Constant(0.0),
            Diffusivity::constant(1e-3).unwrap(),
            1.0,
        )
        .unwrap();
        let layout = archetype_layout(ArchetypeId::M1);
        let stepper = StepperConfig::auto(&problem, &layout, 0.5, vec![0.5]).unwrap();
        let err = simulate(&problem, &layout, &stepper);
        assert!(matches!(err, Err(DynamicsError::BlowUp { time, .. }) if time == 0.0));
    }

    #[test]
    fn stepper_validation_rejects_bad_inputs() {
        assert!(StepperConfig::fixed(0.0, vec![1.0]).is_err());
        assert!(StepperConfig::fixed(1e-3, vec![0.2, 0.1]).is_err());
        assert!(StepperConfig::fixed(1e-3, vec![-0.1]).is_err());
        let problem = make_archetype(ArchetypeId::M1);
        let layout = archetype_layout(ArchetypeId::M1);
        assert!(StepperConfig::auto(&problem, &layout, 0.0, vec![1.0]).is_err());
        // Output beyond the final time.
        let stepper = StepperConfig::fixed(1e-3, vec![5.0]).unwrap();
        assert!(matches!(
            simulate(&problem, &layout, &stepper),
            Err(DynamicsError::BadStepper(_))
        ));
    }

    #[test]
    fn domain_mismatch_is_rejected() {
        let problem = make_archetype(ArchetypeId::M1);
        let layout = PatchLayout::new(
            -1.0,
            1.0,
            vec![Patch::standard(0.0, 2, 0.01).unwrap()],
            1,
        )
        .unwrap();
        let stepper = StepperConfig::fixed(1e-4, vec![0.1]).unwrap();
        assert!(matches!(
            simulate(&problem, &layout, &stepper),
            Err(DynamicsError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn trajectory_lands_exactly_on_output_times() {
        let problem = zero_problem();
        let layout = archetype_layout(ArchetypeId::M1);
        // dt chosen to not divide the targets.
        let stepper = StepperConfig::fixed(0.00093, vec![0.05, 0.1, 0.15]).unwrap();
        let traj = simulate(&problem, &layout, &stepper).unwrap();
        assert_eq!(traj.times, vec![0.05, 0.1, 0.15]);
        assert_eq!(traj.time_index(0.1), Some(1));
        assert_eq!(traj.time_index(0.07), None);
    }
}
