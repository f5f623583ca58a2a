//! Error measurement against trusted solutions, and convergence-order
//! studies on smooth shock-free problems.

use crate::dynamics::{self, DynamicsError, StepperConfig};
use crate::mesh::{NodeRole, Patch, PatchLayout};
use crate::model::{
    BoundaryCondition, Diffusivity, InitialCondition, ModelError, ProblemSpec,
};
use crate::oracle::{
    brute_force_solve, FineGridConfig, FineGridOracle, OracleError, TrustedSolution,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("time {0} was not recorded in the trajectory")]
    TimeNotRecorded(f64),
    #[error("a convergence study needs at least 3 spacings (got {0})")]
    TooFewSpacings(usize),
    #[error("spacing {0} does not fit the study domain")]
    BadSpacing(f64),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Layout(#[from] crate::mesh::LayoutError),
}

/// Worst error at one output time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeError {
    pub time: f64,
    pub max_error: f64,
    pub worst_position: f64,
}

/// Worst error of one macroscale node over all queried times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeError {
    pub position: f64,
    pub role: NodeRole,
    pub max_error: f64,
}

/// Max-over-nodes error report, as measured at macroscale nodes and output
/// times only. `outside_double_max` restricts to the standard patches'
/// centre nodes (present only when the layout has shock nodes).
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub per_time: Vec<TimeError>,
    pub per_node: Vec<NodeError>,
    pub global_max: f64,
    pub worst_time: f64,
    pub worst_position: f64,
    pub outside_double_max: Option<f64>,
}

/// Compare a trajectory's macroscale samples against a trusted solution at
/// the given (previously recorded) times.
pub fn max_error(
    trajectory: &dynamics::Trajectory,
    oracle: &dyn TrustedSolution,
    times: &[f64],
) -> Result<ErrorReport, AnalysisError> {
    let mut per_time = Vec::with_capacity(times.len());
    let mut per_node: Vec<NodeError> = Vec::new();
    let mut global_max = 0.0_f64;
    let mut worst_time = f64::NAN;
    let mut worst_position = f64::NAN;
    let mut outside_max: f64 = 0.0;
    let mut has_shock_nodes = false;

    for &t in times {
        let idx = trajectory
            .time_index(t)
            .ok_or(AnalysisError::TimeNotRecorded(t))?;
        let sample = &trajectory.samples[idx];
        if per_node.is_empty() {
            per_node = sample
                .positions()
                .iter()
                .zip(sample.roles())
                .map(|(&position, &role)| NodeError {
                    position,
                    role,
                    max_error: 0.0,
                })
                .collect();
        }
        let mut t_max = 0.0_f64;
        let mut t_worst = f64::NAN;
        for (k, (&x, &u)) in sample
            .positions()
            .iter()
            .zip(sample.values())
            .enumerate()
        {
            let role = sample.roles()[k];
            let err = (u - oracle.eval(x, t)?).abs();
            if err > t_max {
                t_max = err;
                t_worst = x;
            }
            if err > per_node[k].max_error {
                per_node[k].max_error = err;
            }
            match role {
                NodeRole::Centre => outside_max = outside_max.max(err),
                _ => has_shock_nodes = true,
            }
        }
        if t_max > global_max {
            global_max = t_max;
            worst_time = t;
            worst_position = t_worst;
        }
        per_time.push(TimeError {
            time: t,
            max_error: t_max,
            worst_position: t_worst,
        });
    }
    Ok(ErrorReport {
        per_time,
        per_node,
        global_max,
        worst_time,
        worst_position,
        outside_double_max: has_shock_nodes.then_some(outside_max),
    })
}

/// Diagnostic companion to [`max_error`]: the worst error over every micro
/// mesh point of every patch, not just the macroscale nodes.
pub fn micro_max_error(
    trajectory: &dynamics::Trajectory,
    layout: &PatchLayout,
    oracle: &dyn TrustedSolution,
    times: &[f64],
) -> Result<f64, AnalysisError> {
    let mut worst = 0.0_f64;
    for &t in times {
        let idx = trajectory
            .time_index(t)
            .ok_or(AnalysisError::TimeNotRecorded(t))?;
        let state = &trajectory.states[idx];
        for (patch, field) in layout.patches().iter().zip(state.fields()) {
            for (x, &u) in patch.micro_positions().zip(field.iter()) {
                worst = worst.max((u - oracle.eval(x, t)?).abs());
            }
        }
    }
    Ok(worst)
}

/// One data point per macroscale spacing, plus the fitted slope of
/// log(error) against log(H).
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub gamma: usize,
    /// `(H, max error at the final time)` per run.
    pub points: Vec<(f64, f64)>,
    /// Least-squares slope; `None` when every error is at rounding level.
    pub slope: Option<f64>,
    /// All errors at rounding level (the scheme is exact for this problem).
    pub exact: bool,
    /// Errors decrease monotonically as H shrinks (small slack allowed).
    pub monotone: bool,
}

/// Protocol parameters for [`convergence_study`].
#[derive(Debug, Clone)]
pub struct StudyConfig {
    /// Half-width of every standard patch.
    pub patch_half_width: f64,
    /// Micro points per patch (odd).
    pub patch_points: usize,
    /// Fine-grid oracle resolution.
    pub fine_points: usize,
    /// Stepper safety factor.
    pub safety: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            patch_half_width: 0.02,
            patch_points: 9,
            fine_points: 3200,
            safety: 0.5,
        }
    }
}

impl StudyConfig {
    /// Calibrated protocol for a coupling order: higher orders reach the
    /// micro-mesh error floor sooner, so they get a finer patch mesh.
    pub fn for_gamma(gamma: usize) -> Self {
        Self {
            patch_points: if gamma >= 3 { 17 } else { 9 },
            ..Self::default()
        }
    }
}

/// Macroscale spacings over which the slope is cleanly measurable for each
/// coupling order: large enough to stay above the micro/oracle error floors,
/// small enough to be in the asymptotic regime.
pub fn recommended_spacings(gamma: usize) -> Vec<f64> {
    let span = 2.0 * std::f64::consts::PI;
    let counts: &[usize] = match gamma {
        1 => &[10, 14, 20, 28],
        2 => &[24, 32, 48, 64],
        _ => &[20, 28, 40, 56],
    };
    counts.iter().map(|&n| span / n as f64).collect()
}

/// A smooth, shock-free instance for order verification: the sine initial
/// condition with diffusivity large enough (0.1) that the solution stays
/// smooth up to the early final time 0.5.
pub fn smooth_study_problem() -> ProblemSpec {
    ProblemSpec::new(
        -std::f64::consts::PI,
        std::f64::consts::PI,
        InitialCondition::Sine { amplitude: -1.0 },
        BoundaryCondition::Constant(0.0),
        BoundaryCondition::Constant(0.0),
        Diffusivity::constant(0.1).expect("0.1 is a valid diffusivity"),
        0.5,
    )
    .expect("study problem is consistent")
}

/// Standard patches only, spread at spacing ~H across the problem domain.
pub fn uniform_layout(
    problem: &ProblemSpec,
    spacing: f64,
    gamma: usize,
    cfg: &StudyConfig,
) -> Result<PatchLayout, AnalysisError> {
    let span = problem.x_hi() - problem.x_lo();
    if !spacing.is_finite() || spacing <= 0.0 || spacing >= span {
        return Err(AnalysisError::BadSpacing(spacing));
    }
    let count = (span / spacing).round() as usize;
    if count < 3 {
        return Err(AnalysisError::BadSpacing(spacing));
    }
    let actual = span / count as f64;
    let n = (cfg.patch_points - 1) / 2;
    let dx = cfg.patch_half_width / n as f64;
    let patches = (1..count)
        .map(|k| Patch::standard(problem.x_lo() + k as f64 * actual, n, dx))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PatchLayout::new(
        problem.x_lo(),
        problem.x_hi(),
        patches,
        gamma,
    )?)
}

/// Run the scheme at several macroscale spacings on a smooth problem and fit
/// the order of the max-node error at the final time against a fine-grid
/// reference.
pub fn convergence_study(
    problem: &ProblemSpec,
    gamma: usize,
    spacings: &[f64],
    cfg: &StudyConfig,
) -> Result<ConvergenceReport, AnalysisError> {
    if spacings.len() < 3 {
        return Err(AnalysisError::TooFewSpacings(spacings.len()));
    }
    let t_final = problem.final_time();
    let fine = brute_force_solve(
        problem,
        &FineGridConfig {
            points: cfg.fine_points,
            dt: None,
            snapshot_times: vec![t_final],
        },
    )?;
    let oracle = FineGridOracle::new(fine);

    let mut points = Vec::with_capacity(spacings.len());
    for &h in spacings {
        let layout = uniform_layout(problem, h, gamma, cfg)?;
        let stepper = StepperConfig::auto(problem, &layout, cfg.safety, vec![t_final])?;
        let traj = dynamics::simulate(problem, &layout, &stepper)?;
        let report = max_error(&traj, &oracle, &[t_final])?;
        let span = problem.x_hi() - problem.x_lo();
        let actual = span / (span / h).round();
        points.push((actual, report.global_max));
    }
    // Sort by H so the monotone check reads cleanly.
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite spacings"));

    let exact = points.iter().all(|&(_, e)| e < 1e-13);
    let slope = if exact {
        None
    } else {
        Some(fit_log_slope(&points))
    };
    let monotone = points
        .windows(2)
        .all(|w| w[0].1 <= w[1].1 * 1.05 + 1e-14);
    Ok(ConvergenceReport {
        gamma,
        points,
        slope,
        exact,
        monotone,
    })
}

/// Least-squares slope of log(err) against log(H). Errors at rounding level
/// are floored so a single exact point cannot produce -inf.
fn fit_log_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(h, e)| (h.ln(), e.max(1e-300).ln()))
        .collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
