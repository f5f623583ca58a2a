//! Brute-force trusted solution: forward-Euler finite differences on a fine
//! grid spanning the whole domain. Vastly more expensive than the patch
//! scheme; it exists purely to measure errors, and it is the only oracle for
//! the nonlinear-diffusivity problems where no transform solution exists.

use super::{OracleError, TrustedSolution};
use crate::model::ProblemSpec;

/// Controls for the fine-grid solver.
#[derive(Debug, Clone)]
pub struct FineGridConfig {
    /// Number of interior grid points.
    pub points: usize,
    /// Euler step; defaults to d^2/2 with d the grid spacing.
    pub dt: Option<f64>,
    /// Times at which snapshots are stored (t = 0 is always kept).
    pub snapshot_times: Vec<f64>,
}

impl FineGridConfig {
    pub fn new(snapshot_times: Vec<f64>) -> Self {
        Self {
            points: 1600,
            dt: None,
            snapshot_times,
        }
    }
}

/// Stored snapshots on the fine grid, boundary points included.
#[derive(Debug, Clone)]
pub struct FineGridSolution {
    positions: Vec<f64>,
    times: Vec<f64>,
    snapshots: Vec<Vec<f64>>,
}

impl FineGridSolution {
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn snapshots(&self) -> &[Vec<f64>] {
        &self.snapshots
    }

    pub fn spacing(&self) -> f64 {
        self.positions[1] - self.positions[0]
    }

    /// Snapshots flattened to `(x, t, u)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.times.iter().zip(self.snapshots.iter()).flat_map(|(t, snap)| {
            self.positions
                .iter()
                .zip(snap.iter())
                .map(move |(x, u)| (*x, *t, *u))
        })
    }
}

/// Forward-Euler time stepping of the centred finite-difference
/// discretisation, Dirichlet values pinned at both ends every step.
pub fn brute_force_solve(
    problem: &ProblemSpec,
    cfg: &FineGridConfig,
) -> Result<FineGridSolution, OracleError> {
    if cfg.points < 3 {
        return Err(OracleError::TooFewPoints(cfg.points));
    }
    let span = problem.x_hi() - problem.x_lo();
    let d = span / (cfg.points + 1) as f64;
    let dt = cfg.dt.unwrap_or(0.5 * d * d);
    // Diffusive stability with the largest diffusivity the run can reach.
    let eps_max = problem
        .diffusivity()
        .evaluate(crate::dynamics::field_bound_estimate(problem));
    let bound = d * d / (2.0 * eps_max);
    if !dt.is_finite() || dt <= 0.0 || dt > bound * (1.0 + 1e-12) {
        return Err(OracleError::UnstableStep { dt, bound });
    }
    let ordered = cfg.snapshot_times.windows(2).all(|w| w[0] < w[1]);
    let in_range = cfg
        .snapshot_times
        .iter()
        .all(|t| t.is_finite() && *t >= 0.0 && *t <= problem.final_time() + 1e-12);
    if !ordered || !in_range {
        return Err(OracleError::BadSnapshotTimes);
    }

    let positions: Vec<f64> = (0..cfg.points + 2)
        .map(|k| {
            if k == cfg.points + 1 {
                problem.x_hi()
            } else {
                problem.x_lo() + k as f64 * d
            }
        })
        .collect();
    let mut u: Vec<f64> = positions.iter().map(|&x| problem.initial_value(x)).collect();
    let mut next = u.clone();
    let (eps1, eps2) = (problem.diffusivity().eps1(), problem.diffusivity().eps2());

    let mut times = Vec::with_capacity(cfg.snapshot_times.len() + 1);
    let mut snapshots = Vec::with_capacity(cfg.snapshot_times.len() + 1);
    times.push(0.0);
    snapshots.push(u.clone());

    let time_tol = 1e-12 * problem.final_time().max(1.0);
    let mut t = 0.0;
    for &target in &cfg.snapshot_times {
        if target <= time_tol {
            continue; // t = 0 is already stored
        }
        while target - t > time_tol {
            let remaining = target - t;
            let step = if remaining > dt * (1.0 + 1e-9) {
                dt
            } else {
                remaining
            };
            let m = u.len();
            for i in 1..m - 1 {
                let ui = u[i];
                let rhs = (eps1 + eps2 * ui.abs()) * (u[i + 1] - 2.0 * ui + u[i - 1]) / (d * d)
                    - ui * (u[i + 1] - u[i - 1]) / (2.0 * d);
                next[i] = ui + step * rhs;
            }
            t += step;
            if (target - t).abs() <= time_tol {
                t = target;
            }
            let (bl, br) = problem.boundary_values(t);
            next[0] = bl;
            next[m - 1] = br;
            std::mem::swap(&mut u, &mut next);
            for (i, &v) in u.iter().enumerate() {
                if !v.is_finite() || v.abs() > 1e6 {
                    return Err(OracleError::FineGridBlowUp {
                        time: t,
                        index: i,
                        value: v,
                    });
                }
            }
        }
        times.push(t);
        snapshots.push(u.clone());
    }
    Ok(FineGridSolution {
        positions,
        times,
        snapshots,
    })
}

/// Evaluate a solved trajectory anywhere inside the covered space-time box,
/// by linear interpolation in space and in time.
pub fn brute_force_eval(x: f64, t: f64, sol: &FineGridSolution) -> Result<f64, OracleError> {
    let xs = &sol.positions;
    let ts = &sol.times;
    let x_tol = 1e-12 * xs.last().unwrap().abs().max(1.0);
    let t_tol = 1e-12 * ts.last().unwrap().abs().max(1.0);
    if x < xs[0] - x_tol || x > *xs.last().unwrap() + x_tol {
        return Err(OracleError::OutOfRange { x, t });
    }
    if t < ts[0] - t_tol || t > *ts.last().unwrap() + t_tol {
        return Err(OracleError::OutOfRange { x, t });
    }
    let xi = bracket(xs, x);
    let ti = bracket(ts, t);
    let wx = ((x - xs[xi]) / (xs[xi + 1] - xs[xi])).clamp(0.0, 1.0);
    let wt = if ts.len() == 1 {
        0.0
    } else {
        ((t - ts[ti]) / (ts[ti + 1] - ts[ti])).clamp(0.0, 1.0)
    };
    let at = |k: usize| {
        let snap = &sol.snapshots[k];
        (1.0 - wx) * snap[xi] + wx * snap[xi + 1]
    };
    if ts.len() == 1 || wt == 0.0 {
        Ok(at(ti))
    } else {
        Ok((1.0 - wt) * at(ti) + wt * at(ti + 1))
    }
}

/// Largest index i with v[i] <= q, capped so i+1 stays valid.
fn bracket(v: &[f64], q: f64) -> usize {
    match v.binary_search_by(|p| p.partial_cmp(&q).expect("finite grid")) {
        Ok(i) => i.min(v.len().saturating_sub(2)),
        Err(0) => 0,
        Err(i) => (i - 1).min(v.len().saturating_sub(2)),
    }
}

/// A [`TrustedSolution`] backed by precomputed fine-grid snapshots.
pub struct FineGridOracle {
    solution: FineGridSolution,
}

impl FineGridOracle {
    pub fn new(solution: FineGridSolution) -> Self {
        Self { solution }
    }

    pub fn solution(&self) -> &FineGridSolution {
        &self.solution
    }
}

impl TrustedSolution for FineGridOracle {
    fn eval(&self, x: f64, t: f64) -> Result<f64, OracleError> {
        brute_force_eval(x, t, &self.solution)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        BoundaryCondition, Diffusivity, InitialCondition, ProblemSpec,
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
    fn zero_data_stays_zero() {
        let problem = zero_problem();
        let cfg = FineGridConfig {
            points: 101,
            dt: None,
            snapshot_times: vec![0.5, 1.0],
        };
        let sol = brute_force_solve(&problem, &cfg).unwrap();
        assert_eq!(sol.times(), &[0.0, 0.5, 1.0]);
        for snap in sol.snapshots() {
            assert!(snap.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn evaluation_reproduces_stored_values_and_midpoints() {
        let problem = ProblemSpec::new(
            -PI,
            PI,
            InitialCondition::Sine { amplitude: -1.0 },
            BoundaryCondition::Constant(0.0),
            BoundaryCondition::Constant(0.0),
            Diffusivity::constant(0.05).unwrap(),
            1.0,
        )
        .unwrap();
        let cfg = FineGridConfig {
            points: 100,
            dt: None,
            snapshot_times: vec![0.2],
        };
        let sol = brute_force_solve(&problem, &cfg).unwrap();
        let xs = sol.positions().to_vec();
        let snap = sol.snapshots()[1].clone();
        // Exactly at a grid point and snapshot time.
        assert_eq!(brute_force_eval(xs[40], 0.2, &sol).unwrap(), snap[40]);
        // Spatial midpoint averages the neighbours.
        let mid = 0.5 * (xs[40] + xs[41]);
        let want = 0.5 * (snap[40] + snap[41]);
        assert!((brute_force_eval(mid, 0.2, &sol).unwrap() - want).abs() < 1e-14);
        // Out-of-range queries fail.
        assert!(brute_force_eval(4.0, 0.2, &sol).is_err());
        assert!(brute_force_eval(0.0, 2.0, &sol).is_err());
    }

    #[test]
    fn unstable_steps_are_rejected() {
        let problem = zero_problem();
        // d ~ 0.062 and eps 1e-3 give a diffusive bound around 1.9.
        let cfg = FineGridConfig {
            points: 100,
            dt: Some(5.0),
            snapshot_times: vec![0.5],
        };
        assert!(matches!(
            brute_force_solve(&problem, &cfg),
            Err(OracleError::UnstableStep { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let problem = zero_problem();
        let mut cfg = FineGridConfig::new(vec![0.5]);
        cfg.points = 2;
        assert!(matches!(
            brute_force_solve(&problem, &cfg),
            Err(OracleError::TooFewPoints(2))
        ));
        let cfg = FineGridConfig {
            points: 50,
            dt: None,
            snapshot_times: vec![0.5, 0.2],
        };
        assert!(matches!(
            brute_force_solve(&problem, &cfg),
            Err(OracleError::BadSnapshotTimes)
        ));
    }
}
