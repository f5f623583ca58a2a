//! The five subcommands: run, compare, converge, oracle, list. Each writes
//! plain comma-separated files plus a small `key: value` report where one
//! applies; all numeric output uses 12 significant digits.

use crate::config::{OracleChoice, ResolvedConfig};
use crate::CliError;
use patchdyn::analysis::{
    convergence_study, max_error, micro_max_error, smooth_study_problem, ConvergenceReport,
    ErrorReport, StudyConfig,
};
use patchdyn::coupling::MacroSample;
use patchdyn::dynamics::{simulate, SimulationState, StepperConfig, Trajectory};
use patchdyn::linspace;
use patchdyn::mesh::NodeRole;
use patchdyn::model::{make_archetype, ArchetypeId};
use patchdyn::oracle::{
    brute_force_solve, FineGridConfig, FineGridOracle, QuadratureOracle, TrustedSolution,
};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// 12 significant digits; below every tolerance in play and diff-friendly.
pub fn fmt_sig(v: f64) -> String {
    format!("{v:.11e}")
}

/// The value a reader of our output files will see.
pub fn round_printed(v: f64) -> f64 {
    fmt_sig(v).parse().expect("formatted floats parse back")
}

fn role_from_str(s: &str) -> Result<NodeRole, CliError> {
    match s {
        "centre" => Ok(NodeRole::Centre),
        "shock_left" => Ok(NodeRole::ShockLeft),
        "shock_right" => Ok(NodeRole::ShockRight),
        other => Err(CliError::Config(format!("unknown node role `{other}`"))),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

fn macro_csv(traj: &Trajectory) -> String {
    let mut out = String::from("time,node_position,node_role,value\n");
    for (t, sample) in traj.times.iter().zip(&traj.samples) {
        for ((x, role), v) in sample
            .positions()
            .iter()
            .zip(sample.roles())
            .zip(sample.values())
        {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_sig(*t),
                fmt_sig(*x),
                role.as_str(),
                fmt_sig(*v)
            );
        }
    }
    out
}

/// Inverse of [`macro_csv`]: reconstruct the recorded macroscale samples.
pub fn read_macro_csv(path: &Path) -> Result<Trajectory, CliError> {
    let text = fs::read_to_string(path)?;
    let mut traj = Trajectory {
        times: Vec::new(),
        samples: Vec::new(),
        states: Vec::new(),
    };
    let mut positions: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut roles: Vec<NodeRole> = Vec::new();
    let mut current_t: Option<f64> = None;
    let mut flush = |t: f64, positions: &mut Vec<f64>, values: &mut Vec<f64>, roles: &mut Vec<NodeRole>| -> Result<(), CliError> {
        let sample = MacroSample::new(
            std::mem::take(positions),
            std::mem::take(values),
            std::mem::take(roles),
        )
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        traj.samples.push(sample);
        traj.states.push(SimulationState::new(t, vec![]));
        traj.times.push(t);
        Ok(())
    };
    for (idx, line) in text.lines().enumerate().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(CliError::Config(format!(
                "{}: line {}: expected 4 fields",
                path.display(),
                idx + 1
            )));
        }
        let bad = |what: &str| {
            CliError::Config(format!("{}: line {}: bad {what}", path.display(), idx + 1))
        };
        let t: f64 = fields[0].parse().map_err(|_| bad("time"))?;
        let x: f64 = fields[1].parse().map_err(|_| bad("position"))?;
        let role = role_from_str(fields[2])?;
        let v: f64 = fields[3].parse().map_err(|_| bad("value"))?;
        if current_t != Some(t) {
            if let Some(prev) = current_t {
                flush(prev, &mut positions, &mut values, &mut roles)?;
            }
            current_t = Some(t);
        }
        positions.push(x);
        values.push(v);
        roles.push(role);
    }
    if let Some(prev) = current_t {
        flush(prev, &mut positions, &mut values, &mut roles)?;
    }
    Ok(traj)
}

fn micro_csv(cfg: &ResolvedConfig, traj: &Trajectory) -> String {
    let mut out = String::from("time,patch,x,u\n");
    for (t, state) in traj.times.iter().zip(&traj.states) {
        for (j, patch) in cfg.layout.patches().iter().enumerate() {
            for (x, u) in patch.micro_positions().zip(state.field(j)) {
                let _ = writeln!(out, "{},{j},{},{}", fmt_sig(*t), fmt_sig(x), fmt_sig(*u));
            }
        }
    }
    out
}

fn run_trajectory(cfg: &ResolvedConfig) -> Result<Trajectory, CliError> {
    let stepper = match cfg.stepper.dt {
        Some(dt) => StepperConfig {
            blowup_bound: cfg.stepper.blowup,
            ..StepperConfig::fixed(dt, cfg.stepper.output_times.clone())?
        },
        None => StepperConfig {
            blowup_bound: cfg.stepper.blowup,
            ..StepperConfig::auto(
                &cfg.problem,
                &cfg.layout,
                cfg.stepper.safety,
                cfg.stepper.output_times.clone(),
            )?
        },
    };
    Ok(simulate(&cfg.problem, &cfg.layout, &stepper)?)
}

#[derive(Debug)]
pub struct RunArtifacts {
    pub macro_path: PathBuf,
    pub micro_path: Option<PathBuf>,
    pub times: usize,
    pub nodes: usize,
}

/// Simulate and write the macroscale trajectory (optionally micro snapshots).
pub fn cmd_run(cfg: &ResolvedConfig) -> Result<RunArtifacts, CliError> {
    let traj = run_trajectory(cfg)?;
    let macro_path = cfg.output.dir.join("macro.csv");
    write_file(&macro_path, &macro_csv(&traj))?;
    let micro_path = if cfg.output.micro {
        let p = cfg.output.dir.join("micro.csv");
        write_file(&p, &micro_csv(cfg, &traj))?;
        Some(p)
    } else {
        None
    };
    Ok(RunArtifacts {
        macro_path,
        micro_path,
        times: traj.times.len(),
        nodes: traj.samples.first().map_or(0, |s| s.len()),
    })
}

/// Build the configured trusted solution for the comparison times.
fn build_oracle(
    cfg: &ResolvedConfig,
    times: &[f64],
) -> Result<Box<dyn TrustedSolution>, CliError> {
    check_oracle_applies(cfg)?;
    match &cfg.oracle {
        OracleChoice::Quadrature(qcfg) => {
            Ok(Box::new(QuadratureOracle::new(cfg.problem.clone(), *qcfg)?))
        }
        OracleChoice::Brute { points } => {
            let sol = brute_force_solve(
                &cfg.problem,
                &FineGridConfig {
                    points: *points,
                    dt: None,
                    snapshot_times: times.to_vec(),
                },
            )?;
            Ok(Box::new(FineGridOracle::new(sol)))
        }
    }
}

fn render_report(
    cfg: &ResolvedConfig,
    report: &ErrorReport,
    times: usize,
    micro_max: Option<f64>,
) -> String {
    let mut out = String::new();
    let name = |n: &Option<ArchetypeId>| n.map_or("custom".to_string(), |id| id.to_string());
    let _ = writeln!(out, "problem: {}", name(&cfg.problem_name));
    let _ = writeln!(out, "layout: {}", name(&cfg.layout_name));
    let _ = writeln!(out, "oracle: {}", cfg.oracle.name());
    let _ = writeln!(out, "times_compared: {times}");
    let _ = writeln!(out, "global_max: {}", fmt_sig(report.global_max));
    let _ = writeln!(out, "worst_time: {}", fmt_sig(report.worst_time));
    let _ = writeln!(out, "worst_position: {}", fmt_sig(report.worst_position));
    if let Some(r) = report.outside_double_max {
        let _ = writeln!(out, "outside_double_max: {}", fmt_sig(r));
    }
    if let Some(m) = micro_max {
        let _ = writeln!(out, "micro_max: {}", fmt_sig(m));
    }
    out
}

fn errors_by_time_csv(report: &ErrorReport) -> String {
    let mut out = String::from("time,max_error,worst_position\n");
    for te in &report.per_time {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_sig(te.time),
            fmt_sig(te.max_error),
            fmt_sig(te.worst_position)
        );
    }
    out
}

fn errors_by_node_csv(report: &ErrorReport) -> String {
    let mut out = String::from("node_position,node_role,max_error\n");
    for ne in &report.per_node {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_sig(ne.position),
            ne.role.as_str(),
            fmt_sig(ne.max_error)
        );
    }
    out
}

/// Round every recorded macro value to the precision the files carry, so the
/// written trajectory and the written report agree digit-for-digit with what
/// a reader can recompute.
fn round_trajectory(traj: &Trajectory) -> Trajectory {
    let times: Vec<f64> = traj.times.iter().copied().map(round_printed).collect();
    let samples = traj
        .samples
        .iter()
        .map(|s| {
            MacroSample::new(
                s.positions().iter().copied().map(round_printed).collect(),
                s.values().iter().copied().map(round_printed).collect(),
                s.roles().to_vec(),
            )
            .expect("rounding preserves sample validity")
        })
        .collect();
    let states = times
        .iter()
        .zip(&traj.states)
        .map(|(t, s)| SimulationState::new(*t, s.fields().to_vec()))
        .collect();
    Trajectory {
        times,
        samples,
        states,
    }
}

#[derive(Debug)]
pub struct CompareArtifacts {
    pub report_path: PathBuf,
    pub macro_path: PathBuf,
    pub global_max: f64,
    pub outside_double_max: Option<f64>,
}

/// Check the oracle applies to the problem before any expensive work.
fn check_oracle_applies(cfg: &ResolvedConfig) -> Result<(), CliError> {
    if matches!(cfg.oracle, OracleChoice::Quadrature(_))
        && !cfg.problem.diffusivity().is_constant()
    {
        return Err(CliError::Config(format!(
            "the quadrature oracle needs constant diffusivity, but eps2 = {}; \
             nonlinear problems have no transform solution - use --oracle brute",
            cfg.problem.diffusivity().eps2()
        )));
    }
    Ok(())
}

/// Simulate, evaluate the trusted solution at every macroscale node and
/// output time, and write the error report next to the trajectory.
pub fn cmd_compare(cfg: &ResolvedConfig) -> Result<CompareArtifacts, CliError> {
    check_oracle_applies(cfg)?;
    let traj = round_trajectory(&run_trajectory(cfg)?);
    // The transform solution is only defined for t > 0; at t = 0 the scheme
    // holds the sampled initial condition exactly, so nothing is lost.
    let compare_times: Vec<f64> = match cfg.oracle {
        OracleChoice::Quadrature(_) => traj
            .times
            .iter()
            .copied()
            .filter(|&t| t > 1e-12)
            .collect(),
        OracleChoice::Brute { .. } => traj.times.clone(),
    };
    let oracle = build_oracle(cfg, &compare_times)?;
    let report = max_error(&traj, oracle.as_ref(), &compare_times)?;
    let micro_max = if cfg.output.micro {
        Some(micro_max_error(
            &traj,
            &cfg.layout,
            oracle.as_ref(),
            &compare_times,
        )?)
    } else {
        None
    };

    let dir = &cfg.output.dir;
    let macro_path = dir.join("macro.csv");
    write_file(&macro_path, &macro_csv(&traj))?;
    let report_path = dir.join("report.txt");
    write_file(
        &report_path,
        &render_report(cfg, &report, compare_times.len(), micro_max),
    )?;
    write_file(&dir.join("errors_by_time.csv"), &errors_by_time_csv(&report))?;
    write_file(&dir.join("errors_by_node.csv"), &errors_by_node_csv(&report))?;
    Ok(CompareArtifacts {
        report_path,
        macro_path,
        global_max: report.global_max,
        outside_double_max: report.outside_double_max,
    })
}

/// Recompute an error report from a previously written trajectory file; used
/// to check that the emitted files round-trip exactly.
pub fn reevaluate_report(cfg: &ResolvedConfig, macro_path: &Path) -> Result<String, CliError> {
    let traj = read_macro_csv(macro_path)?;
    let compare_times: Vec<f64> = match cfg.oracle {
        OracleChoice::Quadrature(_) => traj
            .times
            .iter()
            .copied()
            .filter(|&t| t > 1e-12)
            .collect(),
        OracleChoice::Brute { .. } => traj.times.clone(),
    };
    let oracle = build_oracle(cfg, &compare_times)?;
    let report = max_error(&traj, oracle.as_ref(), &compare_times)?;
    Ok(render_report(cfg, &report, compare_times.len(), None))
}

fn render_convergence(report: &ConvergenceReport) -> (String, String) {
    let mut txt = String::new();
    let _ = writeln!(txt, "gamma: {}", report.gamma);
    let _ = writeln!(txt, "nominal_order: {}", 2 * report.gamma);
    match report.slope {
        Some(s) => {
            let _ = writeln!(txt, "fitted_slope: {}", fmt_sig(s));
        }
        None => {
            let _ = writeln!(txt, "fitted_slope: exact");
        }
    }
    let _ = writeln!(txt, "monotone: {}", report.monotone);
    let mut csv = String::from("spacing,max_error\n");
    for (h, e) in &report.points {
        let _ = writeln!(csv, "{},{}", fmt_sig(*h), fmt_sig(*e));
    }
    (txt, csv)
}

#[derive(Debug)]
pub struct ConvergeArtifacts {
    pub report_path: PathBuf,
    pub slope: Option<f64>,
    pub gamma: usize,
}

/// Convergence-order study on the built-in smooth shock-free problem.
pub fn cmd_converge(
    converge: &crate::config::ConvergeSettings,
    output: &crate::config::OutputSettings,
) -> Result<ConvergeArtifacts, CliError> {
    let problem = smooth_study_problem();
    let report = convergence_study(
        &problem,
        converge.gamma,
        &converge.spacings,
        &StudyConfig::for_gamma(converge.gamma),
    )?;
    let (txt, csv) = render_convergence(&report);
    let report_path = output.dir.join("convergence.txt");
    write_file(&report_path, &txt)?;
    write_file(&output.dir.join("convergence.csv"), &csv)?;
    Ok(ConvergeArtifacts {
        report_path,
        slope: report.slope,
        gamma: report.gamma,
    })
}

#[derive(Debug)]
pub struct OracleArtifacts {
    pub path: PathBuf,
    pub rows: usize,
}

/// Evaluate the chosen trusted solution on an x-grid at the given times and
/// write `(x, t, u)` rows.
pub fn cmd_oracle(
    cfg: &ResolvedConfig,
    times: &[f64],
    x_count: usize,
) -> Result<OracleArtifacts, CliError> {
    if times.is_empty() {
        return Err(CliError::Config("oracle needs at least one time".into()));
    }
    if x_count < 2 {
        return Err(CliError::Config("oracle needs at least two x points".into()));
    }
    let oracle = build_oracle(cfg, times)?;
    let xs = linspace(cfg.problem.x_lo(), cfg.problem.x_hi(), x_count);
    let mut out = String::from("x,t,u\n");
    let mut rows = 0;
    for &t in times {
        for &x in &xs {
            let u = oracle.eval(x, t)?;
            let _ = writeln!(out, "{},{},{}", fmt_sig(x), fmt_sig(t), fmt_sig(u));
            rows += 1;
        }
    }
    let path = cfg.output.dir.join("oracle.csv");
    write_file(&path, &out)?;
    Ok(OracleArtifacts { path, rows })
}

/// One line per built-in archetype.
pub fn cmd_list() -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<4} {:>8} {:>8}  {:<12} {:>7} {:>6} {:>9}",
        "name", "eps1", "eps2", "initial", "patches", "gamma", "coverage"
    );
    for id in ArchetypeId::ALL {
        let p = make_archetype(id);
        let layout = patchdyn::mesh::archetype_layout(id);
        let ic = match p.initial_condition() {
            patchdyn::model::InitialCondition::TanhRamp { .. } => "tanh ramp",
            patchdyn::model::InitialCondition::Sine { .. } => "-sin x",
            patchdyn::model::InitialCondition::Zero => "zero",
        };
        let _ = writeln!(
            out,
            "{:<4} {:>8} {:>8}  {:<12} {:>7} {:>6} {:>8.1}%",
            id.to_string(),
            p.diffusivity().eps1(),
            p.diffusivity().eps2(),
            ic,
            layout.patches().len(),
            layout.gamma(),
            100.0 * layout.simulated_fraction()
        );
    }
    out
}
