//! Flat sectioned run configuration.
//!
//! The file format is plain `key = value` lines grouped under `[section]`
//! headers, with `#` comments. Sections: `[problem]`, `[layout]`,
//! `[stepper]`, `[oracle]`, `[converge]`, `[output]`. Archetype names expand
//! to full inline settings, which `--print-config` renders back out so every
//! default is visible and editable.

use crate::CliError;
use patchdyn::linspace;
use patchdyn::mesh::{archetype_layout, Patch, PatchKind, PatchLayout};
use patchdyn::model::{
    make_archetype, ArchetypeId, BoundaryCondition, Diffusivity, InitialCondition, ProblemSpec,
};
use patchdyn::oracle::QuadratureConfig;
use std::str::FromStr;

/// One parsed `key = value` entry with its source line for diagnostics.
#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    key: String,
    value: String,
}

/// The raw sectioned file, order preserved.
#[derive(Debug, Default, Clone)]
pub struct RawConfig {
    sections: Vec<(String, Vec<Entry>)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut sections: Vec<(String, Vec<Entry>)> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| {
                    CliError::Config(format!("line {line}: unterminated section header"))
                })?;
                sections.push((name.trim().to_string(), Vec::new()));
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {line}: expected `key = value`, got `{content}`"))
            })?;
            let section = sections.last_mut().ok_or_else(|| {
                CliError::Config(format!("line {line}: `{}` appears before any [section]", key.trim()))
            })?;
            section.1.push(Entry {
                line,
                key: key.trim().to_string(),
                value: value.trim().to_string(),
            });
        }
        Ok(Self { sections })
    }

    fn section(&self, name: &str) -> Vec<&Entry> {
        self.sections
            .iter()
            .filter(|(s, _)| s == name)
            .flat_map(|(_, entries)| entries.iter())
            .collect()
    }

    pub fn has_section(&self, name: &str) -> bool {
        self.sections.iter().any(|(s, _)| s == name)
    }

    fn known_sections_check(&self) -> Result<(), CliError> {
        const KNOWN: [&str; 6] = ["problem", "layout", "stepper", "oracle", "converge", "output"];
        for (name, entries) in &self.sections {
            if !KNOWN.contains(&name.as_str()) {
                let line = entries.first().map(|e| e.line.saturating_sub(1)).unwrap_or(0);
                return Err(CliError::Config(format!(
                    "unknown section [{name}] (near line {line})"
                )));
            }
        }
        Ok(())
    }
}

/// Which trusted solution a compare/oracle command uses.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleChoice {
    Quadrature(QuadratureConfig),
    Brute { points: usize },
}

impl OracleChoice {
    pub fn name(&self) -> &'static str {
        match self {
            OracleChoice::Quadrature(_) => "quadrature",
            OracleChoice::Brute { .. } => "brute",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepperSettings {
    pub dt: Option<f64>,
    pub safety: f64,
    pub output_times: Vec<f64>,
    pub blowup: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergeSettings {
    pub gamma: usize,
    pub spacings: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct OutputSettings {
    pub dir: std::path::PathBuf,
    pub micro: bool,
}

/// Everything a command needs, fully defaulted.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub problem_name: Option<ArchetypeId>,
    pub problem: ProblemSpec,
    pub layout_name: Option<ArchetypeId>,
    pub layout: PatchLayout,
    pub stepper: StepperSettings,
    pub oracle: OracleChoice,
    pub converge: ConvergeSettings,
    pub output: OutputSettings,
}

/// Overrides supplied on the command line; they win over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub problem: Option<String>,
    pub layout: Option<String>,
    pub oracle: Option<String>,
    pub out: Option<std::path::PathBuf>,
    pub micro: bool,
    pub gamma: Option<usize>,
    pub spacings: Option<String>,
}

fn parse_f64(e: &Entry) -> Result<f64, CliError> {
    e.value.parse().map_err(|_| {
        CliError::Config(format!(
            "line {}: key `{}`: `{}` is not a number",
            e.line, e.key, e.value
        ))
    })
}

fn parse_usize(e: &Entry) -> Result<usize, CliError> {
    e.value.parse().map_err(|_| {
        CliError::Config(format!(
            "line {}: key `{}`: `{}` is not a non-negative integer",
            e.line, e.key, e.value
        ))
    })
}

fn parse_bool(e: &Entry) -> Result<bool, CliError> {
    match e.value.as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(CliError::Config(format!(
            "line {}: key `{}`: expected true or false, got `{other}`",
            e.line, e.key
        ))),
    }
}

/// Comma list of numbers, or `linspace <lo> <hi> <count>`.
pub fn parse_times(value: &str) -> Result<Vec<f64>, CliError> {
    let value = value.trim();
    if let Some(rest) = value.strip_prefix("linspace") {
        let parts: Vec<&str> = rest.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(CliError::Config(format!(
                "linspace wants `linspace <lo> <hi> <count>`, got `{value}`"
            )));
        }
        let lo: f64 = parts[0]
            .parse()
            .map_err(|_| CliError::Config(format!("bad linspace bound `{}`", parts[0])))?;
        let hi: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::Config(format!("bad linspace bound `{}`", parts[1])))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| CliError::Config(format!("bad linspace count `{}`", parts[2])))?;
        if count < 2 || !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(CliError::Config(format!("degenerate linspace `{value}`")));
        }
        return Ok(linspace(lo, hi, count));
    }
    value
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("bad number `{}` in list", tok.trim())))
        })
        .collect()
}

fn parse_ic(e: &Entry) -> Result<InitialCondition, CliError> {
    let parts: Vec<&str> = e.value.split_whitespace().collect();
    match parts.as_slice() {
        ["zero"] => Ok(InitialCondition::Zero),
        ["tanh", eps] => eps
            .parse()
            .map(|eps| InitialCondition::TanhRamp { eps })
            .map_err(|_| CliError::Config(format!("line {}: bad tanh eps `{eps}`", e.line))),
        ["sine", amplitude] => amplitude
            .parse()
            .map(|amplitude| InitialCondition::Sine { amplitude })
            .map_err(|_| {
                CliError::Config(format!("line {}: bad sine amplitude `{amplitude}`", e.line))
            }),
        _ => Err(CliError::Config(format!(
            "line {}: key `ic`: expected `zero`, `tanh <eps>` or `sine <amplitude>`, got `{}`",
            e.line, e.value
        ))),
    }
}

fn render_ic(ic: InitialCondition) -> String {
    match ic {
        InitialCondition::Zero => "zero".to_string(),
        InitialCondition::TanhRamp { eps } => format!("tanh {eps}"),
        InitialCondition::Sine { amplitude } => format!("sine {amplitude}"),
    }
}

fn parse_archetype(s: &str) -> Result<ArchetypeId, CliError> {
    ArchetypeId::from_str(s).map_err(|e| CliError::Config(e.to_string()))
}

fn check_keys(entries: &[&Entry], allowed: &[&str], section: &str) -> Result<(), CliError> {
    for e in entries {
        if !allowed.contains(&e.key.as_str()) {
            return Err(CliError::Config(format!(
                "line {}: unknown key `{}` in [{section}]",
                e.line, e.key
            )));
        }
    }
    Ok(())
}

fn unique<'a>(entries: &[&'a Entry], key: &str) -> Result<Option<&'a Entry>, CliError> {
    let hits: Vec<&&Entry> = entries.iter().filter(|e| e.key == key).collect();
    match hits.len() {
        0 => Ok(None),
        1 => Ok(Some(hits[0])),
        _ => Err(CliError::Config(format!(
            "key `{key}` given more than once (lines {})",
            hits.iter()
                .map(|e| e.line.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

fn resolve_problem(
    raw: &RawConfig,
    override_name: Option<&str>,
) -> Result<(Option<ArchetypeId>, ProblemSpec), CliError> {
    let entries = raw.section("problem");
    check_keys(
        &entries,
        &[
            "archetype", "domain", "eps1", "eps2", "ic", "bc_left", "bc_right", "t_final",
        ],
        "problem",
    )?;
    let name = match override_name {
        Some(s) => Some(parse_archetype(s)?),
        None => unique(&entries, "archetype")?
            .map(|e| parse_archetype(&e.value))
            .transpose()?,
    };
    let t_final = unique(&entries, "t_final")?.map(parse_f64).transpose()?;
    if let Some(id) = name {
        // The only inline key allowed next to an archetype is t_final.
        for e in &entries {
            if !matches!(e.key.as_str(), "archetype" | "t_final") {
                return Err(CliError::Config(format!(
                    "line {}: key `{}` conflicts with `archetype = {id}`",
                    e.line, e.key
                )));
            }
        }
        let mut problem = make_archetype(id);
        if let Some(t) = t_final {
            problem = problem.with_final_time(t)?;
        }
        return Ok((Some(id), problem));
    }
    let missing = |key: &str| CliError::Config(format!("[problem] needs `{key}` (or `archetype`)"));
    let domain = unique(&entries, "domain")?.ok_or_else(|| missing("domain"))?;
    let parts: Vec<&str> = domain.value.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(CliError::Config(format!(
            "line {}: `domain` wants `<x_lo> <x_hi>`",
            domain.line
        )));
    }
    let x_lo: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Config(format!("line {}: bad domain bound", domain.line)))?;
    let x_hi: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Config(format!("line {}: bad domain bound", domain.line)))?;
    let eps1 = parse_f64(unique(&entries, "eps1")?.ok_or_else(|| missing("eps1"))?)?;
    let eps2 = unique(&entries, "eps2")?.map(parse_f64).transpose()?.unwrap_or(0.0);
    let ic = parse_ic(unique(&entries, "ic")?.ok_or_else(|| missing("ic"))?)?;
    let bc_left = unique(&entries, "bc_left")?.map(parse_f64).transpose()?.unwrap_or(0.0);
    let bc_right = unique(&entries, "bc_right")?.map(parse_f64).transpose()?.unwrap_or(0.0);
    let t_final = t_final.ok_or_else(|| missing("t_final"))?;
    let problem = ProblemSpec::new(
        x_lo,
        x_hi,
        ic,
        BoundaryCondition::Constant(bc_left),
        BoundaryCondition::Constant(bc_right),
        Diffusivity::new(eps1, eps2)?,
        t_final,
    )?;
    Ok((None, problem))
}

fn parse_patch(e: &Entry) -> Result<Patch, CliError> {
    let parts: Vec<&str> = e.value.split_whitespace().collect();
    let bad = |what: &str| {
        CliError::Config(format!(
            "line {}: patch wants `<centre> <width> <points> [double <left> <right>]`: bad {what}",
            e.line
        ))
    };
    if parts.len() != 3 && parts.len() != 6 {
        return Err(bad("shape"));
    }
    let centre: f64 = parts[0].parse().map_err(|_| bad("centre"))?;
    let width: f64 = parts[1].parse().map_err(|_| bad("width"))?;
    let points: usize = parts[2].parse().map_err(|_| bad("points"))?;
    let kind = if parts.len() == 6 {
        if parts[3] != "double" {
            return Err(bad("kind"));
        }
        PatchKind::Double {
            left_inset: parts[4].parse().map_err(|_| bad("left inset"))?,
            right_inset: parts[5].parse().map_err(|_| bad("right inset"))?,
        }
    } else {
        PatchKind::Standard
    };
    Ok(Patch::from_width(centre, width, points, kind)?)
}

fn resolve_layout(
    raw: &RawConfig,
    problem: &ProblemSpec,
    override_name: Option<&str>,
) -> Result<(Option<ArchetypeId>, PatchLayout), CliError> {
    let entries = raw.section("layout");
    check_keys(&entries, &["archetype", "gamma", "patch"], "layout")?;
    let name = match override_name {
        Some(s) => Some(parse_archetype(s)?),
        None => unique(&entries, "archetype")?
            .map(|e| parse_archetype(&e.value))
            .transpose()?,
    };
    if let Some(id) = name {
        for e in &entries {
            if e.key != "archetype" {
                return Err(CliError::Config(format!(
                    "line {}: key `{}` conflicts with `archetype = {id}`",
                    e.line, e.key
                )));
            }
        }
        let layout = archetype_layout(id);
        if layout.x_lo() != problem.x_lo() || layout.x_hi() != problem.x_hi() {
            return Err(CliError::Config(format!(
                "layout archetype {id} lives on [{}, {}], but the problem domain is [{}, {}]",
                layout.x_lo(),
                layout.x_hi(),
                problem.x_lo(),
                problem.x_hi()
            )));
        }
        return Ok((Some(id), layout));
    }
    let gamma = parse_usize(
        unique(&entries, "gamma")?
            .ok_or_else(|| CliError::Config("[layout] needs `gamma` (or `archetype`)".into()))?,
    )?;
    let patches: Vec<Patch> = entries
        .iter()
        .filter(|e| e.key == "patch")
        .map(|e| parse_patch(e))
        .collect::<Result<_, _>>()?;
    if patches.is_empty() {
        return Err(CliError::Config(
            "[layout] needs at least one `patch = ...` line (or `archetype`)".into(),
        ));
    }
    Ok((
        None,
        PatchLayout::new(problem.x_lo(), problem.x_hi(), patches, gamma)?,
    ))
}

fn resolve_stepper(raw: &RawConfig, problem: &ProblemSpec) -> Result<StepperSettings, CliError> {
    let entries = raw.section("stepper");
    check_keys(&entries, &["dt", "safety", "output_times", "blowup"], "stepper")?;
    let dt = unique(&entries, "dt")?.map(parse_f64).transpose()?;
    let safety = unique(&entries, "safety")?
        .map(parse_f64)
        .transpose()?
        .unwrap_or(patchdyn::dynamics::DEFAULT_SAFETY);
    let blowup = unique(&entries, "blowup")?
        .map(parse_f64)
        .transpose()?
        .unwrap_or(patchdyn::dynamics::DEFAULT_BLOWUP_BOUND);
    let output_times = match unique(&entries, "output_times")? {
        Some(e) => parse_times(&e.value)
            .map_err(|err| CliError::Config(format!("line {}: {err}", e.line)))?,
        None => linspace(0.0, problem.final_time(), 61),
    };
    Ok(StepperSettings {
        dt,
        safety,
        output_times,
        blowup,
    })
}

fn resolve_oracle(
    raw: &RawConfig,
    problem: &ProblemSpec,
    override_name: Option<&str>,
) -> Result<OracleChoice, CliError> {
    let entries = raw.section("oracle");
    check_keys(
        &entries,
        &["kind", "points", "window", "samples", "rel_tol"],
        "oracle",
    )?;
    let kind = match override_name {
        Some(s) => Some(s.to_string()),
        None => unique(&entries, "kind")?.map(|e| e.value.clone()),
    };
    // Default to the quadrature wherever it applies; it is the cheaper and
    // more accurate reference.
    let kind = kind.unwrap_or_else(|| {
        if problem.diffusivity().is_constant() {
            "quadrature".into()
        } else {
            "brute".into()
        }
    });
    match kind.as_str() {
        "quadrature" => {
            let mut cfg = QuadratureConfig::default();
            if let Some(e) = unique(&entries, "window")? {
                cfg.tol_window = parse_f64(e)?;
            }
            if let Some(e) = unique(&entries, "samples")? {
                cfg.opt_samples = parse_usize(e)?;
            }
            if let Some(e) = unique(&entries, "rel_tol")? {
                cfg.quad_rel_tol = parse_f64(e)?;
            }
            Ok(OracleChoice::Quadrature(cfg))
        }
        "brute" => {
            let points = unique(&entries, "points")?
                .map(parse_usize)
                .transpose()?
                .unwrap_or(1600);
            Ok(OracleChoice::Brute { points })
        }
        other => Err(CliError::Config(format!(
            "key `kind`/--oracle: expected `quadrature` or `brute`, got `{other}`"
        ))),
    }
}

fn resolve_converge(raw: &RawConfig, overrides: &Overrides) -> Result<ConvergeSettings, CliError> {
    let entries = raw.section("converge");
    check_keys(&entries, &["gamma", "spacings"], "converge")?;
    let gamma = match overrides.gamma {
        Some(g) => g,
        None => unique(&entries, "gamma")?
            .map(parse_usize)
            .transpose()?
            .unwrap_or(1),
    };
    let spacings = match &overrides.spacings {
        Some(s) => parse_times(s)?,
        None => match unique(&entries, "spacings")? {
            Some(e) => parse_times(&e.value)
                .map_err(|err| CliError::Config(format!("line {}: {err}", e.line)))?,
            None => patchdyn::analysis::recommended_spacings(gamma),
        },
    };
    Ok(ConvergeSettings { gamma, spacings })
}

fn resolve_output(raw: &RawConfig, overrides: &Overrides) -> Result<OutputSettings, CliError> {
    let entries = raw.section("output");
    check_keys(&entries, &["dir", "micro"], "output")?;
    let dir = match &overrides.out {
        Some(p) => p.clone(),
        None => unique(&entries, "dir")?
            .map(|e| std::path::PathBuf::from(&e.value))
            .unwrap_or_else(|| std::path::PathBuf::from("out")),
    };
    let micro = overrides.micro
        || unique(&entries, "micro")?
            .map(parse_bool)
            .transpose()?
            .unwrap_or(false);
    Ok(OutputSettings { dir, micro })
}

/// Merge a (possibly empty) config file with command-line overrides.
pub fn resolve(raw: &RawConfig, overrides: &Overrides) -> Result<ResolvedConfig, CliError> {
    raw.known_sections_check()?;
    let (problem_name, problem) = resolve_problem(raw, overrides.problem.as_deref())?;
    let (layout_name, layout) = resolve_layout(raw, &problem, overrides.layout.as_deref())?;
    let stepper = resolve_stepper(raw, &problem)?;
    let oracle = resolve_oracle(raw, &problem, overrides.oracle.as_deref())?;
    let converge = resolve_converge(raw, overrides)?;
    let output = resolve_output(raw, overrides)?;
    Ok(ResolvedConfig {
        problem_name,
        problem,
        layout_name,
        layout,
        stepper,
        oracle,
        converge,
        output,
    })
}

/// The study subcommand needs only [converge] and [output]; it runs on its
/// own built-in smooth problem.
pub fn resolve_converge_only(
    raw: &RawConfig,
    overrides: &Overrides,
) -> Result<(ConvergeSettings, OutputSettings), CliError> {
    raw.known_sections_check()?;
    Ok((
        resolve_converge(raw, overrides)?,
        resolve_output(raw, overrides)?,
    ))
}

/// Render the fully expanded configuration. Floats use Rust's shortest
/// round-trip formatting, so parsing the output reproduces the run exactly.
pub fn render(cfg: &ResolvedConfig) -> String {
    let mut out = String::new();
    let p = &cfg.problem;
    out.push_str("[problem]\n");
    out.push_str(&format!("domain = {} {}\n", p.x_lo(), p.x_hi()));
    out.push_str(&format!("eps1 = {}\n", p.diffusivity().eps1()));
    out.push_str(&format!("eps2 = {}\n", p.diffusivity().eps2()));
    out.push_str(&format!("ic = {}\n", render_ic(p.initial_condition())));
    let (bl, br) = p.boundary_values(0.0);
    out.push_str(&format!("bc_left = {bl}\n"));
    out.push_str(&format!("bc_right = {br}\n"));
    out.push_str(&format!("t_final = {}\n", p.final_time()));

    out.push_str("\n[layout]\n");
    out.push_str(&format!("gamma = {}\n", cfg.layout.gamma()));
    for patch in cfg.layout.patches() {
        let width = 2.0 * patch.half_width();
        match patch.kind() {
            PatchKind::Standard => out.push_str(&format!(
                "patch = {} {} {}\n",
                patch.centre(),
                width,
                patch.point_count()
            )),
            PatchKind::Double {
                left_inset,
                right_inset,
            } => out.push_str(&format!(
                "patch = {} {} {} double {} {}\n",
                patch.centre(),
                width,
                patch.point_count(),
                left_inset,
                right_inset
            )),
        }
    }

    out.push_str("\n[stepper]\n");
    if let Some(dt) = cfg.stepper.dt {
        out.push_str(&format!("dt = {dt}\n"));
    }
    out.push_str(&format!("safety = {}\n", cfg.stepper.safety));
    out.push_str(&format!("blowup = {}\n", cfg.stepper.blowup));
    let times = cfg
        .stepper
        .output_times
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(",");
    out.push_str(&format!("output_times = {times}\n"));

    out.push_str("\n[oracle]\n");
    out.push_str(&format!("kind = {}\n", cfg.oracle.name()));
    match &cfg.oracle {
        OracleChoice::Quadrature(q) => {
            out.push_str(&format!("window = {}\n", q.tol_window));
            out.push_str(&format!("samples = {}\n", q.opt_samples));
            out.push_str(&format!("rel_tol = {}\n", q.quad_rel_tol));
        }
        OracleChoice::Brute { points } => {
            out.push_str(&format!("points = {points}\n"));
        }
    }

    out.push_str("\n[converge]\n");
    out.push_str(&format!("gamma = {}\n", cfg.converge.gamma));
    let spacings = cfg
        .converge
        .spacings
        .iter()
        .map(|h| h.to_string())
        .collect::<Vec<_>>()
        .join(",");
    out.push_str(&format!("spacings = {spacings}\n"));

    out.push_str("\n[output]\n");
    out.push_str(&format!("dir = {}\n", cfg.output.dir.display()));
    out.push_str(&format!("micro = {}\n", cfg.output.micro));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve_text(text: &str) -> Result<ResolvedConfig, CliError> {
        resolve(&RawConfig::parse(text)?, &Overrides::default())
    }

    #[test]
    fn archetype_shorthand_expands() {
        let cfg = resolve_text("[problem]\narchetype = M1\n[layout]\narchetype = M1\n").unwrap();
        assert_eq!(cfg.problem_name, Some(ArchetypeId::M1));
        assert_eq!(cfg.layout.patches().len(), 5);
        assert_eq!(cfg.stepper.output_times.len(), 61);
        assert_eq!(cfg.oracle.name(), "quadrature");
    }

    #[test]
    fn rendered_config_round_trips() {
        let cfg = resolve_text(
            "[problem]\narchetype = M3\nt_final = 2.5\n[layout]\narchetype = M3\n",
        )
        .unwrap();
        assert_eq!(cfg.oracle.name(), "brute");
        let text = render(&cfg);
        let again = resolve_text(&text).unwrap();
        assert_eq!(again.problem, cfg.problem);
        assert_eq!(again.layout, cfg.layout);
        assert_eq!(again.stepper.output_times, cfg.stepper.output_times);
        assert_eq!(again.oracle, cfg.oracle);
    }

    #[test]
    fn inline_problem_and_layout() {
        let text = "\
[problem]
domain = -3.141592653589793 3.141592653589793
eps1 = 0.01
ic = sine -1
t_final = 1.0

[layout]
gamma = 2
patch = -1.5 0.02 5
patch = 0 0.02 5
patch = 1.5 0.02 5

[stepper]
output_times = linspace 0 1 11
";
        let cfg = resolve_text(text).unwrap();
        assert_eq!(cfg.layout.gamma(), 2);
        assert_eq!(cfg.layout.patches().len(), 3);
        assert_eq!(cfg.stepper.output_times.len(), 11);
        assert!((cfg.problem.final_time() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_line_and_key() {
        let err = resolve_text("[problem]\narchetype = M9\n[layout]\narchetype = M1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("M9"), "{err}");

        let err = resolve_text("[problem]\nbogus = 1\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("bogus"), "{err}");

        let err = RawConfig::parse("[problem\n").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");

        let err = resolve_text("[problem]\narchetype = M1\neps1 = 5\n[layout]\narchetype = M1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("eps1") && err.contains("conflicts"), "{err}");
    }

    #[test]
    fn cli_overrides_win() {
        let raw = RawConfig::parse("[problem]\narchetype = M1\n[layout]\narchetype = M1\n").unwrap();
        let overrides = Overrides {
            problem: Some("M2".into()),
            layout: Some("M2".into()),
            oracle: Some("brute".into()),
            out: Some("elsewhere".into()),
            ..Overrides::default()
        };
        let cfg = resolve(&raw, &overrides).unwrap();
        assert_eq!(cfg.problem_name, Some(ArchetypeId::M2));
        assert_eq!(cfg.layout.patches().len(), 35);
        assert!(matches!(cfg.oracle, OracleChoice::Brute { points: 1600 }));
        assert_eq!(cfg.output.dir, std::path::PathBuf::from("elsewhere"));
    }

    #[test]
    fn times_parser_accepts_both_forms() {
        assert_eq!(parse_times("0.5, 1.0,1.5").unwrap(), vec![0.5, 1.0, 1.5]);
        assert_eq!(parse_times("linspace 0 3 61").unwrap().len(), 61);
        assert!(parse_times("linspace 3 0 61").is_err());
        assert!(parse_times("0.5, fish").is_err());
    }
}
