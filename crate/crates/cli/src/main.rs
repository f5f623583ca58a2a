use clap::{Args, Parser, Subcommand};
use patchdyn_cli::commands::{self, fmt_sig};
use patchdyn_cli::config::{self, Overrides, RawConfig, ResolvedConfig};
use patchdyn_cli::CliError;
use std::path::PathBuf;

/// Multiscale patch-dynamics simulator for viscous Burgers-type problems,
/// with a shock-capturing double patch and trusted-solution comparisons.
#[derive(Parser)]
#[command(name = "patchdyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Configuration file (flat `[section]` / `key = value` text)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Archetype problem name (M1..M4); overrides the config file
    #[arg(long)]
    problem: Option<String>,
    /// Archetype layout name (M1..M4); overrides the config file
    #[arg(long)]
    layout: Option<String>,
    /// Trusted solution to compare against: quadrature | brute
    #[arg(long)]
    oracle: Option<String>,
    /// Output directory (default `out`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the fully expanded configuration and exit
    #[arg(long)]
    print_config: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate and write the macroscale trajectory
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write every micro-mesh snapshot
        #[arg(long)]
        micro: bool,
    },
    /// Simulate, then measure errors against a trusted solution
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Also report the worst micro-mesh error (diagnostic)
        #[arg(long)]
        micro: bool,
    },
    /// Convergence-order study on a smooth shock-free problem
    Converge {
        #[command(flatten)]
        common: CommonArgs,
        /// Coupling order to study
        #[arg(long)]
        gamma: Option<usize>,
        /// Comma list of macroscale spacings (or `linspace <lo> <hi> <n>`)
        #[arg(long)]
        spacings: Option<String>,
    },
    /// Evaluate a trusted solution on a space-time grid
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma list of evaluation times (default: five times up to t_final)
        #[arg(long)]
        times: Option<String>,
        /// Number of evaluation points across the domain
        #[arg(long, default_value_t = 101)]
        x_count: usize,
    },
    /// List the built-in archetype problems
    List,
}

fn read_raw(common: &CommonArgs) -> Result<RawConfig, CliError> {
    match &common.config {
        Some(path) => RawConfig::parse(&std::fs::read_to_string(path)?),
        None => Ok(RawConfig::default()),
    }
}

fn load(common: &CommonArgs, micro: bool) -> Result<ResolvedConfig, CliError> {
    let raw = read_raw(common)?;
    if common.problem.is_none() && !raw.has_section("problem") {
        return Err(CliError::Config(
            "no problem given: pass --problem M1..M4 or a config file with [problem]".into(),
        ));
    }
    if common.layout.is_none() && !raw.has_section("layout") {
        return Err(CliError::Config(
            "no layout given: pass --layout M1..M4 or a config file with [layout]".into(),
        ));
    }
    let overrides = Overrides {
        problem: common.problem.clone(),
        layout: common.layout.clone(),
        oracle: common.oracle.clone(),
        out: common.out.clone(),
        micro,
        ..Overrides::default()
    };
    config::resolve(&raw, &overrides)
}

fn real_main() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { common, micro } => {
            let cfg = load(&common, micro)?;
            if common.print_config {
                print!("{}", config::render(&cfg));
                return Ok(());
            }
            let artifacts = commands::cmd_run(&cfg)?;
            println!(
                "wrote {} ({} times x {} nodes)",
                artifacts.macro_path.display(),
                artifacts.times,
                artifacts.nodes
            );
            if let Some(p) = artifacts.micro_path {
                println!("wrote {}", p.display());
            }
        }
        Command::Compare { common, micro } => {
            let cfg = load(&common, micro)?;
            if common.print_config {
                print!("{}", config::render(&cfg));
                return Ok(());
            }
            let artifacts = commands::cmd_compare(&cfg)?;
            println!("global_max: {}", fmt_sig(artifacts.global_max));
            if let Some(r) = artifacts.outside_double_max {
                println!("outside_double_max: {}", fmt_sig(r));
            }
            println!("wrote {}", artifacts.report_path.display());
        }
        Command::Converge {
            common,
            gamma,
            spacings,
        } => {
            let raw = read_raw(&common)?;
            let overrides = Overrides {
                gamma,
                spacings,
                out: common.out.clone(),
                ..Overrides::default()
            };
            let (converge, output) = config::resolve_converge_only(&raw, &overrides)?;
            let artifacts = commands::cmd_converge(&converge, &output)?;
            match artifacts.slope {
                Some(s) => println!(
                    "gamma {} fitted slope: {} (nominal {})",
                    artifacts.gamma,
                    fmt_sig(s),
                    2 * artifacts.gamma
                ),
                None => println!(
                    "gamma {}: errors at rounding level (exact)",
                    artifacts.gamma
                ),
            }
            println!("wrote {}", artifacts.report_path.display());
        }
        Command::Oracle {
            common,
            times,
            x_count,
        } => {
            let cfg = load(&common, false)?;
            if common.print_config {
                print!("{}", config::render(&cfg));
                return Ok(());
            }
            let times = match times {
                Some(list) => config::parse_times(&list)?,
                None => patchdyn::linspace(
                    cfg.problem.final_time() / 5.0,
                    cfg.problem.final_time(),
                    5,
                ),
            };
            let artifacts = commands::cmd_oracle(&cfg, &times, x_count)?;
            println!(
                "wrote {} ({} rows)",
                artifacts.path.display(),
                artifacts.rows
            );
        }
        Command::List => print!("{}", commands::cmd_list()),
    }
    Ok(())
}

fn main() {
    if let Err(e) = real_main() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
