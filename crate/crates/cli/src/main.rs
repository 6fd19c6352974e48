//! qdx: correlator computations, correlation-dynamics trajectories and
//! critical scans for two-qubit X states of spin-chain ground states.
//!
//! Output goes to stdout (or --output FILE) as CSV or JSON; identical
//! arguments and seed produce byte-identical output. An optional TOML
//! config file supplies defaults that explicit flags override.

mod commands;
mod config;
mod error;
mod oracle;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{
    cmd_correlators, cmd_scan, cmd_trajectory, CorrelatorsArgs, ScanArgs, TrajectoryArgs,
};
use config::{pick, require, FileConfig};
use error::CliError;
use oracle::{cmd_oracle, OracleArgs};
use output::{OutputFormat, Report};
use qdx_core::{ChannelKind, QuadratureConfig, ScanParameter};

#[derive(Parser)]
#[command(
    name = "qdx",
    about = "Quantum discord dynamics of two-qubit X states under decoherence",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args)]
struct GlobalOpts {
    /// Output format: csv or json
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// TOML config file; explicit flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    abs_tol: Option<f64>,

    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Adaptive quadrature subdivision cap
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-state correlators of an XY/TIM point (or a lambda sweep)
    Correlators {
        /// Model: xy or tim
        #[arg(long)]
        model: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<f64>,
        /// Spin separation r >= 1
        #[arg(long)]
        r: Option<usize>,
        /// Sweep lambda over from:to:step with gamma fixed
        #[arg(long)]
        lambda_grid: Option<String>,
    },
    /// Correlation triple (I, C, Q) along parametrized time
    Trajectory {
        /// Model: xy, tim or xxz
        #[arg(long)]
        model: Option<String>,
        /// Channel: ad, pf, bf or bpf
        #[arg(long)]
        channel: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<f64>,
        /// XXZ anisotropy (requires --table)
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        #[arg(long)]
        r: Option<usize>,
        /// Correlator table for ingested models
        #[arg(long)]
        table: Option<PathBuf>,
        /// Number of p grid points
        #[arg(long)]
        p_points: Option<usize>,
        /// Last p grid point (p = 1 is excluded)
        #[arg(long, allow_negative_numbers = true)]
        p_max: Option<f64>,
    },
    /// p_sc and its derivative along a tuning-parameter grid
    Scan {
        /// Parameter to vary: lambda, gamma or delta
        #[arg(long)]
        parameter: Option<String>,
        /// Channel: pf, bf or bpf
        #[arg(long)]
        channel: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        from: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        to: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        step: Option<f64>,
        /// Fixed lambda for gamma scans
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        /// Fixed gamma for lambda scans
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<f64>,
        #[arg(long)]
        r: Option<usize>,
        /// Correlator table (required for delta scans; its rows are the
        /// default grid)
        #[arg(long)]
        table: Option<PathBuf>,
        /// Permit grid points sitting exactly on a critical value
        #[arg(long)]
        allow_critical: bool,
    },
    /// Run the independent verification oracles and report deviations
    Oracle {
        /// RNG seed for the state sweeps
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random states for the algebraic oracles
        #[arg(long)]
        states: Option<usize>,
        /// Number of random states for the brute-force discord oracle
        #[arg(long)]
        discord_states: Option<usize>,
        /// Negative control: deliberately corrupt one formula path
        #[arg(long, hide = true)]
        corrupt: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let file = FileConfig::load(cli.global.config.as_deref()).map_err(CliError::usage)?;
    let quad = QuadratureConfig {
        abs_tol: pick(cli.global.abs_tol, file.quadrature.abs_tol, 1e-10),
        rel_tol: pick(cli.global.rel_tol, file.quadrature.rel_tol, 1e-10),
        max_subdivisions: pick(
            cli.global.max_subdivisions,
            file.quadrature.max_subdivisions,
            1 << 20,
        ),
    };
    let format: OutputFormat = cli.global.format.parse().map_err(CliError::usage)?;

    let (report, code) = match cli.command {
        Command::Correlators {
            model,
            lambda,
            gamma,
            r,
            lambda_grid,
        } => {
            let f = file.correlators;
            let args = CorrelatorsArgs {
                model: pick(model, f.model, "xy".into()),
                lambda: lambda.or(f.lambda),
                gamma: gamma.or(f.gamma),
                r: pick(r, f.r, 1),
                lambda_grid: lambda_grid.or(f.lambda_grid),
                quad,
            };
            (cmd_correlators(&args)?, ExitCode::SUCCESS)
        }
        Command::Trajectory {
            model,
            channel,
            lambda,
            gamma,
            delta,
            r,
            table,
            p_points,
            p_max,
        } => {
            let f = file.trajectory;
            let channel: ChannelKind = require(channel, f.channel, "channel")
                .map_err(CliError::usage)?
                .parse()?;
            let args = TrajectoryArgs {
                model: pick(model, f.model, "xy".into()),
                channel,
                lambda: lambda.or(f.lambda),
                gamma: gamma.or(f.gamma),
                delta: delta.or(f.delta),
                r: pick(r, f.r, 1),
                table: table.or(f.table.map(PathBuf::from)),
                p_points: pick(p_points, f.p_points, 1001),
                p_max: pick(p_max, f.p_max, 0.999),
                quad,
            };
            (cmd_trajectory(&args)?, ExitCode::SUCCESS)
        }
        Command::Scan {
            parameter,
            channel,
            from,
            to,
            step,
            lambda,
            gamma,
            r,
            table,
            allow_critical,
        } => {
            let f = file.scan;
            let parameter: ScanParameter = require(parameter, f.parameter, "parameter")
                .map_err(CliError::usage)?
                .parse()?;
            let channel: ChannelKind = require(channel, f.channel, "channel")
                .map_err(CliError::usage)?
                .parse()?;
            let args = ScanArgs {
                parameter,
                channel,
                from: from.or(f.from),
                to: to.or(f.to),
                step: step.or(f.step),
                lambda: pick(lambda, f.lambda, 0.5),
                gamma: pick(gamma, f.gamma, 1.0),
                r: pick(r, f.r, 1),
                table: table.or(f.table.map(PathBuf::from)),
                allow_critical,
                quad,
            };
            (cmd_scan(&args)?, ExitCode::SUCCESS)
        }
        Command::Oracle {
            seed,
            states,
            discord_states,
            corrupt,
        } => {
            let f = file.oracle;
            let args = OracleArgs {
                seed: pick(seed, f.seed, 42),
                states: pick(states, f.states, 1000),
                discord_states: pick(discord_states, f.discord_states, 200),
                corrupt,
            };
            let (report, all_ok) = cmd_oracle(&args)?;
            let code = if all_ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error code=5 kind=oracle-tolerance msg=\"one or more oracles exceeded tolerance\"");
                ExitCode::from(5)
            };
            (report, code)
        }
    };

    emit(&report, format, cli.global.output.as_deref())?;
    Ok(code)
}

fn emit(
    report: &Report,
    format: OutputFormat,
    path: Option<&std::path::Path>,
) -> Result<(), CliError> {
    match path {
        None => {
            let stdout = std::io::stdout();
            report
                .write(format, stdout.lock())
                .map_err(|e| CliError::io(format!("cannot write output: {e}")))
        }
        Some(p) => {
            let file = std::fs::File::create(p)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", p.display())))?;
            let mut w = std::io::BufWriter::new(file);
            report
                .write(format, &mut w)
                .and_then(|()| w.flush())
                .map_err(|e| CliError::io(format!("cannot write {}: {e}", p.display())))
        }
    }
}
