use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use qsclab_cli::grid::{parse_param, RangeSpec};
use qsclab_cli::sweep::{ConfigFile, SweepConfig};
use qsclab_cli::{compare, figures, sweep, validate};

fn param_arg(s: &str) -> Result<(String, RangeSpec)> {
    parse_param(s)
}

/// Fidelity survey harness for secure quantum communication protocols under
/// damping, Pauli, and collective noise models.
#[derive(Parser)]
#[command(name = "qsclab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one protocol/channel pair over a parameter grid; emit CSV rows
    /// with numeric and closed-form fidelities.
    Sweep {
        /// Protocol id: b92, bbm, qka1, qka2, lm05, pp, qd1, qd2.
        #[arg(long)]
        protocol: Option<String>,
        /// Channel kind: ad, pd, cd, cr, pauli, bit_flip, phase_flip,
        /// bit_phase_flip, depolarizing, sgad.
        #[arg(long)]
        channel: Option<String>,
        /// Range per channel parameter: NAME=VALUE, NAME=START:STOP:STEP, or
        /// NAME=START:STOP:COUNTn. Repeatable; overrides config entries.
        #[arg(long = "param", value_name = "NAME=RANGE", value_parser = param_arg)]
        params: Vec<(String, RangeSpec)>,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON config mirroring the sweep fields; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Evaluate grid points one at a time instead of in parallel.
        #[arg(long)]
        sequential: bool,
    },
    /// Compare the numeric engine against every closed-form key over dense
    /// grids. Exit 1 iff a non-SGAD key exceeds the tolerance; SGAD
    /// deviations are reported as documented discrepancies.
    Compare {
        /// Grid points per parameter axis.
        #[arg(long, default_value_t = 21)]
        grid: usize,
        /// Failure tolerance for non-SGAD keys.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Also write a per-key CSV summary to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the CSV data behind one figure panel (1a-1f, 2a-2f, 4a-4f,
    /// 5a-5f, contours 3a/3c/6). Time panels (…f) need --param bindings
    /// for x, r, p, Q, Phi and a t range.
    Figure {
        id: String,
        #[arg(long = "param", value_name = "NAME=RANGE", value_parser = param_arg)]
        params: Vec<(String, RangeSpec)>,
        /// Output CSV path (stdout when omitted; figure 6 uses it as a stem
        /// for its four files).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run channel-algebra self checks (CPTP grids, limit chains, rate pins,
    /// unitarity). Exit 1 if any check fails.
    Validate,
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sweep {
            protocol,
            channel,
            params,
            out,
            config,
            sequential,
        } => {
            let file = config.as_deref().map(ConfigFile::load).transpose()?;
            let cfg = SweepConfig::resolve(
                file,
                protocol.as_deref(),
                channel.as_deref(),
                &params,
                out,
                sequential,
            )?;
            sweep::cmd_sweep(&cfg)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare {
            grid,
            tolerance,
            out,
        } => {
            let report = compare::cmd_compare(grid, tolerance, out.as_deref())?;
            Ok(if report.exit_failure() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Figure { id, params, out } => {
            figures::cmd_figure(&id, &params, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate => Ok(if validate::cmd_validate()? {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
