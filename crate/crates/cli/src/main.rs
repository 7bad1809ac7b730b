use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cfriend_cli::commands::{self, DEFAULT_GRID, DEFAULT_REFINE, DEFAULT_SAMPLES, DEFAULT_SEED};
use cfriend_cli::report::{render_text, RunReport};
use cfriend_cli::{CliError, EXIT_CHECK_FAILED, EXIT_USAGE};

/// Extended Wigner's-friend scenarios, causal-friendliness assumptions and
/// the CHSH polytope.
#[derive(Parser, Debug)]
#[command(name = "cfriend", version, about)]
struct Cli {
    /// Emit the full report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Override the numerical tolerance used by the checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the four-agent circuit described by a spec file.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        /// Run the time-reversed protocol instead.
        #[arg(long)]
        reverse: bool,
    },
    /// Decide whether a behavior table lies in the local polytope.
    Membership {
        #[arg(long)]
        behavior: PathBuf,
    },
    /// Random-sampling campaigns for the two lemmas and the OPEM argument.
    Lemmas {
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// The context-dependent model that reaches S = 4.
    Boxworld,
    /// Grid search plus local refinement for the largest S.
    Sweep {
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_REFINE)]
        refine: usize,
        /// Recorded in the report; the search itself is deterministic.
        #[arg(long)]
        seed: Option<u64>,
        /// Take the input state from this spec (default: maximally mixed).
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Friend's lab map applied to |+>.
    WignerDemo,
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    match &cli.command {
        Command::Simulate { spec, reverse } => commands::simulate(spec, *reverse, cli.tol),
        Command::Membership { behavior } => commands::membership_cmd(behavior, cli.tol),
        Command::Lemmas { samples, seed } => commands::lemmas(*samples, *seed, cli.tol),
        Command::Boxworld => commands::boxworld(cli.tol),
        Command::Sweep {
            grid,
            refine,
            seed,
            spec,
        } => commands::sweep(*grid, *refine, *seed, spec.as_deref()),
        Command::WignerDemo => commands::wigner_demo(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(report) => {
            let text = if cli.json {
                report.to_json() + "\n"
            } else {
                render_text(&report)
            };
            // a closed pipe (`| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if report.all_checks_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED as u8)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
