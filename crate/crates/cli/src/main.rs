use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use regulus_cli::commands::{run_check, run_lvalue, run_regulator, LValueArgs, Method, RegulatorArgs};
use regulus_cli::report::Report;
use regulus_cli::verify::{run_verify, Preset, VerifyArgs};

#[derive(Parser)]
#[command(
    name = "regulus",
    version,
    about = "Regulators of superelliptic curves against L-function derivatives"
)]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock times in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the hypotheses on a curve.
    Check { curve: PathBuf },
    /// Evaluate a regulator by one or more methods.
    Regulator {
        curve: PathBuf,
        #[arg(long, default_value = "xi")]
        symbol: String,
        #[arg(long, default_value = "delta")]
        cycle: String,
        #[arg(long, default_value = "all")]
        methods: String,
        #[arg(long, default_value_t = 25)]
        digits: u32,
    },
    /// Evaluate L^(r)(0) for an L-function description.
    Lvalue {
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = 15)]
        digits: u32,
        /// Override the automatic coefficient cutoff.
        #[arg(long)]
        n_max: Option<usize>,
        /// Recompute with twice the cutoff and report the change.
        #[arg(long)]
        check_cutoff: bool,
    },
    /// Reproduce one of the built-in examples: e23, e23p, e24, e42, e32k.
    Verify {
        preset: String,
        #[arg(long, default_value_t = 25)]
        digits: u32,
        /// Digits for degree-2 L-values (default min(digits, 17)).
        #[arg(long)]
        l2_digits: Option<u32>,
        /// Digits for degree-4 L-values (default min(digits, 13)).
        #[arg(long)]
        l4_digits: Option<u32>,
    },
}

fn run(cli: &Cli) -> regulus_core::Result<Report> {
    match &cli.command {
        Command::Check { curve } => run_check(curve),
        Command::Regulator {
            curve,
            symbol,
            cycle,
            methods,
            digits,
        } => run_regulator(
            curve,
            &RegulatorArgs {
                symbol,
                cycle,
                methods: &Method::parse_list(methods)?,
                digits: *digits,
                timings: cli.timings,
            },
        ),
        Command::Lvalue {
            spec,
            order,
            digits,
            n_max,
            check_cutoff,
        } => run_lvalue(
            spec,
            &LValueArgs {
                order: *order,
                digits: *digits,
                n_max: *n_max,
                check_cutoff: *check_cutoff,
                timings: cli.timings,
            },
        ),
        Command::Verify {
            preset,
            digits,
            l2_digits,
            l4_digits,
        } => run_verify(
            preset.parse::<Preset>()?,
            &VerifyArgs {
                digits: *digits,
                l2_digits: *l2_digits,
                l4_digits: *l4_digits,
                timings: cli.timings,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{json}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
