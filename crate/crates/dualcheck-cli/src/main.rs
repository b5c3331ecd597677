use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use dualcheck_cli::run::{run, Options, Source};

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Exact duality tests for linear systems of partial differential equations.
///
/// Exit status: 0 for a definite answer, 2 when a search bound was reached,
/// 1 on errors and failed demo checks.
#[derive(Parser)]
#[command(name = "dualcheck", version)]
struct Args {
    /// adjoint, cc, rank, test, test2, param, selfadjoint, dims, pp,
    /// spencerize or demo.
    command: String,
    /// A `.sys` file, or a fixture id for `demo`.
    input: Option<String>,
    /// Use a registered fixture instead of a file.
    #[arg(long, value_name = "ID")]
    demo: Option<String>,
    /// Run every fixture (`demo` only).
    #[arg(long)]
    all: bool,
    /// Bound on multiplier and syzygy orders.
    #[arg(long, value_name = "N")]
    max_order: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Seed for randomized cross-checks.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Specialize a parameter, e.g. `l1=l2` or `a=1/2`. Repeatable.
    #[arg(long, value_name = "SYM=VALUE")]
    subst: Vec<String>,
    /// Comma-separated row scaling for `selfadjoint`.
    #[arg(long, value_name = "LIST")]
    row_scale: Option<String>,
    /// Comma-separated column scaling for `selfadjoint`.
    #[arg(long, value_name = "LIST")]
    col_scale: Option<String>,
    /// Extra prolongations for `pp` and `dims`.
    #[arg(long, default_value_t = 0)]
    prolong: u32,
    /// Number of projections for `pp`.
    #[arg(long, default_value_t = 3)]
    project: u32,
    /// Record the wall time in the report.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let source = match (&args.demo, &args.input) {
        (Some(_), Some(_)) => {
            eprintln!("error: give either a file or --demo, not both");
            return ExitCode::from(1);
        }
        (Some(id), None) => Some(Source::Demo(id.clone())),
        (None, Some(x)) if args.command == "demo" => Some(Source::Demo(x.clone())),
        (None, Some(x)) => Some(Source::File(PathBuf::from(x))),
        (None, None) => None,
    };
    let opts = Options {
        max_order: args.max_order,
        seed: args.seed,
        subst: args.subst.clone(),
        row_scale: args.row_scale.clone(),
        col_scale: args.col_scale.clone(),
        prolong: args.prolong,
        project: args.project,
        all: args.all,
    };
    let start = Instant::now();
    match run(&args.command, source.as_ref(), &opts) {
        Ok(mut report) => {
            if args.timing {
                report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
            }
            match args.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => print!("{}", report.to_json()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
