use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand, ValueEnum};
use curvcones::chart::DEFAULT_STEP;
use curvcones::symcone::DEFAULT_TOLERANCE;
use curvcones_cli::commands::{cmd_analyze, cmd_cones, cmd_model, AnalyzeOptions, FD_ACCEPTANCE};
use curvcones_cli::verify::{render_text, run_all, Fault};
use curvcones_cli::{render_markdown, CliError, ExitCode, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Parser)]
#[command(name = "curvcones", version, about = "Shifted eigenvalue cones of curvature operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a catalog model (s3, s2xs1, sKxs1:k, flat:n, cpn:n, cp1xcp1, hyperbolic:n).
    Model {
        name: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Analyze a JSON metric chart by finite differences.
    Analyze {
        chart: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Tolerance floor for finite-difference evidence.
        #[arg(long, default_value_t = FD_ACCEPTANCE)]
        fd_tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Cone tests on a raw comma-separated spectrum.
    Cones {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        spectrum: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        kahler_n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the full reproduction suite; exit 4 if any check fails.
    VerifyPaper {
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Md => print!("{}", render_markdown(report)),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let (report, format) = match cli.command {
        Command::Model { name, k, tol, format } => (cmd_model(&name, k, tol)?, format),
        Command::Analyze {
            chart,
            k,
            step,
            tol,
            fd_tol,
            format,
        } => {
            let text = std::fs::read_to_string(&chart)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", chart.display())))?;
            let opts = AnalyzeOptions { k, step, tol, fd_tol };
            (cmd_analyze(&text, &chart.display().to_string(), opts)?, format)
        }
        Command::Cones {
            spectrum,
            k,
            kahler_n,
            tol,
            format,
        } => (cmd_cones(&spectrum, k, kahler_n, tol)?, format),
        Command::VerifyPaper { format, inject_fault } => {
            let r = run_all(inject_fault);
            match format {
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&r).expect("finite report")),
                _ => print!("{}", render_text(&r)),
            }
            return Ok(if r.passed { ExitCode::Ok } else { ExitCode::Verification });
        }
    };
    emit(&report, format);
    if let Some(why) = &report.refusal {
        eprintln!("classification refused: {why}");
        return Ok(ExitCode::Usage);
    }
    Ok(ExitCode::Ok)
}

fn main() {
    let code = match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    process::exit(code as i32);
}
