//! `cphi`: bounds, truncated-matrix estimates and inequality checks for
//! composition operators with symbol `φ(s) = c₁ + c₂·q^{-s}`.
//!
//! Exit status: 0 success, 1 verification failure, 2 invalid input,
//! 3 resource limit.

mod commands;
mod config;
mod format;

use std::io::Write;
use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, Outcome};
use config::{Format, Overrides, RunConfig};

#[derive(Parser)]
#[command(
    name = "cphi",
    version,
    about = "Norm bounds and numerics for composition operators on the Hardy-Dirichlet space"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Re c1
    #[arg(long, global = true, allow_hyphen_values = true)]
    c1_re: Option<f64>,
    /// Im c1
    #[arg(long, global = true, allow_hyphen_values = true)]
    c1_im: Option<f64>,
    /// |c2|
    #[arg(long, global = true)]
    c2_abs: Option<f64>,
    /// arg c2 in radians
    #[arg(long, global = true, allow_hyphen_values = true)]
    c2_arg: Option<f64>,
    /// Base q of the symbol
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Highest row index I of the truncation
    #[arg(long, global = true)]
    rows: Option<usize>,
    /// Number of columns J of the truncation
    #[arg(long, global = true)]
    cols: Option<usize>,
    /// Absolute and relative tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Term limit for every summation
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Output format: json or csv
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write the document here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// File of key = value lines; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            c1_re: self.c1_re,
            c1_im: self.c1_im,
            c2_abs: self.c2_abs,
            c2_arg: self.c2_arg,
            q: self.q,
            rows: self.rows,
            cols: self.cols,
            abs_tol: self.tol,
            rel_tol: self.tol,
            max_terms: self.max_terms,
            format: self.format,
            output: self.output.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analytic norm bracket, Schur radius and approximation-number bound
    Bounds,
    /// Two-sided norm estimate from a truncated matrix
    MatrixNorm {
        /// Also write the truncated matrix to this file
        #[arg(long)]
        dump_matrix: Option<PathBuf>,
        /// Power-iteration limit
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Singular values of the truncation against the exponential bound
    ApproxNumbers {
        /// Largest N in the table
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Grid checks of the zeta inequalities and the crossing root
    VerifyLemmas {
        /// First grid point
        #[arg(long, default_value_t = 1.001)]
        s_min: f64,
        /// Last grid point
        #[arg(long, default_value_t = 100.0)]
        s_max: f64,
        /// Grid size
        #[arg(long, default_value_t = 500)]
        points: usize,
        /// Flip one inequality to check that failures are reported
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Lower bounds for zeta(x+1) against the certified value on [0.1, 10]
    Figure {
        /// Number of x values
        #[arg(long, default_value_t = cphi_core::figure::DEFAULT_FIGURE_POINTS)]
        points: usize,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let file = match &cli.common.config {
        Some(path) => Overrides::from_file(path).map_err(CliError::invalid)?,
        None => Overrides::default(),
    };
    let cfg = RunConfig::resolve(file.merged_with(cli.common.overrides()))?;
    let outcome = match cli.command {
        Command::Bounds => commands::cmd_bounds(&cfg)?,
        Command::MatrixNorm {
            dump_matrix,
            max_iter,
        } => commands::cmd_matrix_norm(&cfg, dump_matrix.as_deref(), max_iter)?,
        Command::ApproxNumbers { n_max } => commands::cmd_approx_numbers(&cfg, n_max)?,
        Command::VerifyLemmas {
            s_min,
            s_max,
            points,
            inject_fault,
        } => commands::cmd_verify_lemmas(&cfg, s_min, s_max, points, inject_fault)?,
        Command::Figure { points } => commands::cmd_figure(&cfg, points)?,
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.body)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth a failure status.
            let _ = stdout
                .write_all(outcome.body.as_bytes())
                .and_then(|_| stdout.flush());
        }
    }
    Ok(outcome)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(outcome) => {
            for line in &outcome.diagnostics {
                eprintln!("cphi: {line}");
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("cphi: error: {e}");
            e.code
        }
    };
    process::exit(code as i32);
}
