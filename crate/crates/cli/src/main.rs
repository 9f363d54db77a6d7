//! `zxel` command-line front end.
//!
//! Exit codes: 0 success (or "equal"), 1 a negative answer ("not equal",
//! failing rules), 2 any error. Machine output goes to stdout as JSON,
//! diagnostics to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zxel::io::ExportFormat;

#[derive(Parser)]
#[command(name = "zxel", version, about = "Algebraic ZX-calculus toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the matrix of a diagram.
    Interpret {
        file: PathBuf,
        /// Digits after the decimal point.
        #[arg(long, default_value_t = 6)]
        precision: usize,
        /// Print `{"rows", "cols", "data"}` with `[re, im]` entries instead.
        #[arg(long)]
        json: bool,
    },
    /// Decide whether two diagrams are equal (exit 0 equal, 1 not equal).
    CheckEq {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print the normal form of a diagram as JSON.
    Normalize {
        file: PathBuf,
        /// Also write the normal-form diagram to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite a diagram with the simplification rules.
    Simplify {
        file: PathBuf,
        /// Maximum number of rewrite steps (default: ten per node).
        #[arg(long)]
        budget: Option<usize>,
        /// List each applied rule and its nodes on stderr.
        #[arg(long)]
        trace: bool,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every rule of the catalogue on random parameters (exit 0 iff all pass).
    Rules {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
        /// Also check the rules in this file.
        #[arg(long)]
        extra: Option<PathBuf>,
        /// Replace the named catalogue rule by a deliberately wrong copy.
        #[arg(long, value_name = "NAME")]
        corrupt: Vec<String>,
    },
    /// Decompose a matrix into row additions and a row multiplication.
    Elementary {
        matrix: PathBuf,
        /// Write the composed diagram to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a text graph description of a diagram.
    Export {
        file: PathBuf,
        #[arg(long, value_parser = parse_format)]
        format: ExportFormat,
    },
}

fn parse_format(s: &str) -> Result<ExportFormat, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::wire_cap().and_then(|cap| match cli.command {
        Command::Interpret {
            file,
            precision,
            json,
        } => commands::interpret(&file, precision, json, cap),
        Command::CheckEq { first, second, tol } => commands::check_eq(&first, &second, tol, cap),
        Command::Normalize { file, out } => commands::normalize(&file, out.as_deref(), cap),
        Command::Simplify {
            file,
            budget,
            trace,
            out,
        } => commands::simplify(&file, budget, trace, out.as_deref()),
        Command::Rules {
            samples,
            tol,
            json,
            extra,
            corrupt,
        } => commands::rules(samples, tol, json, extra.as_deref(), &corrupt),
        Command::Elementary { matrix, out } => commands::elementary(&matrix, out.as_deref()),
        Command::Export { file, format } => commands::export(&file, format),
    });
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
