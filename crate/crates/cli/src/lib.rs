//! Command-line driver: scenario files, the explicit family, sweeps,
//! optimization runs, classical sampling and bound checks, emitted as CSV or
//! as a text table.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 when parsing,
//! validation or an invariant check fails.

pub mod commands;
pub mod report;
pub mod scenario_file;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use report::{Cell, Format, Report};
pub use scenario_file::{parse_scenario_file, serialize_scenario, ParseError, ValidationError};

/// Everything a run depends on; there are no config files or environment
/// variables.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "qsimpson",
    version,
    about = "Quantum Simpson reversal scenarios"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Print validation residuals of scenario files to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Rates, d_t, d_c, S, convexity residuals and classicality of a scenario file.
    Eval {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Build a member of the explicit family and evaluate it.
    Paper {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        epsilon: f64,
    },
    /// S along a geometric epsilon grid.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        eps_start: f64,
        #[arg(long)]
        eps_end: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Search for large |S|.
    Optimize(OptimizeArgs),
    /// Sample classical joint distributions and check |S| ≤ 1.
    Classical {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Projected lengths, ratios, S' and the identities behind |S| < 2.
    Bound {
        #[arg(long, conflicts_with_all = ["family", "epsilon"], required_unless_present = "family")]
        scenario: Option<PathBuf>,
        #[arg(long, value_enum, requires = "epsilon")]
        family: Option<Family>,
        #[arg(long, requires = "family")]
        epsilon: Option<f64>,
    },
    /// Write a built-in scenario in the scenario file format.
    Export {
        #[arg(long, value_enum)]
        family: ExportFamily,
        /// Required for q1 and q2.
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// p = 1, q = ε.
    Q1,
    /// p = ε, q = ε².
    Q2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFamily {
    Q1,
    Q2,
    /// Uniform classical distribution embedded as commuting projectors.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Family,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Search {
    /// q = p² with log-spaced p.
    Curve,
    /// Uniform (p, q) grid.
    Grid,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Family mode: smallest p (and q) searched.
    #[arg(long, default_value_t = 1e-4)]
    pub floor: f64,
    /// Family mode: points per axis.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Search::Curve)]
    pub search: Search,
    /// General mode: Hilbert space dimension.
    #[arg(long, default_value_t = 8)]
    pub dim: usize,
    /// General mode: ranks of the first projectors of G, E, R.
    #[arg(long, value_parser = parse_ranks, default_value = "4,1,4")]
    pub ranks: [usize; 3],
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    /// General mode: objective evaluations per restart.
    #[arg(long, default_value_t = 3000)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_ranks(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let parsed: Vec<usize> = parts
        .iter()
        .map(|p| p.parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    parsed
        .try_into()
        .map_err(|v: Vec<usize>| format!("expected three ranks a,b,c, got {}", v.len()))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    ScenarioFile(#[from] scenario_file::ScenarioFileError),
    #[error(transparent)]
    Core(qsimpson::Error),
}

impl From<qsimpson::Error> for CliError {
    fn from(e: qsimpson::Error) -> Self {
        use qsimpson::Error as E;
        match e {
            E::InvalidConfig(_)
            | E::InvalidEpsilon(_)
            | E::InvalidParams { .. }
            | E::DegenerateParams => CliError::Usage(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::ScenarioFile(_) | CliError::Core(_) => 2,
        }
    }
}

/// A rendered report plus diagnostics for stderr.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    /// Written to `--out` or stdout. Empty for reports that render themselves.
    pub report: Report,
    /// Pre-rendered output that bypasses `--format` (scenario export).
    pub raw: Option<String>,
    /// Summary lines, always printed to stderr.
    pub notes: Vec<String>,
    /// Detail printed to stderr only with `--verbose`.
    pub verbose: Vec<String>,
    /// Invariant failures; any entry makes the exit status 2.
    pub failures: Vec<String>,
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Eval { scenario } => commands::eval(&read_file(scenario)?),
        Command::Paper { family, epsilon } => commands::paper(*family, *epsilon),
        Command::Sweep {
            family,
            eps_start,
            eps_end,
            steps,
        } => commands::sweep(*family, *eps_start, *eps_end, *steps),
        Command::Optimize(args) => commands::optimize(args),
        Command::Classical { samples, seed } => commands::classical(*samples, *seed),
        Command::Bound {
            scenario,
            family,
            epsilon,
        } => match (scenario, family, epsilon) {
            (Some(path), _, _) => commands::bound_file(&read_file(path)?),
            (None, Some(f), Some(eps)) => commands::bound_family(*f, *eps),
            _ => Err(CliError::Usage(
                "bound needs --scenario or --family with --epsilon".into(),
            )),
        },
        Command::Export { family, epsilon } => commands::export(*family, *epsilon),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Parses `args`, runs the command and writes its output. Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{}", line.trim_start_matches("error: ").trim());
            return 1;
        }
    };

    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };

    let text = outcome
        .raw
        .clone()
        .unwrap_or_else(|| outcome.report.render(cli.format));
    match &cli.out {
        Some(path) => {
            if let Err(source) = std::fs::write(path, &text) {
                let e = CliError::Io {
                    path: path.clone(),
                    source,
                };
                let _ = writeln!(stderr, "error: {e}");
                return e.exit_code();
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    for note in &outcome.notes {
        let _ = writeln!(stderr, "{note}");
    }
    if cli.verbose {
        for line in &outcome.verbose {
            let _ = writeln!(stderr, "{line}");
        }
    }
    for failure in &outcome.failures {
        let _ = writeln!(stderr, "invariant violated: {failure}");
    }
    if outcome.failures.is_empty() {
        0
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_parse() {
        assert_eq!(parse_ranks("4,1,4"), Ok([4, 1, 4]));
        assert_eq!(parse_ranks(" 2, 2 ,1"), Ok([2, 2, 1]));
        assert!(parse_ranks("4,1").is_err());
        assert!(parse_ranks("4,x,1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(
            run(["qsimpson", "paper", "--family", "q3"], &mut out, &mut err),
            1
        );
        assert_eq!(String::from_utf8(err).unwrap().lines().count(), 1);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            ["qsimpson", "paper", "--family", "q2", "--epsilon", "2"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, 1);
    }

    #[test]
    fn help_exits_zero() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["qsimpson", "--help"], &mut out, &mut err), 0);
        assert!(String::from_utf8(out).unwrap().contains("optimize"));
    }
}
