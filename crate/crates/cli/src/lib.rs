//! Command-line front end for `coxeter-limits`.
//!
//! [`run`] parses arguments, dispatches one subcommand and streams its report
//! to the given writer. The returned code is 0 on success, 1 on a usage error
//! and 2 when a computation fails.

pub mod check;
pub mod commands;
pub mod record;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coxeter_limits::{corpus, parse_datum, CoxeterDatum, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "coxeter-limits", version, about = "Root systems and limit roots of Coxeter groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Where the Coxeter datum comes from.
#[derive(Debug, Clone, Args)]
pub struct DatumSource {
    /// Datum file.
    #[arg(short = 'f', long = "file", conflicts_with = "name")]
    pub file: Option<PathBuf>,
    /// Built-in datum, see `check --list`.
    #[arg(long = "datum", id = "name")]
    pub name: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List positive roots up to a depth.
    Roots {
        #[command(flatten)]
        source: DatumSource,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Partition roots by the number of roots they dominate.
    Dominance {
        #[command(flatten)]
        source: DatumSource,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long = "search-len", default_value_t = coxeter_limits::dominance::DEFAULT_SEARCH_LEN)]
        search_len: usize,
    },
    /// Canonical generators of the subgroup generated by slice roots.
    Subgroup {
        #[command(flatten)]
        source: DatumSource,
        /// Comma-separated indices into the root listing at `--depth`.
        #[arg(long, value_delimiter = ',', required = true)]
        roots: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = coxeter_limits::subgroups::DEFAULT_CLOSURE_BUDGET)]
        budget: usize,
    },
    /// Affine standard parabolic subgroups and their kernel vectors.
    Parabolics {
        #[command(flatten)]
        source: DatumSource,
    },
    /// Clusters of normalized roots approximating the limit roots.
    Limits {
        #[command(flatten)]
        source: DatumSource,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long = "min-depth", default_value_t = 0)]
        min_depth: usize,
        #[arg(long, default_value_t = coxeter_limits::limits::DEFAULT_CLUSTER_EPS)]
        eps: f64,
        #[arg(long)]
        json: bool,
    },
    /// Classify an isotropic point of the normalized slice.
    Classify {
        #[command(flatten)]
        source: DatumSource,
        /// Comma-separated coordinates over the simple roots.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
        /// Depth of the slice used to estimate the positive pairings.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long = "max-iter", default_value_t = coxeter_limits::limits::DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        json: bool,
    },
    /// Draw normalized roots and clusters as SVG.
    Plot {
        #[command(flatten)]
        source: DatumSource,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = coxeter_limits::limits::DEFAULT_CLUSTER_EPS)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = ProjectionArg::Auto)]
        projection: ProjectionArg,
        #[arg(long, default_value_t = 640)]
        width: u32,
        #[arg(long, default_value_t = 640)]
        height: u32,
        /// Output file; the SVG goes to stdout when absent.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Run the invariant suite and print one line per property.
    Check {
        #[command(flatten)]
        source: DatumSource,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Print the built-in data and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProjectionArg {
    Auto,
    Coords2,
    Barycentric3,
    Pca2,
}

/// Failure of a subcommand, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Computation(String),
    /// The reader went away; not reported.
    Closed,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Computation(m) => f.write_str(m),
            CliError::Closed => f.write_str("output closed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::InvalidBond { .. }
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidArgument(_)
            | Error::ZeroCoordinateSum
            | Error::NotIsotropic { .. }
            | Error::DepthCapExceeded { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::Closed;
        }
        CliError::Computation(format!("write failed: {e}"))
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

impl DatumSource {
    pub fn load(&self) -> CliResult<CoxeterDatum> {
        match (&self.file, &self.name) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                parse_datum(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
            }
            (None, Some(name)) => corpus::all()
                .into_iter()
                .find(|(n, _)| n == name)
                .map(|(_, d)| d)
                .ok_or_else(|| CliError::Usage(format!("unknown datum `{name}`"))),
            (None, None) => Err(CliError::Usage("a datum is required: pass -f <file> or --datum <name>".into())),
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(()) | Err(CliError::Closed) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Computation(_) | CliError::Closed => EXIT_COMPUTATION,
            }
        }
    }
}
