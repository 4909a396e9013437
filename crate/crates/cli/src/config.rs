use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use plcommute_core::conjugacy::DEFAULT_TOLERANCE;

#[derive(Debug, Parser)]
#[command(
    name = "plcommute",
    version,
    about = "Exact piecewise-linear commutators of unimodal maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of standard output.
    #[arg(short, long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Worker threads for grid computations (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Tolerance for floating-point verdicts.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE, allow_negative_numbers = true)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Pair {
    /// Unimodal map file.
    #[arg(long, value_name = "FILE")]
    pub g: PathBuf,
    /// Candidate commutator file.
    #[arg(long, value_name = "FILE")]
    pub psi: PathBuf,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Build a map from a named family.
    #[command(subcommand)]
    Make(Make),
    /// Exit 0 if psi commutes with g, 1 otherwise.
    CheckCommute(Pair),
    /// Constant, iterate of g, or non-trivial.
    Classify(Pair),
    /// Boundary identities every commutator must satisfy.
    BoundaryChecks(Pair),
    /// Halve the lap count of a commutator with an even number of laps.
    Halve(Pair),
    /// Halve until the lap count is odd.
    Reduce(Pair),
    /// Sorted solutions of g^n(x) = 0.
    Mu {
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
        #[arg(long, value_name = "N")]
        n: u32,
    },
    /// Max pre-image grid gap per level, with a heuristic verdict.
    Density {
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
        #[arg(long, value_name = "N")]
        depth: u32,
    },
    /// Interpolate a conjugacy to the tent map from pre-image grids.
    FitConjugacy {
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
        #[arg(long, value_name = "N")]
        depth: u32,
    },
    /// |ln psi'(0) - log2(t) ln g'(0)| for a t-lap commutator.
    SlopeLaw {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_name = "T")]
        t: u64,
    },
    /// Spread of h(x) / x^alpha near 0 for the fitted conjugacy.
    PowerLaw {
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
        #[arg(long, value_name = "N")]
        depth: u32,
    },
    /// Max gaps of k t^p / 2^(n + m_p) folded into [1/2^n, 1/2^(n-1)).
    DyadicDensity {
        #[arg(long, value_name = "K")]
        k: u64,
        #[arg(long, value_name = "N")]
        n: u32,
        #[arg(long, value_name = "T")]
        t: u64,
        #[arg(long, value_name = "P")]
        pmax: u32,
    },
    /// Breakpoints plus uniform samples of a map, as CSV or an SVG polyline.
    Emit {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, default_value_t = 2, value_name = "S")]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Add decimal columns to CSV output.
        #[arg(long)]
        floats: bool,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum Make {
    /// The tent map 1 - |1 - 2x|.
    Tent,
    /// The t-lap sawtooth map.
    Xi {
        #[arg(long, value_name = "T")]
        t: u64,
    },
    /// h ∘ g ∘ h⁻¹ for an increasing homeomorphism h.
    Conjugate {
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
        #[arg(long, value_name = "FILE")]
        h: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    SvgPoints,
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub tolerance: f64,
}

/// A usage or validation failure naming the offending flag; exit status 2.
#[derive(Debug)]
pub struct UsageError {
    pub flag: &'static str,
    pub message: String,
}

impl UsageError {
    pub fn flag(flag: &'static str, message: impl Into<String>) -> Self {
        UsageError {
            flag,
            message: message.into(),
        }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.flag, self.message)
    }
}

fn require_file(flag: &'static str, path: &Path) -> Result<(), UsageError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(UsageError::flag(
            flag,
            format!("no such file {}", path.display()),
        ))
    }
}

fn at_least<T: PartialOrd + fmt::Display>(
    flag: &'static str,
    value: T,
    min: T,
) -> Result<(), UsageError> {
    if value < min {
        return Err(UsageError::flag(
            flag,
            format!("must be at least {min}, got {value}"),
        ));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, UsageError> {
        if !cli.tolerance.is_finite() || cli.tolerance <= 0.0 {
            return Err(UsageError::flag(
                "--tolerance",
                format!("must be positive, got {}", cli.tolerance),
            ));
        }
        if let Some(n) = cli.threads {
            at_least("--threads", n, 1)?;
        }
        match &cli.command {
            Command::Make(Make::Tent) => {}
            Command::Make(Make::Xi { t }) => at_least("--t", *t, 1)?,
            Command::Make(Make::Conjugate { g, h }) => {
                require_file("--g", g)?;
                require_file("--h", h)?;
            }
            Command::CheckCommute(p)
            | Command::Classify(p)
            | Command::BoundaryChecks(p)
            | Command::Halve(p)
            | Command::Reduce(p) => {
                require_file("--g", &p.g)?;
                require_file("--psi", &p.psi)?;
            }
            Command::Mu { g, n } => {
                require_file("--g", g)?;
                at_least("--n", *n, 1)?;
            }
            Command::Density { g, depth } => {
                require_file("--g", g)?;
                at_least("--depth", *depth, 2)?;
            }
            Command::FitConjugacy { g, depth } => {
                require_file("--g", g)?;
                at_least("--depth", *depth, 2)?;
            }
            Command::SlopeLaw { pair, t } => {
                require_file("--g", &pair.g)?;
                require_file("--psi", &pair.psi)?;
                at_least("--t", *t, 1)?;
            }
            Command::PowerLaw { g, depth } => {
                require_file("--g", g)?;
                at_least("--depth", *depth, 3)?;
            }
            Command::DyadicDensity { k, n, t, pmax } => {
                at_least("--k", *k, 1)?;
                at_least("--n", *n, 1)?;
                at_least("--t", *t, 1)?;
                at_least("--pmax", *pmax, 1)?;
            }
            Command::Emit {
                map,
                samples,
                format,
                floats,
            } => {
                require_file("--map", map)?;
                at_least("--samples", *samples, 2)?;
                if *floats && *format != Format::Csv {
                    return Err(UsageError::flag("--floats", "only applies to --format csv"));
                }
            }
        }
        Ok(RunConfig {
            command: cli.command,
            output: cli.output,
            threads: cli.threads,
            tolerance: cli.tolerance,
        })
    }
}
