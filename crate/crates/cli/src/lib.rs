//! Batch front end: parses group, operad and locus inputs, runs one command
//! and renders the result as text, JSON or DOT.

pub mod dot;
pub mod input;
pub mod report;

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use chromloc::engine::{
    cross_validate_cpn, enumerate_commutative_ell, enumerate_ell, localization_preserves, norm_preserves_locus,
    EngineError,
};
use chromloc::group::{GroupError, GroupSpec, SubgroupLattice};
use chromloc::spectrum::{ell_to_locus, SpectrumError};
use chromloc::transfer::{enumerate_with_bound, TransferError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use report::{parse_report, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{origin}: {}", problems.join("; "))]
    InvalidInput { origin: String, problems: Vec<String> },
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Group(GroupError),
    #[error(transparent)]
    Transfer(TransferError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Engine(EngineError),
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::GroupTooLarge { .. } => CliError::BoundExceeded(e.to_string()),
            e => CliError::Group(e),
        }
    }
}

impl From<TransferError> for CliError {
    fn from(e: TransferError) -> Self {
        match e {
            TransferError::LatticeTooLarge { .. } | TransferError::BoundTooLarge { .. } => {
                CliError::BoundExceeded(e.to_string())
            }
            e => CliError::Transfer(e),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::BoundTooLarge { .. } => CliError::BoundExceeded(e.to_string()),
            EngineError::Spectrum(e) => e.into(),
            EngineError::Transfer(e) => e.into(),
            EngineError::Group(e) => e.into(),
            e => CliError::Engine(e),
        }
    }
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    /// A negative outcome under `--strict`.
    StrictFailure,
    InputError,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::StrictFailure => 1,
            ExitStatus::InputError => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DotObject {
    SubgroupLattice,
    TransferPoset,
    PrimePoset,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "chromloc", version, about = "Decide whether chromatic localizations preserve N∞ structure")]
pub struct RunConfig {
    #[arg(long, value_enum, global = true, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit with status 1 on a no-guarantee verdict, an invalid locus or a
    /// cross-validation disagreement.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, env = "CHROMLOC_MAX_GROUP_ORDER", default_value_t = 64)]
    pub max_order: usize,
    #[arg(long, global = true, env = "CHROMLOC_MAX_PAIRS", default_value_t = 30)]
    pub max_pairs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GroupArg {
    /// Group spec (e.g. `cyclic:4`, `dihedral:8`, `cyclic:2*cyclic:2`) or a `.toml` group document.
    #[arg(long)]
    pub group: String,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// List subgroups with their canonical names, classes and covering relations.
    Lattice(GroupArg),
    /// List every transfer system on the subgroup lattice.
    TransferEnumerate(GroupArg),
    /// Check that a vanishing locus satisfies the closure rules.
    SpectrumValidate {
        /// Defaults to `cyclic:p^n` when `--ell` is given.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, conflicts_with = "ell", required_unless_present = "ell")]
        locus: Option<String>,
        /// ℓ-vector `P:E0,E1,…` or a `.toml` ℓ-vector document.
        #[arg(long)]
        ell: Option<String>,
    },
    /// Decide whether localization preserves the operad's norms.
    Decide {
        #[arg(long)]
        group: String,
        /// `complete`, `trivial` or a `.toml` transfer-system document.
        #[arg(long, required_unless_present = "norm", conflicts_with = "norm")]
        operad: Option<String>,
        /// A single norm `K,H` given by canonical subgroup names.
        #[arg(long)]
        norm: Option<String>,
        /// `ell:P:E0,E1,…`, or a `.toml` locus or ℓ-vector document.
        #[arg(long, required_unless_present = "ell", conflicts_with = "ell")]
        locus: Option<String>,
        #[arg(long)]
        ell: Option<String>,
    },
    /// Enumerate valid ℓ-vectors on C_{p^n}.
    EllEnumerate {
        #[arg(long)]
        prime: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, env = "CHROMLOC_HEIGHT_BOUND", default_value_t = 2)]
        height_bound: u32,
        #[arg(long)]
        include_infinity: bool,
        /// Keep only vectors whose localization preserves every norm.
        #[arg(long)]
        commutative: bool,
    },
    /// Compare the double-coset engine with the ℓ-inequalities on C_{p^n}.
    CrossValidate {
        #[arg(long)]
        prime: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, env = "CHROMLOC_HEIGHT_BOUND", default_value_t = 2)]
        height_bound: u32,
    },
    /// Emit a DOT diagram.
    Dot {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        what: DotObject,
        /// Chromatic primes for the prime poset (default: divisors of |G|).
        #[arg(long, value_delimiter = ',')]
        prime: Vec<u32>,
        #[arg(long, env = "CHROMLOC_HEIGHT_BOUND", default_value_t = 2)]
        height_bound: u32,
    },
}

/// Upper limit on `--height-bound` for the prime poset diagram.
pub const MAX_DOT_HEIGHT: u32 = 16;

fn lattice_for(config: &RunConfig, arg: &str) -> Result<(GroupSpec, Arc<SubgroupLattice>), CliError> {
    let (spec, group) = input::load_group(arg)?;
    Ok((spec, Arc::new(SubgroupLattice::with_bound(group, config.max_order)?)))
}

fn cyclic_for_ell(config: &RunConfig, ell: &chromloc::spectrum::EllVector) -> Result<(GroupSpec, Arc<SubgroupLattice>), CliError> {
    let order = (ell.p() as usize)
        .checked_pow(ell.n() as u32)
        .filter(|&o| o <= config.max_order)
        .ok_or_else(|| CliError::BoundExceeded(format!("C_{{{}^{}}} exceeds the group order bound {}", ell.p(), ell.n(), config.max_order)))?;
    lattice_for(config, &format!("cyclic:{order}"))
}

fn load_locus_or_ell(
    lattice: &Arc<SubgroupLattice>,
    locus: Option<&str>,
    ell: Option<&str>,
) -> Result<chromloc::spectrum::VanishingLocus, CliError> {
    match (locus, ell) {
        (Some(l), _) => input::load_locus(lattice, l),
        (None, Some(e)) => Ok(ell_to_locus(lattice, &input::load_ell(e)?)?),
        (None, None) => Err(CliError::Unsupported("one of --locus or --ell is required".into())),
    }
}

fn parse_norm(lattice: &SubgroupLattice, arg: &str) -> Result<(chromloc::group::SubgroupId, chromloc::group::SubgroupId), CliError> {
    let bad = |m: String| CliError::Parse {
        origin: "--norm".into(),
        message: m,
    };
    let (k, h) = arg
        .split_once(',')
        .ok_or_else(|| bad(format!("expected K,H, got {arg:?}")))?;
    let find = |n: &str| {
        lattice
            .by_name(n.trim())
            .ok_or_else(|| bad(format!("unknown subgroup {n:?} (see the `lattice` command)")))
    };
    let (k, h) = (find(k)?, find(h)?);
    if !lattice.leq(k, h) {
        return Err(bad(format!("{} is not contained in {}", lattice.name(k), lattice.name(h))));
    }
    Ok((k, h))
}

/// Builds the report for `config` without writing it.
pub fn execute(config: &RunConfig) -> Result<(Report, ExitStatus), CliError> {
    let strict = |bad: bool| {
        if bad && config.strict {
            ExitStatus::StrictFailure
        } else {
            ExitStatus::Success
        }
    };
    match &config.command {
        Command::Lattice(g) => {
            let (spec, l) = lattice_for(config, &g.group)?;
            Ok((report::lattice(&spec, &l), ExitStatus::Success))
        }
        Command::TransferEnumerate(g) => {
            let (spec, l) = lattice_for(config, &g.group)?;
            let poset = enumerate_with_bound(&l, config.max_pairs)?;
            Ok((report::transfer_systems(&spec, &l, &poset), ExitStatus::Success))
        }
        Command::SpectrumValidate { group, locus, ell } => {
            let (spec, l) = match (group, ell) {
                (Some(g), _) => lattice_for(config, g)?,
                (None, Some(e)) => cyclic_for_ell(config, &input::load_ell(e)?)?,
                (None, None) => {
                    return Err(CliError::Unsupported("--group is required with --locus".into()));
                }
            };
            let vl = load_locus_or_ell(&l, locus.as_deref(), ell.as_deref())?;
            let r = report::locus_validation(&spec, &vl);
            let bad = matches!(&r, Report::LocusValidation(v) if !v.valid);
            Ok((r, strict(bad)))
        }
        Command::Decide {
            group,
            operad,
            norm,
            locus,
            ell,
        } => {
            let (spec, l) = lattice_for(config, group)?;
            let vl = load_locus_or_ell(&l, locus.as_deref(), ell.as_deref())?;
            let (decision, subject) = match (operad, norm) {
                (Some(o), _) => {
                    let sys = input::load_operad(&l, o)?;
                    (localization_preserves(&vl, &sys)?, report::Subject::system(o, &sys))
                }
                (None, Some(n)) => {
                    let (k, h) = parse_norm(&l, n)?;
                    (norm_preserves_locus(&vl, k, h)?, report::Subject::norm(&l, k, h))
                }
                (None, None) => return Err(CliError::Unsupported("one of --operad or --norm is required".into())),
            };
            let bad = !decision.is_certified();
            Ok((report::decision(&spec, &vl, subject, &decision), strict(bad)))
        }
        Command::EllEnumerate {
            prime,
            n,
            height_bound,
            include_infinity,
            commutative,
        } => {
            let vectors = if *commutative {
                enumerate_commutative_ell(*prime, *n, *height_bound, *include_infinity)?
            } else {
                enumerate_ell(*prime, *n, *height_bound, *include_infinity)?
            };
            let r = report::ell_enumeration(*prime, *n, *height_bound, *include_infinity, *commutative, &vectors)?;
            Ok((r, ExitStatus::Success))
        }
        Command::CrossValidate { prime, n, height_bound } => {
            let r = cross_validate_cpn(*n, *prime, *height_bound)?;
            let bad = !r.is_clean();
            Ok((report::cross_validation(&r), strict(bad)))
        }
        Command::Dot { .. } => Err(CliError::Unsupported("the dot command renders DOT only".into())),
    }
}

fn default_primes(l: &SubgroupLattice) -> Vec<u32> {
    let mut n = l.group().order() as u32;
    let mut out = Vec::new();
    let mut d = 2;
    while n > 1 {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if out.is_empty() {
        out.push(2);
    }
    out
}

fn render_dot(config: &RunConfig) -> Result<String, CliError> {
    match &config.command {
        Command::Dot {
            group,
            what,
            prime,
            height_bound,
        } => {
            let (_, l) = lattice_for(config, group)?;
            match what {
                DotObject::SubgroupLattice => Ok(dot::subgroup_lattice(&l)),
                DotObject::TransferPoset => Ok(dot::transfer_poset(&l, &enumerate_with_bound(&l, config.max_pairs)?)),
                DotObject::PrimePoset => {
                    if *height_bound > MAX_DOT_HEIGHT {
                        return Err(CliError::BoundExceeded(format!(
                            "height bound {height_bound} exceeds the maximum {MAX_DOT_HEIGHT}"
                        )));
                    }
                    let primes = if prime.is_empty() { default_primes(&l) } else { prime.clone() };
                    if let Some(&p) = primes.iter().find(|&&p| !chromloc::spectrum::is_prime(p)) {
                        return Err(SpectrumError::InvalidPrime(p).into());
                    }
                    Ok(dot::prime_poset(&l, &primes, *height_bound))
                }
            }
        }
        Command::Lattice(g) if config.format == Format::Dot => Ok(dot::subgroup_lattice(&lattice_for(config, &g.group)?.1)),
        Command::TransferEnumerate(g) if config.format == Format::Dot => {
            let (_, l) = lattice_for(config, &g.group)?;
            Ok(dot::transfer_poset(&l, &enumerate_with_bound(&l, config.max_pairs)?))
        }
        _ => Err(CliError::Unsupported("--format dot applies to lattice, transfer-enumerate and dot".into())),
    }
}

/// Produces the full output text for `config`.
pub fn render(config: &RunConfig) -> Result<(String, ExitStatus), CliError> {
    if matches!(config.command, Command::Dot { .. }) || config.format == Format::Dot {
        return Ok((render_dot(config)?, ExitStatus::Success));
    }
    let (r, status) = execute(config)?;
    let text = match config.format {
        Format::Structured => r.to_json(),
        _ => r.to_text(),
    };
    Ok((text, status))
}

/// Runs one command, writing to `--out` if set and to `stdout` otherwise.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<ExitStatus, CliError> {
    let (text, status) = render(config)?;
    match &config.out {
        Some(path) => std::fs::write(path, text.as_bytes()).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?,
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io {
            path: "<stdout>".into(),
            message: e.to_string(),
        })?,
    }
    Ok(status)
}

