use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hlawka_core::convex::{ConvexKind, SearchFamily, Strategy};
use hlawka_core::linalg::{SpectrumKind, DEFAULT_MAX_TENSOR_DIM};
use hlawka_core::sums::FamilyId;

/// Randomized verification of tensor Hlawka and Popoviciu type inequalities
#[derive(Parser, Debug)]
#[command(name = "hlawka", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify a tensor inequality family on seeded random PD inputs
    Verify(VerifyArgs),
    /// Search for inputs violating a norm or scalar alternating inequality
    Counterexample(CounterexampleArgs),
    /// Evaluate a generalized matrix function on a matrix file
    Immanant(ImmanantArgs),
    /// Run scalar inequality suites (matrix-function images or convex functions)
    ScalarVerify(ScalarVerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Master seed; per-trial seeds are derived from it
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Number of trials
    #[arg(long)]
    pub trials: Option<u64>,

    /// Relative tolerance (defaults depend on the command)
    #[arg(long)]
    pub tol: Option<f64>,

    /// Largest matrix dimension any tensor power may reach
    #[arg(long, default_value_t = DEFAULT_MAX_TENSOR_DIM)]
    pub max_dim: usize,

    /// Worker threads (defaults to all cores)
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Report format (json by default; immanant prints plain text unless set)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl CommonArgs {
    pub fn report_format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spectrum {
    Uniform,
    LogUniform,
}

impl From<Spectrum> for SpectrumKind {
    fn from(s: Spectrum) -> Self {
        match s {
            Spectrum::Uniform => SpectrumKind::Uniform,
            Spectrum::LogUniform => SpectrumKind::LogUniform,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct FamilyParams {
    /// Number of input matrices (fixed families ignore it)
    #[arg(long)]
    pub n: Option<usize>,

    /// Lower subset size for pop-levels
    #[arg(long)]
    pub k: Option<usize>,

    /// Middle subset size for pop-levels
    #[arg(long)]
    pub ell: Option<usize>,

    /// Subset size for pop-subsets, top size for pop-levels
    #[arg(long)]
    pub m: Option<usize>,

    /// Restrict pop-pairs to the pairs containing this (0-based) index
    #[arg(long)]
    pub anchor: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: FamilyId,

    #[command(flatten)]
    pub params: FamilyParams,

    /// Tensor power
    #[arg(long, default_value_t = 2)]
    pub p: u32,

    /// Dimension of each input matrix
    #[arg(long, default_value_t = 2)]
    pub dim: usize,

    /// Condition number of sampled matrices
    #[arg(long, default_value_t = 10.0)]
    pub condition: f64,

    #[arg(long, value_enum, default_value_t = Spectrum::LogUniform)]
    pub spectrum: Spectrum,

    /// Verify these matrix files once instead of sampling
    #[arg(long, value_delimiter = ',')]
    pub inputs: Vec<PathBuf>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchFamilyArg {
    Freudenthal,
    HlawkaPop,
}

impl From<SearchFamilyArg> for SearchFamily {
    fn from(f: SearchFamilyArg) -> Self {
        match f {
            SearchFamilyArg::Freudenthal => SearchFamily::Freudenthal,
            SearchFamilyArg::HlawkaPop => SearchFamily::HlawkaPop,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyArg {
    Random,
    CoordinateDescent,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Random => Strategy::Random,
            StrategyArg::CoordinateDescent => Strategy::CoordinateDescent,
        }
    }
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    #[arg(long, value_enum)]
    pub family: SearchFamilyArg,

    #[arg(long, default_value_t = 4)]
    pub n: usize,

    /// Vector dimension (freudenthal)
    #[arg(long, default_value_t = 2)]
    pub dim: usize,

    #[arg(long, value_enum, default_value_t = StrategyArg::Random)]
    pub strategy: StrategyArg,

    /// Convex function (hlawka-pop)
    #[arg(long, value_parser = parse_kind, default_value = "abs")]
    pub function: ConvexKind,

    /// Sampling center, flattened
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub center: Option<Vec<f64>>,

    /// Standard deviation of the sampling cloud
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,

    /// Evaluate the published n = 4 counterexample first
    #[arg(long)]
    pub include_known: bool,

    #[arg(long, default_value_t = 200)]
    pub descent_steps: usize,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct ImmanantArgs {
    /// Matrix file
    pub matrix: PathBuf,

    /// det, perm, partition=<parts> or table=<path>
    #[arg(long, default_value = "det")]
    pub character: String,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Matrix-function image of a tensor family on PD inputs
    Gmf,
    NormHlawka,
    Radu,
    Freudenthal,
    Jensen,
    Popoviciu,
    Vasc,
    Pcz,
    FunctionalHlawka,
    HlawkaPop,
    LevelsScalar,
}

#[derive(Args, Debug)]
pub struct ScalarVerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,

    /// Tensor family for the gmf suite
    #[arg(long, value_parser = parse_family, default_value = "hlawka3")]
    pub family: FamilyId,

    /// det, perm, partition=<parts> or table=<path> (gmf suite)
    #[arg(long, default_value = "det")]
    pub character: String,

    #[command(flatten)]
    pub params: FamilyParams,

    /// Matrix dimension (gmf) or vector dimension (norm suites)
    #[arg(long, default_value_t = 3)]
    pub dim: usize,

    #[arg(long, default_value_t = 10.0)]
    pub condition: f64,

    /// Restrict to one convex function; trials cycle through all by default
    #[arg(long, value_parser = parse_kind)]
    pub function: Option<ConvexKind>,

    /// Evaluate this single input (flattened) instead of sampling
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Option<Vec<f64>>,

    /// Standard deviation of sampled points
    #[arg(long, default_value_t = 3.0)]
    pub radius: f64,

    /// Include the raw inputs of violations in the report
    #[arg(long)]
    pub keep_inputs: bool,

    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_family(s: &str) -> Result<FamilyId, String> {
    s.parse().map_err(|e: hlawka_core::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<ConvexKind, String> {
    s.parse().map_err(|e: hlawka_core::Error| e.to_string())
}
