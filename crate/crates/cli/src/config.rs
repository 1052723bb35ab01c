//! Command-line arguments. The parsed structure doubles as the run
//! configuration echoed into JSON output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "bgls", version, about = "BGLS norms, Poincaré ratios and sharpness scans for radial functions")]
pub struct Cli {
    /// Worker threads for row-parallel work (default: all cores). Does not affect results.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Weighted L_p norms over a p-grid and their BGLS supremum.
    Norm(NormArgs),
    /// V(f, p) along a sequence approaching the critical exponent or infinity.
    Sharpness(SharpnessArgs),
    /// Empirical constant of the operator-norm bound.
    Theorem1(Theorem1Args),
    /// The ν(q) inf-transform of a generating function.
    Nu(NuArgs),
    /// Quadrature against the incomplete-Gamma closed form.
    OracleCheck(OracleArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Norm(_) => "norm",
            Command::Sharpness(_) => "sharpness",
            Command::Theorem1(_) => "theorem1",
            Command::Nu(_) => "nu",
            Command::OracleCheck(_) => "oracle-check",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Norm(a) => &a.common,
            Command::Sharpness(a) => &a.common,
            Command::Theorem1(a) => &a.common,
            Command::Nu(a) => &a.common,
            Command::OracleCheck(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainArg {
    Ball,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaModelArg {
    /// δ(x) = |x|
    Origin,
    /// δ(x) = 1 − |x|
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileArg {
    Const,
    UDelta,
    VDelta,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CommonArgs {
    /// Space dimension.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Weight exponent α > −1.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Exponent Δ > 1 of the extremal profiles.
    #[arg(long = "Delta", default_value_t = 2.0, allow_hyphen_values = true)]
    #[serde(rename = "Delta")]
    pub delta: f64,
    /// Domain; defaults to the one the profile lives on.
    #[arg(long, value_enum)]
    pub domain: Option<DomainArg>,
    #[arg(long, value_enum, default_value_t = DeltaModelArg::Origin)]
    pub delta_model: DeltaModelArg,
    #[arg(long, default_value_t = 1e-9)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 60)]
    pub max_depth: usize,
    /// Truncate exterior integrals at this radius.
    #[arg(long)]
    pub tail_cap: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub output: Option<String>,
    /// Also write an SVG plot here.
    #[arg(long)]
    pub plot: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    /// Log-spaced in p.
    Geometric,
    /// Log-spaced in the distance |p − p₀|.
    GeometricToP0,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PGridArgs {
    /// Explicit exponents; overrides the range options.
    #[arg(long = "p", num_args = 1.., value_delimiter = ',')]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 1.9)]
    pub p_max: f64,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiKind {
    /// ψ ≡ 1
    One,
    /// (p − a)^{−β} (b − p)^{−γ}
    Power,
    /// (p − a)^{−β} up to h, then p^{|γ|}
    Tail,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PsiArgs {
    #[arg(long, value_enum)]
    pub psi: Option<PsiKind>,
    /// Lower end of ψ's interval.
    #[arg(long, default_value_t = 1.0)]
    pub psi_a: f64,
    /// Upper end of ψ's interval (default: p₀ for power, ∞ otherwise).
    #[arg(long)]
    pub psi_b: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Multiplies ψ.
    #[arg(long, default_value_t = 1.0)]
    pub psi_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantityArg {
    Value,
    Gradient,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct NormArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[arg(long = "f", value_enum, default_value_t = ProfileArg::UDelta)]
    pub f: ProfileArg,
    /// Level of the constant profile.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c: f64,
    /// Keep only the log-power core of u_Δ / v_Δ.
    #[arg(long)]
    pub core_only: bool,
    /// Subtract the mean first (bounded domain).
    #[arg(long)]
    pub center: bool,
    #[arg(long, value_enum, default_value_t = QuantityArg::Value)]
    pub quantity: QuantityArg,
    /// The norm carries the weight δ^{−weight_exp}.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub weight_exp: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: PGridArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub psi: PsiArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseArg {
    BoundedBelow,
    UnboundedAbove,
    UnboundedInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportArg {
    /// Slope of ln V.
    Slope,
    /// Slope of the numerator norm alone.
    NumeratorSlope,
    /// Slope of the gradient norm alone.
    DenominatorSlope,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SharpnessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = CaseArg::BoundedBelow)]
    pub case: CaseArg,
    /// Largest offset |p − p₀| for the critical cases.
    #[arg(long, default_value_t = 0.3)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub eps_min: f64,
    /// Smallest exponent for the p → ∞ case.
    #[arg(long, default_value_t = 10.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 200.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 12)]
    pub count: usize,
    /// Which fitted slope goes into the footer.
    #[arg(long, value_enum, default_value_t = ReportArg::Slope)]
    pub report: ReportArg,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Theorem1Args {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[arg(long = "f", value_enum, default_value_t = ProfileArg::UDelta)]
    pub f: ProfileArg,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, default_value_t = 256)]
    pub grid_points: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub psi: PsiArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct NuArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// Explicit q values; overrides the range options.
    #[arg(long = "q", num_args = 1.., value_delimiter = ',')]
    pub q: Vec<f64>,
    #[arg(long, default_value_t = 1.5)]
    pub q_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub q_max: f64,
    #[arg(long, default_value_t = 6)]
    pub count: usize,
    #[arg(long, default_value_t = 512)]
    pub grid_points: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub psi: PsiArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OracleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 0.05)]
    pub s_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub s_max: f64,
    #[arg(long, default_value_t = 8)]
    pub s_count: usize,
    #[arg(long, default_value_t = 12.0)]
    pub m_max: f64,
    #[arg(long, default_value_t = 6)]
    pub m_count: usize,
    /// Largest acceptable relative error.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}
