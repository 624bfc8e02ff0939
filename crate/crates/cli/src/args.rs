use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use neststat::{Model, ReferencePolicy, WeightScheme};

/// Default seed when neither `--seed` nor `NESTSTAT_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_260_917;

#[derive(Debug, Parser)]
#[command(name = "neststat", version, about = "Group-level inference for nested data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate one effect per subject from raw samples and combine them.
    Analyze(AnalyzeArgs),
    /// Combine pre-computed subject effects (subject_id,theta_hat,var_hat[,n]).
    Meta(MetaArgs),
    /// Run a Monte Carlo scenario and write rejection curves.
    Simulate(SimulateArgs),
    /// Combine one-sided p-values (subject_id,p_one_sided) with Stouffer's method.
    Stouffer(StoufferArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GroupArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Re)]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value_t = SchemeArg::Invvar)]
    pub scheme: SchemeArg,
    /// Reference distribution of the group statistic.
    #[arg(long, value_enum, default_value_t = PolicyArg::Z)]
    pub policy: PolicyArg,
    /// Null value of the group effect.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta0: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    /// Input CSV.
    #[arg(long, short)]
    pub input: PathBuf,
    /// mean | paired | welch | auc | pearson | ols:K
    #[arg(long)]
    pub effect: EffectArg,
    #[command(flatten)]
    pub group: GroupArgs,
    /// Condition label of class X in long-format input.
    #[arg(long, default_value = "X")]
    pub class_x: String,
    /// Condition label of class Y in long-format input.
    #[arg(long, default_value = "Y")]
    pub class_y: String,
    /// JSON report path.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Per-subject effects as CSV, readable by `meta`.
    #[arg(long)]
    pub subjects_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MetaArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub scenario: Scenario,
    #[arg(long, env = "NESTSTAT_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Replications per grid cell (default 1000).
    #[arg(long)]
    pub reps: Option<usize>,
    /// Output directory, created if missing.
    #[arg(long, short)]
    pub out_dir: PathBuf,
    /// Run replications on the calling thread only.
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StoufferArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Fe,
    Re,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Fe => Model::FixedEffect,
            ModelArg::Re => Model::RandomEffectsDL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Equal,
    Invvar,
}

impl From<SchemeArg> for WeightScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Equal => WeightScheme::EqualWeights,
            SchemeArg::Invvar => WeightScheme::InverseVariance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyArg {
    Z,
    T,
}

impl From<PolicyArg> for ReferencePolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Z => ReferencePolicy::ZTest,
            PolicyArg::T => ReferencePolicy::TTestSMinus1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Sim1,
    Sim2,
    PoolingDemo,
}

/// Subject-level effect size requested on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectArg {
    Mean,
    Paired,
    Welch,
    Auc,
    Pearson,
    /// OLS coefficient `k`, 0 being the intercept.
    Ols(usize),
}

impl FromStr for EffectArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean" => Ok(EffectArg::Mean),
            "paired" => Ok(EffectArg::Paired),
            "welch" => Ok(EffectArg::Welch),
            "auc" => Ok(EffectArg::Auc),
            "pearson" => Ok(EffectArg::Pearson),
            _ => match s.strip_prefix("ols:").map(str::parse) {
                Some(Ok(k)) => Ok(EffectArg::Ols(k)),
                _ => Err(format!("unknown effect '{s}' (expected mean, paired, welch, auc, pearson or ols:K)")),
            },
        }
    }
}

impl fmt::Display for EffectArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EffectArg::Mean => f.write_str("mean"),
            EffectArg::Paired => f.write_str("paired"),
            EffectArg::Welch => f.write_str("welch"),
            EffectArg::Auc => f.write_str("auc"),
            EffectArg::Pearson => f.write_str("pearson"),
            EffectArg::Ols(k) => write!(f, "ols:{k}"),
        }
    }
}

impl Serialize for EffectArg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
