use serde::{Deserialize, Serialize};

use super::{run_panels, Execution, Family, Method, Panel, SimConfig};
use crate::error::Result;

/// Between-subject standard deviation of the random-effects scenarios.
pub const SIGMA_RAND_RE: f64 = 0.2;

/// A named panel: configuration plus the methods to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelSpec {
    pub name: String,
    pub config: SimConfig,
    pub methods: Vec<Method>,
}

const SIM1_METHODS: [Method; 7] = [
    Method::Pooling,
    Method::NaivePairedT,
    Method::SssFeEqual,
    Method::SssFeInvVar,
    Method::SssReEqual,
    Method::SssReInvVar,
    Method::Stouffer,
];

const SIM2_METHODS: [Method; 4] =
    [Method::SssReInvVar, Method::SssReInvVarAuc, Method::NaivePairedT, Method::NaiveSignedRank];

fn spec(name: &str, seed: u64, subjects: usize, sigma_rand: f64, family: Family, methods: &[Method]) -> PanelSpec {
    PanelSpec {
        name: name.to_string(),
        config: SimConfig { subjects, sigma_rand, family, seed, ..SimConfig::default() },
        methods: methods.to_vec(),
    }
}

/// Gaussian data, fixed or random effects, with 5 or 20 subjects.
pub fn simulation1_panels(seed: u64) -> Vec<PanelSpec> {
    vec![
        spec("fe_s5", seed, 5, 0.0, Family::Gaussian, &SIM1_METHODS),
        spec("fe_s20", seed, 20, 0.0, Family::Gaussian, &SIM1_METHODS),
        spec("re_s5", seed, 5, SIGMA_RAND_RE, Family::Gaussian, &SIM1_METHODS),
        spec("re_s20", seed, 20, SIGMA_RAND_RE, Family::Gaussian, &SIM1_METHODS),
    ]
}

/// Parametric against rank-based methods on skewed and Gaussian data, 20
/// subjects.
pub fn simulation2_panels(seed: u64) -> Vec<PanelSpec> {
    vec![
        spec("fscaled_fe", seed, 20, 0.0, Family::F_2_5, &SIM2_METHODS),
        spec("fscaled_re", seed, 20, SIGMA_RAND_RE, Family::F_2_5, &SIM2_METHODS),
        spec("gaussian_re", seed, 20, SIGMA_RAND_RE, Family::Gaussian, &SIM2_METHODS),
    ]
}

pub fn run_simulation1(seed: u64) -> Result<Vec<Panel>> {
    run_panels(&simulation1_panels(seed), Execution::Parallel)
}

pub fn run_simulation2(seed: u64) -> Result<Vec<Panel>> {
    run_panels(&simulation2_panels(seed), Execution::Parallel)
}
