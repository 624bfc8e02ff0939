//! Monte Carlo harness for rejection rates of group-level tests.
//!
//! Every replication draws `S` synthetic subjects with two conditions and
//! applies each [`Method`] to the same data. Subject `s` of replication `r`
//! always reads from [`RngState::substream`]`(seed, r, s)`, so results do not
//! depend on thread scheduling, and all cells of a grid (and all panels
//! sharing a seed) see common random numbers.

mod demo;
mod engine;
mod generate;
mod scenarios;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dist::{f_moments, RngState};
use crate::error::{Error, Result};

pub use demo::{pooling_demo, pooling_demo_with, DemoConfig, DemoSubject, PoolingDemo};
pub use engine::{run_cell, run_panel, run_panels, CellRates, Execution};
pub use generate::gen_subject;
pub use scenarios::{
    run_simulation1, run_simulation2, simulation1_panels, simulation2_panels, PanelSpec, SIGMA_RAND_RE,
};

/// Distribution family of the within-subject samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    /// `F(d1, d2)` variates shifted and scaled to the requested mean and
    /// standard deviation. Needs `d2 > 4` for a finite variance.
    FScaled {
        d1: f64,
        d2: f64,
    },
}

impl Family {
    pub const F_2_5: Family = Family::FScaled { d1: 2.0, d2: 5.0 };
}

/// Parameters of one simulation panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Number of subjects `S`.
    pub subjects: usize,
    pub d_grid: Vec<f64>,
    /// Standard deviation of the subject effects around `d`.
    pub sigma_rand: f64,
    pub family: Family,
    /// Inclusive range of per-condition sample counts.
    pub n_range: (u64, u64),
    /// Range of the within-subject standard deviation `v_s`.
    pub v_range: (f64, f64),
    /// Range of the condition-X mean.
    pub mu_range: (f64, f64),
    pub reps: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            subjects: 20,
            d_grid: vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
            sigma_rand: 0.0,
            family: Family::Gaussian,
            n_range: (50, 80),
            v_range: (0.5, 2.0),
            mu_range: (-3.0, 3.0),
            reps: 1000,
            alpha: 0.05,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.subjects < 2 {
            return bad(format!("need at least 2 subjects, got {}", self.subjects));
        }
        if self.subjects > u32::MAX as usize || self.reps > u32::MAX as usize {
            return bad("subject and replication counts must fit in 32 bits".into());
        }
        if self.d_grid.is_empty() || self.d_grid.iter().any(|d| !d.is_finite()) {
            return bad("d grid must be non-empty and finite".into());
        }
        if !(self.sigma_rand >= 0.0) || !self.sigma_rand.is_finite() {
            return bad(format!("sigma_rand must be finite and >= 0, got {}", self.sigma_rand));
        }
        let (nlo, nhi) = self.n_range;
        if nlo < 2 || nlo > nhi {
            return bad(format!("n range [{nlo}, {nhi}] must be non-empty with lower bound >= 2"));
        }
        let (vlo, vhi) = self.v_range;
        if !(vlo > 0.0 && vlo <= vhi && vhi.is_finite()) {
            return bad(format!("v range [{vlo}, {vhi}] must be non-empty and positive"));
        }
        let (mlo, mhi) = self.mu_range;
        if !(mlo <= mhi && mlo.is_finite() && mhi.is_finite()) {
            return bad(format!("mu range [{mlo}, {mhi}] must be non-empty and finite"));
        }
        if self.reps == 0 {
            return bad("reps must be >= 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if let Family::FScaled { d1, d2 } = self.family {
            f_moments(d1, d2).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        }
        Ok(())
    }

    /// Random stream of subject `subject` in replication `rep`.
    pub fn stream(&self, rep: usize, subject: usize) -> RngState {
        RngState::substream(self.seed, rep as u32, subject as u32)
    }
}

/// Group-level procedures compared by the simulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Welch test on all samples concatenated.
    #[serde(rename = "pooling")]
    Pooling,
    /// One-sample t-test on the subject mean differences.
    #[serde(rename = "naive_paired_t")]
    NaivePairedT,
    /// Wilcoxon signed-rank test on the subject mean differences.
    #[serde(rename = "naive_signed_rank")]
    NaiveSignedRank,
    #[serde(rename = "sss_fe_equal")]
    SssFeEqual,
    #[serde(rename = "sss_fe_invvar")]
    SssFeInvVar,
    #[serde(rename = "sss_re_equal")]
    SssReEqual,
    #[serde(rename = "sss_re_invvar")]
    SssReInvVar,
    /// Stouffer's method on one-sided subject-level Welch p-values.
    #[serde(rename = "stouffer")]
    Stouffer,
    /// Random-effects inverse-variance combination of subject AUCs.
    #[serde(rename = "sss_re_invvar_auc")]
    SssReInvVarAuc,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::Pooling,
        Method::NaivePairedT,
        Method::NaiveSignedRank,
        Method::SssFeEqual,
        Method::SssFeInvVar,
        Method::SssReEqual,
        Method::SssReInvVar,
        Method::Stouffer,
        Method::SssReInvVarAuc,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::Pooling => "pooling",
            Method::NaivePairedT => "naive_paired_t",
            Method::NaiveSignedRank => "naive_signed_rank",
            Method::SssFeEqual => "sss_fe_equal",
            Method::SssFeInvVar => "sss_fe_invvar",
            Method::SssReEqual => "sss_re_equal",
            Method::SssReInvVar => "sss_re_invvar",
            Method::Stouffer => "stouffer",
            Method::SssReInvVarAuc => "sss_re_invvar_auc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Rejection rate of one method along the d grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionCurve {
    pub method: Method,
    pub d: Vec<f64>,
    pub rate: Vec<f64>,
    /// Binomial standard error `sqrt(r (1 - r) / reps)`.
    pub se: Vec<f64>,
    pub reps: usize,
}

impl RejectionCurve {
    pub fn rate_at(&self, d: f64) -> Option<f64> {
        self.d.iter().position(|x| (x - d).abs() < 1e-12).map(|i| self.rate[i])
    }
}

pub fn binomial_se(rate: f64, reps: usize) -> f64 {
    (rate * (1.0 - rate) / reps as f64).sqrt()
}

/// Curves of all methods for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub name: String,
    pub config: SimConfig,
    pub curves: Vec<RejectionCurve>,
}

impl Panel {
    pub fn curve(&self, method: Method) -> Option<&RejectionCurve> {
        self.curves.iter().find(|c| c.method == method)
    }
}

#[cfg(test)]
mod tests;
