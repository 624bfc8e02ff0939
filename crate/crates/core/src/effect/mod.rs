//! Subject-level effect sizes with analytic variances.
//!
//! Every estimator returns a [`SubjectEffect`]: the point estimate, its
//! estimated variance and enough metadata (sample sizes, reference df) to
//! test it on its own or hand it to [`crate::combine`].

mod bootstrap;
mod correlation;
mod moments;
mod ols;
mod rank;

pub use bootstrap::bootstrap_variance;
pub use correlation::{fisher_z, fisher_z_inv, pearson_effect, pearson_r, pearson_test, r_squared};
pub use moments::{mean_effect, one_sample_t, paired_diff_effect, welch_diff_effect, welch_test};
pub use ols::{ols_coef_effect, ols_fit, OlsFit};
pub use rank::{auc_effect, auc_null_test, midranks, wilcoxon_signed_rank};

use serde::{Deserialize, Serialize};

use crate::dist::{chi_squared_sf, normal_cdf_unchecked, student_t_cdf};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectKind {
    Mean,
    PairedDiff,
    WelchDiff,
    Auc,
    FisherZ,
    OlsCoef,
    /// Pre-computed estimate supplied from outside (meta-analysis input).
    Summary,
}

impl EffectKind {
    pub fn name(self) -> &'static str {
        match self {
            EffectKind::Mean => "mean",
            EffectKind::PairedDiff => "paired_diff",
            EffectKind::WelchDiff => "welch_diff",
            EffectKind::Auc => "auc",
            EffectKind::FisherZ => "fisher_z",
            EffectKind::OlsCoef => "ols_coef",
            EffectKind::Summary => "summary",
        }
    }
}

/// Sample sizes behind an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSize {
    One(usize),
    Two { x: usize, y: usize },
    Unknown,
}

impl SampleSize {
    pub fn total(self) -> Option<usize> {
        match self {
            SampleSize::One(n) => Some(n),
            SampleSize::Two { x, y } => Some(x + y),
            SampleSize::Unknown => None,
        }
    }
}

/// One subject's estimated effect and the variance of that estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectEffect {
    pub theta_hat: f64,
    pub var_hat: f64,
    pub kind: EffectKind,
    pub n: SampleSize,
    /// Degrees of freedom of the subject-level reference distribution;
    /// `None` means a normal reference.
    pub df: Option<f64>,
}

impl SubjectEffect {
    /// Effect supplied as a bare `(theta, variance)` pair.
    pub fn summary(theta_hat: f64, var_hat: f64, n: Option<usize>) -> Result<Self> {
        if !theta_hat.is_finite() || !var_hat.is_finite() || var_hat < 0.0 {
            return Err(Error::domain(format!(
                "summary effect needs finite theta and var >= 0, got ({theta_hat}, {var_hat})"
            )));
        }
        Ok(Self {
            theta_hat,
            var_hat,
            kind: EffectKind::Summary,
            n: n.map_or(SampleSize::Unknown, SampleSize::One),
            df: None,
        })
    }

    /// Subject-level test of `H0: theta = theta0` against the estimator's own
    /// reference distribution.
    pub fn test(&self, theta0: f64) -> Result<TestResult> {
        if !(self.var_hat > 0.0) {
            return Err(Error::degenerate(format!("cannot test an effect with variance {}", self.var_hat)));
        }
        let stat = (self.theta_hat - theta0) / self.var_hat.sqrt();
        let ref_dist = match self.df {
            Some(df) => RefDist::StudentT(df),
            None => RefDist::Normal,
        };
        TestResult::new(stat, ref_dist)
    }
}

/// Reference distribution of a test statistic under the null.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "df", rename_all = "snake_case")]
pub enum RefDist {
    Normal,
    StudentT(f64),
    ChiSquared(f64),
}

impl RefDist {
    /// `(P(T <= t), P(T >= t))`, each evaluated in its own tail.
    fn tails(self, t: f64) -> Result<(f64, f64)> {
        match self {
            RefDist::Normal => {
                if !t.is_finite() {
                    return Err(Error::domain(format!("test statistic must be finite, got {t}")));
                }
                Ok((normal_cdf_unchecked(t), normal_cdf_unchecked(-t)))
            }
            RefDist::StudentT(df) => Ok((student_t_cdf(t, df)?, student_t_cdf(-t, df)?)),
            RefDist::ChiSquared(df) => {
                let upper = chi_squared_sf(t, df)?;
                Ok((1.0 - upper, upper))
            }
        }
    }
}

/// Test statistic with one- and two-tailed p-values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub ref_dist: RefDist,
    pub p_one_low: f64,
    pub p_one_high: f64,
    pub p_two: f64,
}

impl TestResult {
    pub fn new(statistic: f64, ref_dist: RefDist) -> Result<Self> {
        let (low, high) = ref_dist.tails(statistic)?;
        Ok(Self { statistic, ref_dist, p_one_low: low, p_one_high: high, p_two: (2.0 * low.min(high)).min(1.0) })
    }

    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_two < alpha
    }
}

fn check_finite(what: &str, xs: &[f64]) -> Result<()> {
    match xs.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::domain(format!("{what}[{i}] is not finite ({})", xs[i]))),
        None => Ok(()),
    }
}

/// Unpaired samples from conditions X and Y.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSampleData {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl TwoSampleData {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::InsufficientData {
                what: "two-sample data (per condition)",
                needed: 1,
                got: x.len().min(y.len()),
            });
        }
        check_finite("x", &x)?;
        check_finite("y", &y)?;
        Ok(Self { x, y })
    }

    /// Concatenate the conditions of several subjects.
    pub fn pooled<'a>(subjects: impl IntoIterator<Item = &'a TwoSampleData>) -> Self {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for s in subjects {
            x.extend_from_slice(&s.x);
            y.extend_from_slice(&s.y);
        }
        Self { x, y }
    }
}

/// Paired observations `(x_i, y_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedData {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl PairedData {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Shape(format!("paired data needs equal lengths, got {} and {}", x.len(), y.len())));
        }
        if x.is_empty() {
            return Err(Error::InsufficientData { what: "paired data", needed: 1, got: 0 });
        }
        check_finite("x", &x)?;
        check_finite("y", &y)?;
        Ok(Self { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn differences(&self) -> Vec<f64> {
        self.x.iter().zip(&self.y).map(|(a, b)| a - b).collect()
    }
}

/// Regression samples; the intercept column is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionData {
    /// One row of `K` predictor values per sample.
    pub rows: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

impl RegressionData {
    pub fn new(rows: Vec<Vec<f64>>, y: Vec<f64>) -> Result<Self> {
        if rows.len() != y.len() {
            return Err(Error::Shape(format!("{} predictor rows but {} responses", rows.len(), y.len())));
        }
        if rows.is_empty() {
            return Err(Error::InsufficientData { what: "regression data", needed: 1, got: 0 });
        }
        let k = rows[0].len();
        if let Some(i) = rows.iter().position(|r| r.len() != k) {
            return Err(Error::Shape(format!("row {i} has {} predictors, expected {k}", rows[i].len())));
        }
        for row in &rows {
            check_finite("predictor", row)?;
        }
        check_finite("y", &y)?;
        Ok(Self { rows, y })
    }

    /// Number of predictors `K` (excluding the intercept).
    pub fn predictors(&self) -> usize {
        self.rows[0].len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_values_are_complementary() {
        for stat in [-3.2, -0.4, 0.0, 1.1, 5.0] {
            for rd in [RefDist::Normal, RefDist::StudentT(4.5)] {
                let r = TestResult::new(stat, rd).unwrap();
                assert!((r.p_one_low + r.p_one_high - 1.0).abs() < 1e-12);
                assert_eq!(r.p_two, (2.0 * r.p_one_low.min(r.p_one_high)).min(1.0));
            }
        }
        let q = TestResult::new(2.0, RefDist::ChiSquared(1.0)).unwrap();
        assert!((q.p_one_low + q.p_one_high - 1.0).abs() < 1e-12);
    }

    #[test]
    fn paired_length_mismatch() {
        assert!(matches!(PairedData::new(vec![1.0, 2.0], vec![1.0]), Err(Error::Shape(_))));
    }

    #[test]
    fn regression_shape_checks() {
        assert!(RegressionData::new(vec![vec![1.0], vec![2.0, 3.0]], vec![1.0, 2.0]).is_err());
        assert!(RegressionData::new(vec![vec![1.0]], vec![1.0, 2.0]).is_err());
    }
}
