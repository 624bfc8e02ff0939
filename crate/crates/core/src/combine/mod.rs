//! Group-level inference from subject-level effects.
//!
//! The central entry point is [`combine_effects`], which runs the
//! summary-statistic recipe: estimate the between-subject variance
//! (DerSimonian-Laird, or zero for a fixed effect), weight every subject by
//! `1 / (sigma_s^2 + tau^2)` or equally, average, and report the variance of
//! the weighted average. [`group_test`] turns the result into a z- or
//! t-test.
//!
//! Alongside it live the comparison methods: the naive one-sample t-test on
//! subject effects, Stouffer's combination of one-sided p-values, Cochran's
//! Q heterogeneity test and the pooling baseline that ignores nesting.

use serde::{Deserialize, Serialize};

use crate::dist::{std_normal_inv_cdf, student_t_inv_cdf, Z_975};
use crate::effect::{
    fisher_z_inv, one_sample_t, welch_test, EffectKind, RefDist, SubjectEffect, TestResult, TwoSampleData,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    FixedEffect,
    RandomEffectsDL,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    EqualWeights,
    InverseVariance,
}

/// Reference distribution for the group-level statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferencePolicy {
    /// Standard normal.
    #[default]
    ZTest,
    /// Student t with `S - 1` degrees of freedom (more conservative).
    TTestSMinus1,
}

/// Non-fatal conditions noticed while combining.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupWarning {
    /// Only one subject: the result is that subject's estimate.
    SingleSubject,
    /// DerSimonian-Laird with fewer than 10 subjects; p-values tend to be
    /// too small because the uncertainty of `tau^2` is ignored.
    FewSubjectsRandomEffects,
}

impl GroupWarning {
    pub fn message(self) -> &'static str {
        match self {
            GroupWarning::SingleSubject => "single subject: group estimate passes the subject estimate through",
            GroupWarning::FewSubjectsRandomEffects => {
                "random-effects model with fewer than 10 subjects: DerSimonian-Laird p-values may be anti-conservative"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupResult {
    pub theta_hat: f64,
    pub var_hat: f64,
    /// Raw (unnormalised) weights `alpha_s`, in input order.
    pub weights: Vec<f64>,
    /// Between-subject variance; zero under the fixed-effect model.
    pub tau2: f64,
    pub model: Model,
    pub scheme: WeightScheme,
    pub subjects: usize,
    pub warnings: Vec<GroupWarning>,
}

impl GroupResult {
    /// Weights rescaled to sum to one.
    pub fn normalized_weights(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }

    /// Symmetric interval `theta_hat ± q * sqrt(var_hat)` at the given
    /// coverage, with `q` from the normal or `t(S - 1)` distribution.
    pub fn confidence_interval(&self, coverage: f64, policy: ReferencePolicy) -> Result<(f64, f64)> {
        let q = critical_value(coverage, policy, self.subjects)?;
        let half = q * self.var_hat.sqrt();
        Ok((self.theta_hat - half, self.theta_hat + half))
    }
}

fn critical_value(coverage: f64, policy: ReferencePolicy, subjects: usize) -> Result<f64> {
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::domain(format!("coverage must lie in (0, 1), got {coverage}")));
    }
    let p = 0.5 + 0.5 * coverage;
    match policy {
        ReferencePolicy::ZTest if coverage == 0.95 => Ok(Z_975),
        ReferencePolicy::ZTest => std_normal_inv_cdf(p),
        ReferencePolicy::TTestSMinus1 => {
            if subjects < 2 {
                return Err(Error::InsufficientSubjects { needed: 2, got: subjects });
            }
            student_t_inv_cdf(p, (subjects - 1) as f64)
        }
    }
}

fn validate_variances(effects: &[SubjectEffect]) -> Result<()> {
    for (index, e) in effects.iter().enumerate() {
        if !(e.var_hat > 0.0) || !e.var_hat.is_finite() {
            return Err(Error::DegenerateVariance { index, var: e.var_hat });
        }
        if !e.theta_hat.is_finite() {
            return Err(Error::domain(format!("subject {index} has non-finite effect {}", e.theta_hat)));
        }
    }
    Ok(())
}

/// Fixed-effect quantities shared by DerSimonian-Laird and Cochran's Q.
struct FixedEffectFit {
    sum_w: f64,
    sum_w2: f64,
    /// `sum alpha_s (theta_s - theta_FE)^2`
    q: f64,
}

fn fixed_effect_fit(effects: &[SubjectEffect]) -> Result<FixedEffectFit> {
    if effects.len() < 2 {
        return Err(Error::InsufficientSubjects { needed: 2, got: effects.len() });
    }
    validate_variances(effects)?;
    let w: Vec<f64> = effects.iter().map(|e| 1.0 / e.var_hat).collect();
    let sum_w: f64 = w.iter().sum();
    let sum_w2: f64 = w.iter().map(|a| a * a).sum();
    let theta_fe = effects.iter().zip(&w).map(|(e, a)| a * e.theta_hat).sum::<f64>() / sum_w;
    let q = effects.iter().zip(&w).map(|(e, a)| a * (e.theta_hat - theta_fe).powi(2)).sum();
    Ok(FixedEffectFit { sum_w, sum_w2, q })
}

/// DerSimonian-Laird estimate of the between-subject variance,
/// truncated at zero.
pub fn dl_tau_squared(effects: &[SubjectEffect]) -> Result<f64> {
    let fit = fixed_effect_fit(effects)?;
    let s = effects.len() as f64;
    let denom = fit.sum_w - fit.sum_w2 / fit.sum_w;
    if !(denom > 0.0) {
        // happens only when one weight dominates to machine precision
        return Ok(0.0);
    }
    Ok(((fit.q - s + 1.0) / denom).max(0.0))
}

fn tau_squared(effects: &[SubjectEffect], model: Model) -> Result<f64> {
    match model {
        Model::FixedEffect => Ok(0.0),
        Model::RandomEffectsDL => dl_tau_squared(effects),
    }
}

/// Per-subject weights `alpha_s`: `1/S` for equal weighting, otherwise
/// `1 / (sigma_s^2 + tau^2)` with `tau^2 = 0` under the fixed-effect model.
pub fn weights(effects: &[SubjectEffect], model: Model, scheme: WeightScheme) -> Result<Vec<f64>> {
    let tau2 = tau_squared(effects, model)?;
    weights_with_tau2(effects, scheme, tau2)
}

fn weights_with_tau2(effects: &[SubjectEffect], scheme: WeightScheme, tau2: f64) -> Result<Vec<f64>> {
    if effects.is_empty() {
        return Err(Error::InsufficientSubjects { needed: 1, got: 0 });
    }
    validate_variances(effects)?;
    let s = effects.len() as f64;
    Ok(match scheme {
        WeightScheme::EqualWeights => vec![1.0 / s; effects.len()],
        WeightScheme::InverseVariance => effects.iter().map(|e| 1.0 / (e.var_hat + tau2)).collect(),
    })
}

/// Weighted group estimate and its variance.
///
/// For inverse-variance weights the variance is `1 / sum alpha_s`; for any
/// other weights it is `sum alpha_s^2 (sigma_s^2 + tau^2) / (sum alpha_s)^2`.
/// A single subject is accepted under the fixed-effect model and passed
/// through with a [`GroupWarning::SingleSubject`].
pub fn combine_effects(effects: &[SubjectEffect], model: Model, scheme: WeightScheme) -> Result<GroupResult> {
    let s = effects.len();
    let mut warnings = Vec::new();
    match (s, model) {
        (0, _) => return Err(Error::InsufficientSubjects { needed: 1, got: 0 }),
        (1, Model::RandomEffectsDL) => return Err(Error::InsufficientSubjects { needed: 2, got: 1 }),
        (1, Model::FixedEffect) => warnings.push(GroupWarning::SingleSubject),
        (s, Model::RandomEffectsDL) if s < 10 => warnings.push(GroupWarning::FewSubjectsRandomEffects),
        _ => {}
    }
    let tau2 = tau_squared(effects, model)?;
    let alpha = weights_with_tau2(effects, scheme, tau2)?;
    let sum_a: f64 = alpha.iter().sum();
    let theta = effects.iter().zip(&alpha).map(|(e, a)| a * e.theta_hat).sum::<f64>() / sum_a;
    let var = match scheme {
        WeightScheme::InverseVariance => 1.0 / sum_a,
        WeightScheme::EqualWeights => {
            effects.iter().zip(&alpha).map(|(e, a)| a * a * (e.var_hat + tau2)).sum::<f64>() / (sum_a * sum_a)
        }
    };
    Ok(GroupResult { theta_hat: theta, var_hat: var, weights: alpha, tau2, model, scheme, subjects: s, warnings })
}

/// Test `H0: theta = theta0` with `z = (theta_hat - theta0) / sqrt(var_hat)`.
pub fn group_test(result: &GroupResult, theta0: f64, policy: ReferencePolicy) -> Result<TestResult> {
    if !(result.var_hat > 0.0) {
        return Err(Error::degenerate(format!("group variance must be positive, got {}", result.var_hat)));
    }
    let stat = (result.theta_hat - theta0) / result.var_hat.sqrt();
    let ref_dist = match policy {
        ReferencePolicy::ZTest => RefDist::Normal,
        ReferencePolicy::TTestSMinus1 => {
            if result.subjects < 2 {
                return Err(Error::InsufficientSubjects { needed: 2, got: result.subjects });
            }
            RefDist::StudentT((result.subjects - 1) as f64)
        }
    };
    TestResult::new(stat, ref_dist)
}

/// Naive summary statistic: one-sample t-test on the subject effects,
/// ignoring their variances.
pub fn naive_summary_test(thetas: &[f64], theta0: f64) -> Result<TestResult> {
    if thetas.len() < 2 {
        return Err(Error::InsufficientSubjects { needed: 2, got: thetas.len() });
    }
    one_sample_t(thetas, theta0)
}

/// Stouffer's method on one-sided p-values sharing one direction.
///
/// `z_s = Phi^-1(p_s)` and `z = sum z_s / sqrt(S)`. The returned
/// `p_one_low` is the group one-sided p-value in the same direction as the
/// inputs, and `p_two = 2 min(p1, 1 - p1)`. p-values of exactly 0 or 1 are
/// rejected; clamp them upstream if needed.
pub fn stouffer_combine(p_one_sided: &[f64]) -> Result<TestResult> {
    if p_one_sided.is_empty() {
        return Err(Error::InsufficientSubjects { needed: 1, got: 0 });
    }
    let mut sum = 0.0;
    for (i, &p) in p_one_sided.iter().enumerate() {
        sum += std_normal_inv_cdf(p)
            .map_err(|_| Error::domain(format!("p-value {i} must lie strictly in (0, 1), got {p}")))?;
    }
    TestResult::new(sum / (p_one_sided.len() as f64).sqrt(), RefDist::Normal)
}

/// Cochran's Q test for heterogeneity, upper tail of `chi^2(S - 1)`.
///
/// The heterogeneity p-value is `p_one_high`.
pub fn cochran_q(effects: &[SubjectEffect]) -> Result<TestResult> {
    let fit = fixed_effect_fit(effects)?;
    TestResult::new(fit.q, RefDist::ChiSquared((effects.len() - 1) as f64))
}

/// Welch test on all subjects' samples concatenated.
///
/// This ignores the nesting and is only provided as a baseline: between-subject
/// offsets inflate the variance (low power) or create spurious effects.
pub fn pool_and_test(subjects: &[TwoSampleData]) -> Result<TestResult> {
    if subjects.is_empty() {
        return Err(Error::InsufficientSubjects { needed: 1, got: 0 });
    }
    welch_test(&TwoSampleData::pooled(subjects))
}

/// Group-level correlation from Fisher-z subject effects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationGroup {
    /// Combination in the z domain.
    pub group: GroupResult,
    pub rho_combined: f64,
    /// 95% interval built in the z domain and mapped back with `tanh`.
    pub rho_ci: (f64, f64),
}

/// Combine Fisher-z effects and map the result back to a correlation.
pub fn correlation_group(effects: &[SubjectEffect], model: Model, scheme: WeightScheme) -> Result<CorrelationGroup> {
    if let Some(index) = effects.iter().position(|e| e.kind != EffectKind::FisherZ) {
        return Err(Error::KindMismatch {
            expected: EffectKind::FisherZ.name(),
            found: effects[index].kind.name(),
            index,
        });
    }
    let group = combine_effects(effects, model, scheme)?;
    let ci = group.confidence_interval(0.95, ReferencePolicy::ZTest)?;
    Ok(CorrelationGroup {
        rho_combined: fisher_z_inv(group.theta_hat),
        rho_ci: (fisher_z_inv(ci.0), fisher_z_inv(ci.1)),
        group,
    })
}
