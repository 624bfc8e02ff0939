use super::{check_finite, EffectKind, PairedData, RefDist, SampleSize, SubjectEffect, TestResult, TwoSampleData};
use crate::error::{Error, Result};

/// Sample mean and unbiased sample variance.
pub(crate) fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// Sample mean with variance `s^2 / N` and `N - 1` degrees of freedom.
pub fn mean_effect(samples: &[f64]) -> Result<SubjectEffect> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData { what: "mean effect", needed: 2, got: samples.len() });
    }
    check_finite("samples", samples)?;
    let n = samples.len();
    let (mean, var) = mean_var(samples);
    Ok(SubjectEffect {
        theta_hat: mean,
        var_hat: var / n as f64,
        kind: EffectKind::Mean,
        n: SampleSize::One(n),
        df: Some((n - 1) as f64),
    })
}

/// One-sample t-test of `H0: mean = theta0`.
pub fn one_sample_t(samples: &[f64], theta0: f64) -> Result<TestResult> {
    let effect = mean_effect(samples)?;
    if !(effect.var_hat > 0.0) {
        return Err(Error::degenerate("one-sample t-test on zero-variance samples"));
    }
    effect.test(theta0)
}

/// Mean of the paired differences `x - y`.
pub fn paired_diff_effect(data: &PairedData) -> Result<SubjectEffect> {
    let mut effect = mean_effect(&data.differences())?;
    effect.kind = EffectKind::PairedDiff;
    Ok(effect)
}

/// Difference of class means `x̄ - ȳ` with the unpooled variance and
/// Welch-Satterthwaite degrees of freedom.
pub fn welch_diff_effect(data: &TwoSampleData) -> Result<SubjectEffect> {
    let (nx, ny) = (data.x.len(), data.y.len());
    if nx < 2 || ny < 2 {
        return Err(Error::InsufficientData { what: "Welch difference (per condition)", needed: 2, got: nx.min(ny) });
    }
    let (mx, vx) = mean_var(&data.x);
    let (my, vy) = mean_var(&data.y);
    let sx = vx / nx as f64;
    let sy = vy / ny as f64;
    let var = sx + sy;
    let df = var * var / (sx * sx / (nx - 1) as f64 + sy * sy / (ny - 1) as f64);
    Ok(SubjectEffect {
        theta_hat: mx - my,
        var_hat: var,
        kind: EffectKind::WelchDiff,
        n: SampleSize::Two { x: nx, y: ny },
        // 0/0 when both groups are constant; the test then reports degeneracy
        df: df.is_finite().then_some(df),
    })
}

/// Welch's two-sample t-test of `H0: mu_x = mu_y`.
pub fn welch_test(data: &TwoSampleData) -> Result<TestResult> {
    let effect = welch_diff_effect(data)?;
    let df = match effect.df {
        Some(df) if effect.var_hat > 0.0 => df,
        _ => return Err(Error::degenerate("Welch test with zero variance in both conditions")),
    };
    TestResult::new(effect.theta_hat / effect.var_hat.sqrt(), RefDist::StudentT(df))
}
