use super::{EffectKind, PairedData, RefDist, SampleSize, SubjectEffect, TestResult};
use crate::error::{Error, Result};

/// Fisher z-transform, `artanh(rho)`.
pub fn fisher_z(rho: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(Error::domain(format!("Fisher z needs |rho| < 1, got {rho}")));
    }
    Ok(rho.signum() * rho.abs().atanh())
}

/// Back-transform to the correlation scale, `tanh(z)`.
pub fn fisher_z_inv(z: f64) -> f64 {
    z.signum() * z.abs().tanh()
}

/// Sample Pearson product-moment correlation.
pub fn pearson_r(data: &PairedData) -> Result<f64> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InsufficientData { what: "Pearson correlation", needed: 2, got: n });
    }
    let nf = n as f64;
    let mx = data.x.iter().sum::<f64>() / nf;
    let my = data.y.iter().sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in data.x.iter().zip(&data.y) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::degenerate("correlation with a zero-variance coordinate"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Fisher-transformed Pearson correlation with variance `1 / (N - 3)`.
///
/// Perfect (anti-)correlation is rejected: its transform is infinite.
pub fn pearson_effect(data: &PairedData) -> Result<SubjectEffect> {
    let n = data.len();
    if n <= 3 {
        return Err(Error::InsufficientData { what: "Fisher-z correlation", needed: 4, got: n });
    }
    let r = pearson_r(data)?;
    if 1.0 - r.abs() <= 8.0 * f64::EPSILON {
        return Err(Error::degenerate(format!("perfect correlation (r = {r})")));
    }
    Ok(SubjectEffect {
        theta_hat: fisher_z(r)?,
        var_hat: 1.0 / (n - 3) as f64,
        kind: EffectKind::FisherZ,
        n: SampleSize::One(n),
        df: None,
    })
}

/// Test of `H0: rho = 0` with `t = r sqrt((N - 2) / (1 - r^2))` on `N - 2`
/// degrees of freedom.
pub fn pearson_test(data: &PairedData) -> Result<TestResult> {
    let n = data.len();
    if n <= 2 {
        return Err(Error::InsufficientData { what: "correlation test", needed: 3, got: n });
    }
    let r = pearson_r(data)?;
    if 1.0 - r.abs() <= 8.0 * f64::EPSILON {
        return Err(Error::degenerate(format!("perfect correlation (r = {r})")));
    }
    let df = (n - 2) as f64;
    TestResult::new(r * (df / (1.0 - r * r)).sqrt(), RefDist::StudentT(df))
}

/// Coefficient of determination of a simple regression with intercept.
///
/// `r^2` is biased and carries no direction, so it must not be combined
/// across subjects by inverse-variance weighting.
pub fn r_squared(rho_hat: f64) -> Result<f64> {
    if !(rho_hat.abs() <= 1.0) {
        return Err(Error::domain(format!("correlation must satisfy |r| <= 1, got {rho_hat}")));
    }
    Ok(rho_hat * rho_hat)
}
