use nalgebra::{DMatrix, DVector};

use super::{EffectKind, RegressionData, SampleSize, SubjectEffect};
use crate::error::{Error, Result};

/// Ordinary least-squares fit with an intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    /// `(beta_0, beta_1, ..., beta_K)`, intercept first.
    pub beta_hat: Vec<f64>,
    /// `sigma2_eta * (X^T X)^-1`, row-major `(K+1) x (K+1)`.
    pub coef_cov: Vec<Vec<f64>>,
    /// Unbiased residual variance.
    pub sigma2_eta: f64,
    /// `N - (K + 1)`.
    pub df: f64,
    pub n: usize,
}

/// Relative threshold on `|R_kk|` below which a column is considered a
/// linear combination of the previous ones.
const RANK_TOL: f64 = 1e-10;

/// Least-squares fit through a thin QR factorisation `X = Q R`.
///
/// `beta = R^-1 Q^T y` and `(X^T X)^-1 = R^-1 R^-T`, so the normal
/// equations are never formed.
pub fn ols_fit(data: &RegressionData) -> Result<OlsFit> {
    let n = data.y.len();
    let p = data.predictors() + 1;
    if n <= p {
        return Err(Error::InsufficientData { what: "OLS (N > K + 1)", needed: p + 1, got: n });
    }
    let x = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { data.rows[i][j - 1] });
    let y = DVector::from_column_slice(&data.y);

    let qr = x.clone().qr();
    let r = qr.r();
    let scale = (0..p).map(|j| x.column(j).norm()).fold(0.0, f64::max);
    for k in 0..p {
        if r[(k, k)].abs() <= RANK_TOL * scale {
            return Err(Error::SingularDesign { column: k });
        }
    }
    let qty = qr.q().transpose() * &y;
    let beta = r.solve_upper_triangular(&qty).ok_or(Error::SingularDesign { column: p - 1 })?;

    let residuals = &y - &x * &beta;
    let df = (n - p) as f64;
    let sigma2 = residuals.norm_squared() / df;

    let r_inv = r.solve_upper_triangular(&DMatrix::identity(p, p)).ok_or(Error::SingularDesign { column: p - 1 })?;
    let cov = (&r_inv * r_inv.transpose()) * sigma2;

    Ok(OlsFit {
        beta_hat: beta.iter().copied().collect(),
        coef_cov: (0..p).map(|i| (0..p).map(|j| cov[(i, j)]).collect()).collect(),
        sigma2_eta: sigma2,
        df,
        n,
    })
}

/// Coefficient `k` (0 = intercept) as an effect size with variance `C_kk`.
pub fn ols_coef_effect(fit: &OlsFit, k: usize) -> Result<SubjectEffect> {
    let len = fit.beta_hat.len();
    if k >= len {
        return Err(Error::IndexOutOfRange { index: k, len });
    }
    Ok(SubjectEffect {
        theta_hat: fit.beta_hat[k],
        var_hat: fit.coef_cov[k][k],
        kind: EffectKind::OlsCoef,
        n: SampleSize::One(fit.n),
        df: Some(fit.df),
    })
}
