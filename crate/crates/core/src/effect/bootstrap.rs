use crate::dist::RngState;
use crate::error::{Error, Result};

/// Variance of `statistic` over `replicates` with-replacement resamples of
/// the same size as `samples` (unbiased, `B - 1` denominator).
///
/// Useful for effect sizes without an analytic variance; the result can be
/// plugged into inverse-variance weighting like any other `var_hat`.
pub fn bootstrap_variance<T, F>(samples: &[T], statistic: F, replicates: usize, rng: &mut RngState) -> Result<f64>
where
    T: Clone,
    F: Fn(&[T]) -> f64,
{
    if replicates < 2 {
        return Err(Error::domain(format!("bootstrap needs B >= 2, got {replicates}")));
    }
    if samples.is_empty() {
        return Err(Error::InsufficientData { what: "bootstrap", needed: 1, got: 0 });
    }
    let n = samples.len();
    let mut resample = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(replicates);
    for _ in 0..replicates {
        resample.clear();
        resample.extend((0..n).map(|_| samples[rng.uniform_int(0, n as u64 - 1) as usize].clone()));
        values.push(statistic(&resample));
    }
    let b = replicates as f64;
    let mean = values.iter().sum::<f64>() / b;
    Ok(values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (b - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::sample_normal;
    use crate::effect::mean_effect;

    fn mean(xs: &[f64]) -> f64 {
        xs.iter().sum::<f64>() / xs.len() as f64
    }

    #[test]
    fn constant_statistic_has_no_spread() {
        let mut rng = RngState::new(1);
        let v = bootstrap_variance(&[1.0, 2.0, 3.0], |_| 4.2, 100, &mut rng).unwrap();
        assert!(v < 1e-25);
        assert!(bootstrap_variance(&[1.0], mean, 1, &mut rng).is_err());
    }

    #[test]
    fn mean_variance_close_to_analytic() {
        let mut rng = RngState::new(31);
        let xs: Vec<f64> = (0..200).map(|_| sample_normal(&mut rng, 1.0, 2.0).unwrap()).collect();
        let analytic = mean_effect(&xs).unwrap().var_hat;
        let boot = bootstrap_variance(&xs, mean, 2000, &mut rng).unwrap();
        assert!((boot / analytic - 1.0).abs() < 0.25, "boot {boot} analytic {analytic}");
    }

    #[test]
    fn seeded_runs_replay() {
        let xs: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let a = bootstrap_variance(&xs, mean, 300, &mut RngState::new(8)).unwrap();
        let b = bootstrap_variance(&xs, mean, 300, &mut RngState::new(8)).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
