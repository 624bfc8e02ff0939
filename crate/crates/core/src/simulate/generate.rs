use super::{Family, SimConfig};
use crate::dist::{f_moments, sample_f, sample_normal, RngState};
use crate::effect::TwoSampleData;
use crate::error::Result;

/// Draw one subject's two-condition data with true mean difference
/// `d + xi_s`, where `xi_s ~ Normal(0, sigma_rand^2)`.
///
/// Draw order: `xi_s`, `N_X`, `N_Y`, `v_s`, `mu_X`, then the X samples and
/// the Y samples. Condition Y has mean `mu_X + d_s`; both conditions have
/// standard deviation `v_s`.
pub fn gen_subject(config: &SimConfig, rng: &mut RngState, d: f64) -> Result<TwoSampleData> {
    let d_s = sample_normal(rng, d, config.sigma_rand)?;
    let nx = rng.uniform_int(config.n_range.0, config.n_range.1) as usize;
    let ny = rng.uniform_int(config.n_range.0, config.n_range.1) as usize;
    let v = rng.uniform_range(config.v_range.0, config.v_range.1);
    let mu_x = rng.uniform_range(config.mu_range.0, config.mu_range.1);
    let x = draw_class(config.family, rng, nx, mu_x, v)?;
    let y = draw_class(config.family, rng, ny, mu_x + d_s, v)?;
    TwoSampleData::new(x, y)
}

fn draw_class(family: Family, rng: &mut RngState, n: usize, mean: f64, sd: f64) -> Result<Vec<f64>> {
    match family {
        Family::Gaussian => (0..n).map(|_| sample_normal(rng, mean, sd)).collect(),
        Family::FScaled { d1, d2 } => {
            let (f_mean, f_var) = f_moments(d1, d2)?;
            let scale = sd / f_var.sqrt();
            (0..n).map(|_| Ok(mean + (sample_f(rng, d1, d2)? - f_mean) * scale)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effect::welch_diff_effect;

    #[test]
    fn fixed_effect_null_has_equal_population_means() {
        // with sigma_rand = 0 and d = 0, the Welch difference is unbiased for 0
        let config = SimConfig { sigma_rand: 0.0, ..SimConfig::default() };
        let mut total = 0.0;
        let reps = 4000;
        for r in 0..reps {
            let data = gen_subject(&config, &mut config.stream(r, 0), 0.0).unwrap();
            total += welch_diff_effect(&data).unwrap().theta_hat;
        }
        assert!((total / reps as f64).abs() < 0.01);
    }

    #[test]
    fn sizes_and_replay() {
        let config = SimConfig { seed: 99, ..SimConfig::default() };
        for s in 0..50 {
            let a = gen_subject(&config, &mut config.stream(3, s), 0.1).unwrap();
            let b = gen_subject(&config, &mut config.stream(3, s), 0.1).unwrap();
            assert_eq!(a, b);
            assert!((50..=80).contains(&a.x.len()) && (50..=80).contains(&a.y.len()));
        }
    }

    #[test]
    fn fscaled_moments() {
        let (f_mean, f_var) = f_moments(2.0, 5.0).unwrap();
        let scale = 1.0 / f_var.sqrt();
        assert!((scale * scale * f_var - 1.0).abs() < 1e-15);

        let mut rng = RngState::new(2024);
        let mut xs = draw_class(Family::F_2_5, &mut rng, 1_000_000, 1.0, 1.0).unwrap();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");

        // shape check on the CDF: the sample sd of a law with infinite
        // fourth moment fluctuates far more than 0.01 at this size
        xs.sort_by(f64::total_cmp);
        let cdf = |y: f64| {
            let x = ((y - 1.0) / scale + f_mean).max(0.0);
            1.0 - (1.0 + 2.0 * x / 5.0).powf(-2.5)
        };
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &y)| (cdf(y) - i as f64 / n).abs().max((cdf(y) - (i + 1) as f64 / n).abs()))
            .fold(0.0, f64::max);
        assert!(ks < 1.95 / n.sqrt(), "ks {ks}");
        assert!(xs[xs.len() / 2] < mean);
    }

    #[test]
    fn random_effects_spread_subject_differences() {
        let config = SimConfig { sigma_rand: 0.2, v_range: (0.5, 0.5), n_range: (80, 80), ..SimConfig::default() };
        let diffs: Vec<f64> = (0..3000)
            .map(|r| {
                -welch_diff_effect(&gen_subject(&config, &mut config.stream(r, 0), 0.3).unwrap()).unwrap().theta_hat
            })
            .collect();
        let n = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / n;
        let var = diffs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        // 0.2^2 between subjects + 2 * 0.25 / 80 within
        let expected = 0.04 + 0.5 / 80.0;
        assert!((mean - 0.3).abs() < 0.015, "mean {mean}");
        assert!((var / expected - 1.0).abs() < 0.1, "var {var} expected {expected}");
    }
}
