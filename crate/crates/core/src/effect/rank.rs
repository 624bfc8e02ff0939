use super::{check_finite, EffectKind, RefDist, SampleSize, SubjectEffect, TestResult, TwoSampleData};
use crate::error::{Error, Result};

/// Ranks starting at one; tied values share the mean of their positions.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Area under the ROC curve, `U / (N_X N_Y)`, with the Hanley-McNeil
/// variance.
///
/// `U = W - N_X (N_X + 1) / 2` where `W` is the rank sum of condition X in
/// the pooled midranks, so ties earn half credit. At `Â ∈ {0, 1}` the
/// Hanley-McNeil formula gives zero; the variance is floored at
/// `1 / (N_X N_Y (N_X + N_Y))` to keep inverse-variance weights finite.
pub fn auc_effect(data: &TwoSampleData) -> Result<SubjectEffect> {
    let (nx, ny) = (data.x.len(), data.y.len());
    if nx == 0 || ny == 0 {
        return Err(Error::InsufficientData { what: "AUC (per condition)", needed: 1, got: 0 });
    }
    if nx + ny < 3 {
        return Err(Error::InsufficientData { what: "AUC variance (total)", needed: 3, got: nx + ny });
    }
    check_finite("x", &data.x)?;
    check_finite("y", &data.y)?;
    let a = auc_statistic(data);
    let (nxf, nyf) = (nx as f64, ny as f64);
    let q1 = a / (2.0 - a);
    let q2 = 2.0 * a * a / (1.0 + a);
    let var = (a * (1.0 - a) + (nxf - 1.0) * (q1 - a * a) + (nyf - 1.0) * (q2 - a * a)) / (nxf * nyf);
    let floor = 1.0 / (nxf * nyf * (nxf + nyf));
    Ok(SubjectEffect {
        theta_hat: a,
        var_hat: var.max(floor),
        kind: EffectKind::Auc,
        n: SampleSize::Two { x: nx, y: ny },
        df: None,
    })
}

fn auc_statistic(data: &TwoSampleData) -> f64 {
    let nx = data.x.len();
    let pooled: Vec<f64> = data.x.iter().chain(&data.y).copied().collect();
    let ranks = midranks(&pooled);
    let w: f64 = ranks[..nx].iter().sum();
    let u = w - (nx * (nx + 1)) as f64 / 2.0;
    u / (nx * data.y.len()) as f64
}

/// Normal-approximation test of `H0: A = 0.5` using the null variance
/// `(N_X + N_Y + 1) / (12 N_X N_Y)` of `Â`.
///
/// The approximation is reasonable for `N_X + N_Y >= 20`; smaller samples
/// are accepted but the p-value is then only indicative.
pub fn auc_null_test(data: &TwoSampleData) -> Result<TestResult> {
    let (nx, ny) = (data.x.len(), data.y.len());
    if nx == 0 || ny == 0 {
        return Err(Error::InsufficientData { what: "AUC (per condition)", needed: 1, got: 0 });
    }
    let a = auc_statistic(data);
    let (nxf, nyf) = (nx as f64, ny as f64);
    let var0 = (nxf + nyf + 1.0) / (12.0 * nxf * nyf);
    TestResult::new((a - 0.5) / var0.sqrt(), RefDist::Normal)
}

/// Wilcoxon signed-rank test of symmetry about zero, normal approximation.
///
/// Exact zeros are dropped before ranking; tied magnitudes get midranks.
/// No continuity or tie correction is applied to the null variance.
pub fn wilcoxon_signed_rank(diffs: &[f64]) -> Result<TestResult> {
    check_finite("differences", diffs)?;
    let nonzero: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    if nonzero.is_empty() {
        return Err(Error::degenerate("signed-rank test with all differences zero"));
    }
    let n = nonzero.len() as f64;
    let magnitudes: Vec<f64> = nonzero.iter().map(|d| d.abs()).collect();
    let ranks = midranks(&magnitudes);
    let w_plus: f64 = nonzero.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let mean = n * (n + 1.0) / 4.0;
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    TestResult::new((w_plus - mean) / var.sqrt(), RefDist::Normal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::RngState;
    use proptest::prelude::*;

    /// Half-credit pair counting, independent of ranking.
    fn brute_force_auc(x: &[f64], y: &[f64]) -> f64 {
        let mut count = 0.0;
        for a in x {
            for b in y {
                if a > b {
                    count += 1.0;
                } else if a == b {
                    count += 0.5;
                }
            }
        }
        count / (x.len() * y.len()) as f64
    }

    #[test]
    fn midrank_examples() {
        assert_eq!(midranks(&[10.0, 20.0, 30.0]), vec![1.0, 2.0, 3.0]);
        assert_eq!(midranks(&[5.0, 5.0]), vec![1.5, 1.5]);
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0, 3.0]), vec![4.0, 1.0, 4.0, 2.0, 4.0]);
    }

    #[test]
    fn auc_examples() {
        let d = TwoSampleData::new(vec![1.0, 3.0, 5.0], vec![2.0, 4.0]).unwrap();
        let pooled = midranks(&[1.0, 3.0, 5.0, 2.0, 4.0]);
        assert_eq!(pooled[..3].iter().sum::<f64>(), 9.0);
        let e = auc_effect(&d).unwrap();
        assert_eq!(e.theta_hat, 0.5);
        assert_eq!(brute_force_auc(&d.x, &d.y), 0.5);

        let sep = TwoSampleData::new(vec![5.0, 6.0, 7.0], vec![1.0, 2.0]).unwrap();
        let e = auc_effect(&sep).unwrap();
        assert_eq!(e.theta_hat, 1.0);
        assert_eq!(e.var_hat, 1.0 / (3.0 * 2.0 * 5.0));

        let swapped = TwoSampleData::new(d.y.clone(), d.x.clone()).unwrap();
        let x = TwoSampleData::new(vec![0.3, 2.2, 1.0, 4.0], vec![1.0, -1.0, 0.5]).unwrap();
        let xs = TwoSampleData::new(x.y.clone(), x.x.clone()).unwrap();
        assert_eq!(auc_effect(&swapped).unwrap().theta_hat, 0.5);
        assert_eq!(auc_effect(&x).unwrap().theta_hat + auc_effect(&xs).unwrap().theta_hat, 1.0);
    }

    #[test]
    fn auc_hanley_mcneil_interior() {
        // Â = 0.75, N_X = 4, N_Y = 2 evaluated by hand.
        let d = TwoSampleData::new(vec![3.0, 4.0, 5.0, 0.5], vec![1.0, 2.0]).unwrap();
        let e = auc_effect(&d).unwrap();
        assert_eq!(e.theta_hat, 0.75);
        let a: f64 = 0.75;
        let q1 = a / (2.0 - a);
        let q2 = 2.0 * a * a / (1.0 + a);
        let want = (a * (1.0 - a) + 3.0 * (q1 - a * a) + 1.0 * (q2 - a * a)) / 8.0;
        assert!((e.var_hat - want).abs() < 1e-15);
    }

    #[test]
    fn auc_requires_both_classes() {
        let d = TwoSampleData { x: vec![1.0, 2.0], y: vec![] };
        assert!(matches!(auc_effect(&d), Err(Error::InsufficientData { .. })));
        assert!(auc_null_test(&d).is_err());
    }

    #[test]
    fn auc_null_moments() {
        // N_X = N_Y = 10: E(U) = 50, Var(U) = 175.
        let (nx, ny) = (10.0, 10.0);
        assert_eq!(nx * ny / 2.0, 50.0);
        assert_eq!(nx * ny * (nx + ny + 1.0) / 12.0, 175.0);

        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = (0..10).map(|i| i as f64 + 0.5).collect();
        let d = TwoSampleData::new(x, y).unwrap();
        // W = 1 + 3 + ... + 19 = 100, U = 45, z = (U - 50) / sqrt(175)
        let t = auc_null_test(&d).unwrap();
        assert!((t.statistic - (-5.0 / 175f64.sqrt())).abs() < 1e-12);

        let balanced = TwoSampleData::new(vec![1.0, 4.0], vec![2.0, 3.0]).unwrap();
        let t = auc_null_test(&balanced).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.p_two, 1.0);
    }

    #[test]
    fn auc_null_z_permutation_moments() {
        let mut rng = RngState::new(99);
        let values: Vec<f64> = (0..30).map(|_| rng.uniform()).collect();
        let nx = 14;
        let mut pool = values.clone();
        let reps = 100_000;
        let mut zs = Vec::with_capacity(reps);
        for _ in 0..reps {
            // Fisher-Yates shuffle
            for i in (1..pool.len()).rev() {
                let j = rng.uniform_int(0, i as u64) as usize;
                pool.swap(i, j);
            }
            let d = TwoSampleData { x: pool[..nx].to_vec(), y: pool[nx..].to_vec() };
            zs.push(auc_null_test(&d).unwrap().statistic);
        }
        let mean = zs.iter().sum::<f64>() / reps as f64;
        let sd = (zs.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt();
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((sd - 1.0).abs() < 0.02, "sd {sd}");
    }

    #[test]
    fn signed_rank_examples() {
        let t = wilcoxon_signed_rank(&[-2.0, -1.0, 1.0, 2.0]).unwrap();
        assert_eq!(t.statistic, 0.0);

        let pos = [0.5, 1.0, 1.5, 2.0, 2.5];
        let t = wilcoxon_signed_rank(&pos).unwrap();
        let n: f64 = 5.0;
        let want = (n * (n + 1.0) / 2.0 - n * (n + 1.0) / 4.0) / (n * (n + 1.0) * (2.0 * n + 1.0) / 24.0).sqrt();
        assert!((t.statistic - want).abs() < 1e-12);

        // zeros are dropped
        let with_zero = wilcoxon_signed_rank(&[0.0, -2.0, -1.0, 1.0, 2.0]).unwrap();
        assert_eq!(with_zero.statistic, 0.0);

        assert!(matches!(wilcoxon_signed_rank(&[0.0, 0.0]), Err(Error::DegenerateData(_))));
    }

    proptest! {
        #[test]
        fn midranks_sum_and_equivariance(
            values in prop::collection::vec(prop_oneof![(-5i32..5).prop_map(f64::from), -5.0f64..5.0], 1..40),
            seed in any::<u64>(),
        ) {
            let n = values.len() as f64;
            let ranks = midranks(&values);
            prop_assert_eq!(ranks.iter().sum::<f64>(), n * (n + 1.0) / 2.0);

            let mut rng = RngState::new(seed);
            let mut perm: Vec<usize> = (0..values.len()).collect();
            for i in (1..perm.len()).rev() {
                let j = rng.uniform_int(0, i as u64) as usize;
                perm.swap(i, j);
            }
            let permuted: Vec<f64> = perm.iter().map(|&i| values[i]).collect();
            let permuted_ranks = midranks(&permuted);
            for (k, &i) in perm.iter().enumerate() {
                prop_assert_eq!(permuted_ranks[k], ranks[i]);
            }
        }

        #[test]
        fn auc_matches_pair_counting(
            x in prop::collection::vec((0i32..6).prop_map(f64::from), 1..12),
            y in prop::collection::vec((0i32..6).prop_map(f64::from), 1..12),
        ) {
            prop_assume!(x.len() + y.len() >= 3);
            let d = TwoSampleData::new(x.clone(), y.clone()).unwrap();
            let e = auc_effect(&d).unwrap();
            prop_assert_eq!(e.theta_hat, brute_force_auc(&x, &y));
            prop_assert!((0.0..=1.0).contains(&e.theta_hat));
            prop_assert!(e.var_hat > 0.0);
        }
    }
}
