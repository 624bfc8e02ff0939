use serde::{Deserialize, Serialize};

use crate::dist::{sample_normal, RngState};
use crate::effect::{pearson_r, pearson_test, welch_test, PairedData, TwoSampleData};
use crate::error::Result;

/// Generative constants of the pooling illustration:
/// `x ~ Normal(mu_s - shift, variance)`, `y ~ Normal(mu_s + shift, variance)`,
/// `mu_s ~ Normal(0, offset_sd^2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoConfig {
    pub subjects: usize,
    pub samples: usize,
    pub shift: f64,
    pub variance: f64,
    pub offset_sd: f64,
}

impl Default for DemoConfig {
    fn default() -> Self {
        Self { subjects: 4, samples: 20, shift: 1.0, variance: 4.0, offset_sd: 15.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoSubject {
    pub offset: f64,
    pub welch_p: f64,
    pub pearson_r: f64,
    pub pearson_p: f64,
}

/// Subject-level against pooled conclusions on the same draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolingDemo {
    pub config: DemoConfig,
    pub seed: u64,
    pub subjects: Vec<DemoSubject>,
    pub pooled_welch_p: f64,
    pub pooled_pearson_r: f64,
    pub pooled_pearson_p: f64,
}

pub fn pooling_demo(seed: u64) -> Result<PoolingDemo> {
    pooling_demo_with(&DemoConfig::default(), seed)
}

/// Draw the illustration data and test it per subject and pooled.
///
/// Subject `s` reads from sub-stream `(seed, 0, s)`: the offset first, then
/// the X samples and the Y samples. `x_n` and `y_n` are paired by sample
/// index for the correlation analysis.
pub fn pooling_demo_with(config: &DemoConfig, seed: u64) -> Result<PoolingDemo> {
    let sd = config.variance.sqrt();
    let mut data = Vec::with_capacity(config.subjects);
    let mut subjects = Vec::with_capacity(config.subjects);
    for s in 0..config.subjects {
        let mut rng = RngState::substream(seed, 0, s as u32);
        let offset = sample_normal(&mut rng, 0.0, config.offset_sd)?;
        let x = (0..config.samples)
            .map(|_| sample_normal(&mut rng, offset - config.shift, sd))
            .collect::<Result<Vec<_>>>()?;
        let y = (0..config.samples)
            .map(|_| sample_normal(&mut rng, offset + config.shift, sd))
            .collect::<Result<Vec<_>>>()?;
        let paired = PairedData::new(x.clone(), y.clone())?;
        let two = TwoSampleData::new(x, y)?;
        subjects.push(DemoSubject {
            offset,
            welch_p: welch_test(&two)?.p_two,
            pearson_r: pearson_r(&paired)?,
            pearson_p: pearson_test(&paired)?.p_two,
        });
        data.push(two);
    }
    let pooled = TwoSampleData::pooled(&data);
    let pooled_pairs = PairedData::new(pooled.x.clone(), pooled.y.clone())?;
    Ok(PoolingDemo {
        config: config.clone(),
        seed,
        subjects,
        pooled_welch_p: welch_test(&pooled)?.p_two,
        pooled_pearson_r: pearson_r(&pooled_pairs)?,
        pooled_pearson_p: pearson_test(&pooled_pairs)?.p_two,
    })
}
