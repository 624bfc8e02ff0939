use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{binomial_se, gen_subject, Method, Panel, PanelSpec, RejectionCurve, SimConfig};
use crate::combine::{
    combine_effects, group_test, naive_summary_test, pool_and_test, stouffer_combine, Model, ReferencePolicy,
    WeightScheme,
};
use crate::effect::{auc_effect, welch_diff_effect, wilcoxon_signed_rank, SubjectEffect, TwoSampleData};
use crate::error::{Error, Result};

/// One-sided p-values are clamped to this distance from 0 and 1 before
/// Stouffer's transform.
const STOUFFER_CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Rejection counts of one grid cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRates {
    pub methods: Vec<Method>,
    pub rejections: Vec<usize>,
    pub reps: usize,
}

impl CellRates {
    pub fn rate(&self, method: Method) -> Option<f64> {
        let i = self.methods.iter().position(|m| *m == method)?;
        Some(self.rejections[i] as f64 / self.reps as f64)
    }
}

/// Rejection rates of `methods` at true mean difference `d`.
///
/// A method rejects when its two-sided p-value is below `alpha`. Any
/// estimator failure aborts the run with the replication and `d` attached.
pub fn run_cell(config: &SimConfig, d: f64, methods: &[Method], execution: Execution) -> Result<CellRates> {
    config.validate()?;
    let one =
        |rep: usize| replicate(config, rep, d, methods).map_err(|e| Error::Replication { rep, d, source: Box::new(e) });
    let add = |mut a: Vec<usize>, b: Vec<usize>| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    let zero = vec![0usize; methods.len()];
    let rejections = match execution {
        Execution::Serial => (0..config.reps).map(one).try_fold(zero, |acc, r| r.map(|r| add(acc, r)))?,
        Execution::Parallel => {
            (0..config.reps).into_par_iter().map(one).try_reduce(|| zero.clone(), |a, b| Ok(add(a, b)))?
        }
    };
    Ok(CellRates { methods: methods.to_vec(), rejections, reps: config.reps })
}

fn replicate(config: &SimConfig, rep: usize, d: f64, methods: &[Method]) -> Result<Vec<usize>> {
    let subjects =
        (0..config.subjects).map(|s| gen_subject(config, &mut config.stream(rep, s), d)).collect::<Result<Vec<_>>>()?;
    let welch = subjects.iter().map(welch_diff_effect).collect::<Result<Vec<_>>>()?;
    methods.iter().map(|&m| Ok(usize::from(p_two(m, &subjects, &welch)? < config.alpha))).collect()
}

fn p_two(method: Method, subjects: &[TwoSampleData], welch: &[SubjectEffect]) -> Result<f64> {
    let sss = |effects: &[SubjectEffect], model, scheme, theta0| -> Result<f64> {
        let g = combine_effects(effects, model, scheme)?;
        Ok(group_test(&g, theta0, ReferencePolicy::ZTest)?.p_two)
    };
    let thetas = || welch.iter().map(|e| e.theta_hat).collect::<Vec<_>>();
    match method {
        Method::Pooling => Ok(pool_and_test(subjects)?.p_two),
        Method::NaivePairedT => Ok(naive_summary_test(&thetas(), 0.0)?.p_two),
        Method::NaiveSignedRank => Ok(wilcoxon_signed_rank(&thetas())?.p_two),
        Method::SssFeEqual => sss(welch, Model::FixedEffect, WeightScheme::EqualWeights, 0.0),
        Method::SssFeInvVar => sss(welch, Model::FixedEffect, WeightScheme::InverseVariance, 0.0),
        Method::SssReEqual => sss(welch, Model::RandomEffectsDL, WeightScheme::EqualWeights, 0.0),
        Method::SssReInvVar => sss(welch, Model::RandomEffectsDL, WeightScheme::InverseVariance, 0.0),
        Method::Stouffer => {
            let ps = welch
                .iter()
                .map(|e| Ok(e.test(0.0)?.p_one_high.clamp(STOUFFER_CLAMP, 1.0 - STOUFFER_CLAMP)))
                .collect::<Result<Vec<_>>>()?;
            Ok(stouffer_combine(&ps)?.p_two)
        }
        Method::SssReInvVarAuc => {
            let aucs = subjects.iter().map(auc_effect).collect::<Result<Vec<_>>>()?;
            sss(&aucs, Model::RandomEffectsDL, WeightScheme::InverseVariance, 0.5)
        }
    }
}

/// Rejection curves of `methods` over the whole d grid of `config`.
pub fn run_panel(name: &str, config: &SimConfig, methods: &[Method], execution: Execution) -> Result<Panel> {
    config.validate()?;
    let mut curves: Vec<RejectionCurve> = methods
        .iter()
        .map(|&method| RejectionCurve {
            method,
            d: config.d_grid.clone(),
            rate: Vec::with_capacity(config.d_grid.len()),
            se: Vec::with_capacity(config.d_grid.len()),
            reps: config.reps,
        })
        .collect();
    for &d in &config.d_grid {
        let cell = run_cell(config, d, methods, execution)?;
        for (curve, &k) in curves.iter_mut().zip(&cell.rejections) {
            let r = k as f64 / config.reps as f64;
            curve.rate.push(r);
            curve.se.push(binomial_se(r, config.reps));
        }
    }
    Ok(Panel { name: name.to_string(), config: config.clone(), curves })
}

pub fn run_panels(specs: &[PanelSpec], execution: Execution) -> Result<Vec<Panel>> {
    specs.iter().map(|s| run_panel(&s.name, &s.config, &s.methods, execution)).collect()
}
