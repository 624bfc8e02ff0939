use std::fmt::Write as _;

use serde::Serialize;

use neststat::combine::{Model, WeightScheme};
use neststat::{RefDist, SubjectEffect, TestResult};

pub const VERSION: &str = concat!("neststat ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Serialize)]
pub struct SubjectRow {
    pub subject_id: String,
    pub kind: &'static str,
    pub theta_hat: f64,
    pub var_hat: f64,
    pub n: Option<usize>,
    pub df: Option<f64>,
    /// Normalised group weight.
    pub weight: f64,
}

impl SubjectRow {
    pub fn new(subject_id: &str, e: &SubjectEffect, weight: f64) -> Self {
        Self {
            subject_id: subject_id.to_string(),
            kind: e.kind.name(),
            theta_hat: e.theta_hat,
            var_hat: e.var_hat,
            n: e.n.total(),
            df: e.df,
            weight,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationReport {
    pub rho: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Report of `analyze` and `meta`.
#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub version: &'static str,
    pub command: &'static str,
    pub config: serde_json::Value,
    pub subjects: Vec<SubjectRow>,
    pub model: Model,
    pub scheme: WeightScheme,
    pub theta0: f64,
    pub theta_hat: f64,
    pub var_hat: f64,
    pub tau2: f64,
    pub z: f64,
    pub reference: RefDist,
    pub p_one_low: f64,
    pub p_one_high: f64,
    pub p_two: f64,
    /// Cochran's Q and its chi-squared p-value; absent for a single subject.
    pub q: Option<f64>,
    pub q_df: Option<f64>,
    pub q_p: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
    pub warnings: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation: Option<CorrelationReport>,
}

impl GroupReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.version, self.command);
        let _ = writeln!(s, "model {:?}, weights {:?}, {} subjects", self.model, self.scheme, self.subjects.len());
        let _ = writeln!(s, "{:<16} {:>14} {:>14} {:>8}", "subject", "theta_hat", "var_hat", "weight");
        for r in &self.subjects {
            let _ = writeln!(s, "{:<16} {:>14.6} {:>14.6e} {:>8.4}", r.subject_id, r.theta_hat, r.var_hat, r.weight);
        }
        let _ =
            writeln!(s, "theta_hat = {:.6}  var_hat = {:.6e}  tau2 = {:.6e}", self.theta_hat, self.var_hat, self.tau2);
        let _ = writeln!(s, "95% CI    = [{:.6}, {:.6}]", self.ci_low, self.ci_high);
        let _ = writeln!(
            s,
            "H0: theta = {}  {} = {:.4}  p_two = {:.4e}",
            self.theta0,
            stat_name(self.reference),
            self.z,
            self.p_two
        );
        if let (Some(q), Some(df), Some(p)) = (self.q, self.q_df, self.q_p) {
            let _ = writeln!(s, "Cochran Q = {q:.4} (df {df})  p = {p:.4e}");
        }
        if let Some(c) = &self.correlation {
            let _ = writeln!(s, "rho = {:.6}  95% CI [{:.6}, {:.6}]", c.rho, c.ci_low, c.ci_high);
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

fn stat_name(r: RefDist) -> String {
    match r {
        RefDist::Normal => "z".into(),
        RefDist::StudentT(df) => format!("t({df})"),
        RefDist::ChiSquared(df) => format!("chi2({df})"),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StoufferRow {
    pub subject_id: String,
    pub p_one_sided: f64,
    pub z: f64,
}

/// Report of `stouffer`.
///
/// `z_s = Phi^-1(p_s)`, so small p-values give negative scores;
/// `p_one_low = Phi(z)` is the group one-sided p-value in the direction of
/// the inputs.
#[derive(Debug, Clone, Serialize)]
pub struct StoufferReport {
    pub version: &'static str,
    pub command: &'static str,
    pub config: serde_json::Value,
    pub subjects: Vec<StoufferRow>,
    pub z: f64,
    pub p_one_low: f64,
    pub p_one_high: f64,
    pub p_two: f64,
}

impl StoufferReport {
    pub fn new(config: serde_json::Value, subjects: Vec<StoufferRow>, t: &TestResult) -> Self {
        Self {
            version: VERSION,
            command: "stouffer",
            config,
            subjects,
            z: t.statistic,
            p_one_low: t.p_one_low,
            p_one_high: t.p_one_high,
            p_two: t.p_two,
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} stouffer, {} subjects", self.version, self.subjects.len());
        for r in &self.subjects {
            let _ = writeln!(s, "{:<16} p = {:<12.6e} z = {:.4}", r.subject_id, r.p_one_sided, r.z);
        }
        let _ = writeln!(s, "z = {:.6}  p_one = {:.4e}  p_two = {:.4e}", self.z, self.p_one_low, self.p_two);
        s
    }
}
