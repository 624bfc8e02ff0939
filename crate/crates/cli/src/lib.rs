//! Command-line front end of `neststat`.
//!
//! The binary is a thin wrapper around [`run`], which executes a parsed
//! [`Cli`] and writes a human-readable summary to the given writer. Exit
//! codes are given by [`CliError::exit_code`]: 1 for I/O failures, 2 for
//! usage errors, 3 for malformed input and 4 for estimation failures.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
mod error;
pub mod input;
pub mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use neststat::combine::{cochran_q, combine_effects, correlation_group, group_test, stouffer_combine};
use neststat::dist::std_normal_inv_cdf;
use neststat::effect::{
    auc_effect, fisher_z_inv, mean_effect, ols_coef_effect, ols_fit, paired_diff_effect, pearson_effect,
    welch_diff_effect, PairedData, RegressionData, TwoSampleData,
};
use neststat::simulate::{
    pooling_demo, run_panels, simulation1_panels, simulation2_panels, Execution, Panel, PanelSpec,
};
use neststat::{Error as CoreError, SubjectEffect};

use args::{AnalyzeArgs, EffectArg, GroupArgs, MetaArgs, Scenario, SimulateArgs, StoufferArgs};
pub use args::{Cli, Command};
pub use error::{CliError, Result};
use report::{CorrelationReport, GroupReport, StoufferReport, StoufferRow, SubjectRow, VERSION};

/// Execute one command; the text summary goes to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let text = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a)?.text(),
        Command::Meta(a) => cmd_meta(a)?.text(),
        Command::Stouffer(a) => cmd_stouffer(a)?.text(),
        Command::Simulate(a) => cmd_simulate(a)?,
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn config_json<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("argument structs serialize")
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("reports serialize");
    bytes.push(b'\n');
    bytes
}

/// Write through a temporary file in the target directory and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn in_subject(id: &str) -> impl FnOnce(CoreError) -> CliError + '_ {
    move |source| CliError::Estimation { subject: Some(id.to_string()), source }
}

/// Attach the subject id to group-stage errors that carry an index.
fn group_error(ids: &[String]) -> impl Fn(CoreError) -> CliError + '_ {
    move |source| {
        let subject = match &source {
            CoreError::DegenerateVariance { index, .. } | CoreError::KindMismatch { index, .. } => {
                ids.get(*index).cloned()
            }
            _ => None,
        };
        CliError::Estimation { subject, source }
    }
}

fn estimate_subjects(args: &AnalyzeArgs) -> Result<(Vec<String>, Vec<SubjectEffect>)> {
    let path = args.input.as_path();
    let two_class = |data: Vec<(String, input::TwoClass)>,
                     f: fn(&TwoSampleData) -> neststat::Result<SubjectEffect>|
     -> Result<(Vec<String>, Vec<SubjectEffect>)> {
        let mut ids = Vec::with_capacity(data.len());
        let mut effects = Vec::with_capacity(data.len());
        for (id, d) in data {
            let e = TwoSampleData::new(d.x, d.y).and_then(|d| f(&d)).map_err(in_subject(&id))?;
            ids.push(id);
            effects.push(e);
        }
        Ok((ids, effects))
    };
    let paired = |f: fn(&PairedData) -> neststat::Result<SubjectEffect>| -> Result<(Vec<String>, Vec<SubjectEffect>)> {
        let mut ids = Vec::new();
        let mut effects = Vec::new();
        for (id, d) in input::read_wide(path)? {
            let e = PairedData::new(d.x, d.y).and_then(|d| f(&d)).map_err(in_subject(&id))?;
            ids.push(id);
            effects.push(e);
        }
        Ok((ids, effects))
    };
    match args.effect {
        EffectArg::Mean => {
            let mut ids = Vec::new();
            let mut effects = Vec::new();
            for (id, values) in input::read_values(path)? {
                effects.push(mean_effect(&values).map_err(in_subject(&id))?);
                ids.push(id);
            }
            Ok((ids, effects))
        }
        EffectArg::Welch => two_class(input::read_long(path, &args.class_x, &args.class_y)?, welch_diff_effect),
        EffectArg::Auc => two_class(input::read_long(path, &args.class_x, &args.class_y)?, auc_effect),
        EffectArg::Paired => paired(paired_diff_effect),
        EffectArg::Pearson => paired(pearson_effect),
        EffectArg::Ols(k) => {
            let (predictors, data) = input::read_ols(path)?;
            if k > predictors.len() {
                return Err(CliError::Usage(format!(
                    "ols:{k} requested but the input has {} predictors ({})",
                    predictors.len(),
                    predictors.join(", ")
                )));
            }
            let mut ids = Vec::new();
            let mut effects = Vec::new();
            for (id, d) in data {
                let e = RegressionData::new(d.rows, d.y)
                    .and_then(|d| ols_fit(&d))
                    .and_then(|fit| ols_coef_effect(&fit, k))
                    .map_err(in_subject(&id))?;
                ids.push(id);
                effects.push(e);
            }
            Ok((ids, effects))
        }
    }
}

fn group_report(
    command: &'static str,
    config: serde_json::Value,
    ids: &[String],
    effects: &[SubjectEffect],
    args: &GroupArgs,
    correlation: bool,
) -> Result<GroupReport> {
    let on_err = group_error(ids);
    let group = combine_effects(effects, args.model.into(), args.scheme.into()).map_err(&on_err)?;
    let test = group_test(&group, args.theta0, args.policy.into()).map_err(&on_err)?;
    let (ci_low, ci_high) = group.confidence_interval(0.95, args.policy.into()).map_err(&on_err)?;
    let q = if effects.len() >= 2 { Some(cochran_q(effects).map_err(&on_err)?) } else { None };
    let correlation = if correlation {
        let c = correlation_group(effects, args.model.into(), args.scheme.into()).map_err(&on_err)?;
        Some(CorrelationReport { rho: c.rho_combined, ci_low: fisher_z_inv(ci_low), ci_high: fisher_z_inv(ci_high) })
    } else {
        None
    };
    let weights = group.normalized_weights();
    Ok(GroupReport {
        version: VERSION,
        command,
        config,
        subjects: ids.iter().zip(effects).zip(&weights).map(|((id, e), w)| SubjectRow::new(id, e, *w)).collect(),
        model: group.model,
        scheme: group.scheme,
        theta0: args.theta0,
        theta_hat: group.theta_hat,
        var_hat: group.var_hat,
        tau2: group.tau2,
        z: test.statistic,
        reference: test.ref_dist,
        p_one_low: test.p_one_low,
        p_one_high: test.p_one_high,
        p_two: test.p_two,
        q: q.map(|q| q.statistic),
        q_df: q.map(|_| (effects.len() - 1) as f64),
        q_p: q.map(|q| q.p_one_high),
        ci_low,
        ci_high,
        warnings: group.warnings.iter().map(|w| w.message()).collect(),
        correlation,
    })
}

/// Per-subject effect table in the summary format read by `meta`.
pub fn subjects_csv(report: &GroupReport) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["subject_id", "theta_hat", "var_hat", "n"]).expect("in-memory write");
    for r in &report.subjects {
        let n = r.n.map(|n| n.to_string()).unwrap_or_default();
        w.write_record([r.subject_id.clone(), r.theta_hat.to_string(), r.var_hat.to_string(), n])
            .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<GroupReport> {
    let (ids, effects) = estimate_subjects(args)?;
    let pearson = args.effect == EffectArg::Pearson;
    let report = group_report("analyze", config_json(args), &ids, &effects, &args.group, pearson)?;
    if let Some(path) = &args.subjects_out {
        write_atomic(path, &subjects_csv(&report))?;
    }
    if let Some(path) = &args.output {
        write_atomic(path, &to_json(&report))?;
    }
    Ok(report)
}

pub fn cmd_meta(args: &MetaArgs) -> Result<GroupReport> {
    let rows = input::read_summary(&args.input)?;
    let mut ids = Vec::with_capacity(rows.len());
    let mut effects = Vec::with_capacity(rows.len());
    for r in rows {
        effects.push(SubjectEffect::summary(r.theta_hat, r.var_hat, r.n).map_err(in_subject(&r.subject_id))?);
        ids.push(r.subject_id);
    }
    let report = group_report("meta", config_json(args), &ids, &effects, &args.group, false)?;
    if let Some(path) = &args.output {
        write_atomic(path, &to_json(&report))?;
    }
    Ok(report)
}

pub fn cmd_stouffer(args: &StoufferArgs) -> Result<StoufferReport> {
    let rows = input::read_pvalues(&args.input)?;
    let ps: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let test = stouffer_combine(&ps).map_err(CliError::group)?;
    let subjects = rows
        .into_iter()
        .map(|(subject_id, p)| {
            let z = std_normal_inv_cdf(p).map_err(in_subject(&subject_id))?;
            Ok(StoufferRow { subject_id, p_one_sided: p, z })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = StoufferReport::new(config_json(args), subjects, &test);
    if let Some(path) = &args.output {
        write_atomic(path, &to_json(&report))?;
    }
    Ok(report)
}

#[derive(Serialize)]
struct ManifestPanel<'a> {
    name: &'a str,
    file: String,
    methods: Vec<&'static str>,
    config: &'a neststat::simulate::SimConfig,
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'static str,
    scenario: Scenario,
    seed: u64,
    reps: Option<usize>,
    panels: Vec<ManifestPanel<'a>>,
    files: Vec<String>,
}

/// Rejection-rate table of one panel: `method,d,rejection_rate,se,reps,seed`.
pub fn panel_csv(panel: &Panel) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "d", "rejection_rate", "se", "reps", "seed"]).expect("in-memory write");
    for c in &panel.curves {
        for i in 0..c.d.len() {
            w.write_record([
                c.method.label().to_string(),
                c.d[i].to_string(),
                c.rate[i].to_string(),
                c.se[i].to_string(),
                c.reps.to_string(),
                panel.config.seed.to_string(),
            ])
            .expect("in-memory write");
        }
    }
    w.into_inner().expect("in-memory flush")
}

fn panel_text(panel: &Panel) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = write!(s, "{:<18}", panel.name);
    for d in &panel.config.d_grid {
        let _ = write!(s, " {d:>6}");
    }
    s.push('\n');
    for c in &panel.curves {
        let _ = write!(s, "  {:<16}", c.method.label());
        for r in &c.rate {
            let _ = write!(s, " {r:>6.3}");
        }
        s.push('\n');
    }
    s
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    let execution = if args.serial { Execution::Serial } else { Execution::Parallel };
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    let text;
    match args.scenario {
        Scenario::Sim1 | Scenario::Sim2 => {
            let mut specs: Vec<PanelSpec> = match args.scenario {
                Scenario::Sim1 => simulation1_panels(args.seed),
                _ => simulation2_panels(args.seed),
            };
            if let Some(reps) = args.reps {
                for s in &mut specs {
                    s.config.reps = reps;
                }
            }
            for s in &specs {
                s.config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            }
            let panels = run_panels(&specs, execution).map_err(CliError::group)?;
            let manifest = Manifest {
                version: VERSION,
                scenario: args.scenario,
                seed: args.seed,
                reps: args.reps,
                panels: panels
                    .iter()
                    .map(|p| ManifestPanel {
                        name: &p.name,
                        file: format!("{}.csv", p.name),
                        methods: p.curves.iter().map(|c| c.method.label()).collect(),
                        config: &p.config,
                    })
                    .collect(),
                files: panels.iter().map(|p| format!("{}.csv", p.name)).collect(),
            };
            files.push(("manifest.json".into(), to_json(&manifest)));
            for p in &panels {
                files.push((format!("{}.csv", p.name), panel_csv(p)));
            }
            text = panels.iter().map(panel_text).collect::<String>();
        }
        Scenario::PoolingDemo => {
            let demo = pooling_demo(args.seed).map_err(CliError::group)?;
            #[derive(Serialize)]
            struct DemoOut<'a> {
                version: &'static str,
                demo: &'a neststat::simulate::PoolingDemo,
            }
            let manifest = Manifest {
                version: VERSION,
                scenario: args.scenario,
                seed: args.seed,
                reps: None,
                panels: Vec::new(),
                files: vec!["pooling_demo.json".into()],
            };
            files.push(("manifest.json".into(), to_json(&manifest)));
            files.push(("pooling_demo.json".into(), to_json(&DemoOut { version: VERSION, demo: &demo })));
            let mut s = String::new();
            for (i, sub) in demo.subjects.iter().enumerate() {
                s += &format!(
                    "subject {}: Welch p = {:.4}  Pearson r = {:.3} (p = {:.3})\n",
                    i + 1,
                    sub.welch_p,
                    sub.pearson_r,
                    sub.pearson_p
                );
            }
            s += &format!(
                "pooled:    Welch p = {:.4}  Pearson r = {:.3} (p = {:.3e})\n",
                demo.pooled_welch_p, demo.pooled_pearson_r, demo.pooled_pearson_p
            );
            text = s;
        }
    }
    fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;
    for (name, bytes) in &files {
        write_atomic(&args.out_dir.join(name), bytes)?;
    }
    Ok(text)
}

/// Run with process arguments, printing errors to stderr; returns the exit
/// code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
