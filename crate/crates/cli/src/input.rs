//! CSV readers. Every table has a header row; columns are matched by name,
//! so their order is free. Subjects are returned sorted by id.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::error::{CliError, Result};

/// Samples of one subject in the two conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoClass {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// One row of a summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub subject_id: String,
    pub theta_hat: f64,
    pub var_hat: f64,
    pub n: Option<usize>,
}

/// Responses and predictor rows of one subject.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OlsRows {
    pub rows: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

struct Table<'a> {
    path: &'a Path,
    header: StringRecord,
    reader: csv::Reader<File>,
}

impl<'a> Table<'a> {
    fn open(path: &'a Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| CliError::io(path, e))?;
        let mut reader = ReaderBuilder::new().trim(Trim::All).from_reader(file);
        let header = reader.headers().map_err(|e| CliError::parse(path, 1, format!("unreadable header: {e}")))?.clone();
        Ok(Self { path, header, reader })
    }

    fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.column(name).ok_or_else(|| CliError::parse(self.path, 1, format!("missing column '{name}'")))
    }

    /// Calls `f(line, record)` for every data row.
    fn for_each(mut self, mut f: impl FnMut(u64, &StringRecord) -> Result<()>) -> Result<()> {
        let mut record = StringRecord::new();
        loop {
            let line = self.reader.position().line() + 1;
            match self.reader.read_record(&mut record) {
                Ok(false) => return Ok(()),
                Ok(true) => {
                    let line = record.position().map_or(line, |p| p.line());
                    f(line, &record)?;
                }
                Err(e) => {
                    let line = e.position().map_or(line, |p| p.line());
                    return Err(CliError::parse(self.path, line, e.to_string()));
                }
            }
        }
    }
}

fn field<'r>(path: &Path, line: u64, record: &'r StringRecord, idx: usize, name: &str) -> Result<&'r str> {
    record.get(idx).ok_or_else(|| CliError::parse(path, line, format!("missing field '{name}'")))
}

fn number(path: &Path, line: u64, record: &StringRecord, idx: usize, name: &str) -> Result<f64> {
    let raw = field(path, line, record, idx, name)?;
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::parse(path, line, format!("column '{name}': '{raw}' is not a finite number"))),
    }
}

fn subject(path: &Path, line: u64, record: &StringRecord, idx: usize) -> Result<String> {
    let id = field(path, line, record, idx, "subject_id")?;
    if id.is_empty() {
        return Err(CliError::parse(path, line, "empty subject_id"));
    }
    Ok(id.to_string())
}

fn non_empty<T>(path: &Path, map: BTreeMap<String, T>) -> Result<Vec<(String, T)>> {
    if map.is_empty() {
        return Err(CliError::parse(path, 1, "no data rows"));
    }
    Ok(map.into_iter().collect())
}

/// Long format `subject_id,condition,value`. Rows must carry one of the two
/// class labels.
pub fn read_long(path: &Path, class_x: &str, class_y: &str) -> Result<Vec<(String, TwoClass)>> {
    let table = Table::open(path)?;
    let (is, ic, iv) = (table.require("subject_id")?, table.require("condition")?, table.require("value")?);
    let mut map: BTreeMap<String, TwoClass> = BTreeMap::new();
    table.for_each(|line, rec| {
        let id = subject(path, line, rec, is)?;
        let cond = field(path, line, rec, ic, "condition")?;
        let v = number(path, line, rec, iv, "value")?;
        let entry = map.entry(id).or_insert_with(|| TwoClass { x: Vec::new(), y: Vec::new() });
        if cond == class_x {
            entry.x.push(v);
        } else if cond == class_y {
            entry.y.push(v);
        } else {
            return Err(CliError::parse(
                path,
                line,
                format!("condition '{cond}' is neither '{class_x}' nor '{class_y}'"),
            ));
        }
        Ok(())
    })?;
    non_empty(path, map)
}

/// `subject_id,value`; a `condition` column, if present, is ignored.
pub fn read_values(path: &Path) -> Result<Vec<(String, Vec<f64>)>> {
    let table = Table::open(path)?;
    let (is, iv) = (table.require("subject_id")?, table.require("value")?);
    let mut map: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    table.for_each(|line, rec| {
        let id = subject(path, line, rec, is)?;
        map.entry(id).or_default().push(number(path, line, rec, iv, "value")?);
        Ok(())
    })?;
    non_empty(path, map)
}

/// Wide paired format `subject_id,x,y`.
pub fn read_wide(path: &Path) -> Result<Vec<(String, TwoClass)>> {
    let table = Table::open(path)?;
    let (is, ix, iy) = (table.require("subject_id")?, table.require("x")?, table.require("y")?);
    let mut map: BTreeMap<String, TwoClass> = BTreeMap::new();
    table.for_each(|line, rec| {
        let id = subject(path, line, rec, is)?;
        let x = number(path, line, rec, ix, "x")?;
        let y = number(path, line, rec, iy, "y")?;
        let entry = map.entry(id).or_insert_with(|| TwoClass { x: Vec::new(), y: Vec::new() });
        entry.x.push(x);
        entry.y.push(y);
        Ok(())
    })?;
    non_empty(path, map)
}

/// Predictor names and per-subject rows.
pub type OlsTable = (Vec<String>, Vec<(String, OlsRows)>);

/// Regression format `subject_id,y,<predictors...>`; every column other
/// than `subject_id` and `y` is a predictor, in header order.
pub fn read_ols(path: &Path) -> Result<OlsTable> {
    let table = Table::open(path)?;
    let (is, iy) = (table.require("subject_id")?, table.require("y")?);
    let predictors: Vec<(usize, String)> = table
        .header
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != is && *i != iy)
        .map(|(i, h)| (i, h.to_string()))
        .collect();
    let mut map: BTreeMap<String, OlsRows> = BTreeMap::new();
    table.for_each(|line, rec| {
        let id = subject(path, line, rec, is)?;
        let y = number(path, line, rec, iy, "y")?;
        let row = predictors.iter().map(|(i, name)| number(path, line, rec, *i, name)).collect::<Result<Vec<_>>>()?;
        let entry = map.entry(id).or_default();
        entry.rows.push(row);
        entry.y.push(y);
        Ok(())
    })?;
    Ok((predictors.into_iter().map(|p| p.1).collect(), non_empty(path, map)?))
}

/// Summary table `subject_id,theta_hat,var_hat[,n]`, one row per subject.
pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    let table = Table::open(path)?;
    let (is, it, iv) = (table.require("subject_id")?, table.require("theta_hat")?, table.require("var_hat")?);
    let in_ = table.column("n");
    let mut map: BTreeMap<String, SummaryRow> = BTreeMap::new();
    table.for_each(|line, rec| {
        let id = subject(path, line, rec, is)?;
        let theta_hat = number(path, line, rec, it, "theta_hat")?;
        let var_hat = number(path, line, rec, iv, "var_hat")?;
        if !(var_hat > 0.0) {
            return Err(CliError::parse(path, line, format!("var_hat must be > 0, got {var_hat}")));
        }
        let n = match in_.map(|i| field(path, line, rec, i, "n")).transpose()? {
            None | Some("") => None,
            Some(raw) => Some(
                raw.parse::<usize>()
                    .map_err(|_| CliError::parse(path, line, format!("column 'n': '{raw}' is not a count")))?,
            ),
        };
        if map.contains_key(&id) {
            return Err(CliError::parse(path, line, format!("duplicate subject_id '{id}'")));
        }
        map.insert(id.clone(), SummaryRow { subject_id: id, theta_hat, var_hat, n });
        Ok(())
    })?;
    Ok(non_empty(path, map)?.into_iter().map(|(_, r)| r).collect())
}

/// `subject_id,p_one_sided` with every p strictly inside (0, 1).
pub fn read_pvalues(path: &Path) -> Result<Vec<(String, f64)>> {
    let table = Table::open(path)?;
    let (is, ip) = (table.require("subject_id")?, table.require("p_one_sided")?);
    let mut map: BTreeMap<String, f64> = BTreeMap::new();
    table.for_each(|line, rec| {
        let id = subject(path, line, rec, is)?;
        let p = number(path, line, rec, ip, "p_one_sided")?;
        if !(p > 0.0 && p < 1.0) {
            return Err(CliError::parse(path, line, format!("p_one_sided must lie strictly in (0, 1), got {p}")));
        }
        if map.insert(id.clone(), p).is_some() {
            return Err(CliError::parse(path, line, format!("duplicate subject_id '{id}'")));
        }
        Ok(())
    })?;
    non_empty(path, map)
}
