use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::check::{InequalityCheck, Relation, Status};
use super::plot::{render_svg, ModeField};
use super::canon;
use crate::eigensolver::Estimate;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub label: String,
    pub per_level: Vec<f64>,
    pub extrapolated: f64,
    pub error_bar: f64,
    pub observed_order: Option<f64>,
    pub flagged: bool,
}

impl TableEntry {
    pub fn estimate(&self) -> Estimate {
        Estimate {
            value: self.extrapolated,
            error_bar: self.error_bar,
            per_level: self.per_level.clone(),
            observed_order: self.observed_order,
            flagged: self.flagged,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub domain: String,
    pub params: BTreeMap<String, f64>,
    pub levels: Vec<usize>,
    pub table: Vec<TableEntry>,
    pub checks: Vec<InequalityCheck>,
    pub notes: Vec<String>,
    /// Eigenfunction to draw when exporting as svg.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeField>,
    /// Wall-clock time of the run; not exported so reports stay byte-identical.
    #[serde(skip)]
    pub elapsed_seconds: Option<f64>,
}

impl PartialEq for VerificationReport {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.params == other.params
            && self.levels == other.levels
            && self.table == other.table
            && self.checks == other.checks
            && self.notes == other.notes
            && self.mode == other.mode
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StatusCounts {
    pub verified: usize,
    pub inconclusive: usize,
    pub violated: usize,
}

impl VerificationReport {
    pub fn new(domain: impl Into<String>, levels: Vec<usize>) -> Self {
        Self {
            domain: domain.into(),
            params: BTreeMap::new(),
            levels,
            table: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            mode: None,
            elapsed_seconds: None,
        }
    }

    pub fn set_param(&mut self, key: impl Into<String>, value: f64) {
        self.params.insert(key.into(), canon(value));
    }

    /// Adds (or replaces) a table row. Values are rounded to 15 significant digits.
    pub fn add_estimate(&mut self, label: impl Into<String>, e: &Estimate) {
        let label = label.into();
        let entry = TableEntry {
            label: label.clone(),
            per_level: e.per_level.iter().map(|&v| canon(v)).collect(),
            extrapolated: canon(e.value),
            error_bar: canon(e.error_bar),
            observed_order: e.observed_order.map(canon),
            flagged: e.flagged,
        };
        match self.table.iter_mut().find(|t| t.label == label) {
            Some(slot) => *slot = entry,
            None => self.table.push(entry),
        }
    }

    pub fn estimate(&self, label: &str) -> Option<Estimate> {
        self.table.iter().find(|t| t.label == label).map(TableEntry::estimate)
    }

    /// Adds a check between two table labels.
    pub fn check(&mut self, name: impl Into<String>, lhs: &str, relation: Relation, rhs: &str) -> Result<Status> {
        let l = self
            .estimate(lhs)
            .ok_or_else(|| Error::InvalidArgument(format!("label `{lhs}` is not in the table")))?;
        let r = self
            .estimate(rhs)
            .ok_or_else(|| Error::InvalidArgument(format!("label `{rhs}` is not in the table")))?;
        let c = InequalityCheck::new(name, relation, (lhs, &l), (rhs, &r));
        let status = c.status;
        self.checks.push(c);
        Ok(status)
    }

    /// Adds a check whose operands are exactly known and also records them in the table.
    pub fn check_exact(&mut self, name: impl Into<String>, lhs: (&str, f64), relation: Relation, rhs: (&str, f64)) -> Status {
        self.add_estimate(lhs.0, &Estimate::exact(lhs.1));
        self.add_estimate(rhs.0, &Estimate::exact(rhs.1));
        self.check(name, lhs.0, relation, rhs.0).expect("labels were just added")
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn counts(&self) -> StatusCounts {
        let mut c = StatusCounts::default();
        for check in &self.checks {
            match check.status {
                Status::Verified => c.verified += 1,
                Status::Inconclusive => c.inconclusive += 1,
                Status::Violated => c.violated += 1,
            }
        }
        c
    }

    pub fn has_violations(&self) -> bool {
        self.counts().violated > 0
    }

    pub fn find_check(&self, name: &str) -> Option<&InequalityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends every row and check of `other`, prefixing labels and names.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        let tag = |s: &str| format!("{prefix}{s}");
        for mut t in other.table {
            t.label = tag(&t.label);
            match self.table.iter_mut().find(|x| x.label == t.label) {
                Some(slot) => *slot = t,
                None => self.table.push(t),
            }
        }
        for mut c in other.checks {
            c.name = tag(&c.name);
            c.lhs.label = tag(&c.lhs.label);
            c.rhs.label = tag(&c.rhs.label);
            self.checks.push(c);
        }
        for (k, v) in other.params {
            self.params.insert(tag(&k), v);
        }
        for n in other.notes {
            self.notes.push(tag(&n));
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Per-level rows under `label,level,value`, then one row per label under
    /// `label,extrapolated,value,error_bar`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,level,value\n");
        for t in &self.table {
            for (i, v) in t.per_level.iter().enumerate() {
                let level = self.levels.get(i).copied().unwrap_or(i);
                let _ = writeln!(out, "{},{},{}", csv_field(&t.label), level, v);
            }
        }
        out.push_str("label,extrapolated,value,error_bar\n");
        for t in &self.table {
            let _ = writeln!(out, "{},extrapolated,{},{}", csv_field(&t.label), t.extrapolated, t.error_bar);
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => Ok(self.to_csv()),
            Format::Svg => {
                let mode = self
                    .mode
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("this report carries no eigenfunction to plot".into()))?;
                Ok(render_svg(mode))
            }
        }
    }

    pub fn export(&self, format: Format, path: &Path) -> Result<()> {
        std::fs::write(path, self.render(format)?)?;
        Ok(())
    }

    /// Human-readable summary: table, then one line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.domain);
        let _ = writeln!(out, "levels {:?}", self.levels);
        for (k, v) in &self.params {
            let _ = writeln!(out, "  {k} = {v}");
        }
        for t in &self.table {
            if t.per_level.is_empty() {
                continue;
            }
            let order = t.observed_order.map_or("-".to_string(), |p| format!("{p:.2}"));
            let _ = writeln!(
                out,
                "  {:<28} {:>18.10} +- {:.2e}  order {}{}",
                t.label,
                t.extrapolated,
                t.error_bar,
                order,
                if t.flagged { "  (flagged)" } else { "" }
            );
        }
        for c in &self.checks {
            let _ = writeln!(out, "{c}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let c = self.counts();
        let _ = writeln!(
            out,
            "{} verified, {} inconclusive, {} violated",
            c.verified, c.inconclusive, c.violated
        );
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::extrapolate;

    fn sample() -> VerificationReport {
        let mut r = VerificationReport::new("sample", vec![2, 3, 4]);
        r.add_estimate("a", &extrapolate(&[1.3, 1.1, 1.05]));
        r.add_estimate("b", &extrapolate(&[2.5, 2.2, 2.15]));
        r.set_param("b", 0.1 + 0.2);
        r.check("a < b", "a", Relation::Less, "b").unwrap();
        r.note("a note");
        r
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = r.to_json().unwrap();
        let back = VerificationReport::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json().unwrap(), text);
        for c in &back.checks {
            assert_eq!(c.reevaluate(), c.status);
        }
    }

    #[test]
    fn csv_row_count() {
        let r = sample();
        let csv = r.to_csv();
        let rows = csv.lines().filter(|l| !l.starts_with("label,")).count();
        assert_eq!(rows, 2 * 3 + 2);
        assert!(csv.starts_with("label,level,value\n"));
        assert!(csv.contains("\nlabel,extrapolated,value,error_bar\n"));
    }

    #[test]
    fn unknown_format_and_missing_label() {
        assert!(matches!("pdf".parse::<Format>(), Err(Error::UnknownFormat(_))));
        let mut r = sample();
        assert!(r.check("x", "a", Relation::Less, "missing").is_err());
        assert!(r.render(Format::Svg).is_err());
    }

    #[test]
    fn canonical_params() {
        let r = sample();
        assert_eq!(r.params["b"], 0.3);
    }
}
