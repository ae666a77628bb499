use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliResult;
use crate::output::{csv_writer, opt_sig17, sig17};

/// Origin of a column in the wide table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Row keys such as the point count.
    Key,
    Computed,
    /// Quoted constant.
    Published,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(u64),
    Text(String),
    Number(f64),
    /// Not computed; the reason goes to the check file.
    Skipped,
    /// Not applicable or not requested.
    Missing,
}

impl Value {
    pub fn number(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Text(s) => s.clone(),
            Value::Number(x) => sig17(*x),
            Value::Skipped => "skipped".into(),
            Value::Missing => String::new(),
        }
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Value::Skipped, Value::Number)
    }
}

#[derive(Clone, Debug)]
pub struct Column {
    pub name: String,
    pub source: Source,
}

impl Column {
    pub fn key(name: &str) -> Self {
        Self {
            name: name.into(),
            source: Source::Key,
        }
    }

    pub fn computed(name: &str) -> Self {
        Self {
            name: name.into(),
            source: Source::Computed,
        }
    }

    pub fn published(name: &str) -> Self {
        Self {
            name: name.into(),
            source: Source::Published,
        }
    }

    fn header(&self) -> String {
        match self.source {
            Source::Key => self.name.clone(),
            Source::Computed => format!("{}[computed]", self.name),
            Source::Published => format!("{}[published]", self.name),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Value in the row whose first cell is `key`.
    pub fn get(&self, key: &Value, column: &str) -> Option<&Value> {
        let c = self.column(column)?;
        self.rows.iter().find(|r| &r[0] == key).map(|r| &r[c])
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut w = csv_writer(path)?;
        w.write_record(self.columns.iter().map(Column::header))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::render))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Outside tolerance with a documented cause.
    Deviation,
    Skipped,
    /// Reported without a gate.
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Deviation => "deviation",
            Status::Skipped => "skipped",
            Status::Info => "info",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub row: String,
    pub column: String,
    pub computed: Option<f64>,
    pub reference: Option<f64>,
    /// `published`, `baseline`, `computed` or `bound`.
    pub reference_source: &'static str,
    pub rule: String,
    pub status: Status,
    pub note: String,
}

impl Check {
    fn new(
        row: impl Into<String>,
        column: &str,
        computed: Option<f64>,
        reference: Option<f64>,
    ) -> Self {
        Self {
            row: row.into(),
            column: column.into(),
            computed,
            reference,
            reference_source: "published",
            rule: String::new(),
            status: Status::Info,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn against(mut self, source: &'static str) -> Self {
        self.reference_source = source;
        self
    }

    /// `|computed - reference| <= tol`.
    pub fn abs(
        row: impl Into<String>,
        column: &str,
        computed: Option<f64>,
        reference: f64,
        tol: f64,
    ) -> Self {
        let mut c = Self::new(row, column, computed, Some(reference));
        c.rule = format!("abs<={tol:e}");
        c.status = match computed {
            None => Status::Skipped,
            Some(x) if (x - reference).abs() <= tol => Status::Pass,
            Some(_) => Status::Fail,
        };
        c
    }

    /// `|computed / reference - 1| <= tol`; a miss with a documented cause is a deviation.
    pub fn rel(
        row: impl Into<String>,
        column: &str,
        computed: Option<f64>,
        reference: f64,
        tol: f64,
        documented: Option<&str>,
    ) -> Self {
        let mut c = Self::new(row, column, computed, Some(reference));
        c.rule = format!("rel<={tol}");
        c.status = match computed {
            None => Status::Skipped,
            Some(x) if (x / reference - 1.0).abs() <= tol => Status::Pass,
            Some(_) if documented.is_some_and(|d| !d.is_empty()) => Status::Deviation,
            Some(_) => Status::Fail,
        };
        if let (Some(x), Some(doc)) = (computed, documented) {
            if (x / reference - 1.0).abs() > tol {
                c.note = doc.to_owned();
            }
        }
        c
    }

    /// `computed <= bound`.
    pub fn at_most(
        row: impl Into<String>,
        column: &str,
        computed: Option<f64>,
        bound: Option<f64>,
    ) -> Self {
        let mut c = Self::new(row, column, computed, bound);
        c.rule = "<=".into();
        c.status = match (computed, bound) {
            (Some(x), Some(b)) if x <= b => Status::Pass,
            (Some(_), Some(_)) => Status::Fail,
            _ => Status::Skipped,
        };
        c.against("bound")
    }

    /// `computed < bound`.
    pub fn below(
        row: impl Into<String>,
        column: &str,
        computed: Option<f64>,
        bound: Option<f64>,
    ) -> Self {
        let mut c = Self::at_most(row, column, computed, bound);
        c.rule = "<".into();
        if let (Some(x), Some(b)) = (computed, bound) {
            c.status = if x < b { Status::Pass } else { Status::Fail };
        }
        c
    }

    pub fn info(
        row: impl Into<String>,
        column: &str,
        computed: Option<f64>,
        reference: Option<f64>,
    ) -> Self {
        let mut c = Self::new(row, column, computed, reference);
        c.rule = "none".into();
        c
    }

    pub fn skipped(
        row: impl Into<String>,
        column: &str,
        reference: Option<f64>,
        reason: &str,
    ) -> Self {
        let mut c = Self::new(row, column, None, reference);
        c.status = Status::Skipped;
        c.note = reason.into();
        c
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub name: &'static str,
    pub table: Table,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub deviation: usize,
    pub skipped: usize,
    pub info: usize,
}

impl Report {
    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Deviation => s.deviation += 1,
                Status::Skipped => s.skipped += 1,
                Status::Info => s.info += 1,
            }
        }
        s
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn find(&self, row: &str, column: &str) -> Option<&Check> {
        self.checks
            .iter()
            .find(|c| c.row == row && c.column == column)
    }

    /// Writes `<name>.csv` and `<name>.check.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> CliResult<(PathBuf, PathBuf)> {
        let table_path = dir.join(format!("{}.csv", self.name));
        let check_path = dir.join(format!("{}.check.csv", self.name));
        self.table.write(&table_path)?;
        let mut w = csv_writer(&check_path)?;
        w.write_record([
            "row",
            "column",
            "computed",
            "reference",
            "reference_source",
            "rule",
            "status",
            "note",
        ])?;
        for c in &self.checks {
            w.write_record([
                c.row.clone(),
                c.column.clone(),
                opt_sig17(c.computed),
                opt_sig17(c.reference),
                c.reference_source.to_owned(),
                c.rule.clone(),
                c.status.to_string(),
                c.note.clone(),
            ])?;
        }
        w.flush()?;
        Ok((table_path, check_path))
    }
}
