use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub const CSV_HEADER: &str = "experiment,k,value,reference,abs_err,pass";

/// One checked quantity. `k = 0` marks rows that do not depend on `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub experiment: String,
    pub k: u32,
    pub value: f64,
    pub reference: f64,
    pub abs_err: f64,
    /// What `abs_err` (or, for trend rows, `value`) is held against.
    pub bound: f64,
    pub pass: bool,
}

impl Row {
    /// `pass` iff `|value − reference| ≤ bound`.
    pub fn within(experiment: impl Into<String>, k: u32, value: f64, reference: f64, bound: f64) -> Row {
        let abs_err = (value - reference).abs();
        Row { experiment: experiment.into(), k, value, reference, abs_err, bound, pass: abs_err <= bound }
    }

    /// A row whose verdict was decided elsewhere (exact arithmetic, trends).
    pub fn decided(experiment: impl Into<String>, k: u32, value: f64, reference: f64, bound: f64, pass: bool) -> Row {
        Row { experiment: experiment.into(), k, value, reference, abs_err: (value - reference).abs(), bound, pass }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub fixture: String,
    pub rows: Vec<Row>,
    #[serde(skip)]
    pub plots: Vec<(String, String)>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            // `{:?}` is lossless and switches to exponents for tiny values; `+ 0.0` folds −0
            let _ = writeln!(s, "{},{},{:?},{:?},{:?},{}", r.experiment, r.k, r.value + 0.0, r.reference + 0.0, r.abs_err, r.pass);
        }
        s
    }

    fn stem(&self) -> String {
        format!("{}-{}", self.experiment, self.fixture)
    }

    /// Writes `<stem>.csv`, `<stem>.json` and the plots; returns the paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = vec![];
        let mut put = |name: String, body: &str| -> Result<()> {
            let p = dir.join(name);
            std::fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?;
            written.push(p);
            Ok(())
        };
        put(format!("{}.csv", self.stem()), &self.csv())?;
        put(format!("{}.json", self.stem()), &serde_json::to_string_pretty(self)?)?;
        for (name, svg) in &self.plots {
            put(format!("{}-{name}.svg", self.stem()), svg)?;
        }
        Ok(written)
    }
}
