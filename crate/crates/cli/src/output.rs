use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Latex,
    Json,
}

/// Where reports and tables go. With `--out`, tables are written to the
/// file and the summary goes to stdout; without it, tables go to stdout
/// and summaries of table-producing commands go to stderr.
pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Sink {
    /// Writes a report to stdout and, when `--out` is set, to the file.
    pub fn report(&self, text: &str) -> Result<(), CliError> {
        print!("{text}");
        io::stdout().flush()?;
        if let Some(p) = &self.out {
            File::create(p)?.write_all(text.as_bytes())?;
        }
        Ok(())
    }

    pub fn json<T: Serialize>(&self, v: &T) -> String {
        let mut s = serde_json::to_string_pretty(v).expect("serializable");
        s.push('\n');
        s
    }

    /// Writes a CSV table, returning where it went.
    pub fn table(&self, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
        let w: Box<dyn Write> = match &self.out {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout().lock()),
        };
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(header)?;
        for r in rows {
            csv.write_record(r)?;
        }
        csv.flush()?;
        Ok(())
    }

    /// Summary that accompanies a table.
    pub fn summary(&self, text: &str) -> Result<(), CliError> {
        if self.out.is_some() {
            print!("{text}");
            io::stdout().flush()?;
        } else {
            eprint!("{text}");
        }
        Ok(())
    }
}

/// One line per check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub suite: String,
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckLine>,
}

impl VerifyReport {
    pub fn push(&mut self, suite: &str, name: impl Into<String>, passed: bool) {
        self.checks.push(CheckLine {
            suite: suite.to_string(),
            name: name.into(),
            passed,
        });
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn render(&self, f: Format) -> String {
        let failed = self.failures();
        let total = self.checks.len();
        match f {
            Format::Json => {
                let v = serde_json::json!({
                    "checks": self.checks,
                    "total": total,
                    "failed": failed,
                    "passed": failed == 0,
                });
                format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
            }
            Format::Text => {
                let mut s = String::new();
                for c in &self.checks {
                    s.push_str(&format!("{} [{}] {}\n", if c.passed { "ok  " } else { "FAIL" }, c.suite, c.name));
                }
                s.push_str(&format!("{} of {total} checks passed\n", total - failed));
                s
            }
            Format::Latex => {
                let mut s = String::from("\\begin{tabular}{lll}\n");
                for c in &self.checks {
                    s.push_str(&format!(
                        "{} & \\texttt{{{}}} & {} \\\\\n",
                        c.suite,
                        c.name.replace('_', "\\_").replace('^', "\\^{}"),
                        if c.passed { "ok" } else { "FAIL" }
                    ));
                }
                s.push_str("\\end{tabular}\n");
                s
            }
        }
    }
}
