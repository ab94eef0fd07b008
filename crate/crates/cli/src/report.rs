use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// A rendered result: flat rows for table/csv, structured records for json.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub records: serde_json::Value,
    /// Set by verification suites.
    pub pass: Option<bool>,
}

impl Report {
    pub fn new<T: Serialize>(columns: &[&str], rows: Vec<Vec<String>>, records: &T) -> Self {
        Report {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
            records: serde_json::to_value(records).expect("records serialize"),
            pass: None,
        }
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.records).expect("records serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
            Format::Table => {
                let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
                for r in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(r) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> =
                        cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string() + "\n"
                };
                let mut out = line(&self.columns);
                for r in &self.rows {
                    out.push_str(&line(r));
                }
                if let Some(p) = self.pass {
                    out.push_str(if p { "PASS\n" } else { "FAIL\n" });
                }
                out
            }
        }
    }
}
