//! Tabular results with a provenance header, written as CSV.

use sha2::{Digest, Sha256};
use std::fmt::{self, Write as _};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.to_string(),
            unit: unit.to_string(),
        }
    }
}

/// Outcome of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    /// No stable equilibrium at this bias.
    PullIn,
    /// Prescribed deflection sits past the stability limit.
    Unstable,
    /// Threshold not reached within the run; carries the best value seen.
    NotReached {
        achieved: f64,
    },
    Failed(String),
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Ok => f.write_str("ok"),
            RowStatus::PullIn => f.write_str("pull_in"),
            RowStatus::Unstable => f.write_str("unstable"),
            RowStatus::NotReached { .. } => f.write_str("not_reached"),
            RowStatus::Failed(msg) => write!(f, "failed: {}", msg.replace(',', ";")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub values: Vec<f64>,
    pub status: RowStatus,
}

impl Row {
    pub fn ok(values: Vec<f64>) -> Self {
        Self {
            values,
            status: RowStatus::Ok,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == RowStatus::Ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub experiment: String,
    /// Hex SHA-256 of the config document.
    pub config_hash: String,
    pub schema_version: u32,
    pub crate_version: String,
}

impl Provenance {
    pub fn new(experiment: &str, config_hash: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            config_hash: config_hash.to_string(),
            schema_version: SCHEMA_VERSION,
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

pub fn config_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub provenance: Provenance,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl ResultTable {
    pub fn new(provenance: Provenance, columns: Vec<Column>) -> Self {
        Self {
            provenance,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        debug_assert_eq!(row.values.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// All values of a named column, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let p = &self.provenance;
        let mut out = String::new();
        let _ = writeln!(out, "# transducer-sim {}", p.crate_version);
        let _ = writeln!(out, "# schema_version = {}", p.schema_version);
        let _ = writeln!(out, "# experiment = {}", p.experiment);
        let _ = writeln!(out, "# config_sha256 = {}", p.config_hash);
        let header: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{} [{}]", c.name, c.unit))
            .chain(std::iter::once("status".to_string()))
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            for v in &row.values {
                // Shortest round-trip representation.
                let _ = write!(out, "{v:e},");
            }
            let _ = writeln!(out, "{}", row.status);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(path, self.to_csv())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = ResultTable::new(
            Provenance::new("demo", &config_hash("a = 1\n")),
            vec![Column::new("x", "nm"), Column::new("f_m", "GHz")],
        );
        t.push(Row::ok(vec![0.1, 2.0]));
        t.push(Row {
            values: vec![0.2, f64::NAN],
            status: RowStatus::PullIn,
        });
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# transducer-sim "));
        assert_eq!(lines[1], "# schema_version = 1");
        assert_eq!(lines[2], "# experiment = demo");
        assert_eq!(lines[3].len(), "# config_sha256 = ".len() + 64);
        assert_eq!(lines[4], "x [nm],f_m [GHz],status");
        assert_eq!(lines[5], "1e-1,2e0,ok");
        assert_eq!(lines[6], "2e-1,NaN,pull_in");
        let back: f64 = lines[5].split(',').next().unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(
            config_hash(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
