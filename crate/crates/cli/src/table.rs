//! Trajectory tables and their CSV form.

use std::io::{Read, Write};

use serde::Serialize;

use crate::config::Mode;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Schema {
    Schwarz,
    Lagrange,
    Hamilton,
    Geodesic,
}

impl Schema {
    pub const ALL: [Schema; 4] = [
        Schema::Schwarz,
        Schema::Lagrange,
        Schema::Hamilton,
        Schema::Geodesic,
    ];

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Schema::Schwarz => &[
                "t",
                "rho",
                "rho_dot",
                "rho_ddot",
                "S_of_rho",
                "P",
                "D",
                "K",
                "casimir_residual",
            ],
            Schema::Lagrange => &["t", "rho", "rho_dot", "s", "s_dot", "H", "P", "D", "K"],
            Schema::Hamilton => &["t", "rho", "s", "p_rho", "p_s", "H2d"],
            Schema::Geodesic => &[
                "t_affine", "t", "v", "rho", "s", "p_t", "p_v", "p_rho", "p_s", "H4d",
            ],
        }
    }

    pub fn from_header(header: &[&str]) -> Option<Schema> {
        Schema::ALL.into_iter().find(|s| s.columns() == header)
    }

    /// Index of a column; panics on a name outside the schema.
    pub fn col(self, name: &str) -> usize {
        self.columns()
            .iter()
            .position(|c| *c == name)
            .unwrap_or_else(|| panic!("{name} is not a {self:?} column"))
    }
}

impl From<Mode> for Schema {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Schwarz => Schema::Schwarz,
            Mode::Lagrange => Schema::Lagrange,
            Mode::Hamilton => Schema::Hamilton,
            Mode::Geodesic => Schema::Geodesic,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: Schema,
    pub rows: Vec<Vec<f64>>,
}

/// 17 significant digits, enough to read back the same `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn new(schema: Schema) -> Self {
        Self {
            schema,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.schema.columns().len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        let j = self.schema.col(name);
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.schema.columns())?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| format_float(x)))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses a CSV whose header matches one of the schemas exactly.
    pub fn read_csv<R: Read>(input: R) -> Result<Table, CliError> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(input);
        let header = r
            .headers()
            .map_err(|e| CliError::Schema(e.to_string()))?
            .clone();
        let names: Vec<&str> = header.iter().collect();
        let schema = Schema::from_header(&names).ok_or_else(|| {
            CliError::Schema(format!(
                "header [{}] matches no known schema",
                names.join(",")
            ))
        })?;
        let mut table = Table::new(schema);
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| CliError::Schema(format!("row {i}: {e}")))?;
            let row = rec
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Schema(format!("row {i}: {e}")))?;
            table.push(row);
        }
        Ok(table)
    }
}
