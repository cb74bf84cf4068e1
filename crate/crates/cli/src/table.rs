//! CSV tables. Inputs are written in shortest round-trip form, computed
//! quantities with ten significant digits; derived columns are computed
//! from the rounded values so a parsed table re-emits byte for byte.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

/// Ten significant digits in scientific notation.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.9e}")
}

/// The value a reader recovers from [`fmt_sig`].
pub fn quantize(x: f64) -> f64 {
    fmt_sig(x).parse().expect("formatted float parses")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

fn parse_opt(field: &str, name: &str) -> Result<Option<f64>, String> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|_| format!("column {name}: cannot parse {field:?}"))
}

/// A header and rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("writing to memory");
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.header.len());
            w.write_record(row).expect("writing to memory");
        }
        w.into_inner().expect("flushing to memory")
    }

    /// Writes to `path`, or to standard output when `path` is `None`.
    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        let bytes = self.to_bytes();
        match path {
            Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            }),
            None => std::io::stdout().lock().write_all(&bytes).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The squeezing and impurity photons exceed the energy budget.
    Infeasible,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Infeasible => "infeasible",
        }
    }
}

pub const RESULT_HEADER: [&str; 13] = [
    "n_mean",
    "gamma",
    "loss",
    "snr",
    "p_sql",
    "p_hel_coherent",
    "p_gauss",
    "p_hel_squeezed",
    "p_model",
    "p_mc_mean",
    "p_mc_std",
    "mutual_info",
    "status",
];

/// One point of a sweep. Empty cells are `None`; the bounds and mutual
/// information are filled for binary keying only.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub n_mean: f64,
    pub gamma: Option<f64>,
    pub loss: f64,
    pub snr: Option<f64>,
    pub p_sql: Option<f64>,
    pub p_hel_coherent: Option<f64>,
    pub p_gauss: Option<f64>,
    pub p_hel_squeezed: Option<f64>,
    pub p_model: Option<f64>,
    pub p_mc_mean: Option<f64>,
    pub p_mc_std: Option<f64>,
    pub mutual_info: Option<f64>,
    pub status: Status,
}

impl ResultRow {
    pub fn to_record(&self) -> Vec<String> {
        vec![
            self.n_mean.to_string(),
            fmt_opt(self.gamma),
            self.loss.to_string(),
            fmt_opt(self.snr),
            fmt_opt(self.p_sql),
            fmt_opt(self.p_hel_coherent),
            fmt_opt(self.p_gauss),
            fmt_opt(self.p_hel_squeezed),
            fmt_opt(self.p_model),
            fmt_opt(self.p_mc_mean),
            fmt_opt(self.p_mc_std),
            fmt_opt(self.mutual_info),
            self.status.as_str().to_string(),
        ]
    }

    pub fn from_record(record: &csv::StringRecord) -> Result<Self, String> {
        if record.len() != RESULT_HEADER.len() {
            return Err(format!("expected {} columns, found {}", RESULT_HEADER.len(), record.len()));
        }
        let cell = |i: usize| parse_opt(&record[i], RESULT_HEADER[i]);
        let required = |i: usize| cell(i)?.ok_or_else(|| format!("column {} is empty", RESULT_HEADER[i]));
        let status = match &record[12] {
            "ok" => Status::Ok,
            "infeasible" => Status::Infeasible,
            other => return Err(format!("unknown status {other:?}")),
        };
        Ok(Self {
            n_mean: required(0)?,
            gamma: cell(1)?,
            loss: required(2)?,
            snr: cell(3)?,
            p_sql: cell(4)?,
            p_hel_coherent: cell(5)?,
            p_gauss: cell(6)?,
            p_hel_squeezed: cell(7)?,
            p_model: cell(8)?,
            p_mc_mean: cell(9)?,
            p_mc_std: cell(10)?,
            mutual_info: cell(11)?,
            status,
        })
    }

    pub fn table(rows: &[ResultRow]) -> Table {
        Table {
            header: RESULT_HEADER.to_vec(),
            rows: rows.iter().map(ResultRow::to_record).collect(),
        }
    }

    /// Parses a table written by [`ResultRow::table`].
    pub fn parse_csv(bytes: &[u8]) -> Result<Vec<ResultRow>, String> {
        let mut r = csv::Reader::from_reader(bytes);
        let header = r.headers().map_err(|e| e.to_string())?;
        if header.iter().ne(RESULT_HEADER) {
            return Err(format!("unexpected header {header:?}"));
        }
        r.records()
            .map(|rec| rec.map_err(|e| e.to_string()).and_then(|rec| ResultRow::from_record(&rec)))
            .collect()
    }
}
