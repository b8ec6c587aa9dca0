//! Job configuration, dispatch and certificate emission for the `operlab` binary.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use operlab_core::dop_local::DopError;
use operlab_core::elliptic::EllipticError;
use operlab_core::opers::OperError;
use operlab_core::rings::RingError;
use operlab_core::rootdata::RootDataError;
use operlab_core::witt_opers::WittError;

pub mod args;
mod jobs;

pub use args::{Cli, Format};

/// A fully specified job. Strings are kept as typed by the user and parsed
/// during validation so that the certificate echoes the exact input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Job {
    CurveHasse {
        curve: String,
    },
    OperClassify {
        n: usize,
        curve: String,
    },
    OperHm {
        p: u64,
        a: i64,
        rho: String,
    },
    OperMiuraFiber {
        n: usize,
        curve: String,
        rho: Option<String>,
    },
    WittClassify {
        n: usize,
        p: u64,
        #[serde(rename = "N")]
        length: u32,
        miura: bool,
    },
    WittDecompose {
        matrix: String,
        p: u64,
        #[serde(rename = "N")]
        length: u32,
    },
    WittReduce {
        class: String,
        p: u64,
        #[serde(rename = "N")]
        length: u32,
    },
    WittLift {
        class: String,
        p: u64,
        #[serde(rename = "N")]
        length: u32,
    },
    DopVerify429 {
        a: i64,
        p: u64,
        #[serde(rename = "N")]
        length: u32,
        table: bool,
    },
    Census {
        family: String,
        n: usize,
        primes: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JobConfig {
    #[serde(flatten)]
    pub job: Job,
    pub window: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid parameter `{parameter}`: {reason}")]
pub struct ValidationError {
    pub parameter: &'static str,
    pub reason: String,
}

impl ValidationError {
    pub(crate) fn new(parameter: &'static str, reason: impl Into<String>) -> Self {
        Self { parameter, reason: reason.into() }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Oper(#[from] OperError),
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error(transparent)]
    Dop(#[from] DopError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

/// Rows of a CSV table; every cell is an exact integer or a field element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self { headers: headers.iter().map(ToString::to_string).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Job echo, results and the outcome of every internal cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub job: JobConfig,
    pub results: Value,
    pub checks: BTreeMap<String, bool>,
    pub table: Option<Table>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "artifact_version": env!("CARGO_PKG_VERSION"),
            "checks": self.checks,
            "deterministic_ordering": true,
            "job": self.job,
            "passed": self.passed(),
            "results": self.results,
        });
        if let Some(t) = &self.table {
            v["table"] = json!(t);
        }
        v
    }

    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values are serializable");
        s.push('\n');
        s
    }

    /// The result table, or the check list when the job has none.
    pub fn to_csv(&self) -> String {
        let table = self.table.clone().unwrap_or_else(|| {
            let mut t = Table::new(&["check", "passed"]);
            for (k, v) in &self.checks {
                t.push(vec![k.clone(), v.to_string()]);
            }
            t
        });
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.headers).expect("in-memory write");
        for row in &table.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Validates and dispatches a job.
pub fn run(config: &JobConfig) -> Result<Certificate, CliError> {
    if let Some(w) = config.window {
        if w <= 0 {
            return Err(ValidationError::new("window", "must be positive").into());
        }
    }
    jobs::dispatch(config)
}

/// Caps the global rayon pool from `OPERLAB_THREADS`.
pub fn configure_threads() -> Result<(), ValidationError> {
    let Ok(raw) = std::env::var("OPERLAB_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| ValidationError::new("OPERLAB_THREADS", format!("`{raw}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| ValidationError::new("OPERLAB_THREADS", e.to_string()))
}
