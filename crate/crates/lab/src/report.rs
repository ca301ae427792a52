//! Machine-readable experiment reports.
//!
//! A report is canonically JSON. Every record carries units and, when the
//! quantity is compared against something, the tolerance it was judged by.
//! Records flagged as timings are the only fields allowed to differ between
//! two runs with the same command and seed.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub metrics: Vec<String>,
    pub inputs: Inputs,
    pub environment: Environment,
    pub results: Vec<Record>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub seed: Option<u64>,
    /// Human-readable description of each input source, including any
    /// sampling law used to synthesize matrices.
    pub descriptors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// Matrix dimension.
    pub m: usize,
    /// Repetitions, trials or steps, depending on the experiment.
    pub reps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Sequence(Vec<f64>),
    Flag(bool),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub metric: Option<String>,
    pub value: Value,
    pub units: String,
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub timing: bool,
}

impl Record {
    fn with_value(name: &str, value: Value, units: &str) -> Self {
        Self { name: name.into(), metric: None, value, units: units.into(), tolerance: None, timing: false }
    }

    /// A scalar. Non-finite values have no JSON encoding and are stored as
    /// text.
    pub fn number(name: &str, x: f64, units: &str) -> Self {
        let value = if x.is_finite() { Value::Number(x) } else { Value::Text(x.to_string()) };
        Self::with_value(name, value, units)
    }

    pub fn sequence(name: &str, xs: Vec<f64>, units: &str) -> Self {
        if xs.iter().all(|x| x.is_finite()) {
            Self::with_value(name, Value::Sequence(xs), units)
        } else {
            let text: Vec<String> = xs.iter().map(f64::to_string).collect();
            Self::with_value(name, Value::Text(text.join(" ")), units)
        }
    }

    pub fn flag(name: &str, b: bool) -> Self {
        Self::with_value(name, Value::Flag(b), "bool")
    }

    pub fn text(name: &str, s: impl Into<String>) -> Self {
        Self::with_value(name, Value::Text(s.into()), "text")
    }

    pub fn timing_ns(name: &str, ns: f64) -> Self {
        Self { timing: true, ..Self::number(name, ns, "ns") }
    }

    pub fn for_metric(mut self, metric: impl ToString) -> Self {
        self.metric = Some(metric.to_string());
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }
}

impl ExperimentReport {
    pub fn new(experiment: &str, metrics: Vec<String>, inputs: Inputs, environment: Environment) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.into(),
            metrics,
            inputs,
            environment,
            results: Vec::new(),
        }
    }

    pub fn push(&mut self, record: Record) {
        self.results.push(record);
    }

    /// First record named `name`, optionally restricted to one metric.
    pub fn find(&self, name: &str, metric: Option<&str>) -> Option<&Record> {
        self.results
            .iter()
            .find(|r| r.name == name && (metric.is_none() || r.metric.as_deref() == metric))
    }

    pub fn number(&self, name: &str, metric: Option<&str>) -> Option<f64> {
        match self.find(name, metric)?.value {
            Value::Number(x) => Some(x),
            _ => None,
        }
    }

    pub fn sequence(&self, name: &str, metric: Option<&str>) -> Option<&[f64]> {
        match &self.find(name, metric)?.value {
            Value::Sequence(xs) => Some(xs),
            _ => None,
        }
    }

    pub fn flag(&self, name: &str, metric: Option<&str>) -> Option<bool> {
        match self.find(name, metric)?.value {
            Value::Flag(b) => Some(b),
            _ => None,
        }
    }

    /// The report with all timing records removed, for determinism checks.
    pub fn without_timings(&self) -> Self {
        let mut out = self.clone();
        out.results.retain(|r| !r.timing);
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// One CSV row per scalar and one per sequence element:
    /// `name,metric,index,value,units,tolerance`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["name", "metric", "index", "value", "units", "tolerance"])?;
        for r in &self.results {
            let metric = r.metric.clone().unwrap_or_default();
            let tol = r.tolerance.map(|t| t.to_string()).unwrap_or_default();
            let mut row = |index: String, value: String| {
                w.write_record([r.name.as_str(), &metric, &index, &value, &r.units, &tol])
            };
            match &r.value {
                Value::Number(x) => row(String::new(), x.to_string())?,
                Value::Flag(b) => row(String::new(), b.to_string())?,
                Value::Text(s) => row(String::new(), s.clone())?,
                Value::Sequence(xs) => {
                    for (i, x) in xs.iter().enumerate() {
                        row(i.to_string(), x.to_string())?;
                    }
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}
