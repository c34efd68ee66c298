//! Visibility sweeps over a scenario template.
//!
//! ```json
//! {
//!   "scenario": {"params": {"n": 2, "d": 2},
//!                "state": {"kind": "max_entangled"},
//!                "channels": {"kind": "clock_shift"},
//!                "povm": {"kind": "coloured_bsm", "v": "$v"}},
//!   "variable": "v",
//!   "grid": {"min": 0.0, "max": 1.0, "steps": 101},
//!   "outputs": ["score", "gme", "entangled_ops"],
//!   "margin": 1e-9
//! }
//! ```
//!
//! Every `"$v"` string in the template is replaced by the grid value.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use sdi_core::certify::biseparable_bound;
use sdi_core::{certify, score};

use crate::error::{CliError, CliResult};
use crate::scenario_file::ScenarioFile;

pub const CSV_HEADER: &str = "v,score,gme_certified,certified_entangled_ops,bound_1_over_d";
const PLACEHOLDER: &str = "$v";
/// Simulated scores carry round-off, so exact thresholds (such as
/// `v = 1/4` on the coloured Bell measurement) need a small margin.
pub const DEFAULT_SWEEP_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Score,
    Gme,
    EntangledOps,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub template: Value,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub outputs: Vec<Output>,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub v: f64,
    pub score: f64,
    pub gme_certified: bool,
    pub certified_entangled_ops: usize,
    pub bound_1_over_d: f64,
}

impl SweepSpec {
    pub fn from_json_str(text: &str) -> CliResult<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::parse("sweep", e))?;
        Self::from_value(&value)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::parse(&path.display().to_string(), e))?;
        Self::from_json_str(&text)
    }

    pub fn from_value(value: &Value) -> CliResult<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| CliError::parse("sweep", "expected an object"))?;
        const FIELDS: [&str; 5] = ["scenario", "variable", "grid", "outputs", "margin"];
        if let Some(key) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
            return Err(CliError::parse(&format!("sweep.{key}"), "unknown field"));
        }
        let template = obj
            .get("scenario")
            .cloned()
            .ok_or_else(|| CliError::parse("sweep", "missing field \"scenario\""))?;
        match obj.get("variable") {
            None => {}
            Some(Value::String(s)) if s == "v" => {}
            Some(_) => return Err(CliError::parse("sweep.variable", "only \"v\" can be swept")),
        }
        if !contains_placeholder(&template) {
            return Err(CliError::parse("sweep.scenario", "no \"$v\" placeholder to sweep"));
        }
        let grid = obj
            .get("grid")
            .and_then(Value::as_object)
            .ok_or_else(|| CliError::parse("sweep", "missing object \"grid\""))?;
        let number = |key: &str| {
            grid.get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| CliError::parse(&format!("sweep.grid.{key}"), "expected a number"))
        };
        let (min, max) = (number("min")?, number("max")?);
        let steps = grid
            .get("steps")
            .and_then(Value::as_u64)
            .ok_or_else(|| CliError::parse("sweep.grid.steps", "expected an integer"))? as usize;
        if min > max {
            return Err(CliError::parse("sweep.grid", format!("min {min} exceeds max {max}")));
        }
        if steps < 2 {
            return Err(CliError::parse("sweep.grid.steps", "need at least 2 steps"));
        }
        let outputs = match obj.get("outputs") {
            None => vec![Output::Score, Output::Gme, Output::EntangledOps],
            Some(v) => parse_outputs(v)?,
        };
        let margin = match obj.get("margin") {
            None => DEFAULT_SWEEP_MARGIN,
            Some(v) => v
                .as_f64()
                .filter(|m| *m >= 0.0)
                .ok_or_else(|| CliError::parse("sweep.margin", "expected a nonnegative number"))?,
        };
        // fail early on template errors at the first grid point
        ScenarioFile::from_value(&substitute(&template, min))?;
        Ok(Self {
            template,
            min,
            max,
            steps,
            outputs,
            margin,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        let span = self.max - self.min;
        (0..self.steps)
            .map(|i| self.min + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    pub fn run(&self) -> CliResult<Vec<SweepRow>> {
        self.grid()
            .into_iter()
            .map(|v| {
                let scenario = ScenarioFile::from_value(&substitute(&self.template, v))
                    .map_err(|e| match e {
                        CliError::Parse(msg) => CliError::Parse(format!("at v = {v}: {msg}")),
                        other => other,
                    })?;
                let params = scenario.strategy.params();
                let a = score(&scenario.strategy)?.score;
                let report = certify(a.clamp(0.0, 1.0), params, self.margin)?;
                Ok(SweepRow {
                    v,
                    score: a,
                    gme_certified: report.gme_certified,
                    certified_entangled_ops: report.certified_entangled_ops,
                    bound_1_over_d: biseparable_bound(params),
                })
            })
            .collect()
    }

    pub fn to_csv(&self, rows: &[SweepRow]) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let has = |o| self.outputs.contains(&o);
        for r in rows {
            let score = if has(Output::Score) { r.score.to_string() } else { String::new() };
            let gme = if has(Output::Gme) { r.gme_certified.to_string() } else { String::new() };
            let ops = if has(Output::EntangledOps) {
                r.certified_entangled_ops.to_string()
            } else {
                String::new()
            };
            out.push_str(&format!("{},{score},{gme},{ops},{}\n", r.v, r.bound_1_over_d));
        }
        out
    }
}

fn parse_outputs(value: &Value) -> CliResult<Vec<Output>> {
    let items = value
        .as_array()
        .ok_or_else(|| CliError::parse("sweep.outputs", "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| match item.as_str() {
            Some("score") => Ok(Output::Score),
            Some("gme") => Ok(Output::Gme),
            Some("entangled_ops") => Ok(Output::EntangledOps),
            _ => Err(CliError::parse(
                &format!("sweep.outputs[{i}]"),
                "expected \"score\", \"gme\" or \"entangled_ops\"",
            )),
        })
        .collect()
}

fn contains_placeholder(value: &Value) -> bool {
    match value {
        Value::String(s) => s == PLACEHOLDER,
        Value::Array(items) => items.iter().any(contains_placeholder),
        Value::Object(map) => map.values().any(contains_placeholder),
        _ => false,
    }
}

fn substitute(value: &Value, v: f64) -> Value {
    match value {
        Value::String(s) if s == PLACEHOLDER => Value::from(v),
        Value::Array(items) => Value::Array(items.iter().map(|x| substitute(x, v)).collect()),
        Value::Object(map) => Value::Object(
            map.iter()
                .map(|(k, x)| (k.clone(), substitute(x, v)))
                .collect::<Map<_, _>>(),
        ),
        other => other.clone(),
    }
}

/// Writes `contents` to `path`, refusing to replace an existing file unless
/// `force` is set.
pub fn write_output(path: &Path, contents: &str, force: bool) -> CliResult<()> {
    let mut options = std::fs::OpenOptions::new();
    options.write(true);
    if force {
        options.create(true).truncate(true);
    } else {
        options.create_new(true);
    }
    let mut file = options.open(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::AlreadyExists {
            CliError::parse(&path.display().to_string(), "already exists (use --force to overwrite)")
        } else {
            CliError::parse(&path.display().to_string(), e)
        }
    })?;
    file.write_all(contents.as_bytes())
        .map_err(|e| CliError::parse(&path.display().to_string(), e))
}
