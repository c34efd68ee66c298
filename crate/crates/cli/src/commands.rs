//! Command implementations. Each returns the text for stdout.

use std::path::Path;

use serde_json::{json, Value};

use sdi_core::optimize::{seesaw, SeesawConfig, SeesawMode};
use sdi_core::scenario::score_from_distribution;
use sdi_core::{certify, score, CertificationReport, GameParams};

use crate::distribution::parse_distribution;
use crate::error::{CliError, CliResult};
use crate::scenario_file::{strategy_to_value, ScenarioFile};
use crate::state_ref::parse_state_ref;
use crate::suites::{render, run_suite, Suite};
use crate::sweep::{write_output, SweepSpec};

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialise");
    s.push('\n');
    s
}

pub fn cmd_score(path: &Path, per_input: bool) -> CliResult<String> {
    let scenario = ScenarioFile::load(path)?;
    let report = score(&scenario.strategy)?;
    let mut out = json!({
        "score": report.score,
        "params": {"n": report.params.n(), "d": report.params.d()},
    });
    if per_input {
        out["per_input"] = report
            .per_input_win
            .iter()
            .map(|w| json!({"x": w.x, "y": w.y, "p": w.p}))
            .collect();
    }
    Ok(pretty(&out))
}

pub enum CertifyInput<'a> {
    Score(f64),
    Distribution(&'a Path),
}

pub fn certification_json(report: &CertificationReport) -> Value {
    json!({
        "score": report.score,
        "params": {"n": report.params.n(), "d": report.params.d()},
        "margin": report.margin,
        "gme_certified": report.gme_certified,
        "certified_entangled_ops": report.certified_entangled_ops,
        "biseparable_bound": sdi_core::certify::biseparable_bound(report.params),
        "thresholds": report
            .thresholds
            .iter()
            .map(|&(k, bound)| json!({"k": k, "bound": bound}))
            .collect::<Vec<_>>(),
    })
}

pub fn cmd_certify(input: CertifyInput<'_>, n: usize, d: usize, margin: f64) -> CliResult<String> {
    let params = GameParams::guarded(n, d).map_err(|e| CliError::at("--n/--d", e))?;
    if !(margin >= 0.0 && margin.is_finite()) {
        return Err(CliError::parse("--margin", "must be a nonnegative number"));
    }
    let observed = match input {
        CertifyInput::Score(s) => {
            if !(0.0..=1.0).contains(&s) {
                return Err(CliError::parse("--score", format!("{s} not in [0, 1]")));
            }
            s
        }
        CertifyInput::Distribution(path) => {
            let source = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(|e| CliError::parse(&source, e))?;
            let dist = parse_distribution(&text, params, &source)?;
            score_from_distribution(&dist)?.score.clamp(0.0, 1.0)
        }
    };
    let report = certify(observed, params, margin)?;
    Ok(pretty(&certification_json(&report)))
}

pub fn cmd_sweep(spec_path: &Path, out: &Path, force: bool) -> CliResult<String> {
    let spec = SweepSpec::load(spec_path)?;
    let rows = spec.run()?;
    write_output(out, &spec.to_csv(&rows), force)?;
    Ok(format!("wrote {} rows to {}\n", rows.len(), out.display()))
}

/// Returns the rendered table and whether every check passed.
pub fn cmd_verify(suite: Suite, seed: u64) -> (String, bool) {
    let checks = run_suite(suite, seed);
    let ok = checks.iter().all(|c| c.passed);
    (render(suite, seed, &checks), ok)
}

pub enum OptimizeSource<'a> {
    StateRef(&'a str),
    Scenario(&'a Path),
}

pub struct OptimizeOptions<'a> {
    pub mode: SeesawMode,
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub kraus_rank: Option<usize>,
    pub full: bool,
    pub out: Option<&'a Path>,
    pub force: bool,
}

pub fn cmd_optimize(source: OptimizeSource<'_>, opts: &OptimizeOptions<'_>) -> CliResult<String> {
    let config = SeesawConfig {
        restarts: opts.restarts,
        max_iter: opts.max_iter,
        seed: opts.seed,
        mode: opts.mode,
        kraus_rank: opts.kraus_rank,
        ..SeesawConfig::default()
    };
    config
        .validate()
        .map_err(|e| CliError::parse("options", e))?;
    let result = match source {
        OptimizeSource::StateRef(text) => {
            let (params, rho) = parse_state_ref(text)?;
            seesaw(&rho, params, &config, None)?
        }
        OptimizeSource::Scenario(path) => {
            let scenario = ScenarioFile::load(path)?;
            let s = &scenario.strategy;
            seesaw(s.state(), s.params(), &config, Some(s))?
        }
    };
    let params = result.best_strategy.params();
    let mode = match opts.mode {
        SeesawMode::UnitaryOnly => "unitary",
        SeesawMode::GeneralChannel => "channel",
    };
    let mut out = json!({
        "best_score": result.best_score,
        "params": {"n": params.n(), "d": params.d()},
        "mode": mode,
        "restarts": opts.restarts,
        "seed": opts.seed,
        "best_restart": result.best_restart,
        "trace_length": result.trace.len(),
        "converged": result.converged,
    });
    if opts.full {
        out["trace"] = json!(result.trace);
        out["strategy"] = strategy_to_value(&result.best_strategy);
    }
    let text = pretty(&out);
    match opts.out {
        Some(path) => {
            write_output(path, &text, opts.force)?;
            Ok(format!("best_score {} written to {}\n", result.best_score, path.display()))
        }
        None => Ok(text),
    }
}
