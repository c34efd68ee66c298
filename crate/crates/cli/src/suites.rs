//! Verification suites behind `sdi-cert verify`.
//!
//! Output is a plain table with fixed number formatting and no timings, so a
//! rerun with the same seed reproduces it byte for byte.

use sdi_core::catalog::{
    appendix_d_channels, appendix_d_measurement, clock_shift_channels, coloured_noise_bsm,
    ghz_basis_measurement, max_entangled, noisy_bsm, noisy_dicke, noisy_ghz, noisy_w,
};
use sdi_core::certify::{
    biseparable_bound, count_npt_operators, ghz_fraction, ghz_visibility_threshold,
    separable_measurement_bound, FractionConfig,
};
use sdi_core::linalg::DensityMatrix;
use sdi_core::optimize::{
    compression_oracle, discrimination_upper_bound, quantum_compression_sample, seesaw, SeesawConfig,
};
use sdi_core::random::substream;
use sdi_core::sampling::{
    random_biseparable_state, random_channel_families, random_separable_measurement_strategy,
};
use sdi_core::scenario::effective_operators;
use sdi_core::{certify, score, GameParams, Povm, Result, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Paper,
    Bounds,
    Oracle,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Self::Paper => "paper",
            Self::Bounds => "bounds",
            Self::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: impl Into<String>, result: Result<(bool, String)>) -> Self {
        match result {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

/// Simulated scores sit on exact thresholds in several checks; this keeps
/// round-off from counting as a strict violation.
const SIM_MARGIN: f64 = 1e-9;

pub fn run_suite(suite: Suite, seed: u64) -> Vec<Check> {
    match suite {
        Suite::Paper => paper_suite(seed),
        Suite::Bounds => bounds_suite(seed),
        Suite::Oracle => oracle_suite(seed),
    }
}

pub fn render(suite: Suite, seed: u64, checks: &[Check]) -> String {
    let mut out = format!("suite {} (seed {seed})\n", suite.name());
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status}  {:<44} {}\n", c.name, c.detail));
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
    out
}

fn params(n: usize, d: usize) -> GameParams {
    GameParams::new(n, d).expect("suite parameters are valid")
}

fn ghz_strategy(n: usize, d: usize, v: f64) -> Result<Strategy> {
    Strategy::new(
        params(n, d),
        noisy_ghz(n, d, v)?,
        clock_shift_channels(n, d)?,
        ghz_basis_measurement(n, d)?,
    )
}

fn bell_strategy(povm: Povm) -> Result<Strategy> {
    let rho = DensityMatrix::from_ket(&max_entangled(povm.dim().isqrt())?)?;
    let d = rho.dim().isqrt();
    Strategy::new(params(2, d), rho, clock_shift_channels(2, d)?, povm)
}

fn certified_ops(score: f64, p: GameParams) -> Result<usize> {
    Ok(certify(score.clamp(0.0, 1.0), p, SIM_MARGIN)?.certified_entangled_ops)
}

const GHZ_CASES: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 2), (3, 3)];

fn paper_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();

    for (n, d) in GHZ_CASES {
        checks.push(Check::from_result(format!("ideal score ({n},{d})"), (|| {
            let a = score(&ghz_strategy(n, d, 1.0)?)?.score;
            Ok(((a - 1.0).abs() < 1e-9, format!("A = {a:.12}")))
        })()));
    }

    for (n, d) in GHZ_CASES {
        checks.push(Check::from_result(format!("noisy GHZ line ({n},{d})"), (|| {
            let dn = (d as f64).powi(n as i32);
            let mut worst = 0.0f64;
            for i in 0..=10 {
                let v = i as f64 / 10.0;
                let a = score(&ghz_strategy(n, d, v)?)?.score;
                worst = worst.max((a - (v + (1.0 - v) / dn)).abs());
            }
            Ok((worst < 1e-9, format!("max |A - (v + (1-v)/d^n)| = {worst:.3e}")))
        })()));
    }

    for (n, d, quoted) in [(2, 2, 1.0 / 3.0), (2, 3, 0.25), (3, 2, 3.0 / 7.0), (3, 3, 4.0 / 13.0)] {
        checks.push(Check::from_result(format!("GME threshold ({n},{d})"), (|| {
            let p = params(n, d);
            let t = ghz_visibility_threshold(p);
            let below = certify(score(&ghz_strategy(n, d, t - 1e-6)?)?.score, p, 0.0)?.gme_certified;
            let above = certify(score(&ghz_strategy(n, d, t + 1e-6)?)?.score, p, 0.0)?.gme_certified;
            let ok = (t - quoted).abs() < 1e-12 && !below && above;
            Ok((ok, format!("threshold = {t:.9}, flag below/above = {below}/{above}")))
        })()));
    }

    checks.push(Check::from_result("separable-measurement bounds (2,2)", (|| {
        let p = params(2, 2);
        let (b4, b1) = (separable_measurement_bound(p, 4)?, separable_measurement_bound(p, 1)?);
        Ok((b4 == 0.5 && b1 == 0.875, format!("k=4: {b4}, k=1: {b1}")))
    })()));

    for d in [2, 3] {
        checks.push(Check::from_result(format!("product-element saturation d={d}"), (|| {
            let p = params(2, d);
            let rho = DensityMatrix::from_ket(&max_entangled(d)?)?;
            let mut worst = 0.0f64;
            for m in 0..=d {
                let s = Strategy::new(p, rho.clone(), appendix_d_channels(d)?, appendix_d_measurement(d, m)?)?;
                let a = score(&s)?.score;
                let df = d as f64;
                let closed = (df - m as f64) / df + m as f64 / (df * df);
                worst = worst
                    .max((a - closed).abs())
                    .max((a - separable_measurement_bound(p, m * d)?).abs());
            }
            Ok((worst < 1e-9, format!("max deviation over m = 0..{d}: {worst:.3e}")))
        })()));
    }

    checks.push(Check::from_result("coloured noise score (1+v)/2", (|| {
        let mut worst = 0.0f64;
        for i in 0..=20 {
            let v = i as f64 / 20.0;
            let a = score(&bell_strategy(coloured_noise_bsm(v)?)?)?.score;
            worst = worst.max((a - (1.0 + v) / 2.0).abs());
        }
        Ok((worst < 1e-9, format!("max deviation = {worst:.3e}")))
    })()));

    checks.push(Check::from_result("coloured noise certified-ops steps", (|| {
        let p = params(2, 2);
        let mut seen = Vec::new();
        for (v, want) in [
            (0.0, 0),
            (0.2, 1),
            (0.25, 1),
            (0.26, 2),
            (0.5, 2),
            (0.51, 3),
            (0.75, 3),
            (0.76, 4),
            (1.0, 4),
        ] {
            let got = certified_ops(score(&bell_strategy(coloured_noise_bsm(v)?)?)?.score, p)?;
            seen.push(format!("{v}:{got}"));
            if got != want {
                return Ok((false, format!("v = {v}: got {got}, expected {want}")));
            }
        }
        Ok((true, seen.join(" ")))
    })()));

    checks.push(Check::from_result("coloured noise PPT ground truth", (|| {
        let mut seen = Vec::new();
        for (v, want) in [(0.0, 1), (0.1, 2), (1.0 / 3.0, 2), (0.34, 4), (0.5, 4), (1.0, 4)] {
            let got = count_npt_operators(&coloured_noise_bsm(v)?, &[2, 2])?.count;
            seen.push(format!("{v:.3}:{got}"));
            if got != want {
                return Ok((false, format!("v = {v}: got {got}, expected {want}")));
            }
        }
        Ok((true, seen.join(" ")))
    })()));

    for d in [2, 3] {
        checks.push(Check::from_result(format!("noisy BSM entanglement threshold d={d}"), (|| {
            let p = params(2, d);
            let first = first_grid_point(|v| Ok(certified_ops(score(&bell_strategy(noisy_bsm(d, v)?)?)?.score, p)? >= 1))?;
            let t = 1.0 / (d as f64 + 1.0);
            Ok((first.is_some_and(|f| f > t && f - t <= 1e-3 + 1e-12), format!("first certified v = {first:?}, 1/(d+1) = {t:.6}")))
        })()));
    }

    checks.push(Check::from_result("noisy BSM all-four threshold d=2", (|| {
        let p = params(2, 2);
        let first = first_grid_point(|v| Ok(certified_ops(score(&bell_strategy(noisy_bsm(2, v)?)?)?.score, p)? == 4))?;
        let t = 5.0 / 6.0;
        Ok((first.is_some_and(|f| f > t && f - t <= 1e-3 + 1e-12), format!("first v with 4 ops = {first:?}, 5/6 = {t:.6}")))
    })()));

    for (n, d, v) in [(2, 2, 0.3), (2, 3, 0.5), (3, 2, 0.7)] {
        checks.push(Check::from_result(format!("GHZ fraction of noisy GHZ ({n},{d}) v={v}"), (|| {
            let config = FractionConfig { restarts: 4, seed, ..Default::default() };
            let gf = ghz_fraction(&noisy_ghz(n, d, v)?, params(n, d), &config)?.value;
            let closed = v + (1.0 - v) / (d as f64).powi(n as i32);
            Ok(((gf - closed).abs() < 1e-6, format!("GF = {gf:.9}, closed form = {closed:.9}")))
        })()));
    }

    let w = (|| {
        let config = SeesawConfig { restarts: 8, seed, ..Default::default() };
        seesaw(&noisy_w(1.0)?, params(3, 2), &config, None)
    })();
    checks.push(Check::from_result("W seesaw line (1+5v)/8", w.as_ref().map_err(Clone::clone).and_then(|r| {
        let mut worst = f64::INFINITY;
        let mut cells = Vec::new();
        for v in [0.25, 0.5, 0.75, 1.0] {
            let a = score(&r.best_strategy.with_state(noisy_w(v)?)?)?.score;
            let target = (1.0 + 5.0 * v) / 8.0;
            worst = worst.min(a - target);
            cells.push(format!("{v}:{a:.6}"));
        }
        Ok((worst > -1e-3, cells.join(" ")))
    })));
    checks.push(Check::from_result("W GME threshold 3/5", w.as_ref().map_err(Clone::clone).and_then(|r| {
        let t = bisect_half(|v| Ok(score(&r.best_strategy.with_state(noisy_w(v)?)?)?.score))?;
        Ok(((t - 0.6).abs() < 0.01, format!("crossing at v = {t:.6}")))
    })));

    checks.push(Check::from_result("Dicke GME threshold 7/11", (|| {
        let config = SeesawConfig { restarts: 4, seed, ..Default::default() };
        let r = seesaw(&noisy_dicke(1.0)?, params(4, 2), &config, None)?;
        let t = bisect_half(|v| Ok(score(&r.best_strategy.with_state(noisy_dicke(v)?)?)?.score))?;
        Ok(((t - 7.0 / 11.0).abs() < 0.01, format!("A(1) = {:.6}, crossing at v = {t:.6}", r.best_score)))
    })()));

    checks.push(Check::from_result("compression d/N (N=4, d=2)", (|| {
        let p = compression_oracle(4, 2)?;
        Ok((p == 0.5, format!("{p} == 0.5")))
    })()));

    checks
}

/// First point of the grid `0, 0.001, …, 1` where `pred` holds.
fn first_grid_point(pred: impl Fn(f64) -> Result<bool>) -> Result<Option<f64>> {
    for i in 0..=1000 {
        let v = i as f64 / 1000.0;
        if pred(v)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Visibility where an increasing score curve crosses `1/2`.
fn bisect_half(f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

const BOUNDS_SAMPLES: u64 = 400;

fn bounds_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    for (n, d) in [(2, 2), (3, 2)] {
        checks.push(Check::from_result(format!("biseparable states ({n},{d})"), (|| {
            let p = params(n, d);
            let bound = biseparable_bound(p);
            let (mut worst, mut worst_dual, mut violations) = (0.0f64, 0.0f64, 0);
            for i in 0..BOUNDS_SAMPLES {
                let mut rng = substream(seed, i);
                let (state, _) = random_biseparable_state(p, &mut rng)?;
                let channels = random_channel_families(p, &mut rng)?;
                let povm = sdi_core::optimize::optimal_povm_step(&state, &channels, p)?;
                let weights = effective_operators(state.matrix(), &channels, p);
                worst_dual = worst_dual.max(discrimination_upper_bound(&weights, povm.elements()));
                let a = score(&Strategy::new(p, state, channels, povm)?)?.score;
                worst = worst.max(a);
                violations += usize::from(a > bound + 1e-6);
            }
            Ok((
                violations == 0,
                format!("{violations} violations in {BOUNDS_SAMPLES}; max A = {worst:.9}, max dual bound = {worst_dual:.9}, 1/d = {bound:.6}"),
            ))
        })()));
    }
    for (n, d) in [(2, 2), (3, 2)] {
        checks.push(Check::from_result(format!("separable measurements ({n},{d})"), (|| {
            let p = params(n, d);
            let bound = biseparable_bound(p);
            let (mut worst, mut violations) = (0.0f64, 0);
            for i in 0..BOUNDS_SAMPLES {
                let s = random_separable_measurement_strategy(p, &mut substream(seed ^ 0x5EB, i))?;
                let a = score(&s)?.score;
                worst = worst.max(a);
                violations += usize::from(a > bound + 1e-6);
            }
            Ok((
                violations == 0,
                format!("{violations} violations in {BOUNDS_SAMPLES}; max A = {worst:.9}, 1/d = {bound:.6}"),
            ))
        })()));
    }
    checks
}

const QUANTUM_SAMPLES: usize = 500;

fn oracle_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    for (msgs, d) in [(2, 2), (4, 2), (8, 2), (9, 3)] {
        checks.push(Check::from_result(format!("compression oracle N={msgs} d={d}"), (|| {
            let classical = compression_oracle(msgs, d)?;
            let expected = (d as f64 / msgs as f64).min(1.0);
            let quantum = quantum_compression_sample(msgs, d, QUANTUM_SAMPLES, seed)?;
            let ok = classical == expected && quantum <= expected + 1e-9;
            Ok((ok, format!("{classical} == {expected}; best of {QUANTUM_SAMPLES} quantum = {quantum:.9}")))
        })()));
    }
    for (d, dims) in [(2, [2, 2]), (3, [3, 3])] {
        checks.push(Check::from_result(format!("product-element NPT counts d={d}"), (|| {
            let mut cells = Vec::new();
            for m in 0..=d {
                let got = count_npt_operators(&appendix_d_measurement(d, m)?, &dims)?.count;
                cells.push(format!("m={m}:{got}"));
                if got != (d - m) * d {
                    return Ok((false, format!("m = {m}: got {got}, expected {}", (d - m) * d)));
                }
            }
            Ok((true, cells.join(" ")))
        })()));
    }
    for d in [2, 3] {
        checks.push(Check::from_result(format!("noisy BSM NPT threshold d={d}"), (|| {
            let dims = [d, d];
            let first = first_grid_point(|v| Ok(count_npt_operators(&noisy_bsm(d, v)?, &dims)?.count > 0))?;
            let t = 1.0 / (d as f64 + 1.0);
            Ok((first.is_some_and(|f| f > t && f - t <= 1e-3 + 1e-12), format!("first NPT v = {first:?}, 1/(d+1) = {t:.6}")))
        })()));
    }
    checks.push(Check::from_result("witness vs PPT count (2,2)", (|| {
        let p = params(2, 2);
        for i in 0..=20 {
            let v = i as f64 / 20.0;
            for (label, povm) in [("coloured", coloured_noise_bsm(v)?), ("noisy", noisy_bsm(2, v)?)] {
                let truth = count_npt_operators(&povm, &[2, 2])?.count;
                let claimed = certified_ops(score(&bell_strategy(povm)?)?.score, p)?;
                if claimed > truth {
                    return Ok((false, format!("{label} v = {v}: claimed {claimed} > {truth}")));
                }
            }
        }
        Ok((true, "no over-claim on 21-point grids".to_string()))
    })()));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_suite_passes() {
        let checks = run_suite(Suite::Oracle, 7);
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn render_counts_passes() {
        let checks = vec![Check::new("a", true, "x"), Check::new("b", false, "y")];
        let text = render(Suite::Paper, 1, &checks);
        assert!(text.ends_with("1/2 checks passed\n"));
        assert!(text.contains("FAIL  b"));
    }
}
