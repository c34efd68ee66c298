//! Compact state references for the command line:
//! `w[:v]`, `dicke[:v]`, `ghz:n:d`, `noisy_ghz:n:d:v`, `max_entangled:d[:v]`,
//! `maximally_mixed:n:d`.

use sdi_core::catalog::{dicke_state, ghz_state, max_entangled, w_state, with_white_noise};
use sdi_core::linalg::DensityMatrix;
use sdi_core::GameParams;

use crate::error::{CliError, CliResult};

pub fn parse_state_ref(text: &str) -> CliResult<(GameParams, DensityMatrix)> {
    let parts: Vec<&str> = text.split(':').collect();
    let path = format!("--state {text}");
    let int = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::parse(&path, format!("{s:?} is not an integer")))
    };
    let vis = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|v| (0.0..=1.0).contains(v))
            .ok_or_else(|| CliError::parse(&path, format!("{s:?} is not a visibility in [0, 1]")))
    };
    let params = |n: usize, d: usize| GameParams::guarded(n, d).map_err(|e| CliError::at(&path, e));
    let at = |e| CliError::at(&path, e);
    let (p, rho) = match parts.as_slice() {
        ["w"] => (params(3, 2)?, with_white_noise(&w_state(), 1.0).map_err(at)?),
        ["w", v] => (params(3, 2)?, with_white_noise(&w_state(), vis(v)?).map_err(at)?),
        ["dicke"] => (params(4, 2)?, with_white_noise(&dicke_state(), 1.0).map_err(at)?),
        ["dicke", v] => (params(4, 2)?, with_white_noise(&dicke_state(), vis(v)?).map_err(at)?),
        ["ghz", n, d] => {
            let p = params(int(n)?, int(d)?)?;
            (p, with_white_noise(&ghz_state(p.n(), p.d()).map_err(at)?, 1.0).map_err(at)?)
        }
        ["noisy_ghz", n, d, v] => {
            let p = params(int(n)?, int(d)?)?;
            (p, with_white_noise(&ghz_state(p.n(), p.d()).map_err(at)?, vis(v)?).map_err(at)?)
        }
        ["max_entangled", d] | ["max_entangled", d, _] => {
            let p = params(2, int(d)?)?;
            let v = parts.get(2).map_or(Ok(1.0), |v| vis(v))?;
            (p, with_white_noise(&max_entangled(p.d()).map_err(at)?, v).map_err(at)?)
        }
        ["maximally_mixed", n, d] => {
            let p = params(int(n)?, int(d)?)?;
            (p, DensityMatrix::maximally_mixed(p.num_outcomes()).map_err(at)?)
        }
        _ => {
            return Err(CliError::parse(
                &path,
                "expected w[:v], dicke[:v], ghz:n:d, noisy_ghz:n:d:v, max_entangled:d[:v] or maximally_mixed:n:d",
            ))
        }
    };
    Ok((p, rho))
}
