//! JSON scenario documents.
//!
//! ```json
//! {
//!   "params":   {"n": 2, "d": 2},
//!   "state":    {"kind": "noisy_ghz", "v": 0.5},
//!   "channels": {"kind": "clock_shift"},
//!   "povm":     {"kind": "ghz_basis"}
//! }
//! ```
//!
//! Each of `state`, `channels` and `povm` is either a catalog reference or
//! explicit data. Complex entries are `[re, im]` pairs (a bare number is a
//! real entry) and matrices are row-major arrays of rows. Explicit channels
//! are nested as `channels[k][x][y] = [K_1, K_2, …]`. Every error names the
//! JSON path of the offending field, e.g. `povm[3]`.

use serde_json::{json, Map, Value};

use sdi_core::catalog::{
    appendix_d_channels, appendix_d_measurement, clock_shift_channels, coloured_noise_bsm,
    dicke_state, ghz_basis_measurement, ghz_state, max_entangled, noisy_bsm, w_state,
    with_white_noise,
};
use sdi_core::linalg::{c, CMat, DensityMatrix, C64};
use sdi_core::{Channel, ChannelFamily, GameParams, Povm, Strategy};

use crate::error::{CliError, CliResult};

/// A parsed scenario: the game and a complete strategy for it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub strategy: Strategy,
}

impl ScenarioFile {
    pub fn from_json_str(text: &str) -> CliResult<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CliError::parse("scenario", e))?;
        Self::from_value(&value)
    }

    pub fn load(path: &std::path::Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::parse(&path.display().to_string(), e))?;
        Self::from_json_str(&text)
    }

    pub fn from_value(value: &Value) -> CliResult<Self> {
        let obj = object(value, "scenario", &["params", "state", "channels", "povm"])?;
        let params = parse_params(required(obj, "params", "scenario")?)?;
        let state = parse_state(required(obj, "state", "scenario")?, params)?;
        let channels = parse_channels(required(obj, "channels", "scenario")?, params)?;
        let povm = parse_povm(required(obj, "povm", "scenario")?, params)?;
        let strategy =
            Strategy::new(params, state, channels, povm).map_err(|e| CliError::at("scenario", e))?;
        Ok(Self { strategy })
    }

    /// Explicit form of the strategy; parsing it back gives identical matrices.
    pub fn to_value(&self) -> Value {
        strategy_to_value(&self.strategy)
    }
}

pub fn strategy_to_value(s: &Strategy) -> Value {
    let params = s.params();
    let channels: Vec<Value> = s
        .channels()
        .iter()
        .map(|fam| {
            let d = params.d();
            let rows: Vec<Value> = (0..d)
                .map(|x| {
                    Value::Array(
                        (0..d)
                            .map(|y| {
                                Value::Array(fam.get(x, y).kraus().iter().map(matrix_to_value).collect())
                            })
                            .collect(),
                    )
                })
                .collect();
            Value::Array(rows)
        })
        .collect();
    json!({
        "params": {"n": params.n(), "d": params.d()},
        "state": matrix_to_value(s.state().matrix()),
        "channels": channels,
        "povm": s.povm().elements().iter().map(matrix_to_value).collect::<Vec<_>>(),
    })
}

pub fn matrix_to_value(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| {
                Value::Array(
                    (0..m.ncols())
                        .map(|j| json!([m[(i, j)].re, m[(i, j)].im]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn object<'a>(value: &'a Value, path: &str, allowed: &[&str]) -> CliResult<&'a Map<String, Value>> {
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::parse(path, "expected an object"))?;
    if let Some(key) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(CliError::parse(&format!("{path}.{key}"), "unknown field"));
    }
    Ok(obj)
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> CliResult<&'a Value> {
    obj.get(key)
        .ok_or_else(|| CliError::parse(path, format!("missing field \"{key}\"")))
}

fn parse_usize(value: &Value, path: &str) -> CliResult<usize> {
    value
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| CliError::parse(path, "expected a nonnegative integer"))
}

fn parse_params(value: &Value) -> CliResult<GameParams> {
    let obj = object(value, "params", &["n", "d"])?;
    let n = parse_usize(required(obj, "n", "params")?, "params.n")?;
    let d = parse_usize(required(obj, "d", "params")?, "params.d")?;
    GameParams::guarded(n, d).map_err(|e| CliError::at("params", e))
}

fn parse_visibility(obj: &Map<String, Value>, path: &str, default: Option<f64>) -> CliResult<f64> {
    let vpath = format!("{path}.v");
    let v = match (obj.get("v"), default) {
        (Some(v), _) => v
            .as_f64()
            .ok_or_else(|| CliError::parse(&vpath, "expected a number"))?,
        (None, Some(v)) => v,
        (None, None) => return Err(CliError::parse(path, "missing field \"v\"")),
    };
    if !(0.0..=1.0).contains(&v) {
        return Err(CliError::parse(&vpath, format!("visibility {v} not in [0, 1]")));
    }
    Ok(v)
}

fn kind<'a>(obj: &'a Map<String, Value>, path: &str) -> CliResult<&'a str> {
    required(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| CliError::parse(&format!("{path}.kind"), "expected a string"))
}

fn require_params(params: GameParams, n: Option<usize>, d: Option<usize>, path: &str, what: &str) -> CliResult<()> {
    if n.is_some_and(|n| n != params.n()) || d.is_some_and(|d| d != params.d()) {
        let want = match (n, d) {
            (Some(n), Some(d)) => format!("(n, d) = ({n}, {d})"),
            (Some(n), None) => format!("n = {n}"),
            (None, Some(d)) => format!("d = {d}"),
            (None, None) => unreachable!(),
        };
        return Err(CliError::parse(
            path,
            format!("{what} needs {want}, scenario has ({}, {})", params.n(), params.d()),
        ));
    }
    Ok(())
}

fn parse_state(value: &Value, params: GameParams) -> CliResult<DensityMatrix> {
    let path = "state";
    if value.is_array() {
        let m = parse_matrix(value, path, Some(params.num_outcomes()), Some(params.num_outcomes()))?;
        return DensityMatrix::new(m).map_err(|e| CliError::at(path, e));
    }
    let obj = object(value, path, &["kind", "v"])?;
    let (n, d) = (params.n(), params.d());
    let at = |e| CliError::at(path, e);
    match kind(obj, path)? {
        "ghz" | "noisy_ghz" => {
            let default = (kind(obj, path)? == "ghz").then_some(1.0);
            let v = parse_visibility(obj, path, default)?;
            with_white_noise(&ghz_state(n, d).map_err(at)?, v).map_err(at)
        }
        "w" => {
            require_params(params, Some(3), Some(2), path, "the W state")?;
            with_white_noise(&w_state(), parse_visibility(obj, path, Some(1.0))?).map_err(at)
        }
        "dicke" => {
            require_params(params, Some(4), Some(2), path, "the Dicke state")?;
            with_white_noise(&dicke_state(), parse_visibility(obj, path, Some(1.0))?).map_err(at)
        }
        "max_entangled" => {
            require_params(params, Some(2), None, path, "the maximally entangled state")?;
            with_white_noise(&max_entangled(d).map_err(at)?, parse_visibility(obj, path, Some(1.0))?)
                .map_err(at)
        }
        "maximally_mixed" => DensityMatrix::maximally_mixed(params.num_outcomes()).map_err(at),
        other => Err(CliError::parse(
            &format!("{path}.kind"),
            format!("unknown state \"{other}\" (expected ghz, noisy_ghz, w, dicke, max_entangled or maximally_mixed)"),
        )),
    }
}

fn parse_channels(value: &Value, params: GameParams) -> CliResult<Vec<ChannelFamily>> {
    let path = "channels";
    let (n, d) = (params.n(), params.d());
    if let Some(parties) = value.as_array() {
        if parties.len() != n {
            return Err(CliError::parse(path, format!("expected {n} parties, got {}", parties.len())));
        }
        return parties
            .iter()
            .enumerate()
            .map(|(k, party)| {
                let kpath = format!("{path}[{k}]");
                let xs = array_of_len(party, &kpath, d)?;
                let mut maps = Vec::with_capacity(d * d);
                for (x, row) in xs.iter().enumerate() {
                    let xpath = format!("{kpath}[{x}]");
                    for (y, kraus) in array_of_len(row, &xpath, d)?.iter().enumerate() {
                        let ypath = format!("{xpath}[{y}]");
                        let list = kraus
                            .as_array()
                            .ok_or_else(|| CliError::parse(&ypath, "expected a list of Kraus operators"))?;
                        let ops = list
                            .iter()
                            .enumerate()
                            .map(|(i, m)| parse_matrix(m, &format!("{ypath}[{i}]"), Some(d), None))
                            .collect::<CliResult<Vec<_>>>()?;
                        maps.push(Channel::new(ops).map_err(|e| CliError::at(&ypath, e))?);
                    }
                }
                ChannelFamily::new(k, d, maps).map_err(|e| CliError::at(&kpath, e))
            })
            .collect();
    }
    let obj = object(value, path, &["kind"])?;
    let at = |e| CliError::at(path, e);
    match kind(obj, path)? {
        "clock_shift" => clock_shift_channels(n, d).map_err(at),
        "appendix_d" => {
            require_params(params, Some(2), None, path, "the appendix_d channels")?;
            appendix_d_channels(d).map_err(at)
        }
        other => Err(CliError::parse(
            &format!("{path}.kind"),
            format!("unknown channels \"{other}\" (expected clock_shift or appendix_d)"),
        )),
    }
}

fn parse_povm(value: &Value, params: GameParams) -> CliResult<Povm> {
    let path = "povm";
    let dim = params.num_outcomes();
    if let Some(items) = value.as_array() {
        if items.len() != dim {
            return Err(CliError::parse(path, format!("expected {dim} elements, got {}", items.len())));
        }
        let elements = items
            .iter()
            .enumerate()
            .map(|(b, m)| parse_matrix(m, &format!("{path}[{b}]"), Some(dim), Some(dim)))
            .collect::<CliResult<Vec<_>>>()?;
        return Povm::new(elements).map_err(|e| CliError::at(path, e));
    }
    let obj = object(value, path, &["kind", "v", "m"])?;
    let at = |e| CliError::at(path, e);
    match kind(obj, path)? {
        "ghz_basis" => ghz_basis_measurement(params.n(), params.d()).map_err(at),
        "noisy_bsm" => {
            require_params(params, Some(2), None, path, "noisy_bsm")?;
            noisy_bsm(params.d(), parse_visibility(obj, path, None)?).map_err(at)
        }
        "coloured_bsm" => {
            require_params(params, Some(2), Some(2), path, "coloured_bsm")?;
            coloured_noise_bsm(parse_visibility(obj, path, None)?).map_err(at)
        }
        "appendix_d" => {
            require_params(params, Some(2), None, path, "the appendix_d measurement")?;
            let m = parse_usize(required(obj, "m", path)?, "povm.m")?;
            appendix_d_measurement(params.d(), m).map_err(at)
        }
        other => Err(CliError::parse(
            &format!("{path}.kind"),
            format!("unknown measurement \"{other}\" (expected ghz_basis, noisy_bsm, coloured_bsm or appendix_d)"),
        )),
    }
}

fn array_of_len<'a>(value: &'a Value, path: &str, len: usize) -> CliResult<&'a Vec<Value>> {
    let items = value
        .as_array()
        .ok_or_else(|| CliError::parse(path, "expected an array"))?;
    if items.len() != len {
        return Err(CliError::parse(path, format!("expected {len} entries, got {}", items.len())));
    }
    Ok(items)
}

fn parse_entry(value: &Value, path: &str, i: usize, j: usize) -> CliResult<C64> {
    let bad = || CliError::parse(path, format!("entry ({i}, {j}) is not a number or [re, im] pair"));
    if let Some(re) = value.as_f64() {
        return Ok(c(re, 0.0));
    }
    match value.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(c(re.as_f64().ok_or_else(bad)?, im.as_f64().ok_or_else(bad)?)),
        _ => Err(bad()),
    }
}

/// Row-major complex matrix with optional shape constraints.
pub fn parse_matrix(value: &Value, path: &str, rows: Option<usize>, cols: Option<usize>) -> CliResult<CMat> {
    let row_values = value
        .as_array()
        .ok_or_else(|| CliError::parse(path, "expected a matrix (array of rows)"))?;
    if row_values.is_empty() {
        return Err(CliError::parse(path, "matrix has no rows"));
    }
    if let Some(r) = rows.filter(|&r| r != row_values.len()) {
        return Err(CliError::parse(path, format!("matrix has {} rows, expected {r}", row_values.len())));
    }
    let width = cols.unwrap_or_else(|| row_values[0].as_array().map_or(0, Vec::len));
    if width == 0 {
        return Err(CliError::parse(path, "row 0 is empty or not an array"));
    }
    let mut m = CMat::zeros(row_values.len(), width);
    for (i, row) in row_values.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| CliError::parse(path, format!("row {i} is not an array")))?;
        if entries.len() != width {
            return Err(CliError::parse(
                path,
                format!("row {i} has {} entries, expected {width}", entries.len()),
            ));
        }
        for (j, e) in entries.iter().enumerate() {
            m[(i, j)] = parse_entry(e, path, i, j)?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sdi_core::score;

    fn ghz_doc(n: usize, d: usize, state: Value) -> Value {
        json!({
            "params": {"n": n, "d": d},
            "state": state,
            "channels": {"kind": "clock_shift"},
            "povm": {"kind": "ghz_basis"}
        })
    }

    #[test]
    fn catalog_scenario_scores() {
        let s = ScenarioFile::from_value(&ghz_doc(2, 3, json!({"kind": "ghz"}))).unwrap();
        assert!((score(&s.strategy).unwrap().score - 1.0).abs() < 1e-12);
        let s = ScenarioFile::from_value(&ghz_doc(3, 2, json!({"kind": "noisy_ghz", "v": 0.5}))).unwrap();
        assert!((score(&s.strategy).unwrap().score - 0.5625).abs() < 1e-12);
    }

    #[test]
    fn explicit_round_trip_is_bit_stable() {
        let s = ScenarioFile::from_value(&ghz_doc(2, 2, json!({"kind": "noisy_ghz", "v": 0.3}))).unwrap();
        let text = serde_json::to_string(&s.to_value()).unwrap();
        let back = ScenarioFile::from_json_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(
            score(&back.strategy).unwrap().score.to_bits(),
            score(&s.strategy).unwrap().score.to_bits()
        );
    }

    #[test]
    fn errors_name_the_field() {
        let s = ScenarioFile::from_value(&ghz_doc(2, 2, json!({"kind": "ghz"}))).unwrap();
        let mut v = s.to_value();
        v["povm"][3][1] = json!([[0, 0], [0, 0], [0, 0]]);
        let err = ScenarioFile::from_value(&v).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("povm[3]"), "{err}");

        let err = ScenarioFile::from_value(&ghz_doc(2, 2, json!({"kind": "noisy_ghz"}))).unwrap_err();
        assert!(err.to_string().starts_with("state"), "{err}");
        let err = ScenarioFile::from_value(&ghz_doc(2, 2, json!({"kind": "w"}))).unwrap_err();
        assert!(err.to_string().contains("W state"));
        let mut v = ghz_doc(2, 2, json!({"kind": "ghz"}));
        v["extra"] = json!(1);
        assert!(ScenarioFile::from_value(&v).unwrap_err().to_string().contains("scenario.extra"));
    }

    #[test]
    fn invalid_operators_are_parse_errors_with_paths() {
        let s = ScenarioFile::from_value(&ghz_doc(2, 2, json!({"kind": "ghz"}))).unwrap();
        let mut v = s.to_value();
        v["channels"][1][0][1][0][0][0] = json!([2.0, 0.0]);
        let err = ScenarioFile::from_value(&v).unwrap_err();
        assert!(err.to_string().starts_with("channels[1][0][1]"), "{err}");
        let mut v = s.to_value();
        v["povm"][0][0][0] = json!([0.9, 0.0]);
        assert!(ScenarioFile::from_value(&v).unwrap_err().to_string().starts_with("povm"));
    }

    #[test]
    fn size_guard_maps_to_its_own_code() {
        let err = ScenarioFile::from_value(&ghz_doc(5, 3, json!({"kind": "ghz"}))).unwrap_err();
        assert_eq!(err.exit_code(), 5);
    }
}
