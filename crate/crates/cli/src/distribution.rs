//! Observed correlations as CSV: `x_1..x_n, y_1..y_n, b_1..b_n, p`, one row
//! per `(x, y, b)` with `p = P(b | x, y)`. Missing rows count as zero.

use sdi_core::scenario::Correlations;
use sdi_core::GameParams;

use crate::error::{CliError, CliResult};

pub fn expected_header(n: usize) -> Vec<String> {
    let mut cols = Vec::with_capacity(3 * n + 1);
    for prefix in ["x", "y", "b"] {
        cols.extend((1..=n).map(|k| format!("{prefix}_{k}")));
    }
    cols.push("p".into());
    cols
}

pub fn parse_distribution(text: &str, params: GameParams, source: &str) -> CliResult<Correlations> {
    let n = params.n();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::parse(source, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    let expected = expected_header(n);
    if header != expected {
        return Err(CliError::parse(
            source,
            format!("header {:?} does not match {:?}", header.join(","), expected.join(",")),
        ));
    }
    let mut dist = Correlations::zeros(params);
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| CliError::parse(&format!("{source}:{line}"), e))?;
        let int = |j: usize| {
            record[j].parse::<usize>().map_err(|_| {
                CliError::parse(
                    &format!("{source}:{line}"),
                    format!("column {} = {:?} is not a nonnegative integer", expected[j], &record[j]),
                )
            })
        };
        let digits = (0..3 * n).map(int).collect::<CliResult<Vec<usize>>>()?;
        let p: f64 = record[3 * n].parse().map_err(|_| {
            CliError::parse(&format!("{source}:{line}"), format!("p = {:?} is not a number", &record[3 * n]))
        })?;
        if !p.is_finite() {
            return Err(CliError::parse(&format!("{source}:{line}"), "p is not finite"));
        }
        dist.add(&digits[..n], &digits[n..2 * n], &digits[2 * n..], p)
            .map_err(|e| CliError::parse(&format!("{source}:{line}"), e))?;
    }
    Ok(dist)
}

/// CSV for a full distribution table, in input-tuple then outcome order.
pub fn distribution_to_csv(dist: &Correlations) -> String {
    let params = dist.params();
    let mut out = expected_header(params.n()).join(",");
    out.push('\n');
    for t in 0..params.num_inputs() {
        let (x, y) = params.input_tuple(t);
        for b_idx in 0..params.num_outcomes() {
            let b = params.outcome_string(b_idx);
            let cells: Vec<String> = x.iter().chain(&y).chain(&b).map(usize::to_string).collect();
            out.push_str(&format!("{},{}\n", cells.join(","), dist.get(&x, &y, &b)));
        }
    }
    out
}
