//! Number formatting and CSV output.

use std::io::{Read, Write};

use gmedim_core::scan::{RegionPoint, ThresholdRow};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Significant digits kept in printed reports.
pub const SIG_DIGITS: usize = 12;

/// Rounds `x` to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Rounds every float in a JSON tree. Integers are left alone.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Pretty JSON with floats rounded for display.
pub fn to_report_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_json(&mut v);
    serde_json::to_string_pretty(&v)
}

/// One `threshold-table` row; header `n,d,p_star`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRecord {
    pub n: usize,
    pub d: usize,
    pub p_star: f64,
}

impl From<&ThresholdRow> for ThresholdRecord {
    fn from(r: &ThresholdRow) -> Self {
        Self {
            n: r.n,
            d: r.d,
            p_star: round_sig(r.p_star),
        }
    }
}

/// One `region-scan` row; header `alpha,beta,f_q,f_fid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub alpha: f64,
    pub beta: f64,
    pub f_q: usize,
    pub f_fid: usize,
}

impl From<&RegionPoint> for RegionRecord {
    fn from(p: &RegionPoint) -> Self {
        Self {
            alpha: round_sig(p.alpha),
            beta: round_sig(p.beta),
            f_q: p.f_q,
            f_fid: p.f_fid,
        }
    }
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>, R: Read>(input: R) -> csv::Result<Vec<T>> {
    csv::Reader::from_reader(input).deserialize().collect()
}
