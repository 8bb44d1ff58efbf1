//! Number formatting shared by all text outputs.

use crate::{Error, Result};

/// Formats `x` like C's `%.12g`: twelve significant digits, trailing zeros
/// stripped, exponent notation outside `1e-4 <= |x| < 1e12`. Infinities
/// print as `inf` / `-inf`.
pub fn sig12(x: f64) -> String {
    const PREC: i32 = 12;
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    // Round to PREC significant digits first; the exponent of the rounded
    // value decides the style.
    let sci = format!("{:.*e}", (PREC - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PREC).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PREC - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Parses a squared-radius cap: a decimal or `inf`.
pub fn parse_cap(s: &str) -> Result<f64> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("+inf") {
        return Ok(f64::INFINITY);
    }
    let v: f64 = t
        .parse()
        .map_err(|_| Error::parse(0, format!("invalid cap `{s}`")))?;
    if v.is_nan() {
        return Err(Error::parse(0, "cap must not be NaN"));
    }
    Ok(v)
}
