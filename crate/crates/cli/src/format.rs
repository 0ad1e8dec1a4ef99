use std::io::{self, Write};
use std::str::FromStr;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use parkmodel::PolyP;
use serde_json::{json, Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Accepts `a/b` or a bare integer. Decimals are refused.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num =
        BigInt::from_str(num).map_err(|_| format!("`{s}` is not an integer or a/b fraction"))?;
    let den =
        BigInt::from_str(den).map_err(|_| format!("`{s}` is not an integer or a/b fraction"))?;
    if den.is_zero() {
        return Err(format!("`{s}` has a zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Terminating expansions are exact; others are rounded to 12 places.
pub fn decimal_str(r: &BigRational) -> String {
    const EXACT_LIMIT: usize = 40;
    const ROUNDED: usize = 12;
    let neg = r.is_negative();
    let r = r.abs();
    let den = r.denom().clone();
    let int = r.numer() / &den;
    let mut rem = r.numer() % &den;
    let mut digits = String::new();
    while !rem.is_zero() && digits.len() < EXACT_LIMIT {
        rem *= 10;
        digits.push(char::from(b'0' + (&rem / &den).to_u8().expect("digit")));
        rem %= &den;
    }
    let body = if rem.is_zero() {
        if digits.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{digits}")
        }
    } else {
        let scale = BigInt::from(10).pow(ROUNDED as u32);
        let scaled = (r * BigRational::from_integer(scale.clone()))
            .round()
            .to_integer();
        let s = format!("{:0>width$}", scaled.to_string(), width = ROUNDED + 1);
        let (i, f) = s.split_at(s.len() - ROUNDED);
        format!("{i}.{}", f.trim_end_matches('0'))
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

pub fn big_json(v: impl ToString) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integer literal"))
}

pub fn rational_json(r: &BigRational) -> Value {
    Value::String(rational_str(r))
}

pub fn coeffs_of(poly: &PolyP) -> Vec<BigInt> {
    if poly.is_zero() {
        vec![BigInt::zero()]
    } else {
        poly.coeffs().to_vec()
    }
}

pub fn coeffs_json(poly: &PolyP) -> Value {
    Value::Array(coeffs_of(poly).iter().map(big_json).collect())
}

pub fn coeffs_str(poly: &PolyP) -> String {
    let parts: Vec<String> = coeffs_of(poly).iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub fn document(command: &str, parameters: Value, seed: Option<u64>, rows: Vec<Value>) -> Value {
    json!({
        "meta": {
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "parameters": parameters,
            "seed": seed,
        },
        "rows": rows,
    })
}

pub fn with_fields(mut doc: Value, extra: Map<String, Value>) -> Value {
    if let Value::Object(obj) = &mut doc {
        obj.extend(extra);
    }
    doc
}

pub fn print_json(doc: &Value) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, doc)?;
    writeln!(out)
}

pub fn print_csv(header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/2").unwrap(), q(1, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), q(3, 1));
        assert_eq!(parse_rational("2/4").unwrap(), q(1, 2));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e3").is_err());
        assert_eq!(rational_str(&q(4, 1)), "4/1");
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_str(&q(108464465, 16)), "6779029.0625");
        assert_eq!(decimal_str(&q(3, 1)), "3");
        assert_eq!(decimal_str(&q(1, 3)), "0.333333333333");
        assert_eq!(decimal_str(&q(2, 3)), "0.666666666667");
        assert_eq!(decimal_str(&q(-7, 2)), "-3.5");
        assert_eq!(decimal_str(&q(1, 1 << 20)), "0.00000095367431640625");
    }

    #[test]
    fn coefficient_arrays() {
        let p = PolyP::from_i64s(&[0, 2, -1]);
        assert_eq!(coeffs_str(&p), "[0, 2, -1]");
        assert_eq!(coeffs_json(&PolyP::zero()), json!([0]));
        assert_eq!(serde_json::to_string(&coeffs_json(&p)).unwrap(), "[0,2,-1]");
    }
}
