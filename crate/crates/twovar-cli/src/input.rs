//! Parsing of command-line values and JSON shaping of exact elements.

use crate::Common;
use anyhow::{anyhow, bail, Context, Result};
use num_rational::BigRational;
use serde_json::{json, Value};
use std::fmt::Display;
use twovar::arith::{CycElement, DirichletChar, PadicApprox};
use twovar::io::read_jsonl;
use twovar::iwasawa::PowerSeries2;
use twovar::qexp::QExpansion;
use twovar::ring::Ring;

/// `MODULUS:IMAGES`, images comma separated; `MODULUS` alone is the trivial
/// character.
pub fn parse_char(s: &str) -> Result<DirichletChar> {
    let (m, images) = s.split_once(':').unwrap_or((s, ""));
    let modulus: u64 = m.trim().parse().with_context(|| format!("character modulus in {s:?}"))?;
    if images.trim().is_empty() {
        return Ok(DirichletChar::trivial(modulus));
    }
    let images = images
        .split(',')
        .map(|k| k.trim().parse::<u64>().with_context(|| format!("character image {k:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(DirichletChar::new(modulus, images)?)
}

pub fn parse_coeffs(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|c| c.trim().parse::<i64>().with_context(|| format!("coefficient {c:?}")))
        .collect()
}

/// `@path` reads the first JSON record of a file; anything else is an inline
/// grid, rows (powers of T1) separated by `;` and entries (powers of T2) by `,`.
pub fn parse_series2(s: &str, c: &Common) -> Result<PowerSeries2> {
    if let Some(path) = s.strip_prefix('@') {
        let f = read_jsonl::<PowerSeries2>(path)?.into_iter().next().ok_or_else(|| anyhow!("{path}: no series"))?;
        f.validate()?;
        return Ok(f);
    }
    let grid = s.split(';').map(parse_coeffs).collect::<Result<Vec<_>>>()?;
    if grid.is_empty() {
        bail!("empty grid");
    }
    Ok(PowerSeries2::from_grid(c.p, c.precision, c.caps, &grid)?)
}

fn cyc_generic<R: Ring + Display>(x: &CycElement<R>) -> Value {
    let rational = x.coeffs().iter().skip(1).all(|c| c.is_zero_elem());
    match x.as_base().or_else(|| rational.then(|| &x.coeffs()[0])) {
        Some(b) => Value::String(b.to_string()),
        None => json!({
            "conductor": x.conductor(),
            "coeffs": x.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }),
    }
}

/// Rational values print as "a/b"; genuine cyclotomic ones as
/// {conductor, coefficients in the power basis}.
pub fn cyc_json(x: &CycElement<BigRational>) -> Value {
    cyc_generic(x)
}

pub fn padic_cyc_json(x: &CycElement<PadicApprox>) -> Value {
    cyc_generic(x)
}

pub fn qexp_json<R: Ring>(f: &QExpansion<R>, each: impl Fn(&R) -> Value) -> Value {
    Value::Array(f.coeffs().iter().map(each).collect())
}
