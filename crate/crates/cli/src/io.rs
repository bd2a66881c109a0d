//! Parsing of command-line values: spaces, vectors and operators.
//!
//! Every value may be given inline or as `@path` to a file holding it.

use std::fs;

use anyhow::{bail, Context, Result};
use bjorth::operators::OperatorJson;
use bjorth::{Exponent, Matrix, NormSpec, Operator, Vector};

/// Inline text, or the contents of the file named after a leading `@`.
pub fn read_arg(raw: &str) -> Result<String> {
    match raw.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(raw.to_string()),
    }
}

fn exponent(raw: &str) -> Result<Exponent> {
    match raw.trim() {
        "inf" | "infinity" | "Inf" => Ok(Exponent::Infinity),
        p => Ok(Exponent::Finite(p.parse().with_context(|| format!("bad exponent {p:?}"))?)),
    }
}

fn numbers(raw: &str) -> Result<Vec<f64>> {
    let raw = raw.trim();
    if raw.starts_with('[') {
        return serde_json::from_str(raw).with_context(|| format!("bad vector {raw:?}"));
    }
    raw.split(',')
        .map(|c| c.trim().parse::<f64>().with_context(|| format!("bad number {c:?} in {raw:?}")))
        .collect()
}

/// A norm: `lp:P:DIM`, `linf:DIM`, `weighted:P:W1,W2,...`, or JSON.
pub fn parse_space(raw: &str) -> Result<NormSpec> {
    let text = read_arg(raw)?;
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).context("bad space JSON");
    }
    let parts: Vec<&str> = text.split(':').collect();
    let spec = match parts.as_slice() {
        ["lp", p, dim] => NormSpec::new(
            bjorth::Family::Lp { p: exponent(p)? },
            dim.parse().with_context(|| format!("bad dimension {dim:?}"))?,
        ),
        ["linf", dim] => NormSpec::l_inf(dim.parse().with_context(|| format!("bad dimension {dim:?}"))?),
        ["weighted", p, w] => NormSpec::weighted(exponent(p)?, numbers(w)?),
        _ => bail!("unrecognized space {text:?}; expected lp:P:DIM, linf:DIM, weighted:P:W,.. or JSON"),
    };
    Ok(spec?)
}

/// A vector: `1,0.5,-2`, a JSON array, or `@file`.
pub fn parse_vector(raw: &str) -> Result<Vector> {
    Ok(Vector::new(numbers(&read_arg(raw)?)?)?)
}

/// An operator: a JSON object with `matrix`, `domain` and `codomain`, or a
/// bare JSON matrix acting on `space`.
pub fn parse_operator(raw: &str, space: Option<&NormSpec>) -> Result<Operator> {
    let text = read_arg(raw)?;
    let text = text.trim();
    if text.starts_with('{') {
        let j: OperatorJson = serde_json::from_str(text).context("bad operator JSON")?;
        return Ok(Operator::new(j.matrix, j.domain, j.codomain)?);
    }
    let m: Matrix = serde_json::from_str(text).context("bad matrix JSON")?;
    let Some(space) = space else {
        bail!("a bare matrix needs --space");
    };
    Ok(Operator::on(m, space.clone())?)
}
