//! Loading functions, matrices and spectrum tuples.
//!
//! Every loader takes either a path or the JSON text itself (anything
//! starting with `{`).

use std::fs;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use nnpres::{FunctionSpec, Matrix, SpectrumTuple};

fn load_json<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {what} file `{arg}`"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {what} `{arg}`"))
}

pub fn load_function(arg: &str) -> Result<FunctionSpec> {
    load_json(arg, "function")
}

/// Parses and verifies the declared structure tag.
pub fn load_matrix(arg: &str) -> Result<Matrix> {
    load_json(arg, "matrix")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleJson {
    tuple: Vec<f64>,
}

pub fn load_tuple(arg: &str) -> Result<SpectrumTuple> {
    let values = if arg.trim_start().starts_with('{') || arg.ends_with(".json") {
        load_json::<TupleJson>(arg, "tuple")?.tuple
    } else {
        parse_reals(arg)?
    };
    Ok(SpectrumTuple::real(&values)?)
}

/// Comma-separated reals.
pub fn parse_reals(s: &str) -> Result<Vec<f64>> {
    let out = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().with_context(|| format!("`{t}` is not a number"))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(v) = out.iter().find(|v| !v.is_finite()) {
        bail!("{v} is not finite");
    }
    Ok(out)
}
