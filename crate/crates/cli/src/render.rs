//! `--pretty` output: indented key/value lines, matrices as aligned
//! decimal columns with 10 significant digits.

use std::fmt::Write;

use serde_json::{Map, Value};

const DIGITS: i32 = 10;

pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) if is_matrix(m) => matrix(&mut out, m, 0),
        Value::Object(m) => object(&mut out, m, 0),
        other => {
            let _ = writeln!(out, "{}", scalar(other));
        }
    }
    out
}

fn is_matrix(m: &Map<String, Value>) -> bool {
    m.contains_key("n") && m.get("rows").is_some_and(Value::is_array)
}

fn object(out: &mut String, m: &Map<String, Value>, indent: usize) {
    let pad = " ".repeat(indent);
    for (k, v) in m {
        match v {
            Value::Object(inner) if is_matrix(inner) => {
                let _ = writeln!(out, "{pad}{k}:");
                matrix(out, inner, indent + 2);
            }
            Value::Object(inner) => {
                let _ = writeln!(out, "{pad}{k}:");
                object(out, inner, indent + 2);
            }
            Value::Array(items) if items.iter().any(Value::is_object) => {
                let _ = writeln!(out, "{pad}{k}:");
                for item in items {
                    let _ = writeln!(out, "{pad}  -");
                    match item {
                        Value::Object(inner) => object(out, inner, indent + 4),
                        other => {
                            let _ = writeln!(out, "{pad}    {}", scalar(other));
                        }
                    }
                }
            }
            other => {
                let _ = writeln!(out, "{pad}{k}: {}", scalar(other));
            }
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => number(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A single value to 10 significant digits.
pub fn number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if !(-4..DIGITS).contains(&e) {
        return format!("{:.*e}", (DIGITS - 1) as usize, x);
    }
    let s = format!("{:.*}", (DIGITS - 1 - e) as usize, x);
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

fn matrix(out: &mut String, m: &Map<String, Value>, indent: usize) {
    let pad = " ".repeat(indent);
    let rows: Vec<Vec<f64>> = m["rows"]
        .as_array()
        .map(|rs| {
            rs.iter()
                .map(|r| r.as_array().map(|r| r.iter().filter_map(Value::as_f64).collect()).unwrap_or_default())
                .collect()
        })
        .unwrap_or_default();
    if let Some(s) = m.get("structure").and_then(Value::as_str) {
        let _ = writeln!(out, "{pad}structure: {s}");
    }
    for line in aligned(&rows) {
        let _ = writeln!(out, "{pad}{line}");
    }
}

/// One fixed-point format for the whole matrix, chosen so the largest entry
/// shows 10 significant digits; scientific notation outside that range.
pub fn aligned(rows: &[Vec<f64>]) -> Vec<String> {
    let big = rows.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
    let e = if big > 0.0 { big.log10().floor() as i32 } else { 0 };
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| {
                    if (-4..DIGITS).contains(&e) {
                        format!("{:.*}", (DIGITS - 1 - e) as usize, x)
                    } else {
                        format!("{:.*e}", (DIGITS - 1) as usize, x)
                    }
                })
                .collect()
        })
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    cells
        .iter()
        .map(|r| r.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join("  "))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(number(-10.0 / 3.0), "-3.333333333");
        assert_eq!(number(7.0), "7");
        assert_eq!(number(0.02726958), "0.02726958");
        assert_eq!(number(1.5e-7), "1.500000000e-7");
    }

    #[test]
    fn matrix_columns_line_up() {
        let lines = aligned(&[vec![7.0, -10.0 / 3.0], vec![-10.0 / 3.0, 7.0]]);
        assert_eq!(lines, vec![" 7.000000000  -3.333333333", "-3.333333333   7.000000000"]);
    }

    #[test]
    fn nested_reports() {
        let v: Value = serde_json::from_str(
            r#"{"verdict":"fail","witness":{"matrix":{"n":1,"rows":[[2.5]],"structure":"general"},"params":[0.5,2]}}"#,
        )
        .unwrap();
        let s = pretty(&v);
        assert!(s.contains("verdict: fail\n"), "{s}");
        assert!(s.contains("    structure: general\n    2.500000000\n"), "{s}");
        assert!(s.contains("  params: [0.5, 2]\n"), "{s}");
    }
}
