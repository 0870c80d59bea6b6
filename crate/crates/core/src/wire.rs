//! JSON forms of rationals, series, matrices and operators.
//!
//! Object keys come out sorted, so equal values serialize to identical
//! bytes.

use serde_json::{json, Map, Value};

use crate::arith::{format_rational, parse_rational, Matrix, Rational, TruncatedLaurentSeries};
use crate::error::{Error, Result};
use crate::operator::{FinitePotentOperator, JordanTail, SparseOperator};

fn bad(what: &str, v: &Value) -> Error {
    Error::Parse(format!("expected {what}, got {v}"))
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

/// Accepts `"p/q"` strings and JSON integers.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(bad("a rational", v)),
    }
}

fn int_from_json(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad("an integer", v))
}

/// `{"var","min","prec","coeffs":{"k":"q"}}`; `min` equals `prec` for the
/// zero series.
pub fn series_to_json(s: &TruncatedLaurentSeries) -> Value {
    let coeffs: Map<String, Value> = s.terms().map(|(k, c)| (k.to_string(), rational_to_json(c))).collect();
    json!({
        "var": s.var(),
        "min": s.min_degree(),
        "prec": s.precision(),
        "coeffs": coeffs,
    })
}

pub fn series_from_json(v: &Value) -> Result<TruncatedLaurentSeries> {
    let var = v.get("var").and_then(Value::as_str).ok_or_else(|| bad("a series with \"var\"", v))?;
    let prec = int_from_json(v.get("prec").ok_or_else(|| bad("a series with \"prec\"", v))?)?;
    let coeffs = v.get("coeffs").and_then(Value::as_object).ok_or_else(|| bad("a series with \"coeffs\"", v))?;
    let mut terms = Vec::new();
    for (k, c) in coeffs {
        let k: i64 = k.parse().map_err(|_| Error::Parse(format!("invalid exponent {k:?}")))?;
        terms.push((k, rational_from_json(c)?));
    }
    Ok(TruncatedLaurentSeries::new(var, prec, terms))
}

pub fn matrix_to_json(m: &Matrix<Rational>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(rational_to_json).collect())).collect())
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix<Rational>> {
    let rows = v.as_array().ok_or_else(|| bad("a matrix", v))?;
    let rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| bad("a matrix row", r))?.iter().map(rational_from_json).collect())
        .collect::<Result<_>>()?;
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("matrix rows differ in length".into()));
    }
    Ok(Matrix::from_rows(rows))
}

pub fn sparse_to_json(op: &SparseOperator) -> Value {
    Value::Array(op.entries().map(|(i, j, c)| json!([i, j, rational_to_json(c)])).collect())
}

fn sparse_from_json(v: &Value) -> Result<SparseOperator> {
    let arr = v.as_array().ok_or_else(|| bad("an entry list", v))?;
    let mut entries = Vec::new();
    for e in arr {
        match e.as_array().map(Vec::as_slice) {
            Some([i, j, c]) => entries.push((int_from_json(i)?, int_from_json(j)?, rational_from_json(c)?)),
            _ => return Err(bad("an entry [i, j, value]", e)),
        }
    }
    Ok(SparseOperator::new(entries))
}

/// `{"entries":[[i,j,"q"]],"tail":null|{"kind":"jordan_blocks",...}}`. The
/// tail's `"coeffs"` (coefficients of `J, J², …`) is omitted for the plain
/// shift.
pub fn operator_to_json(op: &FinitePotentOperator) -> Value {
    let tail = match op.tail() {
        None => Value::Null,
        Some(t) => {
            let mut m = Map::new();
            m.insert("kind".into(), json!("jordan_blocks"));
            m.insert("block_size".into(), json!(t.block_size()));
            m.insert("start".into(), json!(t.start()));
            if t.coeffs() != [Rational::from_integer(1.into())] {
                m.insert("coeffs".into(), Value::Array(t.coeffs().iter().map(rational_to_json).collect()));
            }
            Value::Object(m)
        }
    };
    json!({ "entries": sparse_to_json(op.finite_part()), "tail": tail })
}

pub fn operator_from_json(v: &Value) -> Result<FinitePotentOperator> {
    let obj = v.as_object().ok_or_else(|| bad("an operator object", v))?;
    let finite = match obj.get("entries") {
        Some(e) => sparse_from_json(e)?,
        None => SparseOperator::zero(),
    };
    let tail = match obj.get("tail") {
        None | Some(Value::Null) => None,
        Some(t) => {
            let kind = t.get("kind").and_then(Value::as_str).unwrap_or("jordan_blocks");
            if kind != "jordan_blocks" {
                return Err(Error::Parse(format!("unknown tail kind {kind:?}")));
            }
            let s = int_from_json(t.get("block_size").ok_or_else(|| bad("a tail with \"block_size\"", t))?)?;
            if s < 1 {
                return Err(Error::Parse("block_size must be positive".into()));
            }
            let start = int_from_json(t.get("start").ok_or_else(|| bad("a tail with \"start\"", t))?)?;
            let coeffs = match t.get("coeffs") {
                None => vec![Rational::from_integer(1.into())],
                Some(c) => c.as_array().ok_or_else(|| bad("a coefficient list", c))?.iter().map(rational_from_json).collect::<Result<_>>()?,
            };
            Some(JordanTail::with_coeffs(s as usize, start, coeffs))
        }
    };
    Ok(FinitePotentOperator::new(finite, tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, parse::parse_series, rat};

    #[test]
    fn series_round_trip() {
        let s = parse_series("1/2*z^-1 + 1 + O(z^8)").unwrap();
        let v = series_to_json(&s);
        assert_eq!(v.to_string(), r#"{"coeffs":{"-1":"1/2","0":"1"},"min":-1,"prec":8,"var":"z"}"#);
        assert_eq!(series_from_json(&v).unwrap(), s);
    }

    #[test]
    fn operator_round_trip() {
        let v: Value = serde_json::from_str(r#"{"entries":[[0,0,"1"],[0,1,"-2/3"]],"tail":{"kind":"jordan_blocks","block_size":3,"start":4}}"#).unwrap();
        let op = operator_from_json(&v).unwrap();
        assert_eq!(op.finite_part().get(0, 1), rat(-2, 3));
        assert_eq!(op.tail().unwrap().block_size(), 3);
        assert_eq!(operator_from_json(&operator_to_json(&op)).unwrap(), op);
        let w = json!({"entries": [[1, 1, "5"]], "tail": {"kind": "jordan_blocks", "block_size": 2, "start": 2, "coeffs": ["2"]}});
        let op = operator_from_json(&w).unwrap();
        assert_eq!(op.finite_part().get(1, 1), int(5));
        assert_eq!(operator_to_json(&op), w);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(operator_from_json(&json!({"entries": [[0, 0]]})).is_err());
        assert!(operator_from_json(&json!({"tail": {"kind": "other", "block_size": 2, "start": 0}})).is_err());
        assert!(series_from_json(&json!({"var": "z"})).is_err());
        assert!(matrix_from_json(&json!([["1"], ["1", "2"]])).is_err());
    }
}
