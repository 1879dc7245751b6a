//! JSON and CSV encodings. JSON floats carry 17 significant digits so that
//! identical runs produce identical bytes; CSV floats use the shortest
//! round-trip form.

use std::io::Write;

use lmk_core::exact::{parse_rational, Rational, TPoly};
use lmk_core::{CoeffTables, Family};
use serde_json::{json, Number, Value};

use crate::CliError;

/// `x` in scientific notation with 17 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON number with 17 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(sci(x).parse::<Number>().expect("formatted float is a JSON number"))
    } else {
        Value::String(x.to_string())
    }
}

/// Shortest decimal that parses back to `x`.
pub fn short(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn rational_list(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(r.to_string())).collect())
}

pub fn poly_value(p: &TPoly) -> Value {
    rational_list(p.coeffs())
}

fn poly_list(v: &[TPoly]) -> Value {
    Value::Array(v.iter().map(poly_value).collect())
}

/// Polynomials are coefficient lists in ascending powers of `t`; every
/// rational is a string `"p/q"` or `"p"`.
pub fn tables_to_json(t: &CoeffTables) -> Value {
    json!({
        "family": t.family.name(),
        "m": t.m,
        "k2": t.k2.to_string(),
        "order": t.order,
        "a": poly_list(&t.a),
        "b": poly_list(&t.b),
        "p": poly_list(&t.p),
        "q": poly_list(&t.q),
        "mu": rational_list(&t.mu),
        "eta": rational_list(&t.eta),
    })
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Usage(format!("malformed tables: {}", msg.into()))
}

fn rationals_from(v: &Value, key: &str) -> Result<Vec<Rational>, CliError> {
    v.as_array()
        .ok_or_else(|| bad(format!("{key} is not an array")))?
        .iter()
        .map(|x| {
            let s = x.as_str().ok_or_else(|| bad(format!("{key} holds a non-string")))?;
            parse_rational(s).map_err(|e| bad(e.to_string()))
        })
        .collect()
}

fn polys_from(v: &Value, key: &str) -> Result<Vec<TPoly>, CliError> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| bad(format!("missing {key}")))?
        .iter()
        .map(|p| rationals_from(p, key).map(TPoly::from_coeffs))
        .collect()
}

pub fn tables_from_json(v: &Value) -> Result<CoeffTables, CliError> {
    let family = match v.get("family").and_then(Value::as_str) {
        Some("lame") => Family::Lame,
        Some("mathieu") => Family::Mathieu,
        _ => return Err(bad("family must be \"lame\" or \"mathieu\"")),
    };
    let m = v.get("m").and_then(Value::as_u64).ok_or_else(|| bad("missing m"))? as u32;
    let order = v.get("order").and_then(Value::as_u64).ok_or_else(|| bad("missing order"))? as usize;
    let k2 = v.get("k2").and_then(Value::as_str).ok_or_else(|| bad("missing k2"))?;
    let k2 = parse_rational(k2).map_err(|e| bad(e.to_string()))?;
    let t = CoeffTables {
        family,
        m,
        k2,
        order,
        a: polys_from(v, "a")?,
        b: polys_from(v, "b")?,
        p: polys_from(v, "p")?,
        q: polys_from(v, "q")?,
        mu: rationals_from(v.get("mu").ok_or_else(|| bad("missing mu"))?, "mu")?,
        eta: rationals_from(v.get("eta").ok_or_else(|| bad("missing eta"))?, "eta")?,
    };
    let n = order + 1;
    if [t.a.len(), t.b.len(), t.p.len(), t.q.len(), t.mu.len(), t.eta.len()].iter().any(|&l| l != n) {
        return Err(bad(format!("every sequence must have order + 1 = {n} entries")));
    }
    Ok(t)
}

/// One row per coefficient: `series,s,power,value`, with an empty power
/// for the scalar sequences.
pub fn write_tables_csv<W: Write>(t: &CoeffTables, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["series", "s", "power", "value"])?;
    for (name, seq) in [("a", &t.a), ("b", &t.b), ("p", &t.p), ("q", &t.q)] {
        for (s, poly) in seq.iter().enumerate() {
            for (k, c) in poly.coeffs().iter().enumerate() {
                w.write_record([name, &s.to_string(), &k.to_string(), &c.to_string()])?;
            }
        }
    }
    for (name, seq) in [("mu", &t.mu), ("eta", &t.eta)] {
        for (s, c) in seq.iter().enumerate() {
            w.write_record([name, &s.to_string(), "", &c.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use lmk_core::exact::rat;
    use lmk_core::gen_lame_tables;

    #[test]
    fn seventeen_digits() {
        assert_eq!(sci(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-180.25).to_string(), "-1.8025000000000000e+2");
        assert_eq!(short(0.1), "0.1");
        assert_eq!(short(1.5e-25), "1.5e-25");
        assert_eq!(short(1.5e-25).parse::<f64>().unwrap(), 1.5e-25);
    }

    #[test]
    fn tables_round_trip() {
        let t = gen_lame_tables(2, &rat(1, 3), 3).unwrap();
        let v = tables_to_json(&t);
        assert_eq!(tables_from_json(&v).unwrap(), t);
        let mut broken = v.clone();
        broken["mu"] = json!(["1/2"]);
        assert!(tables_from_json(&broken).is_err());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let t = gen_lame_tables(0, &rat(1, 2), 1).unwrap();
        let mut buf = Vec::new();
        write_tables_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("series,s,power,value\n"));
        assert!(text.contains("a,1,2,3/64\n"));
        assert!(text.contains("mu,0,,1/2\n"));
    }
}
