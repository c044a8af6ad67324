//! JSON encodings shared by all subcommands.

use nambu_core::brieskorn::ModuliVector;
use nambu_core::poly::{format_q, variable_names, Monomial, Polynomial, Series1, Q};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

/// Integers become numbers, everything else a `"p/q"` string.
pub fn rational(v: &Q) -> Value {
    if v.is_integer() {
        if let Some(i) = v.numer().to_i64() {
            return json!(i);
        }
    }
    json!(format_q(v))
}

pub fn rationals(v: &[Q]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

/// Coefficients lowest degree first, trailing zeros dropped, never empty.
pub fn series(s: &Series1) -> Value {
    let mut c = s.coeffs().to_vec();
    while c.len() > 1 && c.last().is_some_and(|z| *z == Q::from_integer(0.into())) {
        c.pop();
    }
    if c.is_empty() {
        c.push(Q::from_integer(0.into()));
    }
    rationals(&c)
}

pub fn moduli(m: &ModuliVector) -> Value {
    let mut out = Map::new();
    for (i, s) in m.series.iter().enumerate() {
        out.insert(format!("c{i}"), series(s));
    }
    if let Some(psi) = &m.psi {
        out.insert("psi".into(), series(psi));
    }
    Value::Object(out)
}

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub struct Names(Vec<String>);

impl Names {
    pub fn new(n: usize) -> Self {
        Names(variable_names(n, n + 1))
    }

    pub fn all(&self) -> &[String] {
        &self.0
    }

    pub fn poly(&self, p: &Polynomial) -> Value {
        json!(p.to_string_with(&self.0))
    }

    pub fn monomial(&self, m: &Monomial) -> Value {
        json!(m.display_with(&self.0))
    }
}

/// A JSON document with the schema tag in front.
pub fn document(fields: Map<String, Value>) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!("1"));
    out.extend(fields);
    Value::Object(out)
}

/// `key: value` lines for the top-level fields, schema tag omitted.
pub fn text(doc: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = doc {
        for (k, v) in map.iter().filter(|(k, _)| k.as_str() != "schema") {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
    }
    out
}
