//! The quintuple input format.
//!
//! ```json
//! {"family": "linear"}
//! {"family": "type-a", "a": "1", "b": "2", "c": "3/2"}
//! {"w": [[[["0","0"],["0","1"]], ...]], "field": "Fp:101"}
//! ```
//!
//! Rationals are strings `"p/q"` (plain JSON integers are accepted too). The
//! nested `w` array is indexed `w[a][b][c][d]` with basis index 0 = `x`,
//! 1 = `y`. `field` is `"Q"` (default) or `"Fp:<prime>"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::quintuple::{build_linear_quadric_over, build_type_a, Quintuple};
use crate::scalar::{format_rational, parse_rational, Field};

#[derive(Clone, Debug, PartialEq)]
pub enum QuintupleSpec {
    Linear,
    TypeA { a: BigRational, b: BigRational, c: BigRational },
    Explicit { w: Vec<BigRational> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuintupleFile {
    pub spec: QuintupleSpec,
    pub field: Field,
}

pub fn parse_field(tag: &str) -> Result<Field> {
    let tag = tag.trim();
    if tag == "Q" {
        return Ok(Field::Rational);
    }
    if let Some(p) = tag.strip_prefix("Fp:") {
        let p: u64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad prime in field {tag:?}")))?;
        return Field::prime(p);
    }
    Err(Error::Parse(format!("unknown field {tag:?} (expected \"Q\" or \"Fp:<prime>\")")))
}

fn rational_of(v: &Value, what: &str) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(BigInt::from(i)))
            .ok_or_else(|| Error::Parse(format!("{what}: only integers may be given as JSON numbers"))),
        _ => Err(Error::Parse(format!("{what}: expected a rational string"))),
    }
}

fn flatten_w(v: &Value) -> Result<Vec<BigRational>> {
    fn go(v: &Value, depth: usize, out: &mut Vec<BigRational>) -> Result<()> {
        if depth == 4 {
            out.push(rational_of(v, "w entry")?);
            return Ok(());
        }
        let arr = v.as_array().ok_or_else(|| Error::Parse("w must be a 2x2x2x2 nested array".into()))?;
        if arr.len() != 2 {
            return Err(Error::Parse(format!("w has a level of length {} (expected 2)", arr.len())));
        }
        for x in arr {
            go(x, depth + 1, out)?;
        }
        Ok(())
    }
    let mut out = Vec::with_capacity(16);
    go(v, 0, &mut out)?;
    Ok(out)
}

fn nest_w(w: &[BigRational]) -> Value {
    let s = |i: usize| Value::String(format_rational(&w[i]));
    let lvl = |base: usize| {
        json!([
            [[s(base), s(base + 1)], [s(base + 2), s(base + 3)]],
            [[s(base + 4), s(base + 5)], [s(base + 6), s(base + 7)]]
        ])
    };
    json!([lvl(0), lvl(8)])
}

impl QuintupleFile {
    pub fn parse(text: &str) -> Result<QuintupleFile> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        QuintupleFile::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<QuintupleFile> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("top level must be an object".into()))?;
        for k in obj.keys() {
            if !["family", "a", "b", "c", "w", "field"].contains(&k.as_str()) {
                return Err(Error::Parse(format!("unknown key {k:?}")));
            }
        }
        let field = match obj.get("field") {
            None => Field::Rational,
            Some(Value::String(s)) => parse_field(s)?,
            Some(_) => return Err(Error::Parse("field must be a string".into())),
        };
        let spec = match (obj.get("family"), obj.get("w")) {
            (Some(_), Some(_)) => return Err(Error::Parse("give either \"family\" or \"w\", not both".into())),
            (None, Some(w)) => QuintupleSpec::Explicit { w: flatten_w(w)? },
            (Some(Value::String(f)), None) => match f.as_str() {
                "linear" => QuintupleSpec::Linear,
                "type-a" => {
                    let get = |k: &str| {
                        obj.get(k).ok_or_else(|| Error::Parse(format!("type-a needs \"{k}\""))).and_then(|x| rational_of(x, k))
                    };
                    QuintupleSpec::TypeA { a: get("a")?, b: get("b")?, c: get("c")? }
                }
                other => return Err(Error::Parse(format!("unknown family {other:?}"))),
            },
            (Some(_), None) => return Err(Error::Parse("family must be a string".into())),
            (None, None) => return Err(Error::Parse("missing \"family\" or \"w\"".into())),
        };
        if !matches!(spec, QuintupleSpec::TypeA { .. }) && ["a", "b", "c"].iter().any(|k| obj.contains_key(*k)) {
            return Err(Error::Parse("parameters a, b, c only apply to family type-a".into()));
        }
        Ok(QuintupleFile { spec, field })
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("field".into(), Value::String(self.field.tag()));
        match &self.spec {
            QuintupleSpec::Linear => {
                m.insert("family".into(), json!("linear"));
            }
            QuintupleSpec::TypeA { a, b, c } => {
                m.insert("family".into(), json!("type-a"));
                m.insert("a".into(), json!(format_rational(a)));
                m.insert("b".into(), json!(format_rational(b)));
                m.insert("c".into(), json!(format_rational(c)));
            }
            QuintupleSpec::Explicit { w } => {
                m.insert("w".into(), nest_w(w));
            }
        }
        Value::Object(m)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn to_quintuple(&self) -> Result<Quintuple> {
        let f = &self.field;
        match &self.spec {
            QuintupleSpec::Linear => Ok(build_linear_quadric_over(f)),
            QuintupleSpec::TypeA { a, b, c } => {
                build_type_a(&f.from_rational(a)?, &f.from_rational(b)?, &f.from_rational(c)?)
            }
            QuintupleSpec::Explicit { w } => {
                let vals = w.iter().map(|x| f.from_rational(x)).collect::<Result<Vec<_>>>()?;
                Quintuple::from_fn(f, |a, b, c, d| vals[8 * a + 4 * b + 2 * c + d].clone())
            }
        }
    }
}

/// Canonical JSON text of a quintuple's tensor (field tag plus entries).
pub fn canonical_tensor_json(q: &Quintuple) -> String {
    let entries: Vec<Value> = q.w().entries().iter().map(|x| Value::String(x.to_string())).collect();
    let v = json!({ "field": q.field().tag(), "w": entries });
    serde_json::to_string(&v).expect("serializable")
}

/// SHA-256 of the canonical tensor, hex encoded.
pub fn input_digest(q: &Quintuple) -> String {
    hex::encode(Sha256::digest(canonical_tensor_json(q).as_bytes()))
}
