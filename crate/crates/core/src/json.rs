//! JSON encodings of scalars, vectors, matrices, pairs, Fock vectors and labels.
//!
//! Exact scalars are strings such as `"1/2-3i"`; approximate ones are
//! `[re, im]` arrays. Both forms, and plain numbers, are accepted on input.
//! Fock monomials use 1-based directions: `[[1, 2]]` is `h_1(−2)·1`.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::conformal::ModuliClass;
use crate::fock::{FockMonomial, FockVector, QuadLin};
use crate::linalg::{Matrix, Vector};
use crate::orbits::{Family, OrbitLabel};
use crate::scalars::{Approx, Field, FromScalar, Gaussian, Scalar, Tolerance};
use crate::semiconformal::{RegPair, ScPair};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JsonError {
    #[error("missing field {0:?}")]
    Missing(&'static str),
    #[error("bad scalar {0}")]
    Scalar(String),
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("{0}")]
    Invalid(String),
}

fn shape(msg: impl Into<String>) -> JsonError {
    JsonError::Shape(msg.into())
}

/// A field whose elements can be written to and read from JSON.
pub trait JsonField: FromScalar {
    fn to_json(&self) -> Value;
}

impl JsonField for Gaussian {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl JsonField for Approx {
    fn to_json(&self) -> Value {
        json!([self.re(), self.im()])
    }
}

fn real_part(v: &Value) -> Result<Gaussian, JsonError> {
    match v {
        Value::Number(n) => n.to_string().parse().map_err(|_| JsonError::Scalar(n.to_string())),
        Value::String(s) => s.parse().map_err(|_| JsonError::Scalar(s.clone())),
        other => Err(JsonError::Scalar(other.to_string())),
    }
}

/// Reads any accepted scalar encoding as an exact value; decimals are read exactly.
pub fn scalar_from_json(v: &Value) -> Result<Gaussian, JsonError> {
    match v {
        Value::Array(parts) if parts.len() == 2 => {
            let re = real_part(&parts[0])?;
            let im = real_part(&parts[1])?;
            Ok(re + &(im * &Gaussian::imag_unit()))
        }
        other => real_part(other),
    }
}

pub fn field_from_json<F: JsonField>(v: &Value) -> Result<F, JsonError> {
    F::from_scalar(Scalar::Exact(scalar_from_json(v)?)).map_err(|e| JsonError::Scalar(e.to_string()))
}

pub fn vector_to_json<F: JsonField>(v: &Vector<F>) -> Value {
    Value::Array(v.iter().map(JsonField::to_json).collect())
}

pub fn vector_from_json<F: JsonField>(v: &Value) -> Result<Vector<F>, JsonError> {
    let items = v.as_array().ok_or_else(|| shape("vector must be an array"))?;
    Ok(Vector::new(items.iter().map(field_from_json).collect::<Result<_, _>>()?))
}

/// Row-major array of rows.
pub fn matrix_to_json<F: JsonField>(m: &Matrix<F>) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(&m.row(i))).collect())
}

pub fn matrix_from_json<F: JsonField>(v: &Value) -> Result<Matrix<F>, JsonError> {
    let rows = v.as_array().ok_or_else(|| shape("matrix must be an array of rows"))?;
    let rows: Vec<Vec<F>> = rows
        .iter()
        .map(|r| vector_from_json(r).map(Vector::into_coords))
        .collect::<Result<_, _>>()?;
    if let Some(first) = rows.first() {
        if rows.iter().any(|r| r.len() != first.len()) {
            return Err(shape("ragged matrix rows"));
        }
    }
    Ok(Matrix::from_rows(rows))
}

fn field<'a>(obj: &'a Value, name: &'static str) -> Result<&'a Value, JsonError> {
    obj.get(name).ok_or(JsonError::Missing(name))
}

pub fn pair_to_json<F: JsonField>(p: &ScPair<F>) -> Value {
    json!({
        "A": matrix_to_json(p.a()),
        "B": vector_to_json(p.b()),
        "h": vector_to_json(p.h()),
    })
}

/// `(A, B, h)` before validation.
pub type RawPair<F> = (Matrix<F>, Vector<F>, Vector<F>);

/// The raw `(A, B, h)` of a pair document, unvalidated.
pub fn raw_pair_from_json<F: JsonField>(v: &Value) -> Result<RawPair<F>, JsonError> {
    Ok((
        matrix_from_json(field(v, "A")?)?,
        vector_from_json(field(v, "B")?)?,
        vector_from_json(field(v, "h")?)?,
    ))
}

pub fn pair_from_json<F: JsonField>(v: &Value, tol: Tolerance) -> Result<ScPair<F>, JsonError> {
    let (a, b, h) = raw_pair_from_json(v)?;
    ScPair::new(a, b, h, tol).map_err(|e| JsonError::Invalid(e.to_string()))
}

/// `basis` lists the spanning vectors, one per entry.
pub fn regpair_to_json<F: JsonField>(r: &RegPair<F>) -> Value {
    json!({
        "basis": Value::Array(r.subspace().basis_vectors().iter().map(vector_to_json).collect()),
        "hprime": vector_to_json(r.hprime()),
        "h": vector_to_json(r.h()),
    })
}

pub fn quadlin_to_json<F: JsonField>(w: &QuadLin<F>) -> Value {
    json!({
        "S": matrix_to_json(w.quadratic()),
        "b": vector_to_json(w.linear()),
    })
}

/// `{S, b}`, or `{h}` for `ω_h`.
pub fn quadlin_from_json<F: JsonField>(v: &Value, tol: Tolerance) -> Result<QuadLin<F>, JsonError> {
    if let Some(h) = v.get("h").filter(|_| v.get("S").is_none()) {
        return Ok(QuadLin::omega(&vector_from_json(h)?));
    }
    let s = matrix_from_json(field(v, "S")?)?;
    let b = vector_from_json(field(v, "b")?)?;
    QuadLin::new(s, b, tol).map_err(|e| JsonError::Invalid(e.to_string()))
}

pub fn fock_to_json<F: JsonField>(v: &FockVector<F>) -> Value {
    Value::Array(
        v.terms()
            .map(|(m, c)| {
                let factors: Vec<Value> = m.factors().iter().map(|&(d, n)| json!([d + 1, n])).collect();
                json!({"monomial": factors, "coefficient": c.to_json()})
            })
            .collect(),
    )
}

pub fn fock_from_json<F: JsonField>(v: &Value, d: usize) -> Result<FockVector<F>, JsonError> {
    let terms = v.as_array().ok_or_else(|| shape("Fock vector must be an array of terms"))?;
    let mut out = FockVector::zero();
    for t in terms {
        let factors = field(t, "monomial")?
            .as_array()
            .ok_or_else(|| shape("monomial must be an array"))?
            .iter()
            .map(|f| {
                let pair = f.as_array().filter(|p| p.len() == 2).ok_or_else(|| shape("factor must be [dir, mode]"))?;
                let dir = pair[0].as_u64().filter(|&x| x >= 1 && x as usize <= d);
                let mode = pair[1].as_u64().filter(|&x| x >= 1).and_then(|x| u32::try_from(x).ok());
                match (dir, mode) {
                    (Some(dir), Some(mode)) => Ok((dir as usize - 1, mode)),
                    _ => Err(shape(format!("factor {f} needs 1 ≤ dir ≤ {d} and mode ≥ 1"))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.add_term(FockMonomial::new(factors), field_from_json(field(t, "coefficient")?)?);
    }
    Ok(out)
}

pub fn label_to_json<F: JsonField>(l: &OrbitLabel<F>) -> Value {
    let mut m = Map::new();
    m.insert("family".into(), Value::String(l.family().to_string()));
    m.insert("k".into(), json!(l.k()));
    if let Some(y) = l.y() {
        m.insert("y".into(), y.to_json());
    }
    Value::Object(m)
}

pub fn label_from_json<F: JsonField>(v: &Value) -> Result<OrbitLabel<F>, JsonError> {
    let family: Family = field(v, "family")?
        .as_str()
        .ok_or_else(|| shape("family must be a string"))?
        .parse()
        .map_err(JsonError::Invalid)?;
    let k = field(v, "k")?.as_u64().ok_or_else(|| shape("k must be a nonnegative integer"))? as usize;
    let y = v.get("y").map(field_from_json).transpose()?;
    Ok(OrbitLabel::new(family, k, y))
}

pub fn moduli_to_json<F: JsonField>(m: &ModuliClass<F>) -> Value {
    match m {
        ModuliClass::Zero => json!({"class": "zero"}),
        ModuliClass::Isotropic => json!({"class": "isotropic"}),
        ModuliClass::Value(s) => json!({"class": "value", "s": s.to_json()}),
    }
}
