//! JSON boundary. Every document carries `"schema": "abelmod/1"`; scalars use
//! the [`Scalar`] encoding and matrices are row-major arrays of scalars.
//!
//! Parsing distinguishes malformed documents from well-formed ones that fail
//! validation (a non-commuting tuple, an unstable marking): the first is
//! [`InputError::Malformed`], the second carries the library [`Error`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::adhm::{check_commuting, CommutingTuple, IdealNormalForm, MarkedTuple, PunctualData};
use crate::dalgebra::{classify, fm_dual, orbit_invariants, CoefficientBundle, DAlgebraKind, UtaiTriple};
use crate::error::Error;
use crate::linalg::{Field, GaussRat, Matrix, Mode, Scalar, ToleranceFrame, C64};
use crate::moduli::{FiberSpace, HilbPiece, HilbPoint, SymPoint};
use crate::torus::{AbelianVarietyModel, FiberPoint, ModelSpec};

pub const SCHEMA: &str = "abelmod/1";

#[derive(Debug, Clone, PartialEq)]
pub enum InputError {
    /// The document does not match the schema.
    Malformed(String),
    /// The document is well formed but the data is rejected by the library.
    Domain(Error),
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError::Domain(e)
    }
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputError::Malformed(m) => write!(f, "malformed input: {m}"),
            InputError::Domain(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for InputError {}

pub type InputResult<T> = std::result::Result<T, InputError>;

fn malformed<T>(msg: impl Into<String>) -> InputResult<T> {
    Err(InputError::Malformed(msg.into()))
}

/// Adds the schema tag to an object.
pub fn with_schema(mut value: Value) -> Value {
    if let Value::Object(map) = &mut value {
        map.insert("schema".into(), Value::String(SCHEMA.into()));
    }
    value
}

/// Rejects a document whose `schema` field is present and not ours.
pub fn check_schema(value: &Value) -> InputResult<()> {
    match value.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == SCHEMA => Ok(()),
        Some(other) => malformed(format!("unsupported schema {other}")),
    }
}

fn object<'a>(value: &'a Value, what: &str) -> InputResult<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| InputError::Malformed(format!("{what} must be an object")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, what: &str) -> InputResult<&'a Value> {
    obj.get(key)
        .ok_or_else(|| InputError::Malformed(format!("{what} is missing `{key}`")))
}

fn usize_field(obj: &Map<String, Value>, key: &str, what: &str) -> InputResult<usize> {
    field(obj, key, what)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| InputError::Malformed(format!("`{key}` in {what} must be a non-negative integer")))
}

fn deny_unknown(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> InputResult<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => malformed(format!("unknown field `{k}` in {what}")),
        None => Ok(()),
    }
}

/// The `mode` field of a document, if any.
pub fn document_mode(value: &Value) -> InputResult<Option<Mode>> {
    match value.get("mode") {
        None => Ok(None),
        Some(Value::String(s)) if s == "exact" => Ok(Some(Mode::Exact)),
        Some(Value::String(s)) if s == "float" => Ok(Some(Mode::Float)),
        Some(other) => malformed(format!("mode must be \"exact\" or \"float\", got {other}")),
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

pub fn scalar_to_json<F: Field>(x: &F) -> Value {
    Scalar::from_field(x).to_json()
}

pub fn scalar_from_json<F: Field>(value: &Value) -> InputResult<F> {
    let s = Scalar::from_json(value).map_err(InputError::Malformed)?;
    s.into_field::<F>().map_err(|e| InputError::Malformed(e.to_string()))
}

pub fn vector_to_json<F: Field>(v: &[F]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn vector_from_json<F: Field>(value: &Value) -> InputResult<Vec<F>> {
    value
        .as_array()
        .ok_or_else(|| InputError::Malformed("vector must be an array of scalars".into()))?
        .iter()
        .map(scalar_from_json)
        .collect()
}

pub fn matrix_to_json<F: Field>(m: &Matrix<F>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| scalar_to_json(&m[(i, j)])).collect()))
            .collect(),
    )
}

/// A row-major array of rows; `cols` fixes the width of an empty-row matrix.
pub fn matrix_from_json<F: Field>(value: &Value, cols: Option<usize>) -> InputResult<Matrix<F>> {
    let rows = value
        .as_array()
        .ok_or_else(|| InputError::Malformed("matrix must be an array of rows".into()))?;
    let parsed = rows.iter().map(vector_from_json::<F>).collect::<InputResult<Vec<_>>>()?;
    let width = parsed.first().map(Vec::len).or(cols).unwrap_or(0);
    if parsed.iter().any(|r| r.len() != width) || cols.is_some_and(|c| c != width) {
        return malformed("matrix rows have inconsistent lengths");
    }
    let r = parsed.len();
    Ok(Matrix::from_vec(r, width, parsed.into_iter().flatten().collect()))
}

/// `{"m", "n", "B", "v"?, "mode"}`.
pub fn tuple_to_json<F: Field>(t: &CommutingTuple<F>, v: Option<&[F]>) -> Value {
    let mut obj = json!({
        "m": t.m(),
        "n": t.n(),
        "B": t.mats().iter().map(matrix_to_json).collect::<Vec<_>>(),
        "mode": mode_name(F::MODE),
    });
    if let Some(v) = v {
        obj["v"] = vector_to_json(v);
    }
    obj
}

pub fn marked_to_json<F: Field>(mt: &MarkedTuple<F>) -> Value {
    tuple_to_json(mt.tuple(), Some(mt.v()))
}

/// Parses a tuple document and validates commutation; the marking is
/// returned unvalidated.
pub fn tuple_from_json<F: Field>(value: &Value, tol: &ToleranceFrame) -> InputResult<(CommutingTuple<F>, Option<Vec<F>>)> {
    check_schema(value)?;
    let obj = object(value, "tuple")?;
    deny_unknown(obj, &["m", "n", "B", "v", "mode", "schema"], "tuple")?;
    if let Some(mode) = document_mode(value)? {
        if mode != F::MODE {
            return malformed(format!("document is in {} mode", mode_name(mode)));
        }
    }
    let n = usize_field(obj, "n", "tuple")?;
    let mats = field(obj, "B", "tuple")?
        .as_array()
        .ok_or_else(|| InputError::Malformed("`B` must be an array of matrices".into()))?
        .iter()
        .map(|b| matrix_from_json::<F>(b, Some(n)))
        .collect::<InputResult<Vec<_>>>()?;
    if let Some(m) = obj.get("m") {
        if m.as_u64() != Some(mats.len() as u64) {
            return malformed(format!("`m` is {m} but `B` has {} matrices", mats.len()));
        }
    }
    if mats.iter().any(|b| b.rows() != n || b.cols() != n) {
        return malformed(format!("every matrix in `B` must be {n}x{n}"));
    }
    let v = obj.get("v").map(vector_from_json::<F>).transpose()?;
    if v.as_ref().is_some_and(|v| v.len() != n) {
        return malformed(format!("`v` must have length {n}"));
    }
    Ok((check_commuting(mats, tol)?, v))
}

pub fn marked_from_json<F: Field>(value: &Value, tol: &ToleranceFrame) -> InputResult<MarkedTuple<F>> {
    let (t, v) = tuple_from_json::<F>(value, tol)?;
    let v = v.ok_or_else(|| InputError::Malformed("a marked tuple needs `v`".into()))?;
    Ok(MarkedTuple::new(t, v, tol)?)
}

pub fn support_to_json<F: Field>(support: &[(Vec<F>, usize)]) -> Value {
    Value::Array(
        support
            .iter()
            .map(|(p, c)| json!({"point": vector_to_json(p), "multiplicity": c}))
            .collect(),
    )
}

pub fn ideal_to_json<F: Field>(inf: &IdealNormalForm<F>) -> Value {
    json!({
        "staircase": inf.staircase,
        "mult_matrices": inf.mult_matrices.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "support": inf.support.as_deref().map(support_to_json),
        "mode": mode_name(F::MODE),
    })
}

pub fn ideal_from_json<F: Field>(value: &Value) -> InputResult<IdealNormalForm<F>> {
    check_schema(value)?;
    let obj = object(value, "ideal normal form")?;
    deny_unknown(obj, &["staircase", "mult_matrices", "support", "mode", "schema"], "ideal normal form")?;
    let staircase: Vec<Vec<u32>> = serde_json::from_value(field(obj, "staircase", "ideal normal form")?.clone())
        .map_err(|e| InputError::Malformed(format!("staircase: {e}")))?;
    let n = staircase.len();
    let mult_matrices = field(obj, "mult_matrices", "ideal normal form")?
        .as_array()
        .ok_or_else(|| InputError::Malformed("`mult_matrices` must be an array".into()))?
        .iter()
        .map(|b| matrix_from_json::<F>(b, Some(n)))
        .collect::<InputResult<Vec<_>>>()?;
    let support = match obj.get("support") {
        None | Some(Value::Null) => None,
        Some(s) => Some(support_from_json::<F>(s)?),
    };
    Ok(IdealNormalForm {
        staircase,
        mult_matrices,
        support,
    })
}

fn support_from_json<F: Field>(value: &Value) -> InputResult<Vec<(Vec<F>, usize)>> {
    value
        .as_array()
        .ok_or_else(|| InputError::Malformed("support must be an array".into()))?
        .iter()
        .map(|e| {
            let obj = object(e, "support entry")?;
            deny_unknown(obj, &["point", "multiplicity"], "support entry")?;
            Ok((
                vector_from_json(field(obj, "point", "support entry")?)?,
                usize_field(obj, "multiplicity", "support entry")?,
            ))
        })
        .collect()
}

/// `{"d", "v", "alpha", "beta", "gamma", "bundle"?}`.
pub fn triple_to_json<F: Field>(t: &UtaiTriple<F>) -> Value {
    let mut obj = json!({
        "d": t.d(),
        "v": t.v(),
        "alpha": matrix_to_json(t.alpha()),
        "beta": matrix_to_json(t.beta()),
        "gamma": matrix_to_json(t.gamma()),
    });
    if t.bundle() != CoefficientBundle::Tangent {
        obj["bundle"] = serde_json::to_value(t.bundle()).expect("bundle serializes");
    }
    obj
}

pub fn triple_from_json<F: Field>(value: &Value, tol: &ToleranceFrame) -> InputResult<UtaiTriple<F>> {
    check_schema(value)?;
    let obj = object(value, "triple")?;
    deny_unknown(obj, &["d", "v", "alpha", "beta", "gamma", "bundle", "mode", "schema"], "triple")?;
    if let Some(mode) = document_mode(value)? {
        if mode != F::MODE {
            return malformed(format!("document is in {} mode", mode_name(mode)));
        }
    }
    let d = usize_field(obj, "d", "triple")?;
    let v = usize_field(obj, "v", "triple")?;
    let alpha = matrix_from_json(field(obj, "alpha", "triple")?, Some(v))?;
    let beta = matrix_from_json(field(obj, "beta", "triple")?, Some(v))?;
    let gamma = matrix_from_json(field(obj, "gamma", "triple")?, Some(v))?;
    let bundle = match obj.get("bundle") {
        None => CoefficientBundle::Tangent,
        Some(b) => serde_json::from_value(b.clone()).map_err(|e| InputError::Malformed(format!("bundle: {e}")))?,
    };
    Ok(UtaiTriple::new(d, v, alpha, beta, gamma, tol)?.with_bundle(bundle))
}

/// Label, abelian flag, orbit invariants and the dual triple.
pub fn classification_to_json<F: Field>(t: &UtaiTriple<F>, tol: &ToleranceFrame) -> Value {
    let label = classify(t, tol);
    let mut label_json = json!({"kind": label.kind.name()});
    if let DAlgebraKind::TauConnection(tau) = &label.kind {
        label_json["tau"] = scalar_to_json(tau);
    }
    json!({
        "label": label_json,
        "abelian": label.abelian,
        "invariants": orbit_invariants(t, tol),
        "fm_dual": triple_to_json(&fm_dual(t)),
    })
}

fn model_to_json(model: &AbelianVarietyModel) -> Value {
    serde_json::to_value(model.spec()).expect("model serializes")
}

fn model_from_json(obj: &Map<String, Value>, what: &str) -> InputResult<AbelianVarietyModel> {
    match (obj.get("model"), obj.get("d")) {
        (Some(m), _) => {
            let spec: ModelSpec =
                serde_json::from_value(m.clone()).map_err(|e| InputError::Malformed(format!("model: {e}")))?;
            Ok(AbelianVarietyModel::from_spec(&spec)?)
        }
        (None, Some(_)) => Ok(AbelianVarietyModel::standard(usize_field(obj, "d", what)?)),
        (None, None) => malformed(format!("{what} needs `model` or `d`")),
    }
}

/// `{"kind": ..., "model" | "d", "tau"?, "vdim"?}`.
pub fn space_to_json<F: Field>(space: &FiberSpace<F>) -> Value {
    match space {
        FiberSpace::Betti { d } => json!({"kind": "betti", "d": d}),
        FiberSpace::DualTorus { model } => json!({"kind": "dual", "model": model_to_json(model)}),
        FiberSpace::Cotangent { model } => json!({"kind": "cotangent", "model": model_to_json(model)}),
        FiberSpace::Natural { model } => json!({"kind": "natural", "model": model_to_json(model)}),
        FiberSpace::HodgeFiber { model, tau } => {
            json!({"kind": "hodge", "model": model_to_json(model), "tau": scalar_to_json(tau)})
        }
        FiberSpace::ProductAlphaZero { model, vdim } => {
            json!({"kind": "product", "model": model_to_json(model), "vdim": vdim})
        }
    }
}

pub fn space_from_json<F: Field>(value: &Value) -> InputResult<FiberSpace<F>> {
    let obj = object(value, "space")?;
    let kind = field(obj, "kind", "space")?
        .as_str()
        .ok_or_else(|| InputError::Malformed("space `kind` must be a string".into()))?;
    let allowed: &[&str] = match kind {
        "betti" => &["kind", "d"],
        "hodge" => &["kind", "model", "d", "tau"],
        "product" => &["kind", "model", "d", "vdim"],
        _ => &["kind", "model", "d"],
    };
    deny_unknown(obj, allowed, "space")?;
    Ok(match kind {
        "betti" => FiberSpace::Betti {
            d: usize_field(obj, "d", "space")?,
        },
        "dual" => FiberSpace::DualTorus {
            model: model_from_json(obj, "space")?,
        },
        "cotangent" => FiberSpace::Cotangent {
            model: model_from_json(obj, "space")?,
        },
        "natural" => FiberSpace::Natural {
            model: model_from_json(obj, "space")?,
        },
        "hodge" => FiberSpace::HodgeFiber {
            model: model_from_json(obj, "space")?,
            tau: scalar_from_json(field(obj, "tau", "space")?)?,
        },
        "product" => FiberSpace::ProductAlphaZero {
            model: model_from_json(obj, "space")?,
            vdim: usize_field(obj, "vdim", "space")?,
        },
        other => return malformed(format!("unknown space kind `{other}`")),
    })
}

fn point_to_json(p: &FiberPoint) -> Value {
    serde_json::to_value(p).expect("fiber point serializes")
}

fn point_from_json(value: &Value) -> InputResult<FiberPoint> {
    serde_json::from_value(value.clone()).map_err(|e| InputError::Malformed(format!("fiber point: {e}")))
}

/// `{"space", "pieces": [{"point", "punctual": {"N", "v"?, "base"}}], "mode"}`.
/// `base` holds the chart coordinates in `F`; it defaults to the point's own.
pub fn hilb_to_json<F: Field>(h: &HilbPoint<F>) -> Value {
    let pieces: Vec<Value> = h
        .pieces()
        .iter()
        .map(|piece| {
            let mut punctual = json!({
                "N": piece.punctual.nilpotent().mats().iter().map(matrix_to_json).collect::<Vec<_>>(),
                "base": vector_to_json(piece.punctual.point()),
            });
            if let Some(v) = piece.punctual.marking() {
                punctual["v"] = vector_to_json(v);
            }
            json!({"point": point_to_json(&piece.point), "punctual": punctual})
        })
        .collect();
    json!({
        "space": space_to_json(h.space()),
        "pieces": pieces,
        "mode": mode_name(F::MODE),
    })
}

pub fn hilb_from_json<F: Field>(value: &Value, tol: &ToleranceFrame) -> InputResult<HilbPoint<F>> {
    check_schema(value)?;
    let obj = object(value, "Hilbert scheme point")?;
    deny_unknown(obj, &["space", "pieces", "mode", "schema"], "Hilbert scheme point")?;
    if let Some(mode) = document_mode(value)? {
        if mode != F::MODE {
            return malformed(format!("document is in {} mode", mode_name(mode)));
        }
    }
    let space = space_from_json::<F>(field(obj, "space", "Hilbert scheme point")?)?;
    let pieces = field(obj, "pieces", "Hilbert scheme point")?
        .as_array()
        .ok_or_else(|| InputError::Malformed("`pieces` must be an array".into()))?
        .iter()
        .map(|p| {
            let pobj = object(p, "piece")?;
            deny_unknown(pobj, &["point", "punctual"], "piece")?;
            let point = point_from_json(field(pobj, "point", "piece")?)?;
            let punctual = object(field(pobj, "punctual", "piece")?, "punctual datum")?;
            deny_unknown(punctual, &["N", "v", "base"], "punctual datum")?;
            let mats = field(punctual, "N", "punctual datum")?
                .as_array()
                .ok_or_else(|| InputError::Malformed("`N` must be an array of matrices".into()))?
                .iter()
                .map(|b| matrix_from_json::<F>(b, None))
                .collect::<InputResult<Vec<_>>>()?;
            let l = mats.first().map_or(0, Matrix::rows);
            if l == 0 || mats.iter().any(|b| b.rows() != l || b.cols() != l) {
                return malformed("`N` must hold nonempty square matrices of one size");
            }
            let base = match punctual.get("base") {
                Some(b) => vector_from_json::<F>(b)?,
                None => space.chart_coords(&point)?.into_iter().map(F::from_c64).collect(),
            };
            let v = punctual.get("v").map(vector_from_json::<F>).transpose()?;
            if v.as_ref().is_some_and(|v| v.len() != l) {
                return malformed(format!("`v` must have length {l}"));
            }
            let nil = check_commuting(mats, tol)?;
            Ok(HilbPiece {
                point,
                punctual: PunctualData::new(base, nil, v, tol)?,
            })
        })
        .collect::<InputResult<Vec<_>>>()?;
    Ok(HilbPoint::new(space, pieces, tol)?)
}

pub fn sym_to_json<F: Field>(s: &SymPoint<F>) -> Value {
    json!({
        "space": space_to_json(&s.space),
        "support": s
            .support
            .iter()
            .map(|(p, c)| json!({"point": point_to_json(p), "multiplicity": c}))
            .collect::<Vec<_>>(),
    })
}

pub fn sym_from_json<F: Field>(value: &Value) -> InputResult<SymPoint<F>> {
    check_schema(value)?;
    let obj = object(value, "symmetric product point")?;
    deny_unknown(obj, &["space", "support", "schema"], "symmetric product point")?;
    let space = space_from_json::<F>(field(obj, "space", "symmetric product point")?)?;
    let support = field(obj, "support", "symmetric product point")?
        .as_array()
        .ok_or_else(|| InputError::Malformed("`support` must be an array".into()))?
        .iter()
        .map(|e| {
            let eobj = object(e, "support entry")?;
            deny_unknown(eobj, &["point", "multiplicity"], "support entry")?;
            Ok((
                point_from_json(field(eobj, "point", "support entry")?)?,
                usize_field(eobj, "multiplicity", "support entry")?,
            ))
        })
        .collect::<InputResult<Vec<_>>>()?;
    Ok(SymPoint { space, support })
}

/// Parses a command-line scalar: `x` or `re,im`, each part an integer, a
/// fraction `p/q` or a decimal. Exact mode reads decimals exactly.
pub fn parse_scalar_arg<F: Field>(s: &str) -> InputResult<F> {
    let (re, im) = match s.split_once(',') {
        Some((r, i)) => (r, i),
        None => (s, "0"),
    };
    match F::MODE {
        Mode::Exact => {
            let z = GaussRat::new(parse_exact_real(re)?, parse_exact_real(im)?);
            Scalar::Exact(z).into_field().map_err(|e| InputError::Malformed(e.to_string()))
        }
        Mode::Float => {
            let part = |t: &str| -> InputResult<f64> {
                let t = t.trim();
                if let Some((n, d)) = t.split_once('/') {
                    let n: f64 = n.trim().parse().map_err(|_| InputError::Malformed(format!("bad number `{t}`")))?;
                    let d: f64 = d.trim().parse().map_err(|_| InputError::Malformed(format!("bad number `{t}`")))?;
                    return Ok(n / d);
                }
                t.parse().map_err(|_| InputError::Malformed(format!("bad number `{t}`")))
            };
            Ok(F::from_c64(C64::new(part(re)?, part(im)?)))
        }
    }
}

fn parse_exact_real(s: &str) -> InputResult<BigRational> {
    let s = s.trim();
    let bad = || InputError::Malformed(format!("bad exact number `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !(int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").trim_start_matches('0').parse().unwrap_or_else(|_| BigInt::zero());
    let den = (0..frac.len()).fold(BigInt::one(), |acc, _| acc * 10);
    let r = BigRational::new(digits, den);
    Ok(if neg { -r } else { r })
}

#[cfg(test)]
mod tests;
