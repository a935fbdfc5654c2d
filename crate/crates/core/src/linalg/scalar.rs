use std::cmp::Ordering;
use std::f64::consts::PI;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{exact, float, Field, GaussRat, LinalgError, Matrix, Mode, Subspace, ToleranceFrame, C64};

impl Field for GaussRat {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        GaussRat::new(BigRational::one(), BigRational::zero())
    }

    fn from_i64(v: i64) -> Self {
        GaussRat::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    fn gaussian(re: i64, im: i64) -> Self {
        GaussRat::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::new(super::bigrat(num, den), BigRational::zero())
    }

    fn from_c64(z: C64) -> Self {
        let conv = |x: f64| BigRational::from_float(x).expect("finite value");
        GaussRat::new(conv(z.re), conv(z.im))
    }

    fn to_c64(&self) -> C64 {
        C64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    fn near(&self, other: &Self, _eps: f64) -> bool {
        self == other
    }

    fn exp(&self) -> Option<Self> {
        Field::is_zero(self).then(<Self as Field>::one)
    }

    fn ln(&self) -> Option<Self> {
        (*self == <Self as Field>::one()).then(<Self as Field>::zero)
    }

    fn rank_with_floor(m: &Matrix<Self>, _floor: f64, _tol: &ToleranceFrame) -> usize {
        super::modular::certified_rank(m).unwrap_or_else(|| exact::rref(m).1.len())
    }

    fn kernel_with_floor(m: &Matrix<Self>, _floor: f64, _tol: &ToleranceFrame) -> Vec<Vec<Self>> {
        exact::kernel(m)
    }

    fn solve(a: &Matrix<Self>, b: &[Self], _tol: &ToleranceFrame) -> Result<Vec<Self>, LinalgError> {
        exact::solve(a, b)
    }

    fn inverse(m: &Matrix<Self>, _tol: &ToleranceFrame) -> Option<Matrix<Self>> {
        exact::inverse(m)
    }

    fn eigenvalues(m: &Matrix<Self>, _tol: &ToleranceFrame) -> Result<Vec<(Self, usize)>, LinalgError> {
        exact::eigenvalues(m)
    }

    fn span(vectors: &[Vec<Self>], ambient: usize, _floor: f64, _tol: &ToleranceFrame) -> Subspace<Self> {
        exact::span(vectors, ambient)
    }
}

impl Field for C64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }

    fn one() -> Self {
        C64::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }

    fn gaussian(re: i64, im: i64) -> Self {
        C64::new(re as f64, im as f64)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }

    fn from_c64(z: C64) -> Self {
        z
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn conj(&self) -> Self {
        C64::conj(self)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re
            .total_cmp(&other.re)
            .then_with(|| self.im.total_cmp(&other.im))
    }

    fn near(&self, other: &Self, eps: f64) -> bool {
        (self - other).norm() <= eps
    }

    fn exp(&self) -> Option<Self> {
        Some(C64::exp(*self))
    }

    fn ln(&self) -> Option<Self> {
        if Field::is_zero(self) {
            return None;
        }
        Some(principal_ln(*self))
    }

    fn rank_with_floor(m: &Matrix<Self>, floor: f64, tol: &ToleranceFrame) -> usize {
        float::rank(m, floor, tol)
    }

    fn kernel_with_floor(m: &Matrix<Self>, floor: f64, tol: &ToleranceFrame) -> Vec<Vec<Self>> {
        float::kernel(m, floor, tol)
    }

    fn solve(a: &Matrix<Self>, b: &[Self], tol: &ToleranceFrame) -> Result<Vec<Self>, LinalgError> {
        float::solve(a, b, tol)
    }

    fn inverse(m: &Matrix<Self>, tol: &ToleranceFrame) -> Option<Matrix<Self>> {
        float::inverse(m, tol)
    }

    fn eigenvalues(m: &Matrix<Self>, tol: &ToleranceFrame) -> Result<Vec<(Self, usize)>, LinalgError> {
        float::eigenvalues(m, tol)
    }

    fn span(vectors: &[Vec<Self>], ambient: usize, floor: f64, tol: &ToleranceFrame) -> Subspace<Self> {
        float::span(vectors, ambient, floor, tol)
    }
}

/// Principal logarithm with `Im` in `(-pi, pi]`.
pub(crate) fn principal_ln(z: C64) -> C64 {
    let mut w = z.ln();
    if w.im <= -PI {
        w.im = PI;
    }
    w
}

/// Formats a rational as `p` or `p/q`.
pub fn ratio_to_string(r: &BigRational) -> String {
    r.to_string()
}

pub(crate) fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return None;
    }
    let num = BigInt::from_str(num.trim_start_matches('+')).ok()?;
    let den = BigInt::from_str(den.trim_start_matches('+')).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// A scalar tagged with its arithmetic mode; the JSON boundary type.
///
/// Exact values serialize as `{"re": "p/q", "im": "p/q"}`, float values as
/// `{"re": number, "im": number}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(GaussRat),
    Float(C64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn from_field<F: Field>(x: &F) -> Self {
        match F::MODE {
            Mode::Exact => Scalar::Exact(exact_from_any(x)),
            Mode::Float => Scalar::Float(x.to_c64()),
        }
    }

    /// Fails with `ModeMismatch` rather than converting across modes.
    pub fn into_field<F: Field>(self) -> Result<F, LinalgError> {
        match (self, F::MODE) {
            (Scalar::Exact(z), Mode::Exact) => Ok(field_from_exact(z)),
            (Scalar::Float(z), Mode::Float) => Ok(F::from_c64(z)),
            (s, expected) => Err(LinalgError::ModeMismatch {
                expected,
                found: s.mode(),
            }),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("scalar serializes")
    }
}

// `F` is `GaussRat` whenever `F::MODE == Exact`; these two helpers move values
// across the generic boundary without a float round trip.
fn exact_from_any<F: Field>(x: &F) -> GaussRat {
    let any: &dyn std::any::Any = x;
    any.downcast_ref::<GaussRat>()
        .cloned()
        .expect("exact-mode field is GaussRat")
}

fn field_from_exact<F: Field>(z: GaussRat) -> F {
    let boxed: Box<dyn std::any::Any> = Box::new(z);
    *boxed.downcast::<F>().expect("exact-mode field is GaussRat")
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        match self {
            Scalar::Exact(z) => {
                map.serialize_entry("re", &ratio_to_string(&z.re))?;
                map.serialize_entry("im", &ratio_to_string(&z.im))?;
            }
            Scalar::Float(z) => {
                map.serialize_entry("re", &z.re)?;
                map.serialize_entry("im", &z.im)?;
            }
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        Scalar::from_json(&value).map_err(de::Error::custom)
    }
}

impl Scalar {
    pub fn from_json(value: &Value) -> Result<Self, String> {
        let obj = value
            .as_object()
            .ok_or_else(|| format!("scalar must be an object with re/im, got {value}"))?;
        if let Some(key) = obj.keys().find(|k| *k != "re" && *k != "im") {
            return Err(format!("unknown scalar field `{key}`"));
        }
        let re = obj.get("re").ok_or("scalar is missing `re`")?;
        let im = obj.get("im").unwrap_or(&Value::Null);
        match (re, im) {
            (Value::String(r), Value::String(i)) => Ok(Scalar::Exact(GaussRat::new(
                parse_ratio(r).ok_or_else(|| format!("bad rational `{r}`"))?,
                parse_ratio(i).ok_or_else(|| format!("bad rational `{i}`"))?,
            ))),
            (Value::String(r), Value::Null) => Ok(Scalar::Exact(GaussRat::new(
                parse_ratio(r).ok_or_else(|| format!("bad rational `{r}`"))?,
                BigRational::zero(),
            ))),
            (Value::Number(r), Value::Number(i)) => Ok(Scalar::Float(C64::new(
                r.as_f64().ok_or("non-finite real part")?,
                i.as_f64().ok_or("non-finite imaginary part")?,
            ))),
            (Value::Number(r), Value::Null) => Ok(Scalar::Float(C64::new(
                r.as_f64().ok_or("non-finite real part")?,
                0.0,
            ))),
            _ => Err("scalar parts mix exact strings and float numbers".into()),
        }
    }
}
