//! Scalar and matrix substrate.
//!
//! Two scalar backends sit behind the [`Field`] trait:
//!
//! * [`GaussRat`] — exact Gaussian rationals `Q(i)`, always in reduced form.
//!   Rank, kernels and solves are exact Gauss–Jordan eliminations; eigenvalues
//!   exist only when the characteristic polynomial splits over `Q(i)`.
//! * [`C64`] — double precision complex numbers. Every decision that depends on
//!   a zero test goes through a [`ToleranceFrame`]; rank is decided by singular
//!   value thresholding relative to the largest singular value.
//!
//! Algorithms that are generic over the field are written once against
//! [`Field`]; the few primitives whose behaviour genuinely differs per mode are
//! trait methods implemented in [`exact`] and [`float`].

mod exact;
mod float;
mod matrix;
mod modular;
pub mod poly;
mod scalar;
mod subspace;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::Matrix;
pub(crate) use matrix::{inner, vec_norm};
pub use scalar::{ratio_to_string, Scalar};
pub use subspace::Subspace;

/// Exact Gaussian rational.
pub type GaussRat = Complex<BigRational>;
/// Double precision complex number.
pub type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn is_exact(self) -> bool {
        self == Mode::Exact
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("linear system has no solution")]
    NoSolution,
    #[error("characteristic polynomial does not split over Q(i)")]
    NonSplitCharPoly,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("scalar mode mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("invalid tolerance frame: {0}")]
    InvalidTolerance(String),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}

impl LinalgError {
    pub fn code(&self) -> &'static str {
        match self {
            LinalgError::NoSolution => "NoSolution",
            LinalgError::NonSplitCharPoly => "NonSplitCharPoly",
            LinalgError::Shape(_) => "ShapeMismatch",
            LinalgError::ModeMismatch { .. } => "ModeMismatch",
            LinalgError::InvalidTolerance(_) => "InvalidTolerance",
            LinalgError::NoConvergence => "NoConvergence",
        }
    }
}

/// Tolerances governing float-mode decisions. Ignored in exact mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceFrame {
    pub eps_rank: f64,
    pub eps_eq: f64,
    pub eps_lattice: f64,
}

impl Default for ToleranceFrame {
    fn default() -> Self {
        Self {
            eps_rank: 1e-9,
            eps_eq: 1e-9,
            eps_lattice: 1e-7,
        }
    }
}

impl ToleranceFrame {
    pub fn new(eps_rank: f64, eps_eq: f64, eps_lattice: f64) -> Result<Self, LinalgError> {
        let frame = Self {
            eps_rank,
            eps_eq,
            eps_lattice,
        };
        frame.validate()?;
        Ok(frame)
    }

    pub fn validate(&self) -> Result<(), LinalgError> {
        for (name, value) in [
            ("eps_rank", self.eps_rank),
            ("eps_eq", self.eps_eq),
            ("eps_lattice", self.eps_lattice),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(LinalgError::InvalidTolerance(format!(
                    "{name} must be a positive finite number, got {value}"
                )));
            }
        }
        if self.eps_eq > self.eps_lattice {
            return Err(LinalgError::InvalidTolerance(
                "eps_eq must not exceed eps_lattice".into(),
            ));
        }
        Ok(())
    }
}

/// A scalar field backend.
///
/// The arithmetic operators never consult tolerances. Mode-specific linear
/// algebra is exposed through the associated functions at the bottom of the
/// trait; the `floor` argument they take is a reference magnitude used by the
/// float backend so that thresholds stay meaningful when the matrix at hand is
/// itself numerically zero (`threshold = eps_rank * max(sigma_max, floor)`).
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn gaussian(re: i64, im: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact mode converts the binary value exactly (every finite double is a
    /// dyadic rational).
    fn from_c64(z: C64) -> Self;
    fn to_c64(&self) -> C64;
    /// Literal zero test, no tolerance.
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
    /// Lexicographic on `(Re, Im)`.
    fn canonical_cmp(&self, other: &Self) -> Ordering;
    /// Exact mode: equality. Float mode: `|a - b| <= eps`.
    fn near(&self, other: &Self, eps: f64) -> bool;
    /// `None` when the value is not representable in this mode.
    fn exp(&self) -> Option<Self>;
    /// Principal branch; `None` at zero or when not representable.
    fn ln(&self) -> Option<Self>;

    fn rank_with_floor(m: &Matrix<Self>, floor: f64, tol: &ToleranceFrame) -> usize;
    /// Column vectors spanning the kernel. Exact: reduced column echelon form.
    /// Float: orthonormal.
    fn kernel_with_floor(m: &Matrix<Self>, floor: f64, tol: &ToleranceFrame) -> Vec<Vec<Self>>;
    /// Least-norm solution of `a x = b`.
    fn solve(a: &Matrix<Self>, b: &[Self], tol: &ToleranceFrame) -> Result<Vec<Self>, LinalgError>;

    /// Inverse of a square matrix, `None` when singular at the rank floor.
    fn inverse(m: &Matrix<Self>, tol: &ToleranceFrame) -> Option<Matrix<Self>>;
    /// Distinct eigenvalues with algebraic multiplicities, canonically sorted.
    fn eigenvalues(m: &Matrix<Self>, tol: &ToleranceFrame) -> Result<Vec<(Self, usize)>, LinalgError>;
    fn span(vectors: &[Vec<Self>], ambient: usize, floor: f64, tol: &ToleranceFrame) -> Subspace<Self>;
}

pub fn rank<F: Field>(m: &Matrix<F>, tol: &ToleranceFrame) -> usize {
    F::rank_with_floor(m, 0.0, tol)
}

pub fn kernel_basis<F: Field>(m: &Matrix<F>, tol: &ToleranceFrame) -> Vec<Vec<F>> {
    F::kernel_with_floor(m, 0.0, tol)
}

pub fn solve<F: Field>(a: &Matrix<F>, b: &[F], tol: &ToleranceFrame) -> Result<Vec<F>, LinalgError> {
    if a.rows() != b.len() {
        return Err(LinalgError::Shape(format!(
            "matrix has {} rows but right-hand side has length {}",
            a.rows(),
            b.len()
        )));
    }
    F::solve(a, b, tol)
}

/// One eigenvalue of a square matrix together with a basis of its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<F> {
    pub value: F,
    pub multiplicity: usize,
    pub vectors: Vec<Vec<F>>,
}

/// All eigenvalues with eigenspace bases.
///
/// Float mode clusters numerically coincident eigenvalues and reports the
/// cluster mean. Exact mode fails with [`LinalgError::NonSplitCharPoly`] unless
/// every root of the characteristic polynomial lies in `Q(i)`.
pub fn eigenpairs<F: Field>(m: &Matrix<F>, tol: &ToleranceFrame) -> Result<Vec<EigenPair<F>>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Shape("eigenpairs needs a square matrix".into()));
    }
    let floor = m.frobenius();
    F::eigenvalues(m, tol)?
        .into_iter()
        .map(|(value, multiplicity)| {
            let shifted = m.shift_diagonal(&-value.clone());
            let vectors = F::kernel_with_floor(&shifted, floor, tol);
            Ok(EigenPair {
                value,
                multiplicity,
                vectors,
            })
        })
        .collect()
}

/// Smallest singular value of a nonempty float matrix with a unit right
/// singular vector attaining it.
pub fn least_singular_vector(m: &Matrix<C64>) -> (f64, Vec<C64>) {
    float::least_singular(m)
}

/// Unclustered eigenvalues of a float matrix from its Schur form.
pub fn raw_eigenvalues(m: &Matrix<C64>) -> Result<Vec<C64>, LinalgError> {
    float::schur_eigenvalues(m)
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<F: Field>(m: &Matrix<F>, tol: &ToleranceFrame) -> Option<Matrix<F>> {
    if !m.is_square() {
        return None;
    }
    F::inverse(m, tol)
}

pub(crate) fn bigrat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
