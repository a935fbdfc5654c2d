//! Coordinate models of the rank-one fibre spaces over a complex torus
//! `X = C^d / Pi Z^2d`.
//!
//! A character of the lattice is recorded by its logarithms
//! `a_j = u . lambda_j + w . conj(lambda_j)` on the lattice generators
//! `lambda_j` (the columns of `Pi`). The `C`-linear part `u` is the `g*`
//! direction, the antilinear part `w` lives in the dual torus
//! `X^ = C^d / Lambda^`, where `Lambda^` is the image of `Hom(Lambda, 2 pi i Z)`.
//!
//! All coordinates here are double precision; exactness of nilpotent data is
//! handled one layer up.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inverse, rank, Matrix, ToleranceFrame, C64};

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub d: usize,
    /// `d` rows of `2d` complex entries, each written `[re, im]`.
    pub period: Vec<Vec<C64>>,
    #[serde(default)]
    pub tolerances: ToleranceFrame,
}

#[derive(Debug, Clone)]
struct DualData {
    /// `Lambda^` generators `w_k`, with the `u_k` that accompany them.
    w: Vec<Vec<C64>>,
    u: Vec<Vec<C64>>,
    /// Real-coordinate inverse: `w -> c` with `w = sum c_k w_k`.
    coord_inverse: Matrix<C64>,
}

/// A complex torus given by its period matrix, with the dual lattice computed
/// once on first use.
#[derive(Debug, Clone)]
pub struct AbelianVarietyModel {
    d: usize,
    period: Matrix<C64>,
    frame: ToleranceFrame,
    /// `a = M (u; w)` with `M = [Pi^T | conj(Pi)^T]`.
    chart: Matrix<C64>,
    chart_inverse: Matrix<C64>,
    dual: OnceLock<DualData>,
}

impl PartialEq for AbelianVarietyModel {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.period == other.period && self.frame == other.frame
    }
}

impl AbelianVarietyModel {
    /// Fails with `DegeneratePeriodMatrix` unless the columns of `period`
    /// span `C^d` over `R`.
    pub fn new(period: Matrix<C64>, frame: ToleranceFrame) -> Result<Self> {
        frame.validate()?;
        let d = period.rows();
        if d == 0 || period.cols() != 2 * d {
            return Err(Error::InvalidInput(format!(
                "period matrix must be d x 2d with d >= 1, got {}x{}",
                period.rows(),
                period.cols()
            )));
        }
        let mut real = Matrix::<C64>::zeros(2 * d, 2 * d);
        for i in 0..d {
            for j in 0..2 * d {
                real[(i, j)] = C64::new(period[(i, j)].re, 0.0);
                real[(d + i, j)] = C64::new(period[(i, j)].im, 0.0);
            }
        }
        if rank(&real, &frame) < 2 * d {
            return Err(Error::DegeneratePeriodMatrix);
        }
        let mut chart = Matrix::<C64>::zeros(2 * d, 2 * d);
        for j in 0..2 * d {
            for k in 0..d {
                chart[(j, k)] = period[(k, j)];
                chart[(j, d + k)] = period[(k, j)].conj();
            }
        }
        let chart_inverse = inverse(&chart, &frame).ok_or(Error::DegeneratePeriodMatrix)?;
        Ok(Self {
            d,
            period,
            frame,
            chart,
            chart_inverse,
            dual: OnceLock::new(),
        })
    }

    /// `Pi = [I | i I]`, the product of square elliptic curves.
    pub fn standard(d: usize) -> Self {
        let mut period = Matrix::<C64>::zeros(d, 2 * d);
        for k in 0..d {
            period[(k, k)] = C64::new(1.0, 0.0);
            period[(k, d + k)] = C64::new(0.0, 1.0);
        }
        Self::new(period, ToleranceFrame::default()).expect("standard period matrix is valid")
    }

    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        if spec.period.len() != spec.d || spec.period.iter().any(|r| r.len() != 2 * spec.d) {
            return Err(Error::InvalidInput("period must have d rows of 2d entries".into()));
        }
        Self::new(Matrix::from_rows(&spec.period), spec.tolerances)
    }

    pub fn spec(&self) -> ModelSpec {
        ModelSpec {
            d: self.d,
            period: self.period.row_vecs(),
            tolerances: self.frame,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn period(&self) -> &Matrix<C64> {
        &self.period
    }

    pub fn frame(&self) -> &ToleranceFrame {
        &self.frame
    }

    /// `M = [Pi^T | conj(Pi)^T]`, mapping `(u; w)` to lattice logarithms.
    pub fn chart_matrix(&self) -> &Matrix<C64> {
        &self.chart
    }

    pub fn chart_inverse(&self) -> &Matrix<C64> {
        &self.chart_inverse
    }

    /// Splits lattice logarithms `a` into `(u, w)`.
    pub fn split(&self, a: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let x = self.chart_inverse.mul_vec(a);
        let (u, w) = x.split_at(self.d);
        (u.to_vec(), w.to_vec())
    }

    /// `a = M (u; w)`.
    pub fn join(&self, u: &[C64], w: &[C64]) -> Vec<C64> {
        let x: Vec<C64> = u.iter().chain(w).copied().collect();
        self.chart.mul_vec(&x)
    }

    fn dual(&self) -> &DualData {
        self.dual.get_or_init(|| {
            let n = 2 * self.d;
            let mut w = Vec::with_capacity(n);
            let mut u = Vec::with_capacity(n);
            for k in 0..n {
                let mut a = vec![C64::new(0.0, 0.0); n];
                a[k] = C64::new(0.0, TWO_PI);
                let (uk, wk) = self.split(&a);
                u.push(uk);
                w.push(wk);
            }
            let mut real = Matrix::<C64>::zeros(n, n);
            for (k, wk) in w.iter().enumerate() {
                for i in 0..self.d {
                    real[(i, k)] = C64::new(wk[i].re, 0.0);
                    real[(self.d + i, k)] = C64::new(wk[i].im, 0.0);
                }
            }
            let coord_inverse = inverse(&real, &self.frame).expect("dual lattice spans C^d over R");
            DualData { w, u, coord_inverse }
        })
    }

    /// Real coordinates of `w` in the dual lattice basis.
    pub fn lattice_coords(&self, w: &[C64]) -> Vec<f64> {
        let mut stacked: Vec<C64> = w.iter().map(|z| C64::new(z.re, 0.0)).collect();
        stacked.extend(w.iter().map(|z| C64::new(z.im, 0.0)));
        self.dual()
            .coord_inverse
            .mul_vec(&stacked)
            .into_iter()
            .map(|c| c.re)
            .collect()
    }

    /// The point of `C^d` with the given dual-lattice coordinates.
    pub fn xhat_vector(&self, xhat: &XHat) -> Vec<C64> {
        let mut w = vec![C64::new(0.0, 0.0); self.d];
        for (c, wk) in xhat.coords.iter().zip(&self.dual().w) {
            for (wi, g) in w.iter_mut().zip(wk) {
                *wi += g * *c;
            }
        }
        w
    }

    /// Canonical class of `w` in `X^`, with the integer translation removed.
    fn reduce(&self, w: &[C64]) -> (XHat, Vec<i64>) {
        let (coords, shifts) = self
            .lattice_coords(w)
            .into_iter()
            .map(|c| wrap_unit(c, self.frame.eps_lattice))
            .unzip();
        (XHat { coords }, shifts)
    }

    pub fn canonical_xhat(&self, w: &[C64]) -> XHat {
        self.reduce(w).0
    }

    /// Set-level chart `X^nat -> X^ x g*`: the class of `w` and the `g*`
    /// coordinate `u` left after removing the lattice translation, so that
    /// `hodge_scale(1, xhat, u)` returns `p`.
    pub fn natural_chart(&self, p: &NaturalPoint) -> (XHat, Vec<C64>) {
        let (mut u, w) = self.split(&p.a);
        let (xhat, shifts) = self.reduce(&w);
        for (n, uk) in shifts.iter().zip(&self.dual().u) {
            if *n != 0 {
                for (ui, g) in u.iter_mut().zip(uk) {
                    *ui -= g * (*n as f64);
                }
            }
        }
        (xhat, u)
    }

    /// Antilinear splitting `s(w): lambda -> w . conj(lambda)` plus the
    /// `C`-linear functional of `u`.
    pub fn lift(&self, xhat: &XHat, u: &[C64]) -> NaturalPoint {
        NaturalPoint::new(self.join(u, &self.xhat_vector(xhat)))
    }
}

/// `(fractional part, integer part)` of `c`, snapping to an integer within `eps`.
fn wrap_unit(c: f64, eps: f64) -> (f64, i64) {
    let nearest = c.round();
    if (c - nearest).abs() <= eps {
        return (0.0, nearest as i64);
    }
    let floor = c.floor();
    (c - floor, floor as i64)
}

/// Imaginary part moved into `(-pi, pi]`.
pub(crate) fn canonical_angle(im: f64) -> f64 {
    let k = ((im - PI) / TWO_PI).ceil();
    let r = im - TWO_PI * k;
    if r <= -PI {
        r + TWO_PI
    } else {
        r
    }
}

/// A point of `X^`, stored by its dual-lattice coordinates in `[0, 1)^2d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XHat {
    pub coords: Vec<f64>,
}

impl XHat {
    pub fn origin(d: usize) -> Self {
        Self {
            coords: vec![0.0; 2 * d],
        }
    }

    /// Equality on the torus: coordinates agree modulo 1 within `eps`.
    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| {
                let d = a - b;
                (d - d.round()).abs() <= eps
            })
    }
}

/// A point of `(C*)^2d`: the holonomies of a rank-one local system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BettiPoint {
    pub z: Vec<C64>,
}

impl BettiPoint {
    pub fn new(z: Vec<C64>, tol: &ToleranceFrame) -> Result<Self> {
        if let Some(j) = z.iter().position(|x| x.norm() <= tol.eps_eq) {
            return Err(Error::ZeroHolonomy(j));
        }
        Ok(Self { z })
    }
}

/// Lattice logarithms `a_j` modulo `2 pi i`, with `Im a_j` in `(-pi, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NaturalPoint {
    pub a: Vec<C64>,
}

impl NaturalPoint {
    pub fn new(a: Vec<C64>) -> Self {
        Self {
            a: a.into_iter().map(|z| C64::new(z.re, canonical_angle(z.im))).collect(),
        }
    }

    /// Equality modulo `2 pi i` within `eps` per coordinate.
    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.a.len() == other.a.len()
            && self.a.iter().zip(&other.a).all(|(x, y)| {
                let dre = x.re - y.re;
                let dim = canonical_angle(x.im - y.im);
                dre.hypot(dim) <= eps
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CotangentPoint {
    pub xhat: XHat,
    pub eta: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HodgePoint {
    pub tau: C64,
    pub xhat: XHat,
    pub u: Vec<C64>,
}

/// `z_j = exp(a_j)`.
pub fn exp_rh(p: &NaturalPoint) -> BettiPoint {
    BettiPoint {
        z: p.a.iter().map(|a| C64::exp(*a)).collect(),
    }
}

/// Principal logarithm per coordinate.
pub fn log_rh(z: &BettiPoint, tol: &ToleranceFrame) -> Result<NaturalPoint> {
    if let Some(j) = z.z.iter().position(|x| x.norm() <= tol.eps_eq) {
        return Err(Error::ZeroHolonomy(j));
    }
    Ok(NaturalPoint::new(z.z.iter().map(|x| C64::ln(*x)).collect()))
}

/// Generators `w_k` of `Lambda^`, one per lattice generator `lambda_k`.
pub fn dual_lattice(x: &AbelianVarietyModel) -> &[Vec<C64>] {
    &x.dual().w
}

/// Class in `X^` of the antilinear part of `p`.
pub fn natural_project(x: &AbelianVarietyModel, p: &NaturalPoint) -> XHat {
    x.natural_chart(p).0
}

/// `a_j + u . lambda_j`.
pub fn gstar_act(x: &AbelianVarietyModel, p: &NaturalPoint, u: &[C64]) -> NaturalPoint {
    let zero = vec![C64::new(0.0, 0.0); x.d()];
    let shift = x.join(u, &zero);
    NaturalPoint::new(p.a.iter().zip(shift).map(|(a, s)| a + s).collect())
}

/// `s(xhat) + lift(u / tau)`: the fibre of the Hodge family over `tau != 0`
/// identified with `X^nat`.
pub fn hodge_scale(x: &AbelianVarietyModel, h: &HodgePoint) -> Result<NaturalPoint> {
    if h.tau.norm() <= x.frame().eps_eq {
        return Err(Error::TauZero);
    }
    let u: Vec<C64> = h.u.iter().map(|ui| ui / h.tau).collect();
    Ok(x.lift(&h.xhat, &u))
}

/// Inverse of [`hodge_scale`] at a given `tau`.
pub fn hodge_unscale(x: &AbelianVarietyModel, p: &NaturalPoint, tau: C64) -> Result<HodgePoint> {
    if tau.norm() <= x.frame().eps_eq {
        return Err(Error::TauZero);
    }
    let (xhat, u) = x.natural_chart(p);
    Ok(HodgePoint {
        tau,
        xhat,
        u: u.into_iter().map(|ui| ui * tau).collect(),
    })
}

/// A point of one of the fibre spaces, tagged by space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "lowercase", deny_unknown_fields)]
pub enum FiberPoint {
    Betti { z: Vec<C64> },
    Dual { xhat: XHat },
    Cotangent { xhat: XHat, eta: Vec<C64> },
    Natural { a: Vec<C64> },
    Hodge { tau: C64, xhat: XHat, u: Vec<C64> },
    Product { xhat: XHat, covector: Vec<C64> },
}

impl FiberPoint {
    pub fn space_name(&self) -> &'static str {
        match self {
            FiberPoint::Betti { .. } => "betti",
            FiberPoint::Dual { .. } => "dual",
            FiberPoint::Cotangent { .. } => "cotangent",
            FiberPoint::Natural { .. } => "natural",
            FiberPoint::Hodge { .. } => "hodge",
            FiberPoint::Product { .. } => "product",
        }
    }

    /// Equality under the space's own notion: plain coordinates for `C^k`
    /// factors, modulo `2 pi i` for natural points, modulo the dual lattice for
    /// `X^` components.
    pub fn approx_eq(&self, other: &Self, tol: &ToleranceFrame) -> bool {
        let close = |a: &[C64], b: &[C64], eps: f64| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= eps)
        };
        let (eq, lat) = (tol.eps_eq, tol.eps_lattice);
        match (self, other) {
            (FiberPoint::Betti { z: a }, FiberPoint::Betti { z: b }) => {
                let scale = a.iter().chain(b).map(|z| z.norm()).fold(1.0, f64::max);
                close(a, b, eq * scale)
            }
            (FiberPoint::Natural { a }, FiberPoint::Natural { a: b }) => {
                let scale = a.iter().chain(b).map(|z| z.norm()).fold(1.0, f64::max);
                NaturalPoint { a: a.clone() }.approx_eq(&NaturalPoint { a: b.clone() }, eq * scale)
            }
            (FiberPoint::Dual { xhat: a }, FiberPoint::Dual { xhat: b }) => a.approx_eq(b, lat),
            (FiberPoint::Cotangent { xhat: a, eta: e }, FiberPoint::Cotangent { xhat: b, eta: f }) => {
                a.approx_eq(b, lat) && close(e, f, eq * scale_of(e, f))
            }
            (
                FiberPoint::Hodge { tau: s, xhat: a, u: e },
                FiberPoint::Hodge { tau: t, xhat: b, u: f },
            ) => (s - t).norm() <= eq && a.approx_eq(b, lat) && close(e, f, eq * scale_of(e, f)),
            (
                FiberPoint::Product { xhat: a, covector: e },
                FiberPoint::Product { xhat: b, covector: f },
            ) => a.approx_eq(b, lat) && close(e, f, eq * scale_of(e, f)),
            _ => false,
        }
    }
}

fn scale_of(a: &[C64], b: &[C64]) -> f64 {
    a.iter().chain(b).map(|z| z.norm()).fold(1.0, f64::max)
}
