//! Classification triples `(alpha, beta, gamma)` of D-algebras whose Lie
//! algebroid is the trivial bundle `O_X (x) V` with anchor induced by a linear
//! map `alpha: V -> g`.
//!
//! The bracket on `V` itself is fixed to zero, so the algebroid is determined
//! by `alpha` alone. `beta: V -> g^` and `gamma in /\^2 V*` are the extension
//! data. Matrices act on column vectors in the basis `e_1..e_v` of `V`.

mod poly;

pub use poly::{MPoly, Section};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inverse, rank, Field, Matrix, ToleranceFrame};

/// How the coefficient space `V` is read when `v = d`. It only affects the
/// label of the triple `(0, 0, 0)`: Dolbeault on tangent coefficients,
/// co-Higgs on cotangent coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientBundle {
    #[default]
    Tangent,
    Cotangent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtaiTriple<F> {
    d: usize,
    v: usize,
    alpha: Matrix<F>,
    beta: Matrix<F>,
    gamma: Matrix<F>,
    bundle: CoefficientBundle,
}

impl<F: Field> UtaiTriple<F> {
    /// `alpha` and `beta` are `d x v`, `gamma` is `v x v` and antisymmetric
    /// (within `eps_eq * |gamma|` in float mode).
    pub fn new(
        d: usize,
        v: usize,
        alpha: Matrix<F>,
        beta: Matrix<F>,
        gamma: Matrix<F>,
        tol: &ToleranceFrame,
    ) -> Result<Self> {
        let shape = |name: &str, m: &Matrix<F>, r: usize, c: usize| {
            if (m.rows(), m.cols()) == (r, c) {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "{name} must be {r}x{c}, got {}x{}",
                    m.rows(),
                    m.cols()
                )))
            }
        };
        shape("alpha", &alpha, d, v)?;
        shape("beta", &beta, d, v)?;
        shape("gamma", &gamma, v, v)?;
        let sym = gamma.add(&gamma.transpose());
        if !negligible(&sym, gamma.frobenius(), tol) {
            return Err(Error::NotAntisymmetric);
        }
        Ok(Self {
            d,
            v,
            alpha,
            beta,
            gamma,
            bundle: CoefficientBundle::Tangent,
        })
    }

    pub fn with_bundle(mut self, bundle: CoefficientBundle) -> Self {
        self.bundle = bundle;
        self
    }

    pub fn zero(d: usize, v: usize) -> Self {
        Self {
            d,
            v,
            alpha: Matrix::zeros(d, v),
            beta: Matrix::zeros(d, v),
            gamma: Matrix::zeros(v, v),
            bundle: CoefficientBundle::Tangent,
        }
    }

    /// `(Id, 0, 0)` with `v = d`.
    pub fn de_rham(d: usize) -> Self {
        Self {
            alpha: Matrix::identity(d),
            ..Self::zero(d, d)
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn alpha(&self) -> &Matrix<F> {
        &self.alpha
    }

    pub fn beta(&self) -> &Matrix<F> {
        &self.beta
    }

    pub fn gamma(&self) -> &Matrix<F> {
        &self.gamma
    }

    pub fn bundle(&self) -> CoefficientBundle {
        self.bundle
    }

    fn scale(&self) -> f64 {
        self.alpha.frobenius() + self.beta.frobenius() + self.gamma.frobenius()
    }
}

fn negligible<F: Field>(m: &Matrix<F>, scale: f64, tol: &ToleranceFrame) -> bool {
    if F::MODE.is_exact() {
        m.is_zero()
    } else {
        m.frobenius() <= tol.eps_eq * scale.max(1.0)
    }
}

/// Triple of the Fourier–Mukai dual D-algebra on the dual variety:
/// `(alpha, beta, gamma) -> (-beta, alpha, gamma)`.
pub fn fm_dual<F: Field>(t: &UtaiTriple<F>) -> UtaiTriple<F> {
    UtaiTriple {
        alpha: t.beta.neg(),
        beta: t.alpha.clone(),
        ..t.clone()
    }
}

/// `g . (alpha, beta, gamma) = (alpha g^-1, beta g^-1, g^-T gamma g^-1)`.
pub fn gl_act<F: Field>(g: &Matrix<F>, t: &UtaiTriple<F>, tol: &ToleranceFrame) -> Result<UtaiTriple<F>> {
    if (g.rows(), g.cols()) != (t.v, t.v) {
        return Err(Error::InvalidInput(format!(
            "group element must be {0}x{0}",
            t.v
        )));
    }
    let gi = inverse(g, tol).ok_or(Error::SingularGroupElement)?;
    Ok(UtaiTriple {
        alpha: t.alpha.mul(&gi),
        beta: t.beta.mul(&gi),
        gamma: gi.transpose().mul(&t.gamma).mul(&gi),
        ..t.clone()
    })
}

/// Ranks that are constant on `GL(V)`-orbits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInvariants {
    pub rank_alpha: usize,
    pub rank_beta: usize,
    pub rank_stacked: usize,
    pub rank_gamma: usize,
    pub d: usize,
    pub v: usize,
}

pub fn orbit_invariants<F: Field>(t: &UtaiTriple<F>, tol: &ToleranceFrame) -> OrbitInvariants {
    OrbitInvariants {
        rank_alpha: rank(&t.alpha, tol),
        rank_beta: rank(&t.beta, tol),
        rank_stacked: rank(&Matrix::vstack(&[t.alpha.clone(), t.beta.clone()]), tol),
        rank_gamma: rank(&t.gamma, tol),
        d: t.d,
        v: t.v,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DAlgebraKind<F> {
    DeRham,
    Dolbeault,
    TauConnection(F),
    Foliation,
    CoHiggs,
    TwistedDifferentialOperators,
    Generic,
}

impl<F> DAlgebraKind<F> {
    pub fn name(&self) -> &'static str {
        match self {
            DAlgebraKind::DeRham => "DeRham",
            DAlgebraKind::Dolbeault => "Dolbeault",
            DAlgebraKind::TauConnection(_) => "TauConnection",
            DAlgebraKind::Foliation => "Foliation",
            DAlgebraKind::CoHiggs => "CoHiggs",
            DAlgebraKind::TwistedDifferentialOperators => "TwistedDifferentialOperators",
            DAlgebraKind::Generic => "Generic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DAlgebraLabel<F> {
    pub kind: DAlgebraKind<F>,
    pub abelian: bool,
}

/// Labels a triple.
///
/// With `beta = gamma = 0`: invertible `alpha` is De Rham (it is the identity
/// after a change of basis of `V`) unless `alpha = tau Id` with `tau != 1`,
/// which is reported as `TauConnection(tau)`; `alpha = 0` with `v = d` is
/// Dolbeault (co-Higgs on cotangent coefficients); injective non-surjective
/// `alpha` is a foliation. Invertible `alpha` with `(beta, gamma) != 0` gives
/// twisted differential operators. Everything else is generic.
pub fn classify<F: Field>(t: &UtaiTriple<F>, tol: &ToleranceFrame) -> DAlgebraLabel<F> {
    let scale = t.scale();
    let alpha_zero = negligible(&t.alpha, scale, tol);
    let beta_zero = negligible(&t.beta, scale, tol);
    let gamma_zero = negligible(&t.gamma, scale, tol);
    let rank_alpha = rank(&t.alpha, tol);
    let invertible = t.v == t.d && rank_alpha == t.d && t.d > 0;
    let injective = rank_alpha == t.v && t.v > 0;

    let kind = if beta_zero && gamma_zero {
        if t.v == t.d && alpha_zero {
            match t.bundle {
                CoefficientBundle::Tangent => DAlgebraKind::Dolbeault,
                CoefficientBundle::Cotangent => DAlgebraKind::CoHiggs,
            }
        } else if invertible {
            let tau = t.alpha[(0, 0)].clone();
            let off = t.alpha.sub(&Matrix::scalar(t.d, tau.clone()));
            if negligible(&off, scale, tol) && !tau.near(&F::one(), tol.eps_eq) {
                DAlgebraKind::TauConnection(tau)
            } else {
                DAlgebraKind::DeRham
            }
        } else if injective {
            DAlgebraKind::Foliation
        } else {
            DAlgebraKind::Generic
        }
    } else if invertible {
        DAlgebraKind::TwistedDifferentialOperators
    } else {
        DAlgebraKind::Generic
    };
    DAlgebraLabel {
        kind,
        abelian: alpha_zero && gamma_zero,
    }
}

/// `[f e_u, g e_w] = f (alpha(e_u) . grad g) e_w - g (alpha(e_w) . grad f) e_u`.
pub fn bracket_eval<F: Field>(t: &UtaiTriple<F>, f: &MPoly<F>, u: usize, g: &MPoly<F>, w: usize) -> Section<F> {
    let mut out = vec![MPoly::zero(t.d); t.v];
    let first = f.mul(&g.directional(&t.alpha.column(u)));
    let second = g.mul(&f.directional(&t.alpha.column(w)));
    out[w] = out[w].add(&first);
    out[u] = out[u].sub(&second);
    out
}

/// Bilinear extension of [`bracket_eval`] to arbitrary sections.
pub fn bracket<F: Field>(t: &UtaiTriple<F>, s1: &Section<F>, s2: &Section<F>) -> Section<F> {
    let mut out = vec![MPoly::zero(t.d); t.v];
    for (u, f) in s1.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        for (w, g) in s2.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            for (k, p) in bracket_eval(t, f, u, g, w).into_iter().enumerate() {
                out[k] = out[k].add(&p);
            }
        }
    }
    out
}

pub(crate) fn section_add<F: Field>(a: &Section<F>, b: &Section<F>) -> Section<F> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn section_max_abs<F: Field>(s: &Section<F>) -> f64 {
    s.iter().map(MPoly::max_abs).fold(0.0, f64::max)
}

/// Whether the cyclic sum `[a,[b,c]] + [b,[c,a]] + [c,[a,b]]` vanishes on every
/// sample (identically in exact mode, up to `eps_eq` relative in float mode).
pub fn jacobi_check<F: Field>(t: &UtaiTriple<F>, samples: &[[Section<F>; 3]], tol: &ToleranceFrame) -> bool {
    samples.iter().all(|[a, b, c]| {
        let terms = [
            bracket(t, a, &bracket(t, b, c)),
            bracket(t, b, &bracket(t, c, a)),
            bracket(t, c, &bracket(t, a, b)),
        ];
        let sum = section_add(&section_add(&terms[0], &terms[1]), &terms[2]);
        if F::MODE.is_exact() {
            sum.iter().all(MPoly::is_zero)
        } else {
            let scale = terms.iter().map(section_max_abs).fold(1.0, f64::max);
            section_max_abs(&sum) <= tol.eps_eq * scale
        }
    })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `sum_{p+q=k} C(d,q) C(v,p)`.
pub fn cohomology_dim(d: usize, v: usize, k: usize) -> u128 {
    truncated_cohomology_dim(d, v, k, 0)
}

/// `sum_{p+q=k, p>=r} C(d,q) C(v,p)`.
pub fn truncated_cohomology_dim(d: usize, v: usize, k: usize, r: usize) -> u128 {
    (r..=k).map(|p| binomial(v, p) * binomial(d, k - p)).sum()
}

#[cfg(test)]
mod tests;
