//! Dense univariate polynomials and `Q(i)` root search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive};

use super::{float, Field, GaussRat, LinalgError, Matrix, C64};

/// Coefficients from the constant term upward, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = F::one() / lead.clone();
                Self::new(self.coeffs.iter().map(|c| c.clone() * inv.clone()).collect())
            }
        }
    }

    /// Panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = F::one() / divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return (Self::new(Vec::new()), self.clone());
        };
        let mut quot = vec![F::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Roots in `Q(i)` of a polynomial with `Q(i)` coefficients, with
/// multiplicities, canonically sorted. Fails unless the polynomial splits into
/// linear factors over `Q(i)`.
///
/// Candidate roots come from a float approximation of the square-free part;
/// each candidate is accepted only after exact evaluation returns zero.
pub fn gaussian_rational_roots(p: &Poly<GaussRat>) -> Result<Vec<(GaussRat, usize)>, LinalgError> {
    let Some(deg) = p.degree() else {
        return Err(LinalgError::NonSplitCharPoly);
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let p = p.monic();
    let g = p.gcd(&p.derivative());
    let (square_free, _) = p.div_rem(&g);
    let square_free = square_free.monic();

    let approx = approximate_roots(&square_free)?;
    let denom = common_denominator(&square_free);
    let mut roots: Vec<GaussRat> = Vec::new();
    for r in approx {
        let found = candidates(r, &denom)
            .into_iter()
            .find(|c| square_free.eval(c).is_zero() && !roots.contains(c));
        match found {
            Some(c) => roots.push(c),
            None => return Err(LinalgError::NonSplitCharPoly),
        }
    }

    let mut out = Vec::with_capacity(roots.len());
    let mut rest = p;
    for r in roots {
        let linear = Poly::new(vec![-r.clone(), <GaussRat as Field>::one()]);
        let mut mult = 0;
        loop {
            let (q, rem) = rest.div_rem(&linear);
            if !rem.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        out.push((r, mult));
    }
    if rest.degree() != Some(0) {
        return Err(LinalgError::NonSplitCharPoly);
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

fn approximate_roots(p: &Poly<GaussRat>) -> Result<Vec<C64>, LinalgError> {
    let deg = p.degree().unwrap_or(0);
    let coeffs: Vec<C64> = p.coeffs().iter().map(Field::to_c64).collect();
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(LinalgError::NonSplitCharPoly);
    }
    let mut companion = Matrix::<C64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -coeffs[i];
    }
    let mut roots = float::schur_eigenvalues(&companion)?;
    let fp = Poly::new(coeffs);
    let dfp = fp.derivative();
    for r in roots.iter_mut() {
        for _ in 0..8 {
            let d = dfp.eval(r);
            if d.norm() == 0.0 {
                break;
            }
            let step = fp.eval(r) / d;
            *r -= step;
            if step.norm() <= f64::EPSILON * r.norm().max(1.0) {
                break;
            }
        }
    }
    Ok(roots)
}

fn common_denominator(p: &Poly<GaussRat>) -> BigInt {
    p.coeffs().iter().fold(BigInt::one(), |acc, c| {
        acc.lcm(c.re.denom()).lcm(c.im.denom())
    })
}

fn candidates(r: C64, denom: &BigInt) -> Vec<GaussRat> {
    let mut out = Vec::new();
    if let Some(d) = denom.to_f64().filter(|d| *d < 2f64.powi(52)) {
        let round = |x: f64| BigInt::from_f64((x * d).round());
        if let (Some(re), Some(im)) = (round(r.re), round(r.im)) {
            out.push(GaussRat::new(
                BigRational::new(re, denom.clone()),
                BigRational::new(im, denom.clone()),
            ));
        }
    }
    if let (Some(re), Some(im)) = (best_rational(r.re, 1 << 24), best_rational(r.im, 1 << 24)) {
        out.push(GaussRat::new(re, im));
    }
    out
}

/// Best rational approximation with bounded denominator (continued fractions).
fn best_rational(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut frac = x;
    for _ in 0..64 {
        let a = frac.floor();
        let ai = BigInt::from_f64(a)?;
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2.abs() > BigInt::from(max_den) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let rem = frac - a;
        if rem.abs() < 1e-12 {
            break;
        }
        frac = 1.0 / rem;
    }
    if k1 == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(h1, k1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussRat {
        GaussRat::gaussian(re, im)
    }

    #[test]
    fn x_squared_plus_one_splits_over_gaussian_rationals() {
        let p = Poly::new(vec![g(1, 0), g(0, 0), g(1, 0)]);
        let roots = gaussian_rational_roots(&p).unwrap();
        assert_eq!(roots, vec![(g(0, -1), 1), (g(0, 1), 1)]);
    }

    #[test]
    fn repeated_rational_roots_carry_multiplicity() {
        // (x - 1/3)^3 (x + 2i)
        let third = GaussRat::from_ratio(1, 3);
        let lin = |r: GaussRat| Poly::new(vec![-r, g(1, 0)]);
        let mut p = Poly::new(vec![g(1, 0)]);
        for f in [lin(third.clone()), lin(third.clone()), lin(third.clone()), lin(g(0, -2))] {
            p = mul(&p, &f);
        }
        let roots = gaussian_rational_roots(&p).unwrap();
        assert_eq!(roots, vec![(g(0, -2), 1), (third, 3)]);
    }

    #[test]
    fn irrational_roots_are_rejected() {
        let p = Poly::new(vec![g(-2, 0), g(0, 0), g(1, 0)]);
        assert_eq!(gaussian_rational_roots(&p), Err(LinalgError::NonSplitCharPoly));
    }

    fn mul(a: &Poly<GaussRat>, b: &Poly<GaussRat>) -> Poly<GaussRat> {
        let mut out = vec![g(0, 0); a.coeffs().len() + b.coeffs().len() - 1];
        for (i, x) in a.coeffs().iter().enumerate() {
            for (j, y) in b.coeffs().iter().enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        Poly::new(out)
    }
}
