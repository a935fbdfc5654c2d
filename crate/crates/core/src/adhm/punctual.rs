use super::{is_stable, joint_support, CommutingTuple, MarkedTuple};
use crate::error::{Error, Result};
use crate::linalg::{inverse, Field, LinalgError, Matrix, ToleranceFrame};

/// A length-`l` datum at one point: `B_j = p_j Id + N_j` with the `N_j`
/// commuting and nilpotent, plus an optional cyclic marking.
#[derive(Debug, Clone, PartialEq)]
pub struct PunctualData<F> {
    point: Vec<F>,
    nilpotent: CommutingTuple<F>,
    marking: Option<Vec<F>>,
}

impl<F: Field> PunctualData<F> {
    /// Validates nilpotency (float: `|N^l|_F <= eps_eq max(1, |N|_F)^l`) and
    /// cyclicity of the marking.
    pub fn new(point: Vec<F>, nilpotent: CommutingTuple<F>, marking: Option<Vec<F>>, tol: &ToleranceFrame) -> Result<Self> {
        if point.len() != nilpotent.m() {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates but there are {} nilpotent matrices",
                point.len(),
                nilpotent.m()
            )));
        }
        let l = nilpotent.n();
        for (j, b) in nilpotent.mats().iter().enumerate() {
            let p = b.pow(l);
            let ok = if F::MODE.is_exact() {
                p.is_zero()
            } else {
                p.frobenius() <= tol.eps_eq * b.frobenius().max(1.0).powi(l as i32)
            };
            if !ok {
                return Err(Error::InvalidInput(format!("matrix {j} is not nilpotent")));
            }
        }
        let data = Self {
            point,
            nilpotent,
            marking,
        };
        if let Some(v) = &data.marking {
            let mt = MarkedTuple::new(data.nilpotent.clone(), v.clone(), tol)?;
            if !is_stable(&mt, tol) {
                return Err(Error::MarkingNotCyclic);
            }
        }
        Ok(data)
    }

    pub(crate) fn new_unchecked(point: Vec<F>, nilpotent: CommutingTuple<F>, marking: Option<Vec<F>>) -> Self {
        Self {
            point,
            nilpotent,
            marking,
        }
    }

    pub fn point(&self) -> &[F] {
        &self.point
    }

    pub fn nilpotent(&self) -> &CommutingTuple<F> {
        &self.nilpotent
    }

    pub fn marking(&self) -> Option<&[F]> {
        self.marking.as_deref()
    }

    /// Length `l`.
    pub fn len(&self) -> usize {
        self.nilpotent.n()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The full tuple `p_j Id + N_j`.
    pub fn full_tuple(&self) -> CommutingTuple<F> {
        let mats = self
            .nilpotent
            .mats()
            .iter()
            .zip(&self.point)
            .map(|(n, p)| n.shift_diagonal(p))
            .collect();
        CommutingTuple::new_unchecked(self.len(), mats)
    }

    /// The marked tuple `(p Id + N, v)`; `None` when unmarked.
    pub fn marked_tuple(&self, tol: &ToleranceFrame) -> Option<MarkedTuple<F>> {
        let v = self.marking.clone()?;
        MarkedTuple::new(self.full_tuple(), v, tol).ok()
    }
}

/// Splits a stable marked tuple over its joint generalized eigenspaces,
/// sorted by point.
pub fn decompose_punctual<F: Field>(mt: &MarkedTuple<F>, tol: &ToleranceFrame) -> Result<Vec<PunctualData<F>>> {
    if !is_stable(mt, tol) {
        return Err(Error::NotStable);
    }
    let t = mt.tuple();
    let n = t.n();
    let support = joint_support(t, tol)?;
    let mut blocks: Vec<Vec<Vec<F>>> = Vec::with_capacity(support.len());
    for (p, c) in &support {
        if *c == n {
            blocks.push(Matrix::<F>::identity(n).columns());
            continue;
        }
        let powers: Vec<Matrix<F>> = t
            .mats()
            .iter()
            .zip(p)
            .map(|(b, pj)| b.shift_diagonal(&-pj.clone()).pow(*c))
            .collect();
        let floor = t.scale().powi(*c as i32);
        let basis = F::kernel_with_floor(&Matrix::vstack(&powers), floor, tol);
        if basis.len() != *c {
            return Err(LinalgError::NoConvergence.into());
        }
        blocks.push(basis);
    }
    let cols: Vec<Vec<F>> = blocks.iter().flatten().cloned().collect();
    let p_mat = Matrix::from_columns(n, &cols);
    let p_inv = inverse(&p_mat, tol).ok_or(LinalgError::NoConvergence)?;
    let adapted = mt.conjugate(&p_mat, &p_inv);

    let mut out = Vec::with_capacity(support.len());
    let mut start = 0;
    for ((p, c), _) in support.iter().zip(&blocks) {
        let idx: Vec<usize> = (start..start + c).collect();
        let nil = adapted
            .tuple()
            .mats()
            .iter()
            .zip(p)
            .map(|(b, pj)| b.submatrix(&idx, &idx).shift_diagonal(&-pj.clone()))
            .collect();
        let v = idx.iter().map(|&i| adapted.v()[i].clone()).collect();
        out.push(PunctualData::new_unchecked(
            p.clone(),
            CommutingTuple::new_unchecked(*c, nil),
            Some(v),
        ));
        start += c;
    }
    Ok(out)
}

/// Direct sum of marked punctual pieces.
pub fn assemble<F: Field>(pieces: &[PunctualData<F>], tol: &ToleranceFrame) -> Result<MarkedTuple<F>> {
    let Some(first) = pieces.first() else {
        return Err(Error::InvalidInput("nothing to assemble".into()));
    };
    let m = first.point.len();
    if pieces.iter().any(|p| p.point.len() != m) {
        return Err(Error::InvalidInput("pieces have different numbers of coordinates".into()));
    }
    let tuples: Vec<CommutingTuple<F>> = pieces.iter().map(PunctualData::full_tuple).collect();
    let mats = (0..m)
        .map(|j| {
            let blocks: Vec<Matrix<F>> = tuples.iter().map(|t| t.mats()[j].clone()).collect();
            Matrix::block_diagonal(&blocks)
        })
        .collect();
    let n = pieces.iter().map(PunctualData::len).sum();
    let mut v = Vec::with_capacity(n);
    for p in pieces {
        let marking = p
            .marking
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("assembly needs marked pieces".into()))?;
        v.extend(marking.iter().cloned());
    }
    MarkedTuple::new(CommutingTuple::new_unchecked(n, mats), v, tol)
}

/// A one-variable analytic germ applied to one coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum Germ<F> {
    Exp,
    /// Principal branch.
    Log,
    Scale(F),
    /// `f(p + z) = sum_k c_k z^k`, centred at the base coordinate; needs at
    /// least `l` coefficients.
    Series(Vec<F>),
}

/// Substitutes `p_j Id + N_j` into the germ of each coordinate. Only the first
/// `l` Taylor terms matter because `N_j^l = 0`.
pub fn punctual_transport<F: Field>(
    data: &PunctualData<F>,
    germs: &[Germ<F>],
    tol: &ToleranceFrame,
) -> Result<PunctualData<F>> {
    let m = data.point.len();
    if germs.len() != m {
        return Err(Error::InvalidInput(format!("expected {m} germs, got {}", germs.len())));
    }
    let l = data.len();
    let mut point = Vec::with_capacity(m);
    let mut mats = Vec::with_capacity(m);
    for ((germ, p), n) in germs.iter().zip(&data.point).zip(data.nilpotent.mats()) {
        let (base, coeffs) = taylor(germ, p, l, tol)?;
        point.push(base);
        mats.push(nilpotent_series(n, &coeffs));
    }
    let nilpotent = CommutingTuple::new_unchecked(l, mats);
    if let Some(v) = &data.marking {
        let mt = MarkedTuple::new(nilpotent.clone(), v.clone(), tol)?;
        if !is_stable(&mt, tol) {
            return Err(Error::MarkingNotCyclic);
        }
    }
    Ok(PunctualData::new_unchecked(point, nilpotent, data.marking.clone()))
}

/// `f(p)` and the Taylor coefficients `c_1..c_(l-1)` of `f` at `p`.
fn taylor<F: Field>(germ: &Germ<F>, p: &F, l: usize, tol: &ToleranceFrame) -> Result<(F, Vec<F>)> {
    let k_max = l.saturating_sub(1);
    match germ {
        Germ::Exp => {
            let e = p
                .exp()
                .ok_or_else(|| Error::NotRepresentable(format!("exp({})", p.to_c64())))?;
            // e^p z^k / k!
            let mut coeffs = Vec::with_capacity(k_max);
            let mut c = e.clone();
            for k in 1..=k_max {
                c = c / F::from_i64(k as i64);
                coeffs.push(c.clone());
            }
            Ok((e, coeffs))
        }
        Germ::Log => {
            let zero = if F::MODE.is_exact() {
                p.is_zero()
            } else {
                p.modulus() <= tol.eps_eq
            };
            if zero {
                return Err(Error::LogAtZero);
            }
            let base = p
                .ln()
                .ok_or_else(|| Error::NotRepresentable(format!("log({})", p.to_c64())))?;
            // (-1)^(k+1) z^k / (k p^k)
            let mut coeffs = Vec::with_capacity(k_max);
            let inv = F::one() / p.clone();
            let mut pw = F::one();
            for k in 1..=k_max {
                pw = pw * inv.clone();
                let c = pw.clone() / F::from_i64(k as i64);
                coeffs.push(if k % 2 == 1 { c } else { -c });
            }
            Ok((base, coeffs))
        }
        Germ::Scale(c) => {
            let mut coeffs = vec![F::zero(); k_max];
            if k_max > 0 {
                coeffs[0] = c.clone();
            }
            Ok((c.clone() * p.clone(), coeffs))
        }
        Germ::Series(cs) => {
            if cs.len() < l.max(1) {
                return Err(Error::InvalidInput(format!(
                    "series has {} coefficients but the length is {l}",
                    cs.len()
                )));
            }
            Ok((cs[0].clone(), cs[1..l.max(1)].to_vec()))
        }
    }
}

/// `sum_k c_k N^k` for `k = 1..`.
fn nilpotent_series<F: Field>(n: &Matrix<F>, coeffs: &[F]) -> Matrix<F> {
    let size = n.rows();
    let mut acc = Matrix::<F>::zeros(size, size);
    let mut power = Matrix::<F>::identity(size);
    for c in coeffs {
        power = power.mul(n);
        if !c.is_zero() {
            acc = acc.add(&power.scale(c));
        }
    }
    acc
}
