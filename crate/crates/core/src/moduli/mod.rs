//! Points of `Sym^n` and `Hilb^n` over the rank-one fibre spaces, and the maps
//! between them: Hilbert–Chow, Betti data from commuting invertible tuples,
//! Riemann–Hilbert, the Hodge family and rank-one identification.
//!
//! Base points are double precision [`FiberPoint`]s. Each piece also carries
//! its punctual datum in `F`: the base point's chart coordinates and the
//! nilpotent part in the chart centred there. Betti pieces use the
//! multiplicative chart `B_j = z_j (Id + U_j)`; every other space uses the
//! additive chart of its coordinates. Riemann–Hilbert and the Hodge maps act
//! on the nilpotent parts through finite series and exact linear maps, so
//! they are exact in exact mode.

#[cfg(test)]
mod tests;

use crate::adhm::{
    decompose_punctual, joint_support, punctual_transport, tuple_cmp, CommutingTuple, Germ, MarkedTuple,
    PunctualData,
};
use crate::error::{Error, Result};
use crate::linalg::{inverse, Field, Matrix, ToleranceFrame, C64};
use crate::torus::{
    exp_rh, hodge_scale, hodge_unscale, log_rh, natural_project, AbelianVarietyModel, BettiPoint, FiberPoint,
    HodgePoint, NaturalPoint, XHat,
};

/// One of the implemented fibre spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum FiberSpace<F> {
    /// `(C*)^2d`, holonomies of rank-one local systems.
    Betti { d: usize },
    DualTorus { model: AbelianVarietyModel },
    /// `X^ x C^d`, line bundle and Higgs covector.
    Cotangent { model: AbelianVarietyModel },
    /// Rank-one flat connections, in lattice logarithms.
    Natural { model: AbelianVarietyModel },
    /// The fibre of the Hodge family over `tau`, in `(u, w)` chart coordinates.
    HodgeFiber { model: AbelianVarietyModel, tau: F },
    /// `X^ x V*`, the `alpha = 0` case with `dim V = vdim`.
    ProductAlphaZero { model: AbelianVarietyModel, vdim: usize },
}

impl<F: Field> FiberSpace<F> {
    pub fn d(&self) -> usize {
        match self {
            FiberSpace::Betti { d } => *d,
            FiberSpace::DualTorus { model }
            | FiberSpace::Cotangent { model }
            | FiberSpace::Natural { model }
            | FiberSpace::HodgeFiber { model, .. }
            | FiberSpace::ProductAlphaZero { model, .. } => model.d(),
        }
    }

    pub fn model(&self) -> Option<&AbelianVarietyModel> {
        match self {
            FiberSpace::Betti { .. } => None,
            FiberSpace::DualTorus { model }
            | FiberSpace::Cotangent { model }
            | FiberSpace::Natural { model }
            | FiberSpace::HodgeFiber { model, .. }
            | FiberSpace::ProductAlphaZero { model, .. } => Some(model),
        }
    }

    /// Number of chart coordinates, i.e. matrices per punctual datum.
    pub fn chart_dim(&self) -> usize {
        let d = self.d();
        match self {
            FiberSpace::DualTorus { .. } => d,
            FiberSpace::ProductAlphaZero { vdim, .. } => d + vdim,
            _ => 2 * d,
        }
    }

    /// The `space` tag of the matching [`FiberPoint`] variant.
    pub fn point_tag(&self) -> &'static str {
        match self {
            FiberSpace::Betti { .. } => "betti",
            FiberSpace::DualTorus { .. } => "dual",
            FiberSpace::Cotangent { .. } => "cotangent",
            FiberSpace::Natural { .. } => "natural",
            FiberSpace::HodgeFiber { .. } => "hodge",
            FiberSpace::ProductAlphaZero { .. } => "product",
        }
    }

    /// Chart coordinates of a point of this space.
    pub fn chart_coords(&self, p: &FiberPoint) -> Result<Vec<C64>> {
        if p.space_name() != self.point_tag() {
            return Err(Error::SpaceMismatch(format!(
                "a {} point in a {} space",
                p.space_name(),
                self.point_tag()
            )));
        }
        let model = self.model();
        let w = |x: &XHat| model.expect("non-Betti spaces carry a model").xhat_vector(x);
        let coords = match p {
            FiberPoint::Betti { z } => z.clone(),
            FiberPoint::Natural { a } => a.clone(),
            FiberPoint::Dual { xhat } => w(xhat),
            FiberPoint::Cotangent { xhat, eta } => [w(xhat), eta.clone()].concat(),
            FiberPoint::Hodge { xhat, u, .. } => [u.clone(), w(xhat)].concat(),
            FiberPoint::Product { xhat, covector } => [w(xhat), covector.clone()].concat(),
        };
        if coords.len() != self.chart_dim() {
            return Err(Error::InvalidInput(format!(
                "point has {} chart coordinates, the space needs {}",
                coords.len(),
                self.chart_dim()
            )));
        }
        if let (FiberSpace::HodgeFiber { tau, .. }, FiberPoint::Hodge { tau: t, .. }) = (self, p) {
            if (tau.to_c64() - t).norm() > 1e-12 * tau.modulus().max(1.0) {
                return Err(Error::SpaceMismatch("point lies over a different tau".into()));
            }
        }
        Ok(coords)
    }
}

/// A point of `Sym^n`: distinct points with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPoint<F> {
    pub space: FiberSpace<F>,
    pub support: Vec<(FiberPoint, usize)>,
}

impl<F: Field> SymPoint<F> {
    pub fn n(&self) -> usize {
        self.support.iter().map(|(_, c)| c).sum()
    }

    /// Same space and the same weighted support, matched point by point
    /// under the space's equality.
    pub fn approx_eq(&self, other: &Self, tol: &ToleranceFrame) -> bool {
        if self.space != other.space || self.support.len() != other.support.len() {
            return false;
        }
        let mut used = vec![false; other.support.len()];
        self.support.iter().all(|(p, c)| {
            let hit = other
                .support
                .iter()
                .enumerate()
                .find(|(i, (q, k))| !used[*i] && k == c && p.approx_eq(q, tol));
            match hit {
                Some((i, _)) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }
}

/// One piece of a [`HilbPoint`]: a base point and the punctual datum there.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbPiece<F> {
    pub point: FiberPoint,
    pub punctual: PunctualData<F>,
}

/// A point of `Hilb^n`: punctual pieces at pairwise distinct base points,
/// sorted by chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbPoint<F> {
    space: FiberSpace<F>,
    pieces: Vec<HilbPiece<F>>,
}

impl<F: Field> HilbPoint<F> {
    /// Validates the pieces against the space and merges pieces whose base
    /// points coincide. A merged piece keeps a marking only if the direct sum
    /// of markings is cyclic, otherwise `MarkingNotCyclic`.
    pub fn new(space: FiberSpace<F>, pieces: Vec<HilbPiece<F>>, tol: &ToleranceFrame) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidInput("a Hilbert scheme point needs at least one piece".into()));
        }
        let mut merged: Vec<HilbPiece<F>> = Vec::with_capacity(pieces.len());
        for piece in pieces {
            space.chart_coords(&piece.point)?;
            if piece.punctual.nilpotent().m() != space.chart_dim() {
                return Err(Error::InvalidInput(format!(
                    "punctual datum has {} matrices, the space has {} chart coordinates",
                    piece.punctual.nilpotent().m(),
                    space.chart_dim()
                )));
            }
            match merged.iter_mut().find(|q| q.point.approx_eq(&piece.point, tol)) {
                Some(q) => q.punctual = merge(&q.punctual, &piece.punctual, tol)?,
                None => merged.push(piece),
            }
        }
        merged.sort_by(|a, b| {
            let ca = space.chart_coords(&a.point).expect("validated");
            let cb = space.chart_coords(&b.point).expect("validated");
            tuple_cmp(&ca, &cb)
        });
        Ok(Self { space, pieces: merged })
    }

    pub fn space(&self) -> &FiberSpace<F> {
        &self.space
    }

    pub fn pieces(&self) -> &[HilbPiece<F>] {
        &self.pieces
    }

    /// Total length.
    pub fn n(&self) -> usize {
        self.pieces.iter().map(|p| p.punctual.len()).sum()
    }

    /// For each piece of `self`, the index of the piece of `other` at the
    /// same base point, or `None` when the supports differ. Matching is by
    /// point rather than by position since round-off can reorder pieces.
    pub fn matching(&self, other: &Self, tol: &ToleranceFrame) -> Option<Vec<usize>> {
        if self.space != other.space || self.pieces.len() != other.pieces.len() {
            return None;
        }
        let mut used = vec![false; other.pieces.len()];
        self.pieces
            .iter()
            .map(|a| {
                let i = (0..other.pieces.len()).find(|&i| !used[i] && a.point.approx_eq(&other.pieces[i].point, tol))?;
                used[i] = true;
                Some(i)
            })
            .collect()
    }

    /// Same support, with identical markings and nilpotent parts (within
    /// `eps_eq` in float mode) at matching points.
    pub fn approx_eq(&self, other: &Self, tol: &ToleranceFrame) -> bool {
        self.matching(other, tol).is_some_and(|idx| {
            self.pieces.iter().zip(idx).all(|(a, i)| {
                let b = &other.pieces[i];
                a.punctual.marking() == b.punctual.marking()
                    && nilpotents_close(a.punctual.nilpotent(), b.punctual.nilpotent(), tol)
            })
        })
    }
}

fn nilpotents_close<F: Field>(a: &CommutingTuple<F>, b: &CommutingTuple<F>, tol: &ToleranceFrame) -> bool {
    if F::MODE.is_exact() {
        return a == b;
    }
    let s = a.scale().max(b.scale());
    a.n() == b.n() && a.mats().iter().zip(b.mats()).all(|(x, y)| x.sub(y).frobenius() <= tol.eps_eq * s)
}

fn merge<F: Field>(a: &PunctualData<F>, b: &PunctualData<F>, tol: &ToleranceFrame) -> Result<PunctualData<F>> {
    let n = a.len() + b.len();
    let mats = a
        .nilpotent()
        .mats()
        .iter()
        .zip(b.nilpotent().mats())
        .map(|(x, y)| Matrix::block_diagonal(&[x.clone(), y.clone()]))
        .collect();
    let marking = match (a.marking(), b.marking()) {
        (None, None) => None,
        (Some(x), Some(y)) => Some([x, y].concat()),
        _ => return Err(Error::MarkingNotCyclic),
    };
    let nil = CommutingTuple::new_unchecked(n, mats);
    PunctualData::new(a.point().to_vec(), nil, marking, tol).map_err(|e| match e {
        Error::MarkingNotCyclic | Error::ZeroMarking => Error::MarkingNotCyclic,
        other => other,
    })
}

/// Weighted support of a Hilbert scheme point.
pub fn hilbert_chow<F: Field>(h: &HilbPoint<F>) -> SymPoint<F> {
    SymPoint {
        space: h.space.clone(),
        support: h.pieces.iter().map(|p| (p.point.clone(), p.punctual.len())).collect(),
    }
}

/// The point `(p_1, ..., p_m)` as a Betti point, or `ZeroEigenvalue(j)`.
fn betti_base<F: Field>(p: &[F]) -> Result<FiberPoint> {
    if let Some(j) = p.iter().position(Field::is_zero) {
        return Err(Error::ZeroEigenvalue(j));
    }
    Ok(FiberPoint::Betti {
        z: p.iter().map(Field::to_c64).collect(),
    })
}

fn betti_space<F: Field>(m: usize) -> Result<FiberSpace<F>> {
    if m == 0 || m % 2 != 0 {
        return Err(Error::InvalidInput(format!("Betti data needs 2d matrices, got {m}")));
    }
    Ok(FiberSpace::Betti { d: m / 2 })
}

/// Float zero test for joint eigenvalue coordinates.
fn check_invertible<F: Field>(support: &[(Vec<F>, usize)], scale: f64, tol: &ToleranceFrame) -> Result<()> {
    for (p, _) in support {
        for (j, x) in p.iter().enumerate() {
            let zero = if F::MODE.is_exact() {
                x.is_zero()
            } else {
                x.modulus() <= tol.eps_eq * scale
            };
            if zero {
                return Err(Error::ZeroEigenvalue(j));
            }
        }
    }
    Ok(())
}

/// The Hilbert scheme point of a stable marked representation of `Z^2d`:
/// its punctual decomposition in the multiplicative chart.
pub fn betti_marked<F: Field>(mt: &MarkedTuple<F>, tol: &ToleranceFrame) -> Result<HilbPoint<F>> {
    let space = betti_space(mt.tuple().m())?;
    let support = joint_support(mt.tuple(), tol)?;
    check_invertible(&support, mt.tuple().scale(), tol)?;
    let pieces = decompose_punctual(mt, tol)?
        .into_iter()
        .map(|piece| {
            let point = betti_base(piece.point())?;
            let mats = piece
                .nilpotent()
                .mats()
                .iter()
                .zip(piece.point())
                .map(|(n, p)| n.scale(&(F::one() / p.clone())))
                .collect();
            let unipotent = CommutingTuple::new_unchecked(piece.len(), mats);
            let punctual = PunctualData::new_unchecked(piece.point().to_vec(), unipotent, piece.marking().map(<[F]>::to_vec));
            Ok(HilbPiece { point, punctual })
        })
        .collect::<Result<Vec<_>>>()?;
    HilbPoint::new(space, pieces, tol)
}

/// The block diagonal tuple `z_j (Id + U_j)` of a Betti point, marked by the
/// concatenated markings.
pub fn betti_reassemble<F: Field>(h: &HilbPoint<F>, tol: &ToleranceFrame) -> Result<MarkedTuple<F>> {
    if !matches!(h.space, FiberSpace::Betti { .. }) {
        return Err(Error::SpaceMismatch("reassembly expects a Betti point".into()));
    }
    let pieces: Vec<PunctualData<F>> = h
        .pieces
        .iter()
        .map(|piece| {
            let p = piece.punctual.point();
            let mats = piece
                .punctual
                .nilpotent()
                .mats()
                .iter()
                .zip(p)
                .map(|(u, z)| u.scale(z))
                .collect();
            PunctualData::new_unchecked(
                p.to_vec(),
                CommutingTuple::new_unchecked(piece.punctual.len(), mats),
                piece.punctual.marking().map(<[F]>::to_vec),
            )
        })
        .collect();
    crate::adhm::assemble(&pieces, tol)
}

/// Weighted joint spectrum of an invertible commuting tuple as a point of
/// `Sym^n((C*)^2d)`.
pub fn betti_unmarked<F: Field>(t: &CommutingTuple<F>, tol: &ToleranceFrame) -> Result<SymPoint<F>> {
    let space = betti_space(t.m())?;
    let support = joint_support(t, tol)?;
    check_invertible(&support, t.scale(), tol)?;
    let support = support
        .iter()
        .map(|(p, c)| Ok((betti_base(p)?, *c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymPoint { space, support })
}

/// `(-1)^(k+1) / k` for `k < len`, constant term `c0`.
fn log1p_series<F: Field>(c0: F, len: usize) -> Vec<F> {
    let mut c = vec![c0];
    for k in 1..len.max(1) {
        let x = F::one() / F::from_i64(k as i64);
        c.push(if k % 2 == 1 { x } else { -x });
    }
    c
}

/// `1 / k!` for `1 <= k < len`, constant term `c0`.
fn expm1_series<F: Field>(c0: F, len: usize) -> Vec<F> {
    let mut c = vec![c0];
    let mut x = F::one();
    for k in 1..len.max(1) {
        x = x / F::from_i64(k as i64);
        c.push(x.clone());
    }
    c
}

fn transport_piece<F: Field>(
    piece: &PunctualData<F>,
    new_point: &[C64],
    series: impl Fn(F, usize) -> Vec<F>,
    tol: &ToleranceFrame,
) -> Result<PunctualData<F>> {
    let l = piece.len();
    let germs: Vec<Germ<F>> = new_point.iter().map(|c| Germ::Series(series(F::from_c64(*c), l))).collect();
    punctual_transport(piece, &germs, tol)
}

/// Betti to De Rham: base points by the principal logarithm, unipotent parts
/// by `log(Id + U)`. The natural space is attached to `model`.
pub fn rh_to_derham<F: Field>(
    h: &HilbPoint<F>,
    model: &AbelianVarietyModel,
    tol: &ToleranceFrame,
) -> Result<HilbPoint<F>> {
    let FiberSpace::Betti { d } = h.space else {
        return Err(Error::SpaceMismatch("rh_to_derham expects a Betti point".into()));
    };
    if model.d() != d {
        return Err(Error::SpaceMismatch(format!("model has d = {}, point has d = {d}", model.d())));
    }
    let pieces = h
        .pieces
        .iter()
        .map(|piece| {
            let FiberPoint::Betti { z } = &piece.point else { unreachable!("validated space") };
            let a = log_rh(&BettiPoint { z: z.clone() }, tol).map_err(|_| Error::LogAtZero)?.a;
            let punctual = transport_piece(&piece.punctual, &a, log1p_series, tol)?;
            Ok(HilbPiece {
                point: FiberPoint::Natural { a },
                punctual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    HilbPoint::new(FiberSpace::Natural { model: model.clone() }, pieces, tol)
}

/// De Rham to Betti: `z = exp(a)` and `U = exp(L) - Id`.
pub fn rh_to_betti<F: Field>(h: &HilbPoint<F>, tol: &ToleranceFrame) -> Result<HilbPoint<F>> {
    let FiberSpace::Natural { model } = &h.space else {
        return Err(Error::SpaceMismatch("rh_to_betti expects a natural point".into()));
    };
    let pieces = h
        .pieces
        .iter()
        .map(|piece| {
            let FiberPoint::Natural { a } = &piece.point else { unreachable!("validated space") };
            let z = exp_rh(&NaturalPoint { a: a.clone() }).z;
            let punctual = transport_piece(&piece.punctual, &z, expm1_series, tol)?;
            Ok(HilbPiece {
                point: FiberPoint::Betti { z },
                punctual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    HilbPoint::new(FiberSpace::Betti { d: model.d() }, pieces, tol)
}

/// The exact chart matrix `M` (from the binary values of the float model) and
/// its exact inverse.
fn exact_chart<F: Field>(model: &AbelianVarietyModel, tol: &ToleranceFrame) -> Result<(Matrix<F>, Matrix<F>)> {
    let m = model.chart_matrix().map(|z| F::from_c64(*z));
    let m_inv = inverse(&m, tol).ok_or(Error::DegeneratePeriodMatrix)?;
    Ok((m, m_inv))
}

/// `sum_j coeff[k][j] N_j` for each `k`.
fn mix<F: Field>(coeff: &Matrix<F>, t: &CommutingTuple<F>) -> CommutingTuple<F> {
    let l = t.n();
    let mats = (0..coeff.rows())
        .map(|k| {
            t.mats()
                .iter()
                .enumerate()
                .fold(Matrix::zeros(l, l), |acc, (j, n)| {
                    if coeff[(k, j)].is_zero() {
                        acc
                    } else {
                        acc.add(&n.scale(&coeff[(k, j)]))
                    }
                })
        })
        .collect();
    CommutingTuple::new_unchecked(l, mats)
}

/// Scales the first `d` members (the `u` directions) by `s`.
fn scale_u<F: Field>(t: &CommutingTuple<F>, d: usize, s: &F) -> CommutingTuple<F> {
    let mats = t
        .mats()
        .iter()
        .enumerate()
        .map(|(k, n)| if k < d { n.scale(s) } else { n.clone() })
        .collect();
    CommutingTuple::new_unchecked(t.n(), mats)
}

fn with_nilpotent<F: Field>(piece: &PunctualData<F>, point: Vec<C64>, nil: CommutingTuple<F>) -> PunctualData<F> {
    PunctualData::new_unchecked(
        point.into_iter().map(F::from_c64).collect(),
        nil,
        piece.marking().map(<[F]>::to_vec),
    )
}

fn tau_is_zero<F: Field>(tau: &F, tol: &ToleranceFrame) -> bool {
    if F::MODE.is_exact() {
        tau.is_zero()
    } else {
        tau.modulus() <= tol.eps_eq
    }
}

/// Natural point to the Hodge fibre over `tau`: base points by the inverse
/// of `hodge_scale`, nilpotent parts into `(u, w)` coordinates with the `u`
/// directions scaled by `tau`.
pub fn hodge_deform<F: Field>(h: &HilbPoint<F>, tau: &F, tol: &ToleranceFrame) -> Result<HilbPoint<F>> {
    let FiberSpace::Natural { model } = &h.space else {
        return Err(Error::SpaceMismatch("hodge_deform expects a natural point".into()));
    };
    if tau_is_zero(tau, tol) {
        return Err(Error::TauZero);
    }
    let d = model.d();
    let (_, m_inv) = exact_chart::<F>(model, tol)?;
    let pieces = h
        .pieces
        .iter()
        .map(|piece| {
            let FiberPoint::Natural { a } = &piece.point else { unreachable!("validated space") };
            let hp = hodge_unscale(model, &NaturalPoint { a: a.clone() }, tau.to_c64())?;
            let nil = scale_u(&mix(&m_inv, piece.punctual.nilpotent()), d, tau);
            let point = FiberPoint::Hodge {
                tau: hp.tau,
                xhat: hp.xhat,
                u: hp.u,
            };
            let coords = FiberSpace::HodgeFiber { model: model.clone(), tau: tau.clone() }.chart_coords(&point)?;
            Ok(HilbPiece {
                punctual: with_nilpotent(&piece.punctual, coords, nil),
                point,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    HilbPoint::new(
        FiberSpace::HodgeFiber {
            model: model.clone(),
            tau: tau.clone(),
        },
        pieces,
        tol,
    )
}

/// Inverse of [`hodge_deform`].
pub fn hodge_undeform<F: Field>(h: &HilbPoint<F>, tol: &ToleranceFrame) -> Result<HilbPoint<F>> {
    let FiberSpace::HodgeFiber { model, tau } = &h.space else {
        return Err(Error::SpaceMismatch("hodge_undeform expects a Hodge fibre point".into()));
    };
    if tau_is_zero(tau, tol) {
        return Err(Error::TauZero);
    }
    let d = model.d();
    let (m, _) = exact_chart::<F>(model, tol)?;
    let inv_tau = F::one() / tau.clone();
    let pieces = h
        .pieces
        .iter()
        .map(|piece| {
            let FiberPoint::Hodge { tau: t, xhat, u } = &piece.point else { unreachable!("validated space") };
            let np = hodge_scale(model, &HodgePoint { tau: *t, xhat: xhat.clone(), u: u.clone() })?;
            let nil = mix(&m, &scale_u(piece.punctual.nilpotent(), d, &inv_tau));
            Ok(HilbPiece {
                punctual: with_nilpotent(&piece.punctual, np.a.clone(), nil),
                point: FiberPoint::Natural { a: np.a },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    HilbPoint::new(FiberSpace::Natural { model: model.clone() }, pieces, tol)
}

/// Moves a point of the fibre over `tau` to the fibre over `tau * s`.
pub fn hodge_rescale<F: Field>(h: &HilbPoint<F>, s: &F, tol: &ToleranceFrame) -> Result<HilbPoint<F>> {
    let FiberSpace::HodgeFiber { model, tau } = &h.space else {
        return Err(Error::SpaceMismatch("hodge_rescale expects a Hodge fibre point".into()));
    };
    if tau_is_zero(s, tol) {
        return Err(Error::TauZero);
    }
    let d = model.d();
    let new_tau = tau.clone() * s.clone();
    let space = FiberSpace::HodgeFiber {
        model: model.clone(),
        tau: new_tau.clone(),
    };
    let sc = s.to_c64();
    let pieces = h
        .pieces
        .iter()
        .map(|piece| {
            let FiberPoint::Hodge { xhat, u, .. } = &piece.point else { unreachable!("validated space") };
            let point = FiberPoint::Hodge {
                tau: new_tau.to_c64(),
                xhat: xhat.clone(),
                u: u.iter().map(|x| x * sc).collect(),
            };
            let nil = scale_u(piece.punctual.nilpotent(), d, s);
            let coords = space.chart_coords(&point)?;
            Ok(HilbPiece {
                punctual: with_nilpotent(&piece.punctual, coords, nil),
                point,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    HilbPoint::new(space, pieces, tol)
}

/// What a rank-one module at a point of a fibre space is.
#[derive(Debug, Clone, PartialEq)]
pub enum Rank1Descriptor {
    /// A character of the lattice, `trivial` when every holonomy is 1.
    LocalSystem { character: Vec<C64>, trivial: bool },
    LineBundle { line_bundle: XHat },
    /// A line bundle with a flat connection whose `C`-linear part is `form`.
    FlatConnection { line_bundle: XHat, form: Vec<C64> },
    Higgs { line_bundle: XHat, higgs_field: Vec<C64> },
    LambdaConnection { tau: C64, line_bundle: XHat, form: Vec<C64> },
    /// The `alpha = 0` module: a line bundle and a `V*` component.
    ProductAlphaZero { line_bundle: XHat, covector: Vec<C64> },
}

pub fn rank1_identify<F: Field>(space: &FiberSpace<F>, p: &FiberPoint, tol: &ToleranceFrame) -> Result<Rank1Descriptor> {
    space.chart_coords(p)?;
    Ok(match p {
        FiberPoint::Betti { z } => Rank1Descriptor::LocalSystem {
            character: z.clone(),
            trivial: z.iter().all(|x| (x - C64::new(1.0, 0.0)).norm() <= tol.eps_eq),
        },
        FiberPoint::Dual { xhat } => Rank1Descriptor::LineBundle { line_bundle: xhat.clone() },
        FiberPoint::Natural { a } => {
            let model = space.model().expect("natural spaces carry a model");
            let np = NaturalPoint { a: a.clone() };
            let (_, form) = model.natural_chart(&np);
            Rank1Descriptor::FlatConnection {
                line_bundle: natural_project(model, &np),
                form,
            }
        }
        FiberPoint::Cotangent { xhat, eta } => Rank1Descriptor::Higgs {
            line_bundle: xhat.clone(),
            higgs_field: eta.clone(),
        },
        FiberPoint::Hodge { tau, xhat, u } => Rank1Descriptor::LambdaConnection {
            tau: *tau,
            line_bundle: xhat.clone(),
            form: u.clone(),
        },
        FiberPoint::Product { xhat, covector } => Rank1Descriptor::ProductAlphaZero {
            line_bundle: xhat.clone(),
            covector: covector.clone(),
        },
    })
}

/// Both squares of the marked picture: forgetting the marking agrees with
/// Hilbert–Chow on the Betti side, and after Riemann–Hilbert on the De Rham
/// side, within the frame's `eps_eq`.
pub fn diagram_check<F: Field>(
    mt: &MarkedTuple<F>,
    model: &AbelianVarietyModel,
    tol: &ToleranceFrame,
) -> Result<bool> {
    let hilb = betti_marked(mt, tol)?;
    let unmarked = betti_unmarked(mt.tuple(), tol)?;
    if hilb.n() != mt.tuple().n() || !hilbert_chow(&hilb).approx_eq(&unmarked, tol) {
        return Ok(false);
    }
    let derham = rh_to_derham(&hilb, model, tol)?;
    let logged = SymPoint {
        space: FiberSpace::Natural { model: model.clone() },
        support: unmarked
            .support
            .iter()
            .map(|(p, c)| {
                let FiberPoint::Betti { z } = p else { unreachable!("Betti support") };
                let a = log_rh(&BettiPoint { z: z.clone() }, tol)?.a;
                Ok((FiberPoint::Natural { a }, *c))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(hilbert_chow(&derham).approx_eq(&logged, tol))
}
