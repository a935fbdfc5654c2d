//! Commuting matrix tuples: stability of marked tuples, common eigenvectors,
//! simultaneous triangularization, joint spectra and their normal forms.
//!
//! All algorithms are deterministic. Float mode decides every zero test
//! relative to the tuple scale `S = max(1, max_j |B_j|_F)`.

mod centralizer;
mod ideal;
mod punctual;
mod rees;

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg::{eigenpairs, inverse, Field, Matrix, Subspace, ToleranceFrame, C64};

pub use centralizer::{centralizer_dim, marked_automorphisms_trivial};
pub use ideal::{ideal_normal_form, monomial_cmp, IdealNormalForm};
pub use punctual::{assemble, decompose_punctual, punctual_transport, Germ, PunctualData};
pub use rees::{rees_family, rees_limit};

/// `m` pairwise commuting `n x n` matrices over one scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingTuple<F> {
    n: usize,
    mats: Vec<Matrix<F>>,
}

impl<F: Field> CommutingTuple<F> {
    /// Caller guarantees shapes and commutativity.
    pub(crate) fn new_unchecked(n: usize, mats: Vec<Matrix<F>>) -> Self {
        debug_assert!(mats.iter().all(|b| b.rows() == n && b.cols() == n));
        Self { n, mats }
    }

    /// `m` diagonal matrices with the given joint eigenvalue tuples on the
    /// diagonal.
    pub fn diagonal(m: usize, points: &[Vec<F>]) -> Self {
        let mats = (0..m)
            .map(|j| {
                let d: Vec<F> = points.iter().map(|p| p[j].clone()).collect();
                Matrix::from_diagonal(&d)
            })
            .collect();
        Self::new_unchecked(points.len(), mats)
    }

    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mats(&self) -> &[Matrix<F>] {
        &self.mats
    }

    pub fn into_mats(self) -> Vec<Matrix<F>> {
        self.mats
    }

    /// `max(1, max_j |B_j|_F)`.
    pub fn scale(&self) -> f64 {
        self.mats.iter().map(Matrix::frobenius).fold(1.0, f64::max)
    }

    /// `g^-1 B_j g` for every member.
    pub fn conjugate(&self, g: &Matrix<F>, g_inv: &Matrix<F>) -> Self {
        let mats = self.mats.iter().map(|b| g_inv.mul(b).mul(g)).collect();
        Self::new_unchecked(self.n, mats)
    }

    /// Member-wise images in the quotient by an invariant subspace.
    fn quotient(&self, w: &Subspace<F>, tol: &ToleranceFrame) -> Self {
        let mats = self.mats.iter().map(|b| w.quotient_map(b, tol)).collect();
        Self::new_unchecked(self.n - w.dim(), mats)
    }
}

/// Validates shapes and pairwise commutativity. Float mode accepts
/// `|[B_i, B_j]|_F <= eps_eq |B_i|_F |B_j|_F`.
pub fn check_commuting<F: Field>(mats: Vec<Matrix<F>>, tol: &ToleranceFrame) -> Result<CommutingTuple<F>> {
    let Some(first) = mats.first() else {
        return Err(Error::InvalidInput("a tuple needs at least one matrix".into()));
    };
    let n = first.rows();
    if n == 0 || mats.iter().any(|b| b.rows() != n || b.cols() != n) {
        return Err(Error::InvalidInput("tuple members must be square of one size n >= 1".into()));
    }
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let c = mats[i].commutator(&mats[j]);
            let norm = c.frobenius();
            let ok = if F::MODE.is_exact() {
                c.is_zero()
            } else {
                norm <= tol.eps_eq * mats[i].frobenius() * mats[j].frobenius()
            };
            if !ok {
                return Err(Error::NotCommuting(i, j, norm));
            }
        }
    }
    Ok(CommutingTuple { n, mats })
}

/// A commuting tuple with a nonzero marking vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedTuple<F> {
    tuple: CommutingTuple<F>,
    v: Vec<F>,
}

impl<F: Field> MarkedTuple<F> {
    /// Rejects `v = 0` (float: `|v| <= eps_eq`).
    pub fn new(tuple: CommutingTuple<F>, v: Vec<F>, tol: &ToleranceFrame) -> Result<Self> {
        if v.len() != tuple.n() {
            return Err(Error::InvalidInput(format!(
                "marking has length {} but the tuple has size {}",
                v.len(),
                tuple.n()
            )));
        }
        let zero = if F::MODE.is_exact() {
            v.iter().all(Field::is_zero)
        } else {
            crate::linalg::vec_norm(&v) <= tol.eps_eq
        };
        if zero {
            return Err(Error::ZeroMarking);
        }
        Ok(Self { tuple, v })
    }

    pub fn tuple(&self) -> &CommutingTuple<F> {
        &self.tuple
    }

    pub fn v(&self) -> &[F] {
        &self.v
    }

    /// `(g^-1 B g, g^-1 v)`.
    pub fn conjugate(&self, g: &Matrix<F>, g_inv: &Matrix<F>) -> Self {
        Self {
            tuple: self.tuple.conjugate(g, g_inv),
            v: g_inv.mul_vec(&self.v),
        }
    }
}

/// Smallest subspace containing `v` and invariant under every `B_j`.
///
/// Breadth-first closure over words in the `B_j`; each newly independent
/// vector is pushed through every member once, so at most `n` rounds happen.
pub fn krylov_span<F: Field>(mt: &MarkedTuple<F>, tol: &ToleranceFrame) -> Subspace<F> {
    let t = mt.tuple();
    let s = t.scale();
    let mut span = Subspace::zero(t.n());
    let start = if F::MODE.is_exact() {
        mt.v().to_vec()
    } else {
        normalized(mt.v())
    };
    let mut queue = std::collections::VecDeque::new();
    if let Some(g) = span.try_extend(&start, 1.0, tol) {
        queue.push_back(g);
    }
    while let Some(x) = queue.pop_front() {
        if span.dim() == t.n() {
            break;
        }
        for b in t.mats() {
            if let Some(g) = span.try_extend(&b.mul_vec(&x), s, tol) {
                queue.push_back(g);
            }
        }
    }
    span
}

fn normalized<F: Field>(v: &[F]) -> Vec<F> {
    let norm = crate::linalg::vec_norm(v);
    let inv = F::one() / F::from_c64(crate::linalg::C64::new(norm, 0.0));
    v.iter().map(|x| x.clone() * inv.clone()).collect()
}

/// Stable iff no proper invariant subspace contains `v`, i.e. `v` is cyclic.
pub fn is_stable<F: Field>(mt: &MarkedTuple<F>, tol: &ToleranceFrame) -> bool {
    krylov_span(mt, tol).dim() == mt.tuple().n()
}

/// For an unstable tuple, a basis (as columns) of a proper invariant subspace
/// containing `v`.
pub fn destabilizing_subspace<F: Field>(mt: &MarkedTuple<F>, tol: &ToleranceFrame) -> Option<Matrix<F>> {
    let k = krylov_span(mt, tol);
    (k.dim() < mt.tuple().n()).then(|| k.basis_matrix())
}

/// Whether `b` acts as a scalar on its space.
fn is_scalar<F: Field>(b: &Matrix<F>, s: f64, tol: &ToleranceFrame) -> bool {
    let k = b.rows();
    if k <= 1 {
        return true;
    }
    let mean = b.trace() / F::from_i64(k as i64);
    let dev = b.shift_diagonal(&-mean);
    if F::MODE.is_exact() {
        dev.is_zero()
    } else {
        dev.frobenius() <= tol.eps_eq * s
    }
}

/// Scales `w` so its first entry of (near) maximal modulus is real positive
/// (float, unit norm) or so its first nonzero entry is 1 (exact).
fn normalize_direction<F: Field>(w: &[F]) -> Vec<F> {
    let lead = if F::MODE.is_exact() {
        w.iter().find(|x| !x.is_zero()).cloned()
    } else {
        let max = w.iter().map(Field::modulus).fold(0.0, f64::max);
        w.iter().find(|x| x.modulus() >= 0.5 * max).map(|x| {
            let norm = crate::linalg::vec_norm(w);
            let phase = x.to_c64() / x.modulus();
            F::from_c64(phase * norm)
        })
    };
    match lead {
        Some(l) => w.iter().map(|x| x.clone() / l.clone()).collect(),
        None => w.to_vec(),
    }
}

/// A common eigenvector `w` and the eigenvalues `lambda_j` with
/// `B_j w = lambda_j w`.
///
/// Restricts to the first eigenspace (canonical order) of the lowest-index
/// member that splits the current subspace, until every member is scalar.
pub fn common_eigenvector<F: Field>(t: &CommutingTuple<F>, tol: &ToleranceFrame) -> Result<(Vec<F>, Vec<F>)> {
    let s = t.scale();
    // Columns: current subspace in ambient coordinates.
    let mut basis = Matrix::<F>::identity(t.n());
    let mut restricted: Vec<Matrix<F>> = t.mats().to_vec();
    'outer: loop {
        let k = basis.cols();
        for j in 0..restricted.len() {
            if is_scalar(&restricted[j], s, tol) {
                continue;
            }
            let pairs = eigenpairs(&restricted[j], tol)?;
            let first = &pairs[0];
            if first.vectors.is_empty() || first.vectors.len() >= k {
                continue;
            }
            let sub = Subspace::span(&first.vectors, k, 1.0, tol);
            basis = basis.mul(&sub.basis_matrix());
            restricted = restricted.iter().map(|r| sub.restrict(r)).collect();
            continue 'outer;
        }
        break;
    }
    let mut w = basis.column(0);
    if !F::MODE.is_exact() {
        w = refine_common_eigenvector(t, w);
    }
    let w = normalize_direction(&w);
    let ww = crate::linalg::inner(&w, &w);
    let lambda = t
        .mats()
        .iter()
        .map(|b| crate::linalg::inner(&w, &b.mul_vec(&w)) / ww.clone())
        .collect();
    Ok((w, lambda))
}

/// Float only. A rounded defective eigenvalue splits into a tight cluster,
/// and a vector taken from the thresholded kernel at the cluster mean is an
/// eigenvector only up to the spread, which later members that are high
/// powers of the first amplify. Candidates are the current `w` and the least
/// singular vectors of `B_j - theta` for each raw Schur eigenvalue `theta`;
/// the one with the smallest joint relative residual is then polished with
/// the stacked system `[(B_j - lambda_j) / |B_j|]` while that helps.
fn refine_common_eigenvector<F: Field>(t: &CommutingTuple<F>, w: Vec<F>) -> Vec<F> {
    use crate::linalg::C64;
    let n = t.n();
    let mats: Vec<Matrix<C64>> = t
        .mats()
        .iter()
        .filter(|b| b.frobenius() > 0.0)
        .map(|b| b.map(Field::to_c64).scale(&C64::new(1.0 / b.frobenius(), 0.0)))
        .collect();
    if mats.is_empty() || n <= 1 {
        return w;
    }
    let stacked = |v: &[C64]| -> Matrix<C64> {
        let vv = crate::linalg::inner(v, v);
        let blocks: Vec<Matrix<C64>> = mats
            .iter()
            .map(|b| b.shift_diagonal(&-(crate::linalg::inner(v, &b.mul_vec(v)) / vv)))
            .collect();
        Matrix::vstack(&blocks)
    };
    let residual = |v: &[C64]| stacked(v).mul_vec(v).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
        / crate::linalg::vec_norm(v);
    let mut best: Vec<C64> = w.iter().map(Field::to_c64).collect();
    let mut best_res = residual(&best);
    for b in &mats {
        for theta in crate::linalg::raw_eigenvalues(b).unwrap_or_default() {
            let (_, v) = crate::linalg::least_singular_vector(&b.shift_diagonal(&-theta));
            let res = residual(&v);
            if res < best_res {
                (best, best_res) = (v, res);
            }
        }
    }
    for _ in 0..3 {
        let (_, v) = crate::linalg::least_singular_vector(&stacked(&best));
        let res = residual(&v);
        if res >= best_res {
            break;
        }
        (best, best_res) = (v, res);
    }
    best.into_iter().map(F::from_c64).collect()
}

/// A complete flag `0 = W_0 < W_1 < ... < W_n` with `dim W_i = i`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantFlag<F> {
    subspaces: Vec<Subspace<F>>,
}

impl<F: Field> InvariantFlag<F> {
    /// The flag spanned by leading columns of an invertible `g`.
    pub fn from_basis(g: &Matrix<F>, tol: &ToleranceFrame) -> Self {
        let n = g.rows();
        let mut current = Subspace::zero(n);
        let mut subspaces = vec![current.clone()];
        let floor = g.frobenius();
        for c in g.columns() {
            current.try_extend(&c, floor, tol);
            subspaces.push(current.clone());
        }
        Self { subspaces }
    }

    /// `W_i = span(e_1..e_i)`.
    pub fn coordinate(n: usize) -> Self {
        Self::from_basis(&Matrix::identity(n), &ToleranceFrame::default())
    }

    /// Validates nesting, dimensions and invariance under `t`.
    pub fn new(subspaces: Vec<Subspace<F>>, t: &CommutingTuple<F>, tol: &ToleranceFrame) -> Result<Self> {
        let n = t.n();
        if subspaces.len() != n + 1 || subspaces.iter().enumerate().any(|(i, w)| w.dim() != i || w.ambient() != n) {
            return Err(Error::InvalidInput("flag must list W_0..W_n with dim W_i = i".into()));
        }
        for i in 1..=n {
            if !subspaces[i - 1].basis().iter().all(|b| subspaces[i].contains(b, tol)) {
                return Err(Error::InvalidInput(format!("flag step {} does not contain step {}", i, i - 1)));
            }
        }
        let flag = Self { subspaces };
        flag.check_invariant(t, tol)?;
        Ok(flag)
    }

    pub(crate) fn check_invariant(&self, t: &CommutingTuple<F>, tol: &ToleranceFrame) -> Result<()> {
        for (step, w) in self.subspaces.iter().enumerate() {
            for (j, b) in t.mats().iter().enumerate() {
                if !w.is_invariant(b, tol) {
                    return Err(Error::FlagNotInvariant { step, matrix: j });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.subspaces.len() - 1
    }

    pub fn subspaces(&self) -> &[Subspace<F>] {
        &self.subspaces
    }

    /// Basis whose first `i` columns span `W_i`, with its inverse. Float
    /// bases are orthonormal.
    pub fn adapted_basis(&self, tol: &ToleranceFrame) -> (Matrix<F>, Matrix<F>) {
        let n = self.n();
        let mut acc = Subspace::zero(n);
        let mut cols = Vec::with_capacity(n);
        for w in &self.subspaces[1..] {
            let pick = w
                .basis()
                .iter()
                .map(|b| (crate::linalg::vec_norm(&acc.residual(b)), b))
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .map(|(_, b)| b.clone())
                .expect("flag steps above W_0 are nonzero");
            let added = acc
                .try_extend(&pick, 1.0, tol)
                .expect("flag steps grow by one dimension");
            cols.push(added);
        }
        let g = Matrix::from_columns(n, &cols);
        let g_inv = unitary_or_inverse(&g, tol);
        (g, g_inv)
    }
}

fn unitary_or_inverse<F: Field>(g: &Matrix<F>, tol: &ToleranceFrame) -> Matrix<F> {
    if F::MODE.is_exact() {
        inverse(g, tol).expect("adapted basis is invertible")
    } else {
        g.adjoint()
    }
}

/// Output of [`triangularize`]: `upper_j = g^-1 B_j g` is upper triangular
/// and `flag` is spanned by the leading columns of `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangularization<F> {
    pub g: Matrix<F>,
    pub g_inv: Matrix<F>,
    pub flag: InvariantFlag<F>,
    pub upper: CommutingTuple<F>,
}

/// Simultaneous triangularization by common eigenvectors of successive
/// quotients. Float `g` is unitary and the round-off below the diagonal is
/// dropped.
pub fn triangularize<F: Field>(t: &CommutingTuple<F>, tol: &ToleranceFrame) -> Result<Triangularization<F>> {
    let n = t.n();
    let mut acc = Subspace::zero(n);
    let mut cols = Vec::with_capacity(n);
    while cols.len() < n {
        let q = t.quotient(&acc, tol);
        let (w, _) = common_eigenvector(&q, tol)?;
        let comp = acc.complement_basis(tol);
        let mut x = vec![F::zero(); n];
        for (c, wi) in comp.iter().zip(&w) {
            for (xi, ci) in x.iter_mut().zip(c) {
                *xi = xi.clone() + ci.clone() * wi.clone();
            }
        }
        if !F::MODE.is_exact() {
            x = normalized(&x);
        }
        let added = acc
            .try_extend(&x, 1.0, tol)
            .expect("lift of a quotient vector is independent");
        cols.push(added);
    }
    let g = Matrix::from_columns(n, &cols);
    let g_inv = unitary_or_inverse(&g, tol);
    let mut upper = t.conjugate(&g, &g_inv);
    if !F::MODE.is_exact() {
        for b in &mut upper.mats {
            for r in 1..n {
                for c in 0..r {
                    b[(r, c)] = F::zero();
                }
            }
        }
    }
    let flag = InvariantFlag::from_basis(&g, tol);
    Ok(Triangularization { g, g_inv, flag, upper })
}

/// Lexicographic order on tuples, `(Re, Im)` per coordinate.
pub fn tuple_cmp<F: Field>(a: &[F], b: &[F]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.canonical_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Float: snaps the real and imaginary parts of each coordinate across all
/// tuples, replacing every single-linkage cluster of values within `radius` by
/// its mean (by `0` when the cluster reaches `0`). Tuples that agree up to
/// `radius` become identical and sort by value rather than by round-off.
/// Exact: identity.
fn bucket<F: Field>(tuples: Vec<Vec<F>>, radius: f64) -> Vec<Vec<F>> {
    if F::MODE.is_exact() || tuples.is_empty() {
        return tuples;
    }
    let m = tuples[0].len();
    let mut parts: Vec<Vec<C64>> = tuples.iter().map(|t| t.iter().map(Field::to_c64).collect()).collect();
    for c in 0..m {
        let re: Vec<f64> = parts.iter().map(|t| t[c].re).collect();
        let im: Vec<f64> = parts.iter().map(|t| t[c].im).collect();
        let (re, im) = (snap(&re, radius), snap(&im, radius));
        for (k, t) in parts.iter_mut().enumerate() {
            t[c] = C64::new(re[k], im[k]);
        }
    }
    parts
        .into_iter()
        .map(|t| t.into_iter().map(F::from_c64).collect())
        .collect()
}

fn snap(values: &[f64], radius: f64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] - values[order[end - 1]] <= radius {
            end += 1;
        }
        let group = &order[start..end];
        let (lo, hi) = (values[group[0]], values[group[group.len() - 1]]);
        let value = if lo - radius <= 0.0 && 0.0 <= hi + radius {
            0.0
        } else {
            group.iter().map(|&i| values[i]).sum::<f64>() / group.len() as f64
        };
        for &i in group {
            out[i] = value;
        }
        start = end;
    }
    out
}

/// Sorted multiset of joint eigenvalue tuples (length `n`, with repeats).
pub fn joint_spectrum<F: Field>(t: &CommutingTuple<F>, tol: &ToleranceFrame) -> Result<Vec<Vec<F>>> {
    if F::MODE.is_exact() {
        let mut spec = Vec::with_capacity(t.n());
        split_generalized(t.mats().to_vec(), Vec::new(), tol, &mut spec)?;
        spec.sort_by(|a, b| tuple_cmp(a, b));
        return Ok(spec);
    }
    let tri = triangularize(t, tol)?;
    let mut diag: Vec<Vec<F>> = (0..t.n())
        .map(|k| tri.upper.mats().iter().map(|b| b[(k, k)].clone()).collect())
        .collect();
    if !F::MODE.is_exact() {
        // The diagonal of a backward stable flag carries the split of a
        // rounded defective eigenvalue; its cluster mean is far more accurate.
        for (j, b) in t.mats().iter().enumerate() {
            let means: Vec<F> = F::eigenvalues(b, tol)?.into_iter().map(|(mu, _)| mu).collect();
            for row in &mut diag {
                let x = row[j].to_c64();
                if let Some(mu) = means.iter().min_by(|a, b| {
                    (a.to_c64() - x).norm().total_cmp(&(b.to_c64() - x).norm())
                }) {
                    row[j] = mu.clone();
                }
            }
        }
    }
    let mut spec = bucket(diag, tol.eps_eq * t.scale());
    spec.sort_by(|a, b| tuple_cmp(a, b));
    Ok(spec)
}

/// Exact only. Splits into generalized eigenspaces of the next member and
/// recurses on the restrictions; each leaf contributes its point once per
/// dimension.
fn split_generalized<F: Field>(
    mats: Vec<Matrix<F>>,
    prefix: Vec<F>,
    tol: &ToleranceFrame,
    out: &mut Vec<Vec<F>>,
) -> Result<()> {
    let j = prefix.len();
    let n = mats[0].rows();
    if j == mats.len() {
        out.extend(std::iter::repeat(prefix).take(n));
        return Ok(());
    }
    let values = F::eigenvalues(&mats[j], tol)?;
    for (lambda, mult) in values {
        let mut point = prefix.clone();
        point.push(lambda.clone());
        if mult == n {
            split_generalized(mats.clone(), point, tol, out)?;
            continue;
        }
        let power = mats[j].shift_diagonal(&-lambda).pow(mult);
        let sub = Subspace::span(&F::kernel_with_floor(&power, 0.0, tol), n, 1.0, tol);
        debug_assert_eq!(sub.dim(), mult);
        let restricted = mats.iter().map(|b| sub.restrict(b)).collect();
        split_generalized(restricted, point, tol, out)?;
    }
    Ok(())
}

/// Distinct joint eigenvalue tuples with multiplicities, sorted.
pub fn joint_support<F: Field>(t: &CommutingTuple<F>, tol: &ToleranceFrame) -> Result<Vec<(Vec<F>, usize)>> {
    Ok(group_sorted(joint_spectrum(t, tol)?))
}

pub(crate) fn group_sorted<F: Field>(spec: Vec<Vec<F>>) -> Vec<(Vec<F>, usize)> {
    let mut out: Vec<(Vec<F>, usize)> = Vec::new();
    for p in spec {
        match out.last_mut() {
            Some((q, c)) if *q == p => *c += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// The diagonal tuple of the sorted joint spectrum: equal exactly for
/// S-equivalent tuples.
pub fn sequiv_normal_form<F: Field>(t: &CommutingTuple<F>, tol: &ToleranceFrame) -> Result<CommutingTuple<F>> {
    Ok(CommutingTuple::diagonal(t.m(), &joint_spectrum(t, tol)?))
}

/// The reduced length-`n` datum at distinct points: `B_j = diag(p_.j)`,
/// `v = (1, ..., 1)`.
pub fn from_points<F: Field>(points: &[Vec<F>], tol: &ToleranceFrame) -> Result<MarkedTuple<F>> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput("at least one point is required".into()));
    };
    let m = first.len();
    if m == 0 || points.iter().any(|p| p.len() != m) {
        return Err(Error::InvalidInput("points must share one dimension m >= 1".into()));
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let same = if F::MODE.is_exact() {
                points[i] == points[j]
            } else {
                let d: f64 = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a.to_c64() - b.to_c64()).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                d <= tol.eps_eq
            };
            if same {
                return Err(Error::DuplicatePoint(i, j));
            }
        }
    }
    let t = CommutingTuple::diagonal(m, points);
    MarkedTuple::new(t, vec![F::one(); points.len()], tol)
}

#[cfg(test)]
mod tests;
