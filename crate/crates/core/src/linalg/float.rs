//! Double precision backend on top of nalgebra's complex SVD and Schur form.

use nalgebra::DMatrix;

use super::matrix::vec_norm;
use super::subspace::Subspace;
use super::{Field, LinalgError, Matrix, ToleranceFrame, C64};

fn to_na(m: &Matrix<C64>) -> DMatrix<C64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

fn threshold(sigma_max: f64, floor: f64, tol: &ToleranceFrame) -> f64 {
    tol.eps_rank * sigma_max.max(floor)
}

fn singular_values(m: &Matrix<C64>) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    to_na(m).singular_values().iter().copied().collect()
}

pub(crate) fn rank(m: &Matrix<C64>, floor: f64, tol: &ToleranceFrame) -> usize {
    let sv = singular_values(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let thr = threshold(smax, floor, tol);
    sv.iter().filter(|&&s| s > thr).count()
}

/// Right singular vectors `(sigma, v)` of `m` padded with zero rows to at
/// least square, so every kernel direction is represented.
fn right_singular(m: &Matrix<C64>) -> Vec<(f64, Vec<C64>)> {
    let cols = m.cols();
    let rows = m.rows().max(cols);
    let mut padded = DMatrix::<C64>::zeros(rows, cols);
    for i in 0..m.rows() {
        for j in 0..cols {
            padded[(i, j)] = m[(i, j)];
        }
    }
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    (0..v_t.nrows())
        .map(|k| {
            let row = (0..cols).map(|j| v_t[(k, j)]).collect();
            (svd.singular_values[k], row)
        })
        .collect()
}

/// Smallest singular value of `m` and a unit right singular vector for it.
pub(crate) fn least_singular(m: &Matrix<C64>) -> (f64, Vec<C64>) {
    right_singular(m)
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(s, row)| (s, row.iter().map(|z| z.conj()).collect()))
        .expect("at least one column")
}

pub(crate) fn kernel(m: &Matrix<C64>, floor: f64, tol: &ToleranceFrame) -> Vec<Vec<C64>> {
    let cols = m.cols();
    if cols == 0 {
        return Vec::new();
    }
    let smax = m.max_abs();
    if smax == 0.0 || m.rows() == 0 {
        return standard_basis(cols);
    }
    let sv = right_singular(m);
    let smax = sv.iter().map(|s| s.0).fold(0.0, f64::max);
    let thr = threshold(smax, floor, tol);
    sv.into_iter()
        .filter(|(s, _)| *s <= thr)
        .map(|(_, row)| row.iter().map(|z| z.conj()).collect())
        .collect()
}

fn standard_basis(n: usize) -> Vec<Vec<C64>> {
    (0..n)
        .map(|i| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[i] = C64::new(1.0, 0.0);
            e
        })
        .collect()
}

/// Least-norm solution through the thresholded pseudo-inverse.
pub(crate) fn solve(a: &Matrix<C64>, b: &[C64], tol: &ToleranceFrame) -> Result<Vec<C64>, LinalgError> {
    let bnorm = vec_norm(b);
    if a.cols() == 0 || a.rows() == 0 || a.max_abs() == 0.0 {
        return if bnorm == 0.0 {
            Ok(vec![C64::new(0.0, 0.0); a.cols()])
        } else {
            Err(LinalgError::NoSolution)
        };
    }
    let na = to_na(a);
    let svd = na.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thr = threshold(smax, 0.0, tol);
    let pinv = svd
        .pseudo_inverse(thr)
        .map_err(|_| LinalgError::NoConvergence)?;
    let bv = nalgebra::DVector::from_column_slice(b);
    let x = &pinv * &bv;
    let residual = (&na * &x - &bv).norm();
    if residual > tol.eps_eq * (bnorm + smax * x.norm()) {
        return Err(LinalgError::NoSolution);
    }
    Ok(x.iter().copied().collect())
}

pub(crate) fn inverse(m: &Matrix<C64>, tol: &ToleranceFrame) -> Option<Matrix<C64>> {
    let n = m.rows();
    if rank(m, 0.0, tol) < n {
        return None;
    }
    let inv = to_na(m).try_inverse()?;
    Some(Matrix::from_vec(n, n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|ij| inv[ij]).collect()))
}

/// Raw eigenvalues from the complex Schur form, unordered and unclustered.
pub(crate) fn schur_eigenvalues(m: &Matrix<C64>) -> Result<Vec<C64>, LinalgError> {
    if m.rows() == 0 {
        return Ok(Vec::new());
    }
    // The QR sweep can stall deflating a nearly defective block at exactly
    // machine epsilon; a few ulps of slack are far below any eps_eq.
    let a = to_na(m);
    let schur = [1.0, 4.0, 16.0, 256.0]
        .into_iter()
        .find_map(|k| a.clone().try_schur(k * f64::EPSILON, 100_000))
        .ok_or(LinalgError::NoConvergence)?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Distinct eigenvalues with algebraic multiplicities.
///
/// Raw Schur eigenvalues of a defective block scatter on a circle of radius
/// about `s * eps^(1/c)`. They are grouped by single linkage at a shrinking
/// radius, and a grouping is accepted once every cluster mean `mu` of size `c`
/// passes `ker(M - mu) != 0` and `dim ker (M - mu)^c >= c`.
pub(crate) fn eigenvalues(m: &Matrix<C64>, tol: &ToleranceFrame) -> Result<Vec<(C64, usize)>, LinalgError> {
    let n = m.rows();
    let raw = schur_eigenvalues(m)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let s = m.frobenius();
    if s == 0.0 {
        return Ok(vec![(C64::new(0.0, 0.0), n)]);
    }
    let min_radius = tol.eps_eq * s;
    let mut radius = (s * (1024.0 * f64::EPSILON).powf(1.0 / n as f64)).max(min_radius);
    loop {
        let clusters = cluster(&raw, radius);
        if radius <= min_radius || clusters.iter().all(|c| cluster_is_valid(m, c, s, tol)) {
            return Ok(clusters);
        }
        radius = (radius / 10.0).max(min_radius);
    }
}

fn cluster(values: &[C64], radius: f64) -> Vec<(C64, usize)> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, C64, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => {
                g.1 += values[i];
                g.2 += 1;
            }
            None => groups.push((root, values[i], 1)),
        }
    }
    let mut out: Vec<(C64, usize)> = groups
        .into_iter()
        .map(|(_, sum, c)| (sum / c as f64, c))
        .collect();
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    out
}

fn cluster_is_valid(m: &Matrix<C64>, (mu, c): &(C64, usize), s: f64, tol: &ToleranceFrame) -> bool {
    let n = m.rows();
    let shifted = m.shift_diagonal(&-*mu);
    if rank(&shifted, s, tol) == n {
        return false;
    }
    let power = shifted.pow(*c);
    n - rank(&power, s.powi(*c as i32), tol) >= *c
}

pub(crate) fn span(vectors: &[Vec<C64>], ambient: usize, floor: f64, tol: &ToleranceFrame) -> Subspace<C64> {
    if vectors.is_empty() || ambient == 0 {
        return Subspace::zero(ambient);
    }
    let m = Matrix::from_rows(vectors);
    if m.max_abs() == 0.0 {
        return Subspace::zero(ambient);
    }
    let svd = to_na(&m).svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thr = threshold(smax, floor, tol);
    let basis = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > thr)
        .map(|k| (0..ambient).map(|j| v_t[(k, j)]).collect())
        .collect();
    Subspace::from_orthonormal(ambient, basis)
}
