//! Exact Gauss–Jordan backend over `Q(i)`.

use super::poly::{gaussian_rational_roots, Poly};
use super::subspace::Subspace;
use super::{Field, GaussRat, LinalgError, Matrix};

/// Reduced row echelon form and pivot columns.
pub(crate) fn rref(m: &Matrix<GaussRat>) -> (Matrix<GaussRat>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = <GaussRat as Field>::one() / a[(r, c)].clone();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in c..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                a[(i, j)] = a[(i, j)].clone() - factor.clone() * a[(r, j)].clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Gauss-Jordan on `[M | I]`.
pub(crate) fn inverse(m: &Matrix<GaussRat>) -> Option<Matrix<GaussRat>> {
    let n = m.rows();
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = <GaussRat as Field>::one();
    }
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = red[(i, n + j)].clone();
        }
    }
    Some(out)
}

/// Kernel basis in reduced column echelon form.
pub(crate) fn kernel(m: &Matrix<GaussRat>) -> Vec<Vec<GaussRat>> {
    let cols = m.cols();
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let raw: Vec<Vec<GaussRat>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![<GaussRat as Field>::zero(); cols];
            v[f] = <GaussRat as Field>::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect();
    if raw.is_empty() {
        return raw;
    }
    let (canon, piv) = rref(&Matrix::from_rows(&raw));
    (0..piv.len()).map(|i| canon.row(i).to_vec()).collect()
}

/// Least-norm solution: `x = A* y` with `A A* y = b`.
pub(crate) fn solve(a: &Matrix<GaussRat>, b: &[GaussRat]) -> Result<Vec<GaussRat>, LinalgError> {
    let rows = a.rows();
    let mut aug = Matrix::zeros(rows, a.cols() + 1);
    for i in 0..rows {
        for j in 0..a.cols() {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols())] = b[i].clone();
    }
    let (_, piv_aug) = rref(&aug);
    if piv_aug.last() == Some(&a.cols()) {
        return Err(LinalgError::NoSolution);
    }
    let gram = a.mul(&a.adjoint());
    let mut aug = Matrix::zeros(rows, rows + 1);
    for i in 0..rows {
        for j in 0..rows {
            aug[(i, j)] = gram[(i, j)].clone();
        }
        aug[(i, rows)] = b[i].clone();
    }
    let (red, pivots) = rref(&aug);
    let mut y = vec![<GaussRat as Field>::zero(); rows];
    for (i, &p) in pivots.iter().enumerate() {
        y[p] = red[(i, rows)].clone();
    }
    Ok(a.adjoint().mul_vec(&y))
}

/// Characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier.
pub(crate) fn char_poly(m: &Matrix<GaussRat>) -> Poly<GaussRat> {
    let n = m.rows();
    let mut coeffs = vec![<GaussRat as Field>::zero(); n + 1];
    coeffs[n] = <GaussRat as Field>::one();
    let mut acc = Matrix::<GaussRat>::zeros(n, n);
    for k in 1..=n {
        acc = m.mul(&acc).shift_diagonal(&coeffs[n - k + 1]);
        let tr = m.mul(&acc).trace();
        coeffs[n - k] = -tr / <GaussRat as Field>::from_i64(k as i64);
    }
    Poly::new(coeffs)
}

pub(crate) fn eigenvalues(m: &Matrix<GaussRat>) -> Result<Vec<(GaussRat, usize)>, LinalgError> {
    if m.rows() == 0 {
        return Ok(Vec::new());
    }
    gaussian_rational_roots(&char_poly(m))
}

pub(crate) fn span(vectors: &[Vec<GaussRat>], ambient: usize) -> Subspace<GaussRat> {
    if vectors.is_empty() {
        return Subspace::zero(ambient);
    }
    let (r, pivots) = rref(&Matrix::from_rows(vectors));
    let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
    Subspace::from_echelon(ambient, basis, pivots)
}
