//! Independent reference computations used to cross-check the primary
//! algorithms. They share only the scalar substrate with the code under test.

use crate::adhm::MarkedTuple;
use crate::error::Result;
use crate::linalg::{eigenpairs, inverse, solve, Field, LinalgError, Matrix, ToleranceFrame};

/// Joint generalized eigenspaces, found by splitting the space with one
/// member at a time: `(point, basis columns)` in the ambient coordinates.
pub fn joint_generalized_eigenspaces<F: Field>(
    mats: &[Matrix<F>],
    tol: &ToleranceFrame,
) -> Result<Vec<(Vec<F>, Matrix<F>)>> {
    let n = mats[0].rows();
    let mut pieces: Vec<(Vec<F>, Matrix<F>)> = vec![(Vec::new(), Matrix::identity(n))];
    for b in mats {
        let mut next = Vec::new();
        for (point, basis) in pieces {
            let r = restrict(b, &basis, tol)?;
            let k = r.rows();
            for pair in eigenpairs(&r, tol)? {
                let shifted = r.shift_diagonal(&-pair.value.clone()).pow(k);
                let floor = r.frobenius().max(1.0).powi(k as i32);
                let kernel = F::kernel_with_floor(&shifted, floor, tol);
                if kernel.len() != pair.multiplicity {
                    return Err(LinalgError::NoConvergence.into());
                }
                let sub = basis.mul(&Matrix::from_columns(k, &kernel));
                let mut p = point.clone();
                p.push(pair.value);
                next.push((p, sub));
            }
        }
        pieces = next;
    }
    Ok(pieces)
}

/// Matrix of `b` on the invariant column span of `basis`.
fn restrict<F: Field>(b: &Matrix<F>, basis: &Matrix<F>, tol: &ToleranceFrame) -> Result<Matrix<F>> {
    let image = b.mul(basis);
    let cols = image
        .columns()
        .iter()
        .map(|c| solve(basis, c, tol))
        .collect::<Result<Vec<_>, LinalgError>>()?;
    Ok(Matrix::from_columns(basis.cols(), &cols))
}

/// Stability by the local criterion: `v` is cyclic iff on every joint
/// generalized eigenspace `E_p`, with `N_j = B_j - p_j` there,
/// `E_p / sum_j N_j E_p` is one-dimensional and the component of `v` is not in
/// `sum_j N_j E_p` (Nakayama over the local algebra at `p`).
pub fn stable_by_local_criterion<F: Field>(mt: &MarkedTuple<F>, tol: &ToleranceFrame) -> Result<bool> {
    let mats = mt.tuple().mats();
    let pieces = joint_generalized_eigenspaces(mats, tol)?;
    let n = mt.tuple().n();
    let cols: Vec<Vec<F>> = pieces.iter().flat_map(|(_, b)| b.columns()).collect();
    let p = Matrix::from_columns(n, &cols);
    let p_inv = inverse(&p, tol).ok_or(LinalgError::NoConvergence)?;
    let coords = p_inv.mul_vec(mt.v());
    let mut start = 0;
    for (point, basis) in &pieces {
        let c = basis.cols();
        let v_p: Vec<F> = coords[start..start + c].to_vec();
        start += c;
        // Columns of every N_j restricted to E_p, side by side.
        let mut radical_cols: Vec<Vec<F>> = Vec::new();
        for (b, pj) in mats.iter().zip(point) {
            let r = restrict(b, basis, tol)?.shift_diagonal(&-pj.clone());
            radical_cols.extend(r.columns());
        }
        let radical = Matrix::from_columns(c, &radical_cols);
        let floor = mt.tuple().scale();
        let r0 = F::rank_with_floor(&radical, floor, tol);
        if r0 + 1 != c {
            return Ok(false);
        }
        let mut with_v = radical_cols.clone();
        with_v.push(v_p);
        let r1 = F::rank_with_floor(&Matrix::from_columns(c, &with_v), floor, tol);
        if r1 != c {
            return Ok(false);
        }
    }
    Ok(true)
}
