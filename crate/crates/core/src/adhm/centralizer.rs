use super::{CommutingTuple, MarkedTuple};
use crate::linalg::{Field, Matrix, ToleranceFrame};

/// Rows of the linear system `h B_j - B_j h = 0` in the row-major entries of `h`.
fn commutant_rows<F: Field>(t: &CommutingTuple<F>) -> Vec<Vec<F>> {
    let n = t.n();
    let mut rows = Vec::with_capacity(t.m() * n * n);
    for b in t.mats() {
        for r in 0..n {
            for c in 0..n {
                let mut row = vec![F::zero(); n * n];
                for k in 0..n {
                    // (h B)(r, c) = sum_k h(r, k) B(k, c)
                    row[r * n + k] = row[r * n + k].clone() + b[(k, c)].clone();
                    // (B h)(r, c) = sum_k B(r, k) h(k, c)
                    row[k * n + c] = row[k * n + c].clone() - b[(r, k)].clone();
                }
                rows.push(row);
            }
        }
    }
    rows
}

fn system_rank<F: Field>(rows: Vec<Vec<F>>, floor: f64, tol: &ToleranceFrame) -> usize {
    if rows.is_empty() {
        return 0;
    }
    F::rank_with_floor(&Matrix::from_rows(&rows), floor, tol)
}

/// Dimension of `{h : h B_j = B_j h for all j}`.
pub fn centralizer_dim<F: Field>(t: &CommutingTuple<F>, tol: &ToleranceFrame) -> usize {
    let n2 = t.n() * t.n();
    n2 - system_rank(commutant_rows(t), t.scale(), tol)
}

/// Whether `h B_j = B_j h` and `h v = v` force `h = Id`, i.e. the homogeneous
/// system with `h v = 0` has only the zero solution.
pub fn marked_automorphisms_trivial<F: Field>(mt: &MarkedTuple<F>, tol: &ToleranceFrame) -> bool {
    let t = mt.tuple();
    let n = t.n();
    let mut rows = commutant_rows(t);
    // Float rows use the unit marking so both blocks share the scale of B.
    let v = if F::MODE.is_exact() {
        mt.v().to_vec()
    } else {
        super::normalized(mt.v())
    };
    for r in 0..n {
        let mut row = vec![F::zero(); n * n];
        for (k, vk) in v.iter().enumerate() {
            row[r * n + k] = vk.clone();
        }
        rows.push(row);
    }
    system_rank(rows, t.scale(), tol) == n * n
}
