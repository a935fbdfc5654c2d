use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{group_sorted, is_stable, joint_spectrum, CommutingTuple, MarkedTuple};
use crate::error::{Error, Result};
use crate::linalg::{inverse, Field, LinalgError, Matrix, Subspace, ToleranceFrame};

/// Canonical representative of a stable marked tuple: the monomial staircase
/// of its colength-`n` ideal and multiplication by each variable in the basis
/// of staircase images.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealNormalForm<F> {
    /// Exponent vectors in increasing monomial order; `staircase[0]` is `1`.
    pub staircase: Vec<Vec<u32>>,
    pub mult_matrices: Vec<Matrix<F>>,
    /// Joint support with multiplicities; `None` when an exact spectrum does
    /// not split over `Q(i)`.
    pub support: Option<Vec<(Vec<F>, usize)>>,
}

/// Graded lexicographic order with `x_1 < ... < x_m`: total degree first,
/// then the exponent of `x_m`, then `x_(m-1)`, and so on.
pub fn monomial_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let deg = |e: &[u32]| e.iter().map(|&x| u64::from(x)).sum::<u64>();
    deg(a)
        .cmp(&deg(b))
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Heap key realising [`monomial_cmp`] through the derived tuple order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    degree: u64,
    reversed: Vec<u32>,
}

impl Key {
    fn new(e: &[u32]) -> Self {
        Self {
            degree: e.iter().map(|&x| u64::from(x)).sum(),
            reversed: e.iter().rev().copied().collect(),
        }
    }

    fn exponents(&self) -> Vec<u32> {
        self.reversed.iter().rev().copied().collect()
    }
}

/// Greedy staircase: walk monomials in increasing order, keep a monomial iff
/// its image `x^e(B) v` is independent of the images already kept. Multiples
/// of a rejected monomial are never kept, so only multiples of kept ones are
/// visited.
pub fn ideal_normal_form<F: Field>(mt: &MarkedTuple<F>, tol: &ToleranceFrame) -> Result<IdealNormalForm<F>> {
    if !is_stable(mt, tol) {
        return Err(Error::NotStable);
    }
    let t = mt.tuple();
    let (m, n) = (t.m(), t.n());
    let s = t.scale();
    let v_norm = crate::linalg::vec_norm(mt.v());

    let mut span = Subspace::zero(n);
    let mut staircase = Vec::with_capacity(n);
    let mut images: Vec<Vec<F>> = Vec::with_capacity(n);
    let mut heap: BTreeSet<Key> = BTreeSet::new();
    let mut image_of = std::collections::HashMap::<Vec<u32>, Vec<F>>::new();
    heap.insert(Key::new(&vec![0; m]));
    image_of.insert(vec![0; m], mt.v().to_vec());

    while staircase.len() < n {
        let Some(key) = heap.pop_first() else { break };
        let e = key.exponents();
        let img = image_of.remove(&e).expect("candidate image recorded");
        let floor = v_norm * s.powi(key.degree as i32);
        if span.try_extend(&img, floor, tol).is_none() {
            continue;
        }
        for (j, b) in t.mats().iter().enumerate() {
            let mut f = e.clone();
            f[j] += 1;
            if !image_of.contains_key(&f) && !staircase.contains(&f) {
                image_of.insert(f.clone(), b.mul_vec(&img));
                heap.insert(Key::new(&f));
            }
        }
        staircase.push(e);
        images.push(img);
    }
    debug_assert_eq!(staircase.len(), n);

    let p = Matrix::from_columns(n, &images);
    let mut mult_matrices = Vec::with_capacity(m);
    let p_inv = inverse(&p, tol).ok_or(LinalgError::NoSolution)?;
    for b in t.mats() {
        mult_matrices.push(p_inv.mul(b).mul(&p));
    }
    let reduced = CommutingTuple::new_unchecked(n, mult_matrices.clone());
    let support = match joint_spectrum(&reduced, tol) {
        Ok(spec) => Some(group_sorted(spec)),
        Err(Error::Linalg(LinalgError::NonSplitCharPoly)) => None,
        Err(e) => return Err(e),
    };
    Ok(IdealNormalForm {
        staircase,
        mult_matrices,
        support,
    })
}
