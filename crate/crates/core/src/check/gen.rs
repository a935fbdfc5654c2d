//! Seeded instance generators. Every function draws only from the supplied
//! RNG, so a seed fixes the instance.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::adhm::{check_commuting, from_points, CommutingTuple, MarkedTuple};
use crate::dalgebra::{MPoly, Section, UtaiTriple};
use crate::linalg::{inverse, Field, GaussRat, Matrix, ToleranceFrame, C64};
use crate::torus::AbelianVarietyModel;

fn tol() -> ToleranceFrame {
    ToleranceFrame::default()
}

/// A Gaussian integer with both parts in `[-r, r]`, real with probability
/// `p_real`.
pub fn gaussian<F: Field>(rng: &mut ChaCha8Rng, r: i64, p_real: f64) -> F {
    let real = rng.gen_bool(p_real);
    let re = rng.gen_range(-r..=r);
    let im = if real { 0 } else { rng.gen_range(-r..=r) };
    F::gaussian(re, im)
}

/// Unit upper times unit lower triangular with entries in `{-1, 0, 1}`,
/// together with its exact inverse.
pub fn unimodular<F: Field>(rng: &mut ChaCha8Rng, n: usize) -> (Matrix<F>, Matrix<F>) {
    let mut upper = Matrix::<GaussRat>::identity(n);
    let mut lower = Matrix::<GaussRat>::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            upper[(i, j)] = GaussRat::from_i64(rng.gen_range(-1..=1));
            lower[(j, i)] = GaussRat::from_i64(rng.gen_range(-1..=1));
        }
    }
    let g = upper.mul(&lower);
    let g_inv = inverse(&g, &tol()).expect("unimodular matrices are invertible");
    (lift(&g), lift(&g_inv))
}

/// Gaussian integer matrices carry over to either mode without rounding.
fn lift<F: Field>(m: &Matrix<GaussRat>) -> Matrix<F> {
    m.map(|x| F::from_c64(x.to_c64()))
}

/// `g U g^-1` with `U` upper triangular, small Gaussian integer diagonal drawn
/// from few values (so eigenvalues repeat) and entries in `{-1, 0, 1}` above.
pub fn split_matrix<F: Field>(rng: &mut ChaCha8Rng, n: usize) -> Matrix<F> {
    let values: Vec<F> = (0..rng.gen_range(1..=n)).map(|_| gaussian(rng, 2, 0.6)).collect();
    let mut u = Matrix::<F>::zeros(n, n);
    for i in 0..n {
        u[(i, i)] = values[rng.gen_range(0..values.len())].clone();
        for j in i + 1..n {
            u[(i, j)] = F::from_i64(rng.gen_range(-1..=1));
        }
    }
    let (g, g_inv) = unimodular(rng, n);
    g.mul(&u).mul(&g_inv)
}

/// `c_0 + c_1 A + c_2 A^2` with small Gaussian integer coefficients.
fn poly_in<F: Field>(rng: &mut ChaCha8Rng, a: &Matrix<F>) -> Matrix<F> {
    let n = a.rows();
    let a2 = a.mul(a);
    let c: Vec<F> = (0..3).map(|_| gaussian(rng, 2, 0.5)).collect();
    Matrix::scalar(n, c[0].clone()).add(&a.scale(&c[1])).add(&a2.scale(&c[2]))
}

/// Polynomials in one split matrix, or a conjugated direct sum of two such
/// tuples. Eigenvalues are Gaussian rationals, so exact mode always splits.
pub fn commuting_tuple<F: Field>(rng: &mut ChaCha8Rng, m: usize, n: usize) -> CommutingTuple<F> {
    let t = integer_tuple(rng, m, n);
    check_commuting(t.mats().iter().map(lift).collect(), &tol()).expect("generated tuple commutes")
}

fn integer_tuple(rng: &mut ChaCha8Rng, m: usize, n: usize) -> CommutingTuple<GaussRat> {
    type F = GaussRat;
    let mats = if n >= 2 && rng.gen_bool(0.35) {
        let n1 = rng.gen_range(1..n);
        let a = integer_tuple(rng, m, n1);
        let b = integer_tuple(rng, m, n - n1);
        let (g, g_inv) = unimodular::<F>(rng, n);
        a.mats()
            .iter()
            .zip(b.mats())
            .map(|(x, y)| g.mul(&Matrix::block_diagonal(&[x.clone(), y.clone()])).mul(&g_inv))
            .collect()
    } else {
        let a = split_matrix::<F>(rng, n);
        let mut mats: Vec<Matrix<F>> = (0..m).map(|_| poly_in(rng, &a)).collect();
        // Keep at least one member generic so instances are rarely all scalar.
        if m > 0 && rng.gen_bool(0.5) {
            mats[0] = a;
        }
        mats
    };
    check_commuting(mats, &tol()).expect("generated tuple commutes")
}

/// A nonzero marking with small Gaussian integer entries.
pub fn marking<F: Field>(rng: &mut ChaCha8Rng, n: usize) -> Vec<F> {
    loop {
        let v: Vec<F> = (0..n).map(|_| gaussian(rng, 2, 0.5)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// A marked tuple that is stable with high probability: conjugated distinct
/// points, or a random tuple with a random marking.
pub fn likely_stable<F: Field>(rng: &mut ChaCha8Rng, m: usize, n: usize) -> MarkedTuple<F> {
    match rng.gen_range(0..3) {
        0 => {
            let mut points: Vec<Vec<F>> = Vec::with_capacity(n);
            while points.len() < n {
                let p: Vec<F> = (0..m).map(|_| gaussian(rng, 3, 0.5)).collect();
                if !points.contains(&p) {
                    points.push(p);
                }
            }
            let mt = from_points(&points, &tol()).expect("points are distinct");
            let (g, g_inv) = unimodular::<F>(rng, n);
            mt.conjugate(&g_inv, &g)
        }
        _ => {
            let t = commuting_tuple::<F>(rng, m, n);
            MarkedTuple::new(t, marking(rng, n), &tol()).expect("marking is nonzero")
        }
    }
}

/// A conjugated direct sum whose marking vanishes on the second summand, so
/// the first summand is a proper invariant subspace containing it.
pub fn unstable<F: Field>(rng: &mut ChaCha8Rng, m: usize, n: usize) -> MarkedTuple<F> {
    assert!(n >= 2, "unstable instances need n >= 2");
    let n1 = rng.gen_range(1..n);
    let a = commuting_tuple::<F>(rng, m, n1);
    let b = commuting_tuple::<F>(rng, m, n - n1);
    let mats: Vec<Matrix<F>> = a
        .mats()
        .iter()
        .zip(b.mats())
        .map(|(x, y)| Matrix::block_diagonal(&[x.clone(), y.clone()]))
        .collect();
    let mut v = marking::<F>(rng, n1);
    v.extend((n1..n).map(|_| F::zero()));
    let t = check_commuting(mats, &tol()).expect("block sums commute");
    let mt = MarkedTuple::new(t, v, &tol()).expect("marking is nonzero");
    let (g, g_inv) = unimodular::<F>(rng, n);
    mt.conjugate(&g_inv, &g)
}

/// A uniformly random complex number in the unit square around 0.
pub fn unit_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Float tuple of polynomials in a random complex matrix, optionally with a
/// repeated eigenvalue block, conjugated by a random well-conditioned matrix.
pub fn float_tuple(rng: &mut ChaCha8Rng, m: usize, n: usize) -> CommutingTuple<C64> {
    let a = if rng.gen_bool(0.5) {
        Matrix::from_vec(n, n, (0..n * n).map(|_| unit_c64(rng)).collect())
    } else {
        let exact: Matrix<C64> = split_matrix(rng, n);
        let (g, g_inv) = unimodular::<C64>(rng, n);
        let noise = Matrix::from_vec(n, n, (0..n * n).map(|_| unit_c64(rng) * 0.25).collect());
        let h = Matrix::<C64>::identity(n).add(&noise);
        match inverse(&h, &tol()) {
            Some(h_inv) => h.mul(&g).mul(&exact).mul(&g_inv).mul(&h_inv),
            None => exact,
        }
    };
    let a2 = a.mul(&a);
    let mats = (0..m)
        .map(|j| {
            if j == 0 {
                return a.clone();
            }
            let c: Vec<C64> = (0..3).map(|_| unit_c64(rng)).collect();
            Matrix::scalar(n, c[0]).add(&a.scale(&c[1])).add(&a2.scale(&c[2]))
        })
        .collect();
    check_commuting(mats, &tol()).expect("polynomials in one matrix commute")
}

/// A stable marked tuple of `2d` matrices with no zero joint eigenvalue
/// coordinate, i.e. a marked invertible representation of `Z^2d`.
pub fn betti_instance<F: Field>(rng: &mut ChaCha8Rng, d: usize, n: usize) -> MarkedTuple<F> {
    loop {
        let mt = likely_stable::<F>(rng, 2 * d, n);
        if !crate::adhm::is_stable(&mt, &tol()) {
            continue;
        }
        let Ok(support) = crate::adhm::joint_support(mt.tuple(), &tol()) else {
            continue;
        };
        if support.iter().all(|(p, _)| p.iter().all(|x| !x.is_zero())) {
            return mt;
        }
    }
}

/// The standard square torus, or `Pi = [Id | X + iY]` with `Y` a symmetric
/// perturbation of the identity, which keeps the columns independent over R.
pub fn model(rng: &mut ChaCha8Rng, d: usize) -> AbelianVarietyModel {
    if rng.gen_bool(0.5) {
        return AbelianVarietyModel::standard(d);
    }
    let mut pi = Matrix::<C64>::zeros(d, 2 * d);
    for i in 0..d {
        pi[(i, i)] = C64::new(1.0, 0.0);
        for j in i..d {
            let y = if i == j { 1.0 } else { 0.0 } + rng.gen_range(-0.2..0.2);
            let x = rng.gen_range(-0.5..0.5);
            pi[(i, d + j)] = C64::new(x, y);
            pi[(j, d + i)] = C64::new(x, y);
        }
    }
    AbelianVarietyModel::new(pi, tol()).unwrap_or_else(|_| AbelianVarietyModel::standard(d))
}

/// A triple with small Gaussian integer entries and antisymmetric `gamma`;
/// each block is zero with probability 1/4 so special kinds occur.
pub fn triple<F: Field>(rng: &mut ChaCha8Rng, d: usize, v: usize) -> UtaiTriple<F> {
    let block = |rng: &mut ChaCha8Rng, r: usize, c: usize| {
        if rng.gen_bool(0.25) {
            return Matrix::<F>::zeros(r, c);
        }
        Matrix::from_vec(r, c, (0..r * c).map(|_| gaussian(rng, 2, 0.6)).collect())
    };
    let alpha = block(rng, d, v);
    let beta = block(rng, d, v);
    let upper = block(rng, v, v);
    let mut gamma = Matrix::<F>::zeros(v, v);
    for i in 0..v {
        for j in i + 1..v {
            gamma[(i, j)] = upper[(i, j)].clone();
            gamma[(j, i)] = -upper[(i, j)].clone();
        }
    }
    UtaiTriple::new(d, v, alpha, beta, gamma, &tol()).expect("gamma is antisymmetric")
}

/// A polynomial in `d` variables with up to three terms of degree at most 2.
pub fn poly<F: Field>(rng: &mut ChaCha8Rng, d: usize) -> MPoly<F> {
    (0..rng.gen_range(0..=3)).fold(MPoly::zero(d), |acc, _| {
        let mut exps = vec![0u32; d];
        for _ in 0..rng.gen_range(0..=2) {
            exps[rng.gen_range(0..d)] += 1;
        }
        acc.add(&MPoly::monomial(d, exps, gaussian(rng, 3, 0.5)))
    })
}

pub fn section<F: Field>(rng: &mut ChaCha8Rng, d: usize, v: usize) -> Section<F> {
    (0..v).map(|_| poly(rng, d)).collect()
}
