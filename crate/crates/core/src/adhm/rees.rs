use super::{CommutingTuple, InvariantFlag};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, ToleranceFrame};

/// `D(t) A_j D(t)^-1` with `A_j` the tuple in a basis adapted to `flag` and
/// `D(t) = diag(t^w(k))`. The result is expressed in that adapted basis.
///
/// Entry `(k, l)` is scaled by `t^(w(k) - w(l))`; invariance of the flag makes
/// every entry with a negative exponent zero, so `t = 0` is allowed and gives
/// the limit.
pub fn rees_family<F: Field>(
    t: &CommutingTuple<F>,
    flag: &InvariantFlag<F>,
    weights: &[i64],
    param: &F,
    tol: &ToleranceFrame,
) -> Result<CommutingTuple<F>> {
    let n = t.n();
    if flag.n() != n || weights.len() != n {
        return Err(Error::InvalidInput(format!(
            "tuple size {n}, flag length {} and {} weights must agree",
            flag.n(),
            weights.len()
        )));
    }
    if weights.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::WeightsNotDecreasing);
    }
    let (g, g_inv) = flag.adapted_basis(tol);
    let adapted = t.conjugate(&g, &g_inv);
    let limit = tol.eps_eq * t.scale();
    let mut out = Vec::with_capacity(t.m());
    for (j, a) in adapted.mats().iter().enumerate() {
        let mut b = Matrix::<F>::zeros(n, n);
        for k in 0..n {
            for l in 0..n {
                let entry = &a[(k, l)];
                if k > l {
                    let zero = if F::MODE.is_exact() {
                        entry.is_zero()
                    } else {
                        entry.modulus() <= limit
                    };
                    if !zero {
                        return Err(Error::FlagNotInvariant { step: l + 1, matrix: j });
                    }
                    continue;
                }
                let e = u32::try_from(weights[k] - weights[l]).expect("nonincreasing weights");
                b[(k, l)] = entry.clone() * power(param, e);
            }
        }
        out.push(b);
    }
    Ok(CommutingTuple::new_unchecked(n, out))
}

/// The `t -> 0` member: entry `(k, l)` survives iff `w(k) = w(l)`, which
/// leaves the block diagonal of the weight levels.
pub fn rees_limit<F: Field>(
    t: &CommutingTuple<F>,
    flag: &InvariantFlag<F>,
    weights: &[i64],
    tol: &ToleranceFrame,
) -> Result<CommutingTuple<F>> {
    rees_family(t, flag, weights, &F::zero(), tol)
}

/// `x^e` with `0^0 = 1`.
fn power<F: Field>(x: &F, e: u32) -> F {
    let mut acc = F::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}
