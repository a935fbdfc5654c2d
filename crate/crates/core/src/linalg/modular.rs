//! Certified exact rank over `Q(i)` by elimination modulo primes `p = 1 mod 4`.
//!
//! Rows are scaled to Gaussian integers and mapped to `F_p` with `i` sent to a
//! square root of `-1`. Each such reduction can only lose rank. If the true
//! rank exceeded the largest modular rank `r` seen, some `(r+1)`-minor `D`
//! would be nonzero and lie in every prime used, so their product would
//! divide `|D|^2`; once the product exceeds the squared Hadamard bound that is
//! impossible and `r` is exact. Full rank is certified by a single prime.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{GaussRat, Matrix};

/// `(p, sqrt(-1) mod p)` for primes `p = 1 mod 4` below `2^31`.
fn primes() -> &'static [(u64, u64)] {
    static PRIMES: OnceLock<Vec<(u64, u64)>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(96);
        let mut p: u64 = (1 << 31) - 1;
        p -= (p + 3) % 4; // p = 1 mod 4
        while out.len() < 96 {
            if is_prime(p) {
                out.push((p, sqrt_minus_one(p)));
            }
            p -= 4;
        }
        out
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `g^((p-1)/4)` for the first quadratic non-residue `g`.
fn sqrt_minus_one(p: u64) -> u64 {
    (2..p)
        .find(|&g| pow_mod(g, (p - 1) / 2, p) == p - 1)
        .map(|g| pow_mod(g, (p - 1) / 4, p))
        .expect("p = 1 mod 4 has a non-residue")
}

/// Gaussian integer rows: each row times the lcm of its denominators.
fn integer_rows(m: &Matrix<GaussRat>) -> Vec<Vec<(BigInt, BigInt)>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, z| acc.lcm(z.re.denom()).lcm(z.im.denom()));
            row.iter()
                .map(|z| {
                    let re = z.re.numer() * (&l / z.re.denom());
                    let im = z.im.numer() * (&l / z.im.denom());
                    (re, im)
                })
                .collect()
        })
        .collect()
}

/// Upper bound on `log2 |row|_2`.
fn row_log2(row: &[(BigInt, BigInt)]) -> f64 {
    let bits = row.iter().map(|(a, b)| a.bits().max(b.bits())).max().unwrap_or(0);
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    bits as f64 + 0.5 * (2.0 * row.len() as f64).log2()
}

fn residue(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

fn rank_mod(rows: &[Vec<(BigInt, BigInt)>], cols: usize, p: u64, iota: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|(re, im)| {
                    let (re, im) = (residue(re, p), residue(im, p));
                    (re + iota * im % p) % p
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        let pivot_row: Vec<u64> = a[rank].iter().map(|x| x * inv % p).collect();
        for row in a.iter_mut().skip(rank + 1) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                if pivot_row[j] != 0 {
                    row[j] = (row[j] + (p - f) * pivot_row[j]) % p;
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Exact rank, or `None` when the prime table cannot certify the bound.
pub(crate) fn certified_rank(m: &Matrix<GaussRat>) -> Option<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let full = rows.min(cols);
    if full == 0 {
        return Some(0);
    }
    let ints = integer_rows(m);
    let mut logs: Vec<f64> = ints.iter().map(|r| row_log2(r)).collect();
    logs.sort_by(|a, b| b.total_cmp(a));
    // Hadamard bound for any (k)-minor: product of the k largest row norms.
    let bound_log2 = |k: usize| -> f64 { logs.iter().take(k).filter(|x| x.is_finite()).sum() };
    let mut best = 0;
    let mut covered = 0.0;
    for &(p, iota) in primes() {
        best = best.max(rank_mod(&ints, cols, p, iota));
        if best == full {
            return Some(best);
        }
        covered += (p as f64).log2();
        if covered > 2.0 * bound_log2(best + 1) + 1.0 {
            return Some(best);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;

    fn g(re: i64, im: i64) -> GaussRat {
        GaussRat::gaussian(re, im)
    }

    #[test]
    fn prime_table_is_sound() {
        for &(p, iota) in primes().iter().take(5) {
            assert_eq!(p % 4, 1);
            assert!(is_prime(p));
            assert_eq!(iota * iota % p, p - 1);
        }
    }

    #[test]
    fn ranks_of_small_matrices() {
        let m = Matrix::from_rows(&[vec![g(1, 0), g(0, 1)], vec![g(0, 1), g(-1, 0)]]);
        assert_eq!(certified_rank(&m), Some(1));
        let half = GaussRat::from_ratio(1, 2);
        let m = Matrix::from_rows(&[vec![half.clone(), g(1, 0)], vec![g(1, 0), g(2, 0)], vec![g(0, 0), g(0, 3)]]);
        assert_eq!(certified_rank(&m), Some(2));
        assert_eq!(certified_rank(&Matrix::<GaussRat>::zeros(3, 2)), Some(0));
    }

    #[test]
    fn a_prime_multiple_entry_does_not_fool_the_rank() {
        // det = p for the first prime, so that prime alone sees rank 1.
        let p = primes()[0].0 as i64;
        let m = Matrix::from_rows(&[vec![g(1, 0), g(0, 0)], vec![g(0, 0), g(p, 0)]]);
        assert_eq!(certified_rank(&m), Some(2));
    }

    #[test]
    fn agrees_with_rational_elimination() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let k = rng.gen_range(1..=r.min(c));
            // A rank <= k product of r x k and k x c factors, with fractions.
            let mut entry = || GaussRat::new(
                crate::linalg::bigrat(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
                crate::linalg::bigrat(rng.gen_range(-9..=9), 1),
            );
            let a = Matrix::from_vec(r, k, (0..r * k).map(|_| entry()).collect());
            let b = Matrix::from_vec(k, c, (0..k * c).map(|_| entry()).collect());
            let m = a.mul(&b);
            assert_eq!(certified_rank(&m), Some(crate::linalg::exact::rref(&m).1.len()));
        }
    }
}
