use proptest::prelude::*;

use super::*;
use crate::linalg::{GaussRat, C64};

type Q = GaussRat;

fn tol() -> ToleranceFrame {
    ToleranceFrame::default()
}

fn q(re: i64, im: i64) -> Q {
    Q::gaussian(re, im)
}

fn x(d: usize, i: usize) -> MPoly<Q> {
    MPoly::var(d, i)
}

fn one(d: usize) -> MPoly<Q> {
    MPoly::constant(d, q(1, 0))
}

#[test]
fn fm_dual_examples() {
    let z = UtaiTriple::<Q>::zero(2, 3);
    assert_eq!(fm_dual(&z), z);
    let dr = UtaiTriple::<Q>::de_rham(3);
    let dual = fm_dual(&dr);
    assert!(dual.alpha().is_zero());
    assert_eq!(dual.beta(), &Matrix::identity(3));
    assert!(dual.gamma().is_zero());
    assert!(classify(&dual, &tol()).abelian);
}

#[test]
fn gl_act_examples() {
    let t = sample_triple();
    assert_eq!(gl_act(&Matrix::identity(2), &t, &tol()).unwrap(), t);
    let minus = gl_act(&Matrix::scalar(2, q(-1, 0)), &t, &tol()).unwrap();
    assert_eq!(minus.alpha(), &t.alpha().neg());
    assert_eq!(minus.beta(), &t.beta().neg());
    assert_eq!(minus.gamma(), t.gamma());
    let c = q(3, 0);
    let scaled = gl_act(&Matrix::scalar(2, c.clone()), &UtaiTriple::de_rham(2), &tol()).unwrap();
    assert_eq!(scaled.alpha(), &Matrix::scalar(2, Q::from_ratio(1, 3)));
    assert!(scaled.beta().is_zero() && scaled.gamma().is_zero());
    assert_eq!(
        gl_act(&Matrix::<Q>::from_i64_rows(&[&[1, 1], &[1, 1]]), &t, &tol()),
        Err(Error::SingularGroupElement)
    );
}

fn sample_triple() -> UtaiTriple<Q> {
    UtaiTriple::new(
        2,
        2,
        Matrix::from_i64_rows(&[&[1, 2], &[0, 1]]),
        Matrix::from_i64_rows(&[&[0, 1], &[3, 0]]),
        Matrix::from_i64_rows(&[&[0, 5], &[-5, 0]]),
        &tol(),
    )
    .unwrap()
}

#[test]
fn non_antisymmetric_gamma_is_rejected() {
    let r = UtaiTriple::<Q>::new(
        1,
        2,
        Matrix::zeros(1, 2),
        Matrix::zeros(1, 2),
        Matrix::from_i64_rows(&[&[0, 1], &[1, 0]]),
        &tol(),
    );
    assert_eq!(r, Err(Error::NotAntisymmetric));
}

#[test]
fn orbit_invariant_examples() {
    let inv = orbit_invariants(&UtaiTriple::<Q>::de_rham(2), &tol());
    assert_eq!(
        (inv.rank_alpha, inv.rank_beta, inv.rank_stacked, inv.rank_gamma),
        (2, 0, 2, 0)
    );
    let zero = orbit_invariants(&UtaiTriple::<Q>::zero(3, 2), &tol());
    assert_eq!(
        (zero.rank_alpha, zero.rank_beta, zero.rank_stacked, zero.rank_gamma),
        (0, 0, 0, 0)
    );
}

#[test]
fn classify_examples() {
    let dr = classify(&UtaiTriple::<Q>::de_rham(2), &tol());
    assert_eq!(dr, DAlgebraLabel { kind: DAlgebraKind::DeRham, abelian: false });
    let dol = classify(&UtaiTriple::<Q>::zero(2, 2), &tol());
    assert_eq!(dol, DAlgebraLabel { kind: DAlgebraKind::Dolbeault, abelian: true });
    let cohiggs = classify(&UtaiTriple::<Q>::zero(2, 2).with_bundle(CoefficientBundle::Cotangent), &tol());
    assert_eq!(cohiggs.kind, DAlgebraKind::CoHiggs);
    let tau = UtaiTriple::new(2, 2, Matrix::scalar(2, q(5, 0)), Matrix::zeros(2, 2), Matrix::zeros(2, 2), &tol()).unwrap();
    assert_eq!(classify(&tau, &tol()).kind, DAlgebraKind::TauConnection(q(5, 0)));
    let fol = UtaiTriple::<Q>::new(2, 1, Matrix::from_i64_rows(&[&[1], &[0]]), Matrix::zeros(2, 1), Matrix::zeros(1, 1), &tol()).unwrap();
    assert_eq!(classify(&fol, &tol()).kind, DAlgebraKind::Foliation);
    assert_eq!(classify(&sample_triple(), &tol()).kind, DAlgebraKind::TwistedDifferentialOperators);
    let generic = UtaiTriple::<Q>::new(2, 3, Matrix::zeros(2, 3), Matrix::from_i64_rows(&[&[1, 0, 0], &[0, 0, 0]]), Matrix::zeros(3, 3), &tol()).unwrap();
    assert_eq!(classify(&generic, &tol()), DAlgebraLabel { kind: DAlgebraKind::Generic, abelian: true });

    let dr_float = UtaiTriple::<C64>::de_rham(2);
    assert_eq!(classify(&dr_float, &tol()).kind, DAlgebraKind::DeRham);
}

#[test]
fn bracket_examples() {
    let t = UtaiTriple::<Q>::de_rham(1);
    assert!(bracket_eval(&t, &one(1), 0, &one(1), 0).iter().all(MPoly::is_zero));
    let b = bracket_eval(&t, &x(1, 0), 0, &one(1), 0);
    assert_eq!(b, vec![MPoly::constant(1, q(-1, 0))]);
    let dol = UtaiTriple::<Q>::zero(2, 2);
    let f = x(2, 0).mul(&x(2, 1)).add(&one(2));
    assert!(bracket_eval(&dol, &f, 0, &x(2, 1), 1).iter().all(MPoly::is_zero));
}

#[test]
fn jacobi_on_de_rham_sample() {
    let t = UtaiTriple::<Q>::de_rham(2);
    let e = |p: MPoly<Q>, i: usize| {
        let mut s = vec![MPoly::zero(2); 2];
        s[i] = p;
        s
    };
    let sample = [e(x(2, 0), 0), e(x(2, 1), 1), e(one(2), 0)];
    assert!(jacobi_check(&t, &[sample], &tol()));
    let constants = [e(one(2), 0), e(one(2), 1), e(one(2), 1)];
    assert!(jacobi_check(&sample_triple(), &[constants], &tol()));
}

fn pascal(n: usize, k: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

#[test]
fn cohomology_dimensions() {
    for d in 0..=6 {
        for v in 0..=6 {
            for k in 0..=d + v + 1 {
                assert_eq!(cohomology_dim(d, v, k), pascal(d + v, k), "d={d} v={v} k={k}");
            }
            assert_eq!(
                truncated_cohomology_dim(d, v, 2, 1),
                (d * v + v * v.saturating_sub(1) / 2) as u128
            );
        }
    }
    assert_eq!(truncated_cohomology_dim(1, 1, 2, 1), 1);
}

fn small_q() -> impl Strategy<Value = Q> {
    (-2i64..=2, -2i64..=2).prop_map(|(a, b)| q(a, b))
}

fn matrix(r: usize, c: usize) -> impl Strategy<Value = Matrix<Q>> {
    proptest::collection::vec(small_q(), r * c).prop_map(move |d| Matrix::from_vec(r, c, d))
}

fn triple() -> impl Strategy<Value = UtaiTriple<Q>> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(d, v)| {
        (matrix(d, v), matrix(d, v), matrix(v, v)).prop_map(move |(a, b, g)| {
            let gamma = g.sub(&g.transpose());
            UtaiTriple::new(d, v, a, b, gamma, &tol()).unwrap()
        })
    })
}

/// Unimodular upper-times-lower products are always invertible.
fn group_element(v: usize) -> impl Strategy<Value = Matrix<Q>> {
    (matrix(v, v), matrix(v, v)).prop_map(move |(u, l)| {
        let mut upper = Matrix::identity(v);
        let mut lower = Matrix::identity(v);
        for i in 0..v {
            for j in i + 1..v {
                upper[(i, j)] = u[(i, j)].clone();
                lower[(j, i)] = l[(j, i)].clone();
            }
        }
        upper.mul(&lower)
    })
}

fn poly(d: usize) -> impl Strategy<Value = MPoly<Q>> {
    proptest::collection::vec((0u32..=2, 0u32..=2, 0u32..=2, small_q()), 0..4).prop_map(move |terms| {
        terms.into_iter().fold(MPoly::zero(d), |acc, (a, b, c, k)| {
            let e = [a, b, c][..d].to_vec();
            acc.add(&MPoly::monomial(d, e, k))
        })
    })
}

fn section(d: usize, v: usize) -> impl Strategy<Value = Section<Q>> {
    proptest::collection::vec(poly(d), v)
}

fn triple_with_sections() -> impl Strategy<Value = (UtaiTriple<Q>, [Section<Q>; 3], MPoly<Q>)> {
    triple().prop_flat_map(|t| {
        let (d, v) = (t.d(), t.v());
        (Just(t), section(d, v), section(d, v), section(d, v), poly(d))
            .prop_map(|(t, a, b, c, h)| (t, [a, b, c], h))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fm_dual_squared_is_minus_identity_action(t in triple()) {
        let minus = Matrix::scalar(t.v(), q(-1, 0));
        prop_assert_eq!(fm_dual(&fm_dual(&t)), gl_act(&minus, &t, &tol()).unwrap());
        let fourth = fm_dual(&fm_dual(&fm_dual(&fm_dual(&t))));
        prop_assert_eq!(fourth, t);
    }

    #[test]
    fn invariants_and_abelian_flag_are_orbit_constant(
        (t, g) in triple().prop_flat_map(|t| { let v = t.v(); (Just(t), group_element(v)) })
    ) {
        let moved = gl_act(&g, &t, &tol()).unwrap();
        prop_assert_eq!(orbit_invariants(&moved, &tol()), orbit_invariants(&t, &tol()));
        prop_assert_eq!(classify(&moved, &tol()).abelian, classify(&t, &tol()).abelian);
    }

    #[test]
    fn bracket_is_antisymmetric_leibniz_and_jacobi((t, [a, b, c], h) in triple_with_sections()) {
        let ab = bracket(&t, &a, &b);
        let ba = bracket(&t, &b, &a);
        prop_assert!(section_add(&ab, &ba).iter().all(MPoly::is_zero));

        // [a, h b] = h [a, b] + (alpha(a) h) b
        let hb: Section<Q> = b.iter().map(|p| p.mul(&h)).collect();
        let anchor: Vec<MPoly<Q>> = (0..t.d())
            .map(|i| {
                a.iter().enumerate().fold(MPoly::zero(t.d()), |acc, (u, f)| {
                    acc.add(&f.scale(&t.alpha()[(i, u)]))
                })
            })
            .collect();
        let mut dh = MPoly::zero(t.d());
        for (i, coeff) in anchor.iter().enumerate() {
            dh = dh.add(&coeff.mul(&h.partial(i)));
        }
        let lhs = bracket(&t, &a, &hb);
        let rhs: Section<Q> = ab.iter().zip(&b).map(|(p, bp)| p.mul(&h).add(&bp.mul(&dh))).collect();
        prop_assert_eq!(lhs, rhs);

        prop_assert!(jacobi_check(&t, &[[a, b, c]], &tol()));
    }
}
