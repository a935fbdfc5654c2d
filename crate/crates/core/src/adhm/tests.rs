use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::check::{gen, oracle};
use crate::linalg::{GaussRat, LinalgError, C64};

type Q = GaussRat;

fn tol() -> ToleranceFrame {
    ToleranceFrame::default()
}

fn q(re: i64, im: i64) -> Q {
    Q::gaussian(re, im)
}

fn m(rows: &[&[i64]]) -> Matrix<Q> {
    Matrix::from_i64_rows(rows)
}

fn tuple(mats: Vec<Matrix<Q>>) -> CommutingTuple<Q> {
    check_commuting(mats, &tol()).unwrap()
}

fn marked(mats: Vec<Matrix<Q>>, v: &[i64]) -> MarkedTuple<Q> {
    MarkedTuple::new(tuple(mats), v.iter().map(|&x| Q::from_i64(x)).collect(), &tol()).unwrap()
}

fn e(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

#[test]
fn check_commuting_examples() {
    assert!(check_commuting(vec![Matrix::<Q>::identity(3), Matrix::identity(3)], &tol()).is_ok());
    let r = check_commuting(vec![m(&[&[0, 1], &[0, 0]]), m(&[&[0, 0], &[1, 0]])], &tol());
    assert!(matches!(r, Err(Error::NotCommuting(0, 1, _))));
    let diag = vec![
        Matrix::from_diagonal(&[q(1, 0), q(2, 1), q(0, 0)]),
        Matrix::from_diagonal(&[q(5, 0), q(-1, 0), q(3, 3)]),
        Matrix::from_diagonal(&[q(0, 1), q(0, 0), q(7, 0)]),
    ];
    assert!(check_commuting(diag, &tol()).is_ok());
    let shapes = check_commuting(vec![Matrix::<Q>::identity(2), Matrix::identity(3)], &tol());
    assert!(matches!(shapes, Err(Error::InvalidInput(_))));
}

#[test]
fn zero_marking_is_rejected() {
    let r = MarkedTuple::new(tuple(vec![Matrix::identity(2)]), vec![Q::zero(); 2], &tol());
    assert_eq!(r, Err(Error::ZeroMarking));
}

#[test]
fn krylov_and_stability_examples() {
    let one = marked(vec![m(&[&[7]])], &[3]);
    assert_eq!(krylov_span(&one, &tol()).dim(), 1);
    assert!(is_stable(&one, &tol()));

    let jordan = marked(vec![m(&[&[0, 1], &[0, 0]])], &[0, 1]);
    assert_eq!(krylov_span(&jordan, &tol()).dim(), 2);
    assert!(is_stable(&jordan, &tol()));

    let diag = marked(vec![m(&[&[1, 0], &[0, 2]])], &[1, 0]);
    let span = krylov_span(&diag, &tol());
    assert_eq!(span.basis(), &[e(2, 0)]);
    assert!(!is_stable(&diag, &tol()));
    assert_eq!(destabilizing_subspace(&diag, &tol()), Some(m(&[&[1], &[0]])));
}

#[test]
fn common_eigenvector_examples() {
    let ids = tuple(vec![Matrix::identity(3), Matrix::identity(3)]);
    assert_eq!(common_eigenvector(&ids, &tol()).unwrap(), (e(3, 0), vec![q(1, 0), q(1, 0)]));

    let pair = tuple(vec![m(&[&[0, 1], &[0, 0]]), m(&[&[1, 1], &[0, 1]])]);
    assert_eq!(common_eigenvector(&pair, &tol()).unwrap(), (e(2, 0), vec![q(0, 0), q(1, 0)]));

    let rot = tuple(vec![m(&[&[0, -1], &[1, 0]])]);
    let (w, l) = common_eigenvector(&rot, &tol()).unwrap();
    assert!(l[0] == q(0, 1) || l[0] == q(0, -1));
    assert_eq!(rot.mats()[0].mul_vec(&w), w.iter().map(|x| x.clone() * l[0].clone()).collect::<Vec<_>>());

    let float = check_commuting(vec![rot.mats()[0].map(Field::to_c64)], &tol()).unwrap();
    let (w, l) = common_eigenvector(&float, &tol()).unwrap();
    let r: Vec<C64> = float.mats()[0].mul_vec(&w).iter().zip(&w).map(|(a, b)| a - b * l[0]).collect();
    assert!(crate::linalg::vec_norm(&r) < 1e-12);
}

#[test]
fn non_split_spectrum_is_reported() {
    let t = tuple(vec![m(&[&[0, 2], &[1, 0]])]);
    assert_eq!(
        common_eigenvector(&t, &tol()),
        Err(Error::Linalg(LinalgError::NonSplitCharPoly))
    );
}

#[test]
fn triangularize_diagonal_gives_coordinate_flag() {
    let t = tuple(vec![
        Matrix::from_diagonal(&[q(3, 0), q(1, 0), q(2, 0)]),
        Matrix::from_diagonal(&[q(0, 0), q(0, 1), q(5, 0)]),
    ]);
    let tri = triangularize(&t, &tol()).unwrap();
    // A permutation matrix: one unit entry per column.
    for c in tri.g.columns() {
        assert_eq!(c.iter().filter(|x| !x.is_zero()).count(), 1);
        assert!(c.iter().all(|x| x.is_zero() || *x == Q::one()));
    }
    for b in tri.upper.mats() {
        assert!(b.strict_lower_max() == 0.0 && b.sub(&Matrix::from_diagonal(&b.diagonal())).is_zero());
    }
    let flag = &tri.flag;
    for (i, w) in flag.subspaces().iter().enumerate() {
        assert_eq!(w.dim(), i);
        for b in w.basis() {
            assert_eq!(b.iter().filter(|x| !x.is_zero()).count(), 1);
        }
    }
}

fn assert_upper_commuting<F: Field>(t: &CommutingTuple<F>, tri: &Triangularization<F>, eps: f64) {
    let s = t.scale();
    for (b, u) in t.mats().iter().zip(tri.upper.mats()) {
        let back = tri.g.mul(u).mul(&tri.g_inv);
        assert!(back.sub(b).frobenius() <= eps * s, "reconstruction");
        let raw = tri.g_inv.mul(b).mul(&tri.g);
        assert!(raw.strict_lower_max() <= eps * s, "lower part {}", raw.strict_lower_max());
    }
    for a in tri.upper.mats() {
        for b in tri.upper.mats() {
            assert!(a.commutator(b).frobenius() <= eps * s * s, "commutator");
        }
    }
}

#[test]
fn random_float_pairs_triangularize() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let t = gen::float_tuple(&mut rng, 2, 2);
        let tri = triangularize(&t, &tol()).unwrap();
        assert_upper_commuting(&t, &tri, 1e-8);
    }
}

#[test]
fn exact_tuples_triangularize_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let t = gen::commuting_tuple::<Q>(&mut rng, 3, 4);
        let tri = triangularize(&t, &tol()).unwrap();
        assert_upper_commuting(&t, &tri, 0.0);
        assert_eq!(tri.g.mul(&tri.g_inv), Matrix::identity(4));
        tri.flag.check_invariant(&t, &tol()).unwrap();
    }
}

#[test]
fn joint_spectrum_examples() {
    let t = tuple(vec![m(&[&[2, 0], &[0, 1]]), m(&[&[4, 0], &[0, 3]])]);
    assert_eq!(
        joint_spectrum(&t, &tol()).unwrap(),
        vec![vec![q(1, 0), q(3, 0)], vec![q(2, 0), q(4, 0)]]
    );
    let nil = tuple(vec![m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]), m(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]])]);
    assert_eq!(joint_spectrum(&nil, &tol()).unwrap(), vec![vec![Q::zero(); 2]; 3]);
    assert_eq!(joint_support(&nil, &tol()).unwrap(), vec![(vec![Q::zero(); 2], 3)]);
}

#[test]
fn spectrum_and_normal_form_are_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let t = gen::commuting_tuple::<Q>(&mut rng, 2, 3);
        let (g, g_inv) = gen::unimodular::<Q>(&mut rng, 3);
        let c = t.conjugate(&g, &g_inv);
        assert_eq!(joint_spectrum(&t, &tol()).unwrap(), joint_spectrum(&c, &tol()).unwrap());
        assert_eq!(sequiv_normal_form(&t, &tol()).unwrap(), sequiv_normal_form(&c, &tol()).unwrap());
    }
}

#[test]
fn float_spectrum_matches_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let t = gen::commuting_tuple::<Q>(&mut rng, 2, 4);
        let exact = joint_spectrum(&t, &tol()).unwrap();
        let ft = check_commuting(t.mats().iter().map(|b| b.map(Field::to_c64)).collect(), &tol()).unwrap();
        let float = joint_spectrum(&ft, &tol()).unwrap();
        for (a, b) in exact.iter().zip(&float) {
            for (x, y) in a.iter().zip(b) {
                assert!((x.to_c64() - y).norm() < 1e-6, "{exact:?} vs {float:?}");
            }
        }
    }
}

#[test]
fn sequiv_normal_form_examples() {
    let d = tuple(vec![Matrix::from_diagonal(&[q(1, 0), q(2, 0)])]);
    assert_eq!(sequiv_normal_form(&d, &tol()).unwrap(), d);
    let u = tuple(vec![m(&[&[1, 5], &[0, 2]])]);
    assert_eq!(sequiv_normal_form(&u, &tol()).unwrap(), d);
}

#[test]
fn rees_examples() {
    let t = tuple(vec![m(&[&[1, 1], &[0, 2]])]);
    let flag = InvariantFlag::coordinate(2);
    assert_eq!(rees_family(&t, &flag, &[1, 0], &Q::one(), &tol()).unwrap(), t);
    let half = Q::from_ratio(1, 2);
    let at_half = rees_family(&t, &flag, &[1, 0], &half, &tol()).unwrap();
    assert_eq!(at_half.mats()[0], Matrix::from_rows(&[vec![q(1, 0), half.clone()], vec![q(0, 0), q(2, 0)]]));
    let limit = rees_limit(&t, &flag, &[1, 0], &tol()).unwrap();
    assert_eq!(limit.mats()[0], m(&[&[1, 0], &[0, 2]]));
    assert_eq!(rees_limit(&t, &flag, &[0, 0], &tol()).unwrap(), t);
    assert_eq!(rees_limit(&t, &flag, &[0, 1], &tol()), Err(Error::WeightsNotDecreasing));
    let lower = tuple(vec![m(&[&[1, 0], &[1, 2]])]);
    assert_eq!(
        rees_limit(&lower, &flag, &[1, 0], &tol()),
        Err(Error::FlagNotInvariant { step: 1, matrix: 0 })
    );
}

#[test]
fn rees_family_properties_on_seeded_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..80 {
        let t = gen::commuting_tuple::<Q>(&mut rng, 2, 4);
        let tri = triangularize(&t, &tol()).unwrap();
        let weights = [3, 2, 1, 0];
        let spec = joint_spectrum(&t, &tol()).unwrap();
        for param in [q(2, 0), q(0, 1), Q::from_ratio(-1, 3)] {
            let r = rees_family(&t, &tri.flag, &weights, &param, &tol()).unwrap();
            check_commuting(r.mats().to_vec(), &tol()).unwrap();
            assert_eq!(joint_spectrum(&r, &tol()).unwrap(), spec);
        }
        let limit = rees_limit(&t, &tri.flag, &weights, &tol()).unwrap();
        check_commuting(limit.mats().to_vec(), &tol()).unwrap();
        let mut diag: Vec<Vec<Q>> = (0..4)
            .map(|k| limit.mats().iter().map(|b| b[(k, k)].clone()).collect())
            .collect();
        assert!(limit.mats().iter().all(|b| b.sub(&Matrix::from_diagonal(&b.diagonal())).is_zero()));
        diag.sort_by(|a, b| tuple_cmp(a, b));
        assert_eq!(CommutingTuple::diagonal(2, &diag), sequiv_normal_form(&t, &tol()).unwrap());
    }
}

#[test]
fn centralizer_examples() {
    assert_eq!(centralizer_dim(&tuple(vec![Matrix::identity(3)]), &tol()), 9);
    let rs = tuple(vec![Matrix::from_diagonal(&[q(1, 0), q(2, 0), q(0, 1), q(-4, 0)])]);
    assert_eq!(centralizer_dim(&rs, &tol()), 4);
    let jordan = tuple(vec![m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])]);
    assert_eq!(centralizer_dim(&jordan, &tol()), 3);
    assert!(marked_automorphisms_trivial(&marked(vec![m(&[&[0, 1], &[0, 0]])], &[0, 1]), &tol()));
    assert!(!marked_automorphisms_trivial(&marked(vec![m(&[&[1, 0], &[0, 2]])], &[1, 0]), &tol()));
}

#[test]
fn stability_agrees_with_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let (mut stable, mut unstable) = (0, 0);
    for i in 0..300 {
        let n = 1 + i % 4;
        let mt = if n >= 2 && i % 3 == 0 {
            gen::unstable::<Q>(&mut rng, 2, n)
        } else {
            gen::likely_stable::<Q>(&mut rng, 2, n)
        };
        let s = is_stable(&mt, &tol());
        assert_eq!(s, oracle::stable_by_local_criterion(&mt, &tol()).unwrap(), "{mt:?}");
        assert_eq!(s, marked_automorphisms_trivial(&mt, &tol()), "{mt:?}");
        if s {
            stable += 1;
        } else {
            unstable += 1;
        }
    }
    assert!(stable > 50 && unstable > 50, "{stable} stable, {unstable} unstable");
}

#[test]
fn ideal_normal_form_examples() {
    let one = marked(vec![m(&[&[3]]), m(&[&[-2]])], &[5]);
    let inf = ideal_normal_form(&one, &tol()).unwrap();
    assert_eq!(inf.staircase, vec![vec![0, 0]]);
    assert_eq!(inf.mult_matrices, vec![m(&[&[3]]), m(&[&[-2]])]);

    let fat = marked(vec![m(&[&[0, 1], &[0, 0]]), Matrix::zeros(2, 2)], &[0, 1]);
    let inf = ideal_normal_form(&fat, &tol()).unwrap();
    assert_eq!(inf.staircase, vec![vec![0, 0], vec![1, 0]]);
    assert_eq!(inf.mult_matrices, vec![m(&[&[0, 0], &[1, 0]]), Matrix::zeros(2, 2)]);
    assert_eq!(inf.support, Some(vec![(vec![Q::zero(); 2], 2)]));

    let points = vec![vec![q(0, 0), q(0, 0)], vec![q(1, 0), q(0, 0)], vec![q(0, 0), q(2, 1)]];
    let inf = ideal_normal_form(&from_points(&points, &tol()).unwrap(), &tol()).unwrap();
    assert_eq!(inf.staircase.len(), 3);
    let support: Vec<Vec<Q>> = inf.support.unwrap().into_iter().map(|(p, c)| {
        assert_eq!(c, 1);
        p
    }).collect();
    let mut sorted = points.clone();
    sorted.sort_by(|a, b| tuple_cmp(a, b));
    assert_eq!(support, sorted);

    let unstable = marked(vec![m(&[&[1, 0], &[0, 2]])], &[1, 0]);
    assert_eq!(ideal_normal_form(&unstable, &tol()), Err(Error::NotStable));
}

#[test]
fn monomial_order_is_graded_with_last_variable_largest() {
    let mut mons = vec![vec![0, 2], vec![1, 1], vec![2, 0], vec![0, 1], vec![1, 0], vec![0, 0]];
    mons.sort_by(|a, b| monomial_cmp(a, b));
    assert_eq!(mons, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
}

fn division_closed(staircase: &[Vec<u32>]) -> bool {
    staircase.iter().all(|s| {
        (0..s.len()).all(|j| {
            s[j] == 0 || {
                let mut d = s.clone();
                d[j] -= 1;
                staircase.contains(&d)
            }
        })
    })
}

#[test]
fn ideal_normal_form_is_an_orbit_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut seen = 0;
    while seen < 60 {
        let mt = gen::likely_stable::<Q>(&mut rng, 2, 4);
        if !is_stable(&mt, &tol()) {
            continue;
        }
        seen += 1;
        let inf = ideal_normal_form(&mt, &tol()).unwrap();
        assert_eq!(inf.staircase.len(), 4);
        assert!(division_closed(&inf.staircase));
        assert_eq!(inf.staircase[0], vec![0, 0]);
        let reduced = check_commuting(inf.mult_matrices.clone(), &tol()).unwrap();
        assert!(is_stable(&MarkedTuple::new(reduced, e(4, 0), &tol()).unwrap(), &tol()));
        for _ in 0..5 {
            let (g, g_inv) = gen::unimodular::<Q>(&mut rng, 4);
            assert_eq!(ideal_normal_form(&mt.conjugate(&g, &g_inv), &tol()).unwrap(), inf);
        }
    }
}

#[test]
fn from_points_examples() {
    let one = from_points(&[vec![q(2, 0), q(0, 3)]], &tol()).unwrap();
    assert_eq!(one.tuple().mats(), &[m(&[&[2]]), Matrix::from_rows(&[vec![q(0, 3)]])]);
    assert_eq!(one.v(), &[Q::one()]);
    let two = from_points(&[vec![q(0, 0), q(0, 0)], vec![q(1, 0), q(0, 0)]], &tol()).unwrap();
    assert_eq!(two.tuple().mats(), &[m(&[&[0, 0], &[0, 1]]), Matrix::zeros(2, 2)]);
    assert!(is_stable(&two, &tol()));
    assert_eq!(
        from_points(&[vec![q(1, 0)], vec![q(2, 0)], vec![q(1, 0)]], &tol()),
        Err(Error::DuplicatePoint(0, 2))
    );
    let fl = from_points(&[vec![C64::new(1.0, 0.0)], vec![C64::new(1.0 + 1e-12, 0.0)]], &tol());
    assert_eq!(fl, Err(Error::DuplicatePoint(0, 1)));
}

#[test]
fn decompose_examples() {
    let points = vec![vec![q(1, 0), q(0, 0)], vec![q(0, 0), q(2, 0)], vec![q(0, 1), q(0, 0)]];
    let pieces = decompose_punctual(&from_points(&points, &tol()).unwrap(), &tol()).unwrap();
    assert_eq!(pieces.len(), 3);
    assert!(pieces.iter().all(|p| p.len() == 1 && p.nilpotent().mats().iter().all(Matrix::is_zero)));

    let n = m(&[&[0, 1], &[0, 0]]);
    let single = PunctualData::new(vec![q(3, 0)], tuple(vec![n.clone()]), Some(e(2, 1)), &tol()).unwrap();
    let mt = assemble(&[single.clone()], &tol()).unwrap();
    assert_eq!(decompose_punctual(&mt, &tol()).unwrap(), vec![single]);
}

#[test]
fn reassembly_preserves_the_ideal() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let mut seen = 0;
    while seen < 60 {
        let mt = gen::likely_stable::<Q>(&mut rng, 2, 4);
        if !is_stable(&mt, &tol()) {
            continue;
        }
        seen += 1;
        let pieces = decompose_punctual(&mt, &tol()).unwrap();
        assert_eq!(pieces.iter().map(PunctualData::len).sum::<usize>(), 4);
        for p in &pieces {
            PunctualData::new(p.point().to_vec(), p.nilpotent().clone(), p.marking().map(<[Q]>::to_vec), &tol())
                .unwrap();
        }
        let back = assemble(&pieces, &tol()).unwrap();
        assert_eq!(ideal_normal_form(&back, &tol()).unwrap(), ideal_normal_form(&mt, &tol()).unwrap());
    }
}

#[test]
fn punctual_transport_examples() {
    let zero = PunctualData::new(vec![Q::zero(), Q::zero()], tuple(vec![Matrix::zeros(1, 1); 2]), Some(vec![Q::one()]), &tol())
        .unwrap();
    let out = punctual_transport(&zero, &[Germ::Exp, Germ::Exp], &tol()).unwrap();
    assert_eq!(out.point(), &[Q::one(), Q::one()]);
    assert!(out.nilpotent().mats().iter().all(Matrix::is_zero));

    let n = m(&[&[0, 1], &[0, 0]]);
    let fat = PunctualData::new(vec![Q::zero()], tuple(vec![n.clone()]), Some(e(2, 1)), &tol()).unwrap();
    let out = punctual_transport(&fat, &[Germ::Exp], &tol()).unwrap();
    assert_eq!(out.point(), &[Q::one()]);
    assert_eq!(out.nilpotent().mats(), &[n.clone()]);
    let back = punctual_transport(&out, &[Germ::Log], &tol()).unwrap();
    assert_eq!(back, fat);

    assert_eq!(punctual_transport(&fat, &[Germ::Log], &tol()), Err(Error::LogAtZero));
    let at_two = PunctualData::new(vec![q(2, 0)], tuple(vec![n.clone()]), Some(e(2, 1)), &tol()).unwrap();
    assert!(matches!(punctual_transport(&at_two, &[Germ::Exp], &tol()), Err(Error::NotRepresentable(_))));
    assert_eq!(
        punctual_transport(&at_two, &[Germ::Scale(Q::zero())], &tol()),
        Err(Error::MarkingNotCyclic)
    );
    let series = punctual_transport(&at_two, &[Germ::Series(vec![q(5, 0), q(3, 0)])], &tol()).unwrap();
    assert_eq!(series.point(), &[q(5, 0)]);
    assert_eq!(series.nilpotent().mats()[0], n.scale(&q(3, 0)));
    assert!(matches!(
        punctual_transport(&at_two, &[Germ::Series(vec![q(5, 0)])], &tol()),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn float_transport_round_trips_off_the_origin() {
    let n = Matrix::<C64>::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    let t = check_commuting(vec![n.clone(), n.mul(&n).scale(&C64::new(0.5, 2.0))], &tol()).unwrap();
    let v = vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    let p = PunctualData::new(vec![C64::new(0.3, -2.0), C64::new(-1.0, 0.5)], t, Some(v), &tol()).unwrap();
    let out = punctual_transport(&p, &[Germ::Exp, Germ::Exp], &tol()).unwrap();
    let back = punctual_transport(&out, &[Germ::Log, Germ::Log], &tol()).unwrap();
    for (a, b) in back.point().iter().zip(p.point()) {
        assert!((a - b).norm() < 1e-12);
    }
    for (a, b) in back.nilpotent().mats().iter().zip(p.nilpotent().mats()) {
        assert!(a.sub(b).frobenius() < 1e-12);
    }
}

/// Random nilpotent commuting tuples: polynomials without constant term in a
/// strictly upper triangular matrix, conjugated.
fn nilpotent_tuple(rng: &mut ChaCha8Rng, m: usize, l: usize) -> CommutingTuple<Q> {
    use rand::Rng;
    let mut u = Matrix::<Q>::zeros(l, l);
    for i in 0..l {
        for j in i + 1..l {
            u[(i, j)] = Q::from_i64(rng.gen_range(-1..=1));
        }
    }
    if l > 1 {
        u[(0, 1)] = Q::one();
    }
    let (g, g_inv) = gen::unimodular::<Q>(rng, l);
    let a = g.mul(&u).mul(&g_inv);
    let mats = (0..m)
        .map(|_| {
            let c1: Q = gen::gaussian(rng, 2, 0.5);
            let c2: Q = gen::gaussian(rng, 2, 0.5);
            a.scale(&c1).add(&a.mul(&a).scale(&c2))
        })
        .collect();
    check_commuting(mats, &tol()).unwrap()
}

#[test]
fn log_after_exp_is_the_identity_on_seeded_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for i in 0..200 {
        let l = 1 + i % 5;
        let t = nilpotent_tuple(&mut rng, 2, l);
        let data = PunctualData::new(vec![Q::zero(); 2], t, None, &tol()).unwrap();
        let there = punctual_transport(&data, &[Germ::Exp, Germ::Exp], &tol()).unwrap();
        let back = punctual_transport(&there, &[Germ::Log, Germ::Log], &tol()).unwrap();
        assert_eq!(back, data);
        for b in there.nilpotent().mats() {
            assert!(b.pow(l).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn float_tuples_triangularize(seed in any::<u64>(), n in 1usize..=6, m in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = gen::float_tuple(&mut rng, m, n);
        let tri = triangularize(&t, &tol()).unwrap();
        assert_upper_commuting(&t, &tri, 1e-8);
        let (w, l) = common_eigenvector(&t, &tol()).unwrap();
        for (b, lj) in t.mats().iter().zip(&l) {
            let r: Vec<C64> = b.mul_vec(&w).iter().zip(&w).map(|(x, y)| x - y * lj).collect();
            prop_assert!(crate::linalg::vec_norm(&r) <= 1e-7 * t.scale());
        }
    }

    #[test]
    fn krylov_span_is_invariant_and_contains_v(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mt = gen::likely_stable::<Q>(&mut rng, 2, n);
        let k = krylov_span(&mt, &tol());
        prop_assert!(k.contains(mt.v(), &tol()));
        for b in mt.tuple().mats() {
            prop_assert!(k.is_invariant(b, &tol()));
        }
    }
}
