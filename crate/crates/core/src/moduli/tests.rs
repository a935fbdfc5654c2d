use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::adhm::{check_commuting, from_points, ideal_normal_form};
use crate::check::gen;
use crate::linalg::GaussRat;

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

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn jordan_pair() -> MarkedTuple<Q> {
    let t = check_commuting(vec![m(&[&[2, 1], &[0, 2]]), m(&[&[3, 0], &[0, 3]])], &tol()).unwrap();
    MarkedTuple::new(t, vec![q(0, 0), q(1, 0)], &tol()).unwrap()
}

#[test]
fn distinct_points_give_reduced_pieces() {
    let mt = from_points(&[vec![q(1, 0), q(2, 0)], vec![q(3, 0), q(-1, 0)]], &tol()).unwrap();
    let h = betti_marked(&mt, &tol()).unwrap();
    assert_eq!(h.space(), &FiberSpace::Betti { d: 1 });
    assert_eq!(h.pieces().len(), 2);
    assert_eq!(h.pieces()[0].point, FiberPoint::Betti { z: vec![c(1.0, 0.0), c(2.0, 0.0)] });
    assert!(h.pieces().iter().all(|p| p.punctual.nilpotent().mats().iter().all(Matrix::is_zero)));
    let s = hilbert_chow(&h);
    assert_eq!(s.n(), 2);
    assert!(s.approx_eq(&betti_unmarked(mt.tuple(), &tol()).unwrap(), &tol()));
}

#[test]
fn jordan_block_gives_a_unipotent_piece() {
    let h = betti_marked(&jordan_pair(), &tol()).unwrap();
    assert_eq!(h.pieces().len(), 1);
    let piece = &h.pieces()[0];
    assert_eq!(piece.punctual.point(), &[q(2, 0), q(3, 0)]);
    let mut half = Matrix::<Q>::zeros(2, 2);
    half[(0, 1)] = Q::one() / Q::from_i64(2);
    assert_eq!(piece.punctual.nilpotent().mats()[0], half);
    assert!(piece.punctual.nilpotent().mats()[1].is_zero());
    assert_eq!(hilbert_chow(&h).support, vec![(piece.point.clone(), 2)]);
}

#[test]
fn betti_errors() {
    let t = check_commuting(vec![m(&[&[0, 0], &[0, 1]]), m(&[&[1, 0], &[0, 2]])], &tol()).unwrap();
    let mt = MarkedTuple::new(t.clone(), vec![q(1, 0), q(1, 0)], &tol()).unwrap();
    assert!(matches!(betti_marked(&mt, &tol()), Err(Error::ZeroEigenvalue(0))));
    assert!(matches!(betti_unmarked(&t, &tol()), Err(Error::ZeroEigenvalue(0))));
    let odd = check_commuting(vec![m(&[&[1]])], &tol()).unwrap();
    assert!(matches!(betti_unmarked(&odd, &tol()), Err(Error::InvalidInput(_))));
    let unstable = MarkedTuple::new(t, vec![q(1, 0), q(0, 0)], &tol()).unwrap();
    assert!(matches!(betti_marked(&unstable, &tol()), Err(Error::NotStable | Error::ZeroEigenvalue(_))));
}

#[test]
fn reassembly_is_exact_on_seeded_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..60 {
        let mt = gen::betti_instance::<Q>(&mut rng, 1, 3);
        let h = betti_marked(&mt, &tol()).unwrap();
        assert_eq!(h.n(), 3);
        let back = betti_reassemble(&h, &tol()).unwrap();
        assert_eq!(ideal_normal_form(&back, &tol()).unwrap(), ideal_normal_form(&mt, &tol()).unwrap());
    }
}

#[test]
fn riemann_hilbert_takes_the_logarithm_of_the_unipotent_part() {
    // U = J_3, so log(Id + U) = J - J^2 / 2.
    let j = m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    let t = check_commuting(vec![j.shift_diagonal(&Q::one()), Matrix::identity(3)], &tol()).unwrap();
    let mt = MarkedTuple::new(t, vec![q(0, 0), q(0, 0), q(1, 0)], &tol()).unwrap();
    let h = betti_marked(&mt, &tol()).unwrap();
    let model = AbelianVarietyModel::standard(1);
    let dr = rh_to_derham(&h, &model, &tol()).unwrap();
    let piece = &dr.pieces()[0];
    assert_eq!(piece.point, FiberPoint::Natural { a: vec![c(0.0, 0.0), c(0.0, 0.0)] });
    let expected = j.sub(&j.mul(&j).scale(&(Q::one() / Q::from_i64(2))));
    assert_eq!(piece.punctual.nilpotent().mats()[0], expected);
    let back = rh_to_betti(&dr, &tol()).unwrap();
    assert_eq!(back.pieces()[0].punctual.nilpotent(), h.pieces()[0].punctual.nilpotent());
}

#[test]
fn riemann_hilbert_round_trips_on_seeded_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let model = AbelianVarietyModel::standard(1);
    let frame = ToleranceFrame::new(1e-9, 1e-10, 1e-7).unwrap();
    for _ in 0..60 {
        let mt = gen::betti_instance::<Q>(&mut rng, 1, 3);
        let h = betti_marked(&mt, &tol()).unwrap();
        let back = rh_to_betti(&rh_to_derham(&h, &model, &tol()).unwrap(), &tol()).unwrap();
        assert!(back.approx_eq(&h, &frame));
        for (a, i) in back.pieces().iter().zip(back.matching(&h, &frame).unwrap()) {
            assert_eq!(a.punctual.nilpotent(), h.pieces()[i].punctual.nilpotent());
        }
    }
}

#[test]
fn rh_rejects_the_wrong_space() {
    let h = betti_marked(&jordan_pair(), &tol()).unwrap();
    assert!(matches!(rh_to_betti(&h, &tol()), Err(Error::SpaceMismatch(_))));
    assert!(matches!(
        rh_to_derham(&h, &AbelianVarietyModel::standard(2), &tol()),
        Err(Error::SpaceMismatch(_))
    ));
}

#[test]
fn hodge_deformation_round_trips_and_composes() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let model = AbelianVarietyModel::standard(1);
    let taus = [q(1, 0), q(2, 0), Q::one() / Q::from_i64(2), q(0, 1)];
    for _ in 0..20 {
        let mt = gen::betti_instance::<Q>(&mut rng, 1, 3);
        let natural = rh_to_derham(&betti_marked(&mt, &tol()).unwrap(), &model, &tol()).unwrap();
        for tau in &taus {
            let hodge = hodge_deform(&natural, tau, &tol()).unwrap();
            let back = hodge_undeform(&hodge, &tol()).unwrap();
            assert!(back.approx_eq(&natural, &tol()));
            for (a, i) in back.pieces().iter().zip(back.matching(&natural, &tol()).unwrap()) {
                assert_eq!(a.punctual.nilpotent(), natural.pieces()[i].punctual.nilpotent());
            }
            let s = q(1, 1);
            let composed = hodge_rescale(&hodge, &s, &tol()).unwrap();
            let direct = hodge_deform(&natural, &(tau.clone() * s.clone()), &tol()).unwrap();
            assert_eq!(composed.space(), direct.space());
            for (a, i) in composed.pieces().iter().zip(composed.matching(&direct, &tol()).unwrap()) {
                assert_eq!(a.punctual.nilpotent(), direct.pieces()[i].punctual.nilpotent());
            }
        }
    }
}

#[test]
fn hodge_rejects_tau_zero() {
    let model = AbelianVarietyModel::standard(1);
    let natural = rh_to_derham(&betti_marked(&jordan_pair(), &tol()).unwrap(), &model, &tol()).unwrap();
    assert!(matches!(hodge_deform(&natural, &Q::zero(), &tol()), Err(Error::TauZero)));
    let hodge = hodge_deform(&natural, &q(2, 0), &tol()).unwrap();
    assert!(matches!(hodge_rescale(&hodge, &Q::zero(), &tol()), Err(Error::TauZero)));
}

#[test]
fn coincident_pieces_merge() {
    let space = FiberSpace::<Q>::Betti { d: 1 };
    let point = FiberPoint::Betti { z: vec![c(2.0, 0.0), c(1.0, 0.0)] };
    let zero = CommutingTuple::new_unchecked(1, vec![Matrix::zeros(1, 1), Matrix::zeros(1, 1)]);
    let piece = |marking: Option<Vec<Q>>| HilbPiece {
        point: point.clone(),
        punctual: PunctualData::new(vec![q(2, 0), q(1, 0)], zero.clone(), marking, &tol()).unwrap(),
    };
    let merged = HilbPoint::new(space.clone(), vec![piece(None), piece(None)], &tol()).unwrap();
    assert_eq!(merged.pieces().len(), 1);
    assert_eq!(hilbert_chow(&merged).support, vec![(point.clone(), 2)]);
    let marked = HilbPoint::new(space, vec![piece(Some(vec![q(1, 0)])), piece(Some(vec![q(1, 0)]))], &tol());
    assert!(matches!(marked, Err(Error::MarkingNotCyclic)));
}

#[test]
fn pieces_must_match_the_space() {
    let space = FiberSpace::<Q>::Betti { d: 1 };
    let piece = HilbPiece {
        point: FiberPoint::Natural { a: vec![c(0.0, 0.0), c(0.0, 0.0)] },
        punctual: PunctualData::new(
            vec![q(0, 0), q(0, 0)],
            CommutingTuple::new_unchecked(1, vec![Matrix::zeros(1, 1), Matrix::zeros(1, 1)]),
            None,
            &tol(),
        )
        .unwrap(),
    };
    assert!(matches!(HilbPoint::new(space, vec![piece], &tol()), Err(Error::SpaceMismatch(_))));
}

#[test]
fn rank_one_identification() {
    let betti = FiberSpace::<Q>::Betti { d: 1 };
    let trivial = FiberPoint::Betti { z: vec![c(1.0, 0.0), c(1.0, 0.0)] };
    assert!(matches!(
        rank1_identify(&betti, &trivial, &tol()).unwrap(),
        Rank1Descriptor::LocalSystem { trivial: true, .. }
    ));
    let model = AbelianVarietyModel::standard(1);
    let natural = FiberSpace::<Q>::Natural { model: model.clone() };
    // a = M (u; 0) with u = 1 on the standard square torus.
    let a = model.join(&[c(1.0, 0.0)], &[c(0.0, 0.0)]);
    match rank1_identify(&natural, &FiberPoint::Natural { a }, &tol()).unwrap() {
        Rank1Descriptor::FlatConnection { line_bundle, form } => {
            assert!(line_bundle.approx_eq(&XHat::origin(1), 1e-9));
            assert!((form[0] - c(1.0, 0.0)).norm() < 1e-12);
        }
        other => panic!("unexpected {other:?}"),
    }
    let dual = FiberSpace::<Q>::DualTorus { model };
    assert!(matches!(
        rank1_identify(&dual, &trivial, &tol()),
        Err(Error::SpaceMismatch(_))
    ));
}

#[test]
fn diagram_commutes_on_seeded_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let model = AbelianVarietyModel::standard(1);
    for _ in 0..40 {
        let mt = gen::betti_instance::<Q>(&mut rng, 1, 3);
        assert!(diagram_check(&mt, &model, &tol()).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..40 {
        let mt = gen::betti_instance::<C64>(&mut rng, 1, 3);
        assert!(diagram_check(&mt, &model, &tol()).unwrap());
    }
}
