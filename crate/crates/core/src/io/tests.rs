use super::*;
use crate::adhm::{from_points, ideal_normal_form};
use crate::moduli::{betti_marked, hilbert_chow, hodge_deform, rh_to_derham};

type Q = GaussRat;

fn tol() -> ToleranceFrame {
    ToleranceFrame::default()
}

fn q(re: i64, im: i64) -> Q {
    Q::gaussian(re, im)
}

fn jordan() -> MarkedTuple<Q> {
    let t = check_commuting(
        vec![
            Matrix::from_i64_rows(&[&[2, 1], &[0, 2]]),
            Matrix::from_i64_rows(&[&[3, 0], &[0, 3]]),
        ],
        &tol(),
    )
    .unwrap();
    MarkedTuple::new(t, vec![q(0, 0), q(1, 0)], &tol()).unwrap()
}

fn reparse(v: &Value) -> Value {
    serde_json::from_str(&serde_json::to_string(v).unwrap()).unwrap()
}

#[test]
fn tuple_documents_round_trip() {
    let mt = jordan();
    let doc = reparse(&with_schema(marked_to_json(&mt)));
    assert_eq!(doc["schema"], SCHEMA);
    assert_eq!(doc["B"][0][0][1], json!({"re": "1", "im": "0"}));
    assert_eq!(marked_from_json::<Q>(&doc, &tol()).unwrap(), mt);

    let float = MarkedTuple::new(
        check_commuting(vec![Matrix::<C64>::from_i64_rows(&[&[1, 0], &[0, 2]])], &tol()).unwrap(),
        vec![C64::new(0.5, -0.25), C64::new(1.0, 0.0)],
        &tol(),
    )
    .unwrap();
    let doc = reparse(&marked_to_json(&float));
    assert_eq!(doc["mode"], "float");
    assert_eq!(marked_from_json::<C64>(&doc, &tol()).unwrap(), float);
}

#[test]
fn malformed_and_domain_errors_are_distinguished() {
    let bad_shape = json!({"n": 2, "B": [[[{"re": "1", "im": "0"}]]]});
    assert!(matches!(tuple_from_json::<Q>(&bad_shape, &tol()), Err(InputError::Malformed(_))));
    let mixed = json!({"n": 1, "B": [[[{"re": 1.0, "im": 0.0}]]]});
    assert!(matches!(tuple_from_json::<Q>(&mixed, &tol()), Err(InputError::Malformed(_))));
    let unknown = json!({"n": 1, "B": [], "extra": 1});
    assert!(matches!(tuple_from_json::<Q>(&unknown, &tol()), Err(InputError::Malformed(_))));
    let schema = json!({"schema": "other/9", "n": 1, "B": []});
    assert!(matches!(tuple_from_json::<Q>(&schema, &tol()), Err(InputError::Malformed(_))));
    let wrong_mode = json!({"mode": "float", "n": 1, "B": []});
    assert!(matches!(tuple_from_json::<Q>(&wrong_mode, &tol()), Err(InputError::Malformed(_))));

    let e = |x: i64| json!({"re": x.to_string(), "im": "0"});
    let noncommuting = json!({"n": 2, "B": [[[e(0), e(1)], [e(0), e(0)]], [[e(0), e(0)], [e(1), e(0)]]]});
    assert!(matches!(
        tuple_from_json::<Q>(&noncommuting, &tol()),
        Err(InputError::Domain(Error::NotCommuting(0, 1, _)))
    ));
}

#[test]
fn ideal_normal_forms_round_trip() {
    let mt = from_points(&[vec![q(1, 0)], vec![q(0, 1)], vec![q(-2, 0)]], &tol()).unwrap();
    let inf = ideal_normal_form(&mt, &tol()).unwrap();
    let doc = reparse(&ideal_to_json(&inf));
    assert_eq!(doc["staircase"], json!([[0], [1], [2]]));
    assert_eq!(ideal_from_json::<Q>(&doc).unwrap(), inf);
}

#[test]
fn triples_round_trip_and_classify() {
    let t = UtaiTriple::<Q>::de_rham(2);
    let doc = reparse(&triple_to_json(&t));
    assert_eq!(triple_from_json::<Q>(&doc, &tol()).unwrap(), t);
    let out = classification_to_json(&t, &tol());
    assert_eq!(out["label"]["kind"], "DeRham");
    assert_eq!(out["abelian"], false);
    assert_eq!(out["invariants"]["rank_alpha"], 2);
    assert_eq!(out["fm_dual"]["beta"], doc["alpha"]);

    let tau = UtaiTriple::<Q>::new(1, 1, Matrix::scalar(1, Q::from_ratio(1, 2)), Matrix::zeros(1, 1), Matrix::zeros(1, 1), &tol())
        .unwrap();
    let out = classification_to_json(&tau, &tol());
    assert_eq!(out["label"], json!({"kind": "TauConnection", "tau": {"re": "1/2", "im": "0"}}));

    let gamma = json!({"d": 1, "v": 2, "alpha": [[{"re":"0"}, {"re":"0"}]], "beta": [[{"re":"0"}, {"re":"0"}]],
        "gamma": [[{"re":"0"}, {"re":"1"}], [{"re":"1"}, {"re":"0"}]]});
    assert!(matches!(triple_from_json::<Q>(&gamma, &tol()), Err(InputError::Domain(Error::NotAntisymmetric))));
}

#[test]
fn hilbert_scheme_points_round_trip() {
    let h = betti_marked(&jordan(), &tol()).unwrap();
    let doc = reparse(&hilb_to_json(&h));
    assert_eq!(doc["space"], json!({"kind": "betti", "d": 1}));
    assert_eq!(hilb_from_json::<Q>(&doc, &tol()).unwrap(), h);

    let model = AbelianVarietyModel::standard(1);
    let natural = rh_to_derham(&h, &model, &tol()).unwrap();
    let doc = reparse(&hilb_to_json(&natural));
    assert_eq!(hilb_from_json::<Q>(&doc, &tol()).unwrap(), natural);

    let hodge = hodge_deform(&natural, &q(0, 1), &tol()).unwrap();
    let doc = reparse(&hilb_to_json(&hodge));
    assert_eq!(hilb_from_json::<Q>(&doc, &tol()).unwrap(), hodge);

    let sym = hilbert_chow(&h);
    let doc = reparse(&sym_to_json(&sym));
    assert_eq!(sym_from_json::<Q>(&doc).unwrap(), sym);
}

#[test]
fn hilbert_scheme_points_accept_a_default_base_and_model() {
    let doc = json!({
        "space": {"kind": "natural", "d": 1},
        "pieces": [{
            "point": {"space": "natural", "a": [[0.0, 0.0], [0.0, 0.0]]},
            "punctual": {"N": [[[{"re": 0.0, "im": 0.0}]], [[{"re": 0.0, "im": 0.0}]]], "v": [{"re": 1.0, "im": 0.0}]}
        }]
    });
    let h = hilb_from_json::<C64>(&doc, &tol()).unwrap();
    assert_eq!(h.space(), &FiberSpace::Natural { model: AbelianVarietyModel::standard(1) });
    assert_eq!(h.pieces()[0].punctual.point(), &[C64::new(0.0, 0.0); 2]);

    let mut nilpotent = doc.clone();
    nilpotent["pieces"][0]["punctual"]["N"][0] = json!([[{"re": 1.0, "im": 0.0}]]);
    assert!(matches!(hilb_from_json::<C64>(&nilpotent, &tol()), Err(InputError::Domain(Error::InvalidInput(_)))));
}

#[test]
fn command_line_scalars() {
    assert_eq!(parse_scalar_arg::<Q>("0.5").unwrap(), Q::from_ratio(1, 2));
    assert_eq!(parse_scalar_arg::<Q>("-3/4,2").unwrap(), Q::new(crate::linalg::bigrat(-3, 4), crate::linalg::bigrat(2, 1)));
    assert_eq!(parse_scalar_arg::<Q>("0").unwrap(), <Q as Field>::zero());
    assert_eq!(parse_scalar_arg::<C64>("0,1").unwrap(), C64::new(0.0, 1.0));
    assert_eq!(parse_scalar_arg::<C64>("1/4").unwrap(), C64::new(0.25, 0.0));
    for bad in ["", "x", "1/0", "1.2.3", "-"] {
        assert!(parse_scalar_arg::<Q>(bad).is_err(), "{bad}");
    }
}
