use super::*;
use crate::formula::{mk_named, parse};
use crate::frame::fixtures::*;
use crate::frame::Side;
use crate::semantics::{frame_validates, Validity, DEFAULT_VALUATION_BUDGET};

fn refuting_model(frame: TwoFrame, phi: &Formula) -> Model {
    match frame_validates(&frame, phi, DEFAULT_VALUATION_BUDGET).unwrap() {
        Validity::Refuted { valuation, .. } => Model::new(frame, valuation).unwrap(),
        Validity::Valid => panic!("{phi} is valid here"),
    }
}

fn comr_countermodel() -> Model {
    let names = ["x", "y", "z"].map(String::from).to_vec();
    let frame = TwoFrame::new(names, &[("x", "x"), ("y", "y"), ("z", "z"), ("x", "y")], &[("y", "z")]).unwrap();
    let v = [("p".to_string(), WorldSet::singleton(2))].into_iter().collect();
    Model::new(frame, v).unwrap()
}

#[test]
fn d2_casari_mgrzb() {
    let casari = mk_named("casari").unwrap();
    let m = refuting_model(d2(), &casari);
    let report = run_filtration(&m, &casari, FiltrationVariant::MGrzB, Limits::default()).unwrap();
    assert!(report.checks.all(), "{:?}", report.checks);
    // The dirty cluster survives: a horizontal arrow inside one cluster.
    let f = report.frame();
    assert!(f.r().pairs().any(|(a, b)| a != b && f.e().contains(a, b)));
    assert!(report.log.iter().any(|e| e.step == StepTag::DiaHorizontal));
    assert!(f.r().is_partial_order());
}

#[test]
fn comr_countermodel_mgrz() {
    let m = comr_countermodel();
    let comr = mk_named("com_r").unwrap();
    let report = run_filtration(&m, &comr, FiltrationVariant::MGrz, Limits::default()).unwrap();
    assert!(report.checks.all(), "{:?}", report.checks);
    assert_eq!(satisfies(&report.model, 0, &comr), Ok(false));
    assert!(report.frame().satisfies_commutativity(Side::Left));
}

#[test]
fn not_refuted() {
    let m = comr_countermodel();
    let err = run_filtration(&m, &Formula::True, FiltrationVariant::MGrz, Limits::default()).unwrap_err();
    assert_eq!(err, FiltrationError::NotRefuted);
}

#[test]
fn false_starts_from_a_maximal_point() {
    let m = comr_countermodel();
    let s = SelectionState::select_initial(&m, &Formula::False, FiltrationVariant::MGrz, 100).unwrap();
    // y and z are maximal and strongly so; y is the least.
    assert_eq!(s.order(), &[1]);
    assert_eq!(s.info(1).unwrap().provenance, m.frame.all());
}

#[test]
fn initial_point_is_strongly_maximal() {
    let casari = mk_named("casari").unwrap();
    let m = refuting_model(d2(), &casari);
    let s = SelectionState::select_initial(&m, &casari, FiltrationVariant::MGrzB, 100).unwrap();
    let x = s.order()[0];
    let refuting = m.frame.all() - crate::semantics::truth_set(&m, &casari);
    assert!(crate::semantics::smax_points(&m.frame, refuting).contains(x));
}

#[test]
fn exists_step_is_idempotent() {
    let m = comr_countermodel();
    let comr = mk_named("com_r").unwrap();
    let mut s = SelectionState::select_initial(&m, &comr, FiltrationVariant::MGrz, 100).unwrap();
    s.exists_step().unwrap();
    s.dia_step().unwrap();
    s.exists_step().unwrap();
    let before = (s.order().to_vec(), s.r_hat().clone(), s.e_hat().clone());
    assert!(!s.exists_step().unwrap());
    assert_eq!(before, (s.order().to_vec(), s.r_hat().clone(), s.e_hat().clone()));
}

#[test]
fn exists_witness_joins_cluster() {
    // x sees y whose cluster-mate z carries p: the diamond step selects y,
    // then the exists step pulls in z.
    let m = comr_countermodel();
    let comr = mk_named("com_r").unwrap();
    let mut s = SelectionState::select_initial(&m, &comr, FiltrationVariant::MGrz, 100).unwrap();
    assert_eq!(s.order(), &[0]);
    s.dia_step().unwrap();
    assert!(s.selected().contains(1));
    s.exists_step().unwrap();
    assert!(s.selected().contains(2));
    assert!(s.e_hat().contains(1, 2));
    assert_eq!(s.info(2).unwrap().tag, StepTag::ExistsWitness);
}

#[test]
fn d2_without_horizontal_step() {
    let casari = mk_named("casari").unwrap();
    let m = refuting_model(d2(), &casari);
    let limits = Limits {
        check_source: false,
        ..Limits::default()
    };
    // D2 is not a source for this variant; with the class check on it is
    // rejected outright.
    assert_eq!(
        run_filtration(&m, &casari, FiltrationVariant::MPlusGrzB, Limits::default()).unwrap_err(),
        FiltrationError::SourceClass("MPlusGrzB".parse().unwrap())
    );
    // The only diamond witness lives in the dirty cluster, so the vertical
    // step finds nothing.
    match run_filtration(&m, &casari, FiltrationVariant::MPlusGrzB, limits) {
        Err(FiltrationError::WitnessNotFound { .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn tampering_breaks_provenance() {
    let casari = mk_named("casari").unwrap();
    let m = refuting_model(d2(), &casari);
    let mut report = run_filtration(&m, &casari, FiltrationVariant::MGrzB, Limits::default()).unwrap();
    let f = report.frame().clone();
    let (a, b) = f.e().pairs().find(|(a, b)| a != b).unwrap();
    let mut e = f.e().clone();
    e.remove(a, b);
    e.remove(b, a);
    report.model.frame = TwoFrame::from_relations(f.worlds().to_vec(), f.r().clone(), e).unwrap();
    assert!(!verify_report(&m, &report).provenance);
}

#[test]
fn mglb_run_on_irreflexive_sm4() {
    // In an irreflexive frame <>p -> p fails wherever p holds only above.
    let f = sm4().irreflexivize().unwrap();
    let phi = parse("<>p -> p").unwrap();
    let m = refuting_model(f, &phi);
    let report = run_filtration(&m, &phi, FiltrationVariant::MGLB, Limits::default()).unwrap();
    assert!(report.checks.all(), "{:?}", report.checks);
    assert!(report.frame().r().is_strict_order());
}

#[test]
fn budget_guard() {
    let m = comr_countermodel();
    let comr = mk_named("com_r").unwrap();
    let limits = Limits {
        budget: Some(1),
        ..Limits::default()
    };
    assert_eq!(
        run_filtration(&m, &comr, FiltrationVariant::MGrz, limits).unwrap_err(),
        FiltrationError::BudgetExceeded(1)
    );
}

#[test]
fn variant_names() {
    for v in FiltrationVariant::ALL {
        assert_eq!(v.to_string().parse::<FiltrationVariant>().unwrap(), v);
    }
    assert!("MS4".parse::<FiltrationVariant>().is_err());
    assert_eq!(FiltrationVariant::MGrzB.depth_bound_exponent(6), 13);
    assert_eq!(FiltrationVariant::MGLB.depth_bound_exponent(6), 7);
}
