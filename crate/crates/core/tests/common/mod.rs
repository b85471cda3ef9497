#![allow(dead_code)]

use mmlogic::filtration::FiltrationVariant;
use mmlogic::formula::{mk_named, parse, Formula};
use mmlogic::frame::{product, KripkeFrame, Relation, TwoFrame, WorldSet};
use mmlogic::semantics::{frame_validates, Model, Validity, DEFAULT_VALUATION_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x6d6d_6c6f_6769_6321;
pub const RANDOM_FORMULAS: usize = 200;

fn names(ws: &[&str]) -> Vec<String> {
    ws.iter().map(|s| s.to_string()).collect()
}

pub fn d2() -> TwoFrame {
    TwoFrame::new(names(&["x", "y"]), &[("x", "x"), ("x", "y"), ("y", "y")], &[("x", "y")]).unwrap()
}

/// Clusters `{a,b}`, `{c,d}` with `a R d` and `b R c`.
pub fn sm4() -> TwoFrame {
    TwoFrame::new(
        names(&["a", "b", "c", "d"]),
        &[("a", "a"), ("b", "b"), ("c", "c"), ("d", "d"), ("a", "d"), ("b", "c")],
        &[("a", "b"), ("c", "d")],
    )
    .unwrap()
}

/// The three-world model refuting right commutativity.
pub fn comr_countermodel() -> Model {
    let frame = TwoFrame::new(
        names(&["x", "y", "z"]),
        &[("x", "x"), ("y", "y"), ("z", "z"), ("x", "y")],
        &[("y", "z")],
    )
    .unwrap();
    let v = [("p".to_string(), WorldSet::singleton(2))].into_iter().collect();
    Model::new(frame, v).unwrap()
}

/// A reflexive chain of `n` points; one cluster if `one_cluster`, else
/// singleton clusters.
pub fn chain(n: usize, one_cluster: bool) -> TwoFrame {
    let mut r = Relation::empty(n);
    for a in 0..n {
        for b in a..n {
            r.insert(a, b);
        }
    }
    let e = if one_cluster { Relation::total(n) } else { Relation::identity(n) };
    TwoFrame::anonymous(r, e).unwrap()
}

/// The 2-chain times a 2-cluster.
pub fn chain_times_cluster() -> TwoFrame {
    let f = KripkeFrame::anonymous(chain(2, false).r().clone());
    let g = KripkeFrame::anonymous(Relation::total(2));
    product(&f, &g).unwrap()
}

/// Model on `frame` with the first refuting valuation of `phi`.
pub fn refuting_model(frame: TwoFrame, phi: &Formula) -> Model {
    match frame_validates(&frame, phi, DEFAULT_VALUATION_BUDGET).unwrap() {
        Validity::Refuted { valuation, .. } => Model::new(frame, valuation).unwrap(),
        Validity::Valid => panic!("{phi} is valid on {frame:?}"),
    }
}

/// Source model, refuted formula and variant for each filtration run.
pub fn filtration_corpus() -> Vec<(String, Model, Formula, FiltrationVariant)> {
    use FiltrationVariant::*;
    let named = |n: &str| mk_named(n).unwrap();
    let f = |s: &str| parse(s).unwrap();
    let strict_chain3 = chain(3, false).irreflexivize().unwrap();
    let mut out = vec![
        ("D2 casari".to_string(), refuting_model(d2(), &named("casari")), named("casari"), MGrzB),
        ("com_r countermodel".to_string(), comr_countermodel(), named("com_r"), MGrz),
    ];
    let rest: Vec<(&str, TwoFrame, Formula, FiltrationVariant)> = vec![
        ("D2 bd_1", d2(), named("bd_1"), MGrzB),
        ("D2 E<>p -> p", d2(), f("E<>p -> p"), MGrz),
        ("sm4 <>p -> p", sm4(), f("<>p -> p"), MGrzB),
        ("chain3 bd_2", chain(3, false), named("bd_2"), MPlusGrzB),
        ("chain3 cluster bd_2", chain(3, true), named("bd_2"), MGrzB),
        ("product E<>p -> []p", chain_times_cluster(), f("E<>p -> []p"), MPlusGrzB),
        ("product <>Ep -> E[]p", chain_times_cluster(), f("<>Ep -> E[]p"), MGrzB),
        ("irreflexive sm4 <>p -> p", sm4().irreflexivize().unwrap(), f("<>p -> p"), MGLB),
        ("strict chain3 []p -> p", strict_chain3.clone(), f("[]p -> p"), MGLB),
        ("strict chain3 bd_2", strict_chain3, named("bd_2"), MGLB),
    ];
    for (name, frame, phi, v) in rest {
        out.push((name.to_string(), refuting_model(frame, &phi), phi, v));
    }
    out.push((
        "com_r countermodel Ep -> <>p".to_string(),
        comr_countermodel(),
        f("Ep -> <>p"),
        MGrz,
    ));
    out
}

fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    let leaf = |rng: &mut ChaCha8Rng| match rng.gen_range(0..10) {
        0 => Formula::True,
        1 => Formula::False,
        2..=5 => Formula::var("p"),
        _ => Formula::var("p1"),
    };
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng);
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, depth - 1);
    match rng.gen_range(0..8) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::dia(sub(rng)),
        5 => Formula::boxed(sub(rng)),
        6 => Formula::exists(sub(rng)),
        _ => Formula::forall(sub(rng)),
    }
}

/// Random formulas of AST depth at most 4 over `p` and `p1`, from a fixed seed.
pub fn random_formulas(count: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| random_formula(&mut rng, 4)).collect()
}

/// The named formulas followed by the random ones.
pub fn translation_corpus() -> Vec<Formula> {
    let mut out: Vec<Formula> = ["com_l", "com_r", "casari", "bd_1", "bd_2"]
        .iter()
        .map(|n| mk_named(n).unwrap())
        .collect();
    out.extend(random_formulas(RANDOM_FORMULAS));
    out
}
