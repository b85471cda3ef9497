//! Models, satisfaction, validity by valuation enumeration, and the
//! maximality notions behind filtration.

use crate::formula::{Formula, SubformulaSet};
use crate::frame::{TwoFrame, WorldSet};
use std::collections::BTreeMap;
use thiserror::Error;

/// Default cap on the number of valuations a validity check may visit.
pub const DEFAULT_VALUATION_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("world index {0} is outside the carrier")]
    UnknownWorld(usize),
    #[error("validity check needs 2^{exponent} valuations, budget is {budget}")]
    BudgetExceeded { exponent: usize, budget: u64 },
}

pub type Valuation = BTreeMap<String, WorldSet>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub frame: TwoFrame,
    /// Variables absent from the map are false everywhere.
    pub valuation: Valuation,
}

impl Model {
    pub fn new(frame: TwoFrame, valuation: Valuation) -> Result<Self, SemanticsError> {
        let all = frame.all();
        for set in valuation.values() {
            if let Some(w) = (*set - all).first() {
                return Err(SemanticsError::UnknownWorld(w));
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn value(&self, var: &str) -> WorldSet {
        self.valuation.get(var).copied().unwrap_or(WorldSet::EMPTY)
    }
}

/// Pointwise structural recursion on `M, w |= phi`.
pub fn satisfies(model: &Model, w: usize, phi: &Formula) -> Result<bool, SemanticsError> {
    if w >= model.frame.size() {
        return Err(SemanticsError::UnknownWorld(w));
    }
    Ok(holds(model, w, phi))
}

fn holds(m: &Model, w: usize, phi: &Formula) -> bool {
    use Formula::*;
    let f = &m.frame;
    match phi {
        Var(p) => m.value(p).contains(w),
        True => true,
        False => false,
        Not(a) => !holds(m, w, a),
        And(a, b) => holds(m, w, a) && holds(m, w, b),
        Or(a, b) => holds(m, w, a) || holds(m, w, b),
        Implies(a, b) => !holds(m, w, a) || holds(m, w, b),
        Dia(a) => f.r().image(w).iter().any(|v| holds(m, v, a)),
        Box(a) => f.r().image(w).iter().all(|v| holds(m, v, a)),
        Exists(a) => f.e().image(w).iter().any(|v| holds(m, v, a)),
        Forall(a) => f.e().image(w).iter().all(|v| holds(m, v, a)),
    }
}

/// A formula flattened into a post-order program over variable slots;
/// evaluation works on whole world sets at once.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    ops: Vec<Op>,
    pub(crate) vars: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Var(usize),
    True,
    False,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Dia(usize),
    Box(usize),
    Exists(usize),
    Forall(usize),
}

impl Compiled {
    pub(crate) fn new(phi: &Formula) -> Self {
        let vars: Vec<String> = phi.vars().into_iter().collect();
        let mut ops = Vec::new();
        fn go(f: &Formula, vars: &[String], ops: &mut Vec<Op>) -> usize {
            use Formula as F;
            let op = match f {
                F::Var(p) => Op::Var(vars.binary_search(p).unwrap()),
                F::True => Op::True,
                F::False => Op::False,
                F::Not(a) => Op::Not(go(a, vars, ops)),
                F::Dia(a) => Op::Dia(go(a, vars, ops)),
                F::Box(a) => Op::Box(go(a, vars, ops)),
                F::Exists(a) => Op::Exists(go(a, vars, ops)),
                F::Forall(a) => Op::Forall(go(a, vars, ops)),
                F::And(a, b) => {
                    let (x, y) = (go(a, vars, ops), go(b, vars, ops));
                    Op::And(x, y)
                }
                F::Or(a, b) => {
                    let (x, y) = (go(a, vars, ops), go(b, vars, ops));
                    Op::Or(x, y)
                }
                F::Implies(a, b) => {
                    let (x, y) = (go(a, vars, ops), go(b, vars, ops));
                    Op::Implies(x, y)
                }
            };
            ops.push(op);
            ops.len() - 1
        }
        go(phi, &vars, &mut ops);
        Compiled { ops, vars }
    }

    /// Truth set of the whole formula; `values[i]` interprets `vars[i]`.
    /// `scratch` is reused across calls.
    pub(crate) fn eval(&self, frame: &TwoFrame, values: &[WorldSet], scratch: &mut Vec<WorldSet>) -> WorldSet {
        let all = frame.all();
        scratch.clear();
        for op in &self.ops {
            let s = |i: usize| scratch[i];
            let v = match *op {
                Op::Var(i) => values[i],
                Op::True => all,
                Op::False => WorldSet::EMPTY,
                Op::Not(a) => all - s(a),
                Op::And(a, b) => s(a) & s(b),
                Op::Or(a, b) => s(a) | s(b),
                Op::Implies(a, b) => (all - s(a)) | s(b),
                Op::Dia(a) => frame.r().preimage(s(a)),
                Op::Box(a) => frame.r().box_preimage(s(a)),
                Op::Exists(a) => frame.e().preimage(s(a)),
                Op::Forall(a) => frame.e().box_preimage(s(a)),
            };
            scratch.push(v);
        }
        *scratch.last().unwrap()
    }
}

/// `{w | M, w |= phi}`, computed set-wise.
pub fn truth_set(model: &Model, phi: &Formula) -> WorldSet {
    let c = Compiled::new(phi);
    let values: Vec<WorldSet> = c.vars.iter().map(|v| model.value(v)).collect();
    c.eval(&model.frame, &values, &mut Vec::new())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// The first refuting valuation in enumeration order, and the least
    /// world it refutes.
    Refuted { valuation: Valuation, world: usize },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Number of valuations over the formula's variables, as a power of two.
pub fn valuation_exponent(frame: &TwoFrame, phi: &Formula) -> usize {
    phi.vars().len() * frame.size()
}

/// Truth under every valuation of `vars(phi)`, at every world.
///
/// Valuations are enumerated by a counter whose bit `i * n + j` puts world
/// `j` into variable `i` (variables sorted by name).
pub fn frame_validates(frame: &TwoFrame, phi: &Formula, budget: u64) -> Result<Validity, SemanticsError> {
    let c = Compiled::new(phi);
    let n = frame.size();
    let exponent = c.vars.len() * n;
    if exponent >= 64 || (1u64 << exponent) > budget {
        return Err(SemanticsError::BudgetExceeded { exponent, budget });
    }
    let all = frame.all();
    let mask = all.bits();
    let mut values = vec![WorldSet::EMPTY; c.vars.len()];
    let mut scratch = Vec::with_capacity(c.ops.len());
    for code in 0..(1u64 << exponent) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = WorldSet::from_bits((code >> (i * n)) & mask);
        }
        let t = c.eval(frame, &values, &mut scratch);
        if let Some(world) = (all - t).first() {
            let valuation = c.vars.iter().cloned().zip(values.iter().copied()).collect();
            return Ok(Validity::Refuted { valuation, world });
        }
    }
    Ok(Validity::Valid)
}

/// `{x in U | x R y, y in U => x = y}`.
pub fn max_points(frame: &TwoFrame, u: WorldSet) -> WorldSet {
    u.iter()
        .filter(|&x| (frame.r().image(x) & u).iter().all(|y| y == x))
        .collect()
}

/// Maximal points that additionally see no `U`-point outside their own
/// cluster through `Q = R;E`.
pub fn smax_points(frame: &TwoFrame, u: WorldSet) -> WorldSet {
    let q = frame.q_relation();
    max_points(frame, u)
        .iter()
        .filter(|&x| (q.image(x) & u).is_subset(frame.e().image(x)))
        .collect()
}

/// Points `x in U` with `Q[x] ∩ smax U` empty; nonempty output means the
/// frame violates the smax-existence property for `U`.
pub fn smax_coverage(frame: &TwoFrame, u: WorldSet) -> WorldSet {
    let q = frame.q_relation();
    let s = smax_points(frame, u);
    u.iter().filter(|&x| (q.image(x) & s).is_empty()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WitnessSets {
    /// `E psi` in S true at `t` while `psi` is false at `t`.
    pub w_exists: Vec<Formula>,
    /// `<> psi` in S true at `t` while `psi` is false at `t`.
    pub w_dia: Vec<Formula>,
}

/// Witness obligations at `t`. With `strict`, every true `<> psi` needs a
/// witness, since `t` cannot serve as its own successor in an irreflexive
/// frame.
pub fn witness_sets(model: &Model, t: usize, subs: &SubformulaSet, strict: bool) -> WitnessSets {
    let mut out = WitnessSets::default();
    for f in subs {
        match f {
            Formula::Exists(a) if holds(model, t, f) && !holds(model, t, a) => out.w_exists.push(f.clone()),
            Formula::Dia(a) if holds(model, t, f) && (strict || !holds(model, t, a)) => out.w_dia.push(f.clone()),
            _ => {}
        }
    }
    out
}

/// `x` and `y` agree on every member of `subs`.
pub fn sim_s(model: &Model, x: usize, y: usize, subs: &SubformulaSet) -> bool {
    subs.iter().all(|f| holds(model, x, f) == holds(model, y, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{mk_bd, mk_named, parse, subformulas};
    use crate::frame::fixtures::*;
    use proptest::prelude::*;

    const BUDGET: u64 = DEFAULT_VALUATION_BUDGET;

    fn model(frame: TwoFrame, p: &[usize]) -> Model {
        let v = [("p".to_string(), p.iter().copied().collect())].into_iter().collect();
        Model::new(frame, v).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    /// Worlds x, y, z with R = id + (x,y), clusters {x}, {y,z}, p at z.
    fn comr_countermodel() -> Model {
        let names = ["x", "y", "z"].map(String::from).to_vec();
        let frame = TwoFrame::new(
            names,
            &[("x", "x"), ("y", "y"), ("z", "z"), ("x", "y")],
            &[("y", "z")],
        )
        .unwrap();
        model(frame, &[2])
    }

    #[test]
    fn satisfaction_on_d2() {
        let m = model(d2(), &[1]);
        assert!(satisfies(&m, 0, &f("<>p")).unwrap());
        assert!(satisfies(&m, 0, &f("Ep")).unwrap());
        assert_eq!(satisfies(&m, 2, &f("p")), Err(SemanticsError::UnknownWorld(2)));
    }

    #[test]
    fn truth_set_examples() {
        let m = model(d2(), &[1]);
        assert_eq!(truth_set(&m, &f("<>p")), m.frame.all());
        assert_eq!(truth_set(&m, &f("false")), WorldSet::EMPTY);
        let m = model(sm4(), &[1]);
        assert_eq!(truth_set(&m, &f("Ep")), WorldSet::from_bits(0b0011));
    }

    #[test]
    fn validity_examples() {
        assert!(frame_validates(&d2(), &mk_bd(2).unwrap(), BUDGET).unwrap().is_valid());
        assert!(!frame_validates(&d2(), &mk_bd(1).unwrap(), BUDGET).unwrap().is_valid());
        assert!(frame_validates(&sm4(), &Formula::True, BUDGET).unwrap().is_valid());
        match frame_validates(&d2(), &mk_named("casari").unwrap(), BUDGET).unwrap() {
            Validity::Refuted { valuation, world } => {
                let m = Model::new(d2(), valuation).unwrap();
                assert!(!satisfies(&m, world, &mk_named("casari").unwrap()).unwrap());
            }
            Validity::Valid => panic!("casari holds on a dirty cluster"),
        }
    }

    #[test]
    fn budget_guard() {
        let err = frame_validates(&sm4(), &mk_bd(3).unwrap(), 1 << 11).unwrap_err();
        assert_eq!(err, SemanticsError::BudgetExceeded { exponent: 12, budget: 1 << 11 });
    }

    #[test]
    fn first_refutation_is_lexicographically_least() {
        // p fails on the empty valuation first, at world 0.
        match frame_validates(&sm4(), &f("p"), BUDGET).unwrap() {
            Validity::Refuted { valuation, world } => {
                assert_eq!(valuation["p"], WorldSet::EMPTY);
                assert_eq!(world, 0);
            }
            _ => unreachable!(),
        }
        // p -> []p first fails with p true only at a.
        match frame_validates(&sm4(), &f("p -> []p"), BUDGET).unwrap() {
            Validity::Refuted { valuation, world } => {
                assert_eq!(valuation["p"], WorldSet::singleton(0));
                assert_eq!(world, 0);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn max_and_smax_on_sm4() {
        let u = WorldSet::from_bits(0b0111);
        let max = max_points(&sm4(), u);
        assert!(max.contains(0));
        assert_eq!(smax_points(&sm4(), u), WorldSet::singleton(2));
        assert_eq!(max_points(&sm4(), WorldSet::EMPTY), WorldSet::EMPTY);
        assert_eq!(smax_points(&sm4(), WorldSet::EMPTY), WorldSet::EMPTY);
        assert!(smax_coverage(&sm4(), u).is_empty());
    }

    #[test]
    fn witness_set_examples() {
        let m = model(d2(), &[1]);
        let s = subformulas(&f("<>Ep"));
        assert!(witness_sets(&m, 0, &s, false).w_dia.is_empty());
        assert_eq!(witness_sets(&m, 0, &s, false).w_exists, vec![f("Ep")]);
        assert_eq!(witness_sets(&m, 0, &s, true).w_dia, vec![f("<>Ep")]);

        let m = comr_countermodel();
        let comr = mk_named("com_r").unwrap();
        let w = witness_sets(&m, 0, &subformulas(&comr), false);
        // x sees y, whose cluster-mate z carries p, yet x's own cluster has no p.
        assert_eq!(w.w_dia, vec![f("<>Ep")]);
        assert!(w.w_exists.is_empty());
        assert!(!satisfies(&m, 0, &f("E<>p")).unwrap());
        assert!(!satisfies(&m, 0, &comr).unwrap());
    }

    #[test]
    fn sim_examples() {
        let m = model(d2(), &[1]);
        let s = subformulas(&f("<>p"));
        assert!(sim_s(&m, 0, 0, &s));
        assert!(!sim_s(&m, 0, 1, &s));
        // Agreement on S ignores p1, which is outside S.
        let mut v = m.valuation.clone();
        v.insert("p1".into(), WorldSet::singleton(0));
        let m = Model::new(d2(), v).unwrap();
        assert!(sim_s(&m, 1, 1, &subformulas(&f("p"))));
    }

    fn arb_model() -> impl Strategy<Value = Model> {
        (1..=4usize)
            .prop_flat_map(|n| (Just(n), 0..(1u64 << (n * n)), 0..(1u64 << (n * n)), 0..(1u64 << n), 0..(1u64 << n)))
            .prop_map(|(n, r, e, p, p1)| {
                let r = crate::frame::Relation::from_code(n, r);
                let e = crate::frame::Relation::from_code(n, e).close(crate::frame::ClosureKind::LeastEquivalence);
                let v = [("p".to_string(), WorldSet::from_bits(p)), ("p1".to_string(), WorldSet::from_bits(p1))];
                Model::new(TwoFrame::anonymous(r, e).unwrap(), v.into_iter().collect()).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig { rng_seed: proptest::test_runner::RngSeed::Fixed(7), ..ProptestConfig::default() })]

        #[test]
        fn box_and_forall_are_duals(m in arb_model(), phi in crate::formula::tests::arb_formula()) {
            for w in 0..m.frame.size() {
                let lhs = satisfies(&m, w, &Formula::boxed(phi.clone())).unwrap();
                let rhs = satisfies(&m, w, &Formula::not(Formula::dia(Formula::not(phi.clone())))).unwrap();
                prop_assert_eq!(lhs, rhs);
                let lhs = satisfies(&m, w, &Formula::forall(phi.clone())).unwrap();
                let rhs = satisfies(&m, w, &Formula::not(Formula::exists(Formula::not(phi.clone())))).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn truth_set_matches_pointwise(m in arb_model(), phi in crate::formula::tests::arb_formula()) {
            let t = truth_set(&m, &phi);
            for w in 0..m.frame.size() {
                prop_assert_eq!(t.contains(w), satisfies(&m, w, &phi).unwrap());
            }
        }

        #[test]
        fn smax_within_max_within_u(m in arb_model(), u in 0..16u64) {
            let u = WorldSet::from_bits(u) & m.frame.all();
            let max = max_points(&m.frame, u);
            let smax = smax_points(&m.frame, u);
            prop_assert!(smax.is_subset(max) && max.is_subset(u));
            // On E-saturated sets strong maximality is plain maximality.
            let sat = m.frame.saturate(u);
            prop_assert_eq!(smax_points(&m.frame, sat), max_points(&m.frame, sat));
        }
    }
}
