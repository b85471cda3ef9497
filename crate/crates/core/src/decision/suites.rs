//! Exhaustive checks of the characterization results over small frames.

use super::enumerate::{equivalences, visit_frames};
use super::{DecisionError, SearchConfig};
use crate::formula::{boxplus_translate, mk_bd, mk_named, parse, Formula};
use crate::frame::{frame_class_check, product, Base, KripkeFrame, LogicId, Relation, TwoFrame};
use crate::semantics::frame_validates;
use serde::Serialize;

pub const SUITES: [&str; 6] = [
    "casari",
    "bd_depth",
    "refl_valid",
    "frames",
    "claim_product_refl",
    "product_commutativity",
];

/// Depth bounds exercised by the depth-related suites.
pub const SUITE_DEPTHS: [usize; 3] = [1, 2, 3];

/// Extra fixed formulas for the translation suite, beside the named ones.
const REFL_EXTRA: [&str; 8] = [
    "<>p -> p | <>p",
    "[]p -> p",
    "<>[]p -> []<>p",
    "[]([]p -> p) -> []p",
    "p -> []<>p",
    "A[]p -> []Ap",
    "E<>p & []A~p",
    "<>(p & E~p) -> E<>p1",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cap: usize,
    pub frames_checked: usize,
    /// One line per violating instance.
    pub counterexamples: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, cap: usize) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            cap,
            frames_checked: 0,
            counterexamples: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "suite {} (cap {}): {} frames checked, {} counterexamples",
            self.suite,
            self.cap,
            self.frames_checked,
            self.counterexamples.len()
        )
    }
}

fn valid(frame: &TwoFrame, phi: &Formula, config: &SearchConfig) -> Result<bool, DecisionError> {
    frame_validates(frame, phi, config.valuation_budget)
        .map(|v| v.is_valid())
        .map_err(DecisionError::from_semantics)
}

pub fn verify_theorem_suite(name: &str, cap: usize, config: &SearchConfig) -> Result<SuiteReport, DecisionError> {
    if cap == 0 {
        return Err(DecisionError::EmptyCarrier);
    }
    match name {
        "casari" => casari_suite(cap, config),
        "bd_depth" => bd_depth_suite(cap, config),
        "refl_valid" => refl_valid_suite(&refl_valid_corpus(), cap, config),
        "frames" => frames_suite(cap, config),
        "claim_product_refl" => product_refl_suite(cap),
        "product_commutativity" => product_commutativity_suite(cap, config),
        _ => Err(DecisionError::UnknownSuite(name.to_string())),
    }
}

/// Casari validity against clean clusters, over every labelled MGrz-frame.
fn casari_suite(cap: usize, config: &SearchConfig) -> Result<SuiteReport, DecisionError> {
    let casari = mk_named("casari").expect("registered");
    let logic = LogicId::new(Base::MGrz, false);
    let mut report = SuiteReport::new("casari", cap);
    for n in 1..=cap {
        visit_frames(n, Base::MGrz, false, config, |f| {
            if !frame_class_check(&f, &logic) {
                return Ok(());
            }
            report.frames_checked += 1;
            let v = valid(&f, &casari, config)?;
            if v != f.clean_clusters() {
                report
                    .counterexamples
                    .push(format!("casari valid={v}, clean={} on {f:?}", f.clean_clusters()));
            }
            Ok(())
        })?;
    }
    Ok(report)
}

/// `bd_n` validity against depth, over transitive frames with left
/// commutativity.
fn bd_depth_suite(cap: usize, config: &SearchConfig) -> Result<SuiteReport, DecisionError> {
    let bds: Vec<(usize, Formula)> = SUITE_DEPTHS.iter().map(|&n| (n, mk_bd(n).unwrap())).collect();
    let logic = LogicId::new(Base::MK, false);
    let mut report = SuiteReport::new("bd_depth", cap);
    report.notes.push(format!("depth bounds {SUITE_DEPTHS:?}"));
    for n in 1..=cap {
        visit_frames(n, Base::MK, true, config, |f| {
            if !frame_class_check(&f, &logic) {
                return Ok(());
            }
            report.frames_checked += 1;
            let depth = f.depth()?;
            for (k, bd) in &bds {
                let v = valid(&f, bd, config)?;
                if v != (depth <= *k) {
                    report
                        .counterexamples
                        .push(format!("bd_{k} valid={v}, depth={depth} on {f:?}"));
                }
            }
            Ok(())
        })?;
    }
    Ok(report)
}

/// Named formulas plus a fixed handful of mixed-modality formulas.
pub fn refl_valid_corpus() -> Vec<Formula> {
    let mut out: Vec<Formula> = ["com_l", "com_r", "casari", "bd_1", "bd_2"]
        .iter()
        .map(|n| mk_named(n).unwrap())
        .collect();
    out.extend(REFL_EXTRA.iter().map(|s| parse(s).unwrap()));
    out
}

/// `F |= phi+` against `F^r |= phi` for every frame up to `cap` worlds.
pub fn refl_valid_suite(corpus: &[Formula], cap: usize, config: &SearchConfig) -> Result<SuiteReport, DecisionError> {
    let translated: Vec<Formula> = corpus.iter().map(boxplus_translate).collect();
    let mut report = SuiteReport::new("refl_valid", cap);
    report.notes.push(format!("{} formulas", corpus.len()));
    for n in 1..=cap {
        visit_frames(n, Base::MK, false, config, |f| {
            report.frames_checked += 1;
            let refl = f.reflexivize();
            for (phi, plus) in corpus.iter().zip(&translated) {
                let a = valid(&f, plus, config)?;
                let b = valid(&refl, phi, config)?;
                if a != b {
                    report
                        .counterexamples
                        .push(format!("{phi}: translation valid={a}, reflexive valid={b} on {f:?}"));
                }
            }
            Ok(())
        })?;
    }
    Ok(report)
}

/// Reflexivization maps MGLB[n] into M+GrzB[n], irreflexivization maps
/// back, and removing then restoring loops is the identity on partial
/// orders. Only strict and partial orders can belong to either class.
fn frames_suite(cap: usize, config: &SearchConfig) -> Result<SuiteReport, DecisionError> {
    let gl = LogicId::new(Base::MGL, true);
    let plus = LogicId::new(Base::MPlusGrz, true);
    let mut report = SuiteReport::new("frames", cap);
    report.notes.push(format!("depth bounds {SUITE_DEPTHS:?}; R ranges over strict and partial orders"));
    for n in 1..=cap {
        // Partial orders via the MGrz generator, strict orders via MGL.
        for base in [Base::MGL, Base::MGrz] {
            visit_frames(n, base, false, config, |f| {
                report.frames_checked += 1;
                for k in SUITE_DEPTHS {
                    let (gl_k, plus_k) = (gl.with_depth(k), plus.with_depth(k));
                    if frame_class_check(&f, &gl_k) && !frame_class_check(&f.reflexivize(), &plus_k) {
                        report.counterexamples.push(format!("{gl_k} frame, reflexivization not {plus_k}: {f:?}"));
                    }
                    if frame_class_check(&f, &plus_k) {
                        let ok = f.irreflexivize().map(|g| frame_class_check(&g, &gl_k)).unwrap_or(false);
                        if !ok {
                            report.counterexamples.push(format!("{plus_k} frame, irreflexivization not {gl_k}: {f:?}"));
                        }
                    }
                }
                if f.r().is_partial_order() {
                    let stripped = f.with_r(f.r().difference(&Relation::identity(n)));
                    if stripped.reflexivize() != f {
                        report.counterexamples.push(format!("loops not restored: {f:?}"));
                    }
                }
                Ok(())
            })?;
        }
    }
    Ok(report)
}

/// Every Kripke frame and every S5 frame with at most `cap` worlds each.
fn factor_pairs(cap: usize) -> Vec<(KripkeFrame, KripkeFrame)> {
    let mut out = Vec::new();
    for n in 1..=cap {
        for code in 0..(1u64 << (n * n)) {
            let f = KripkeFrame::anonymous(Relation::from_code(n, code));
            for m in 1..=cap {
                for e in equivalences(m) {
                    out.push((f.clone(), KripkeFrame::anonymous(e)));
                }
            }
        }
    }
    out
}

/// `(F x G)^r = F^r x G` as labelled frames.
fn product_refl_suite(cap: usize) -> Result<SuiteReport, DecisionError> {
    let mut report = SuiteReport::new("claim_product_refl", cap);
    report.notes.push(format!("both factors up to {cap} worlds"));
    for (f, g) in factor_pairs(cap) {
        report.frames_checked += 1;
        let lhs = product(&f, &g)?.reflexivize();
        let fr = KripkeFrame {
            worlds: f.worlds.clone(),
            r: f.r.union(&Relation::identity(f.size())),
        };
        let rhs = product(&fr, &g)?;
        if lhs != rhs {
            report.counterexamples.push(format!("F.r = {:?}, G.r = {:?}", f.r, g.r));
        }
    }
    Ok(report)
}

/// Products validate both commutativity formulas.
fn product_commutativity_suite(cap: usize, config: &SearchConfig) -> Result<SuiteReport, DecisionError> {
    let coms = [mk_named("com_l").unwrap(), mk_named("com_r").unwrap()];
    let mut report = SuiteReport::new("product_commutativity", cap);
    report.notes.push(format!("both factors up to {cap} worlds"));
    for (f, g) in factor_pairs(cap) {
        report.frames_checked += 1;
        let p = product(&f, &g)?;
        for com in &coms {
            if !valid(&p, com, config)? {
                report.counterexamples.push(format!("{com} fails on {p:?}"));
            }
        }
    }
    Ok(report)
}
