//! Frame enumeration and bounded countermodel search.

mod enumerate;
mod suites;

pub use enumerate::{canonical_code, enumerate_frames, equivalences, frame_code};
pub use suites::{refl_valid_corpus, refl_valid_suite, verify_theorem_suite, SuiteReport, SUITES, SUITE_DEPTHS};

use crate::formula::{boxplus_translate, Formula};
use crate::frame::{frame_class_check, Base, FrameError, LogicId, TwoFrame};
use crate::semantics::{frame_validates, Model, SemanticsError, Validity, DEFAULT_VALUATION_BUDGET};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecisionError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("frames need at least one world")]
    EmptyCarrier,
    #[error("unknown theorem suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

impl DecisionError {
    fn from_semantics(e: SemanticsError) -> Self {
        match e {
            SemanticsError::BudgetExceeded { .. } => DecisionError::BudgetExceeded(e.to_string()),
            other => DecisionError::Semantics(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest carrier any enumeration may visit.
    pub size_cap: usize,
    /// Largest number of raw candidate accessibility relations per size.
    pub enumeration_budget: u64,
    /// Largest number of valuations per validity check.
    pub valuation_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            size_cap: 5,
            enumeration_budget: 1 << 22,
            valuation_budget: DEFAULT_VALUATION_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Refuted,
    ValidUpToBound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Refuted => "refuted",
            Status::ValidUpToBound => "valid_up_to_bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub model: Model,
    pub world: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: Status,
    pub witness: Option<Counterexample>,
    /// Largest carrier size searched.
    pub bound: usize,
    pub frames_examined: usize,
}

/// First refuting valuation on `frame`, if any.
pub fn refute_on(frame: &TwoFrame, phi: &Formula, config: &SearchConfig) -> Result<Option<Counterexample>, DecisionError> {
    match frame_validates(frame, phi, config.valuation_budget).map_err(DecisionError::from_semantics)? {
        Validity::Valid => Ok(None),
        Validity::Refuted { valuation, world } => Ok(Some(Counterexample {
            model: Model::new(frame.clone(), valuation)?,
            world,
        })),
    }
}

/// Scans isomorphism representatives of `logic` by ascending size and
/// returns the first refutation found.
pub fn countermodel(
    phi: &Formula,
    logic: &LogicId,
    max_size: usize,
    config: &SearchConfig,
) -> Result<SearchOutcome, DecisionError> {
    let mut examined = 0;
    for size in 1..=max_size {
        for frame in enumerate_frames(size, logic, true, config)? {
            examined += 1;
            if let Some(witness) = refute_on(&frame, phi, config)? {
                return Ok(SearchOutcome {
                    status: Status::Refuted,
                    witness: Some(witness),
                    bound: size,
                    frames_examined: examined,
                });
            }
        }
    }
    Ok(SearchOutcome {
        status: Status::ValidUpToBound,
        witness: None,
        bound: max_size,
        frames_examined: examined,
    })
}

/// Per-size statuses of `phi` over M+GrzB-frames and of its translation
/// over MGLB-frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub agree: bool,
    /// `(size, phi refuted at this size, translation refuted at this size)`.
    pub per_size: Vec<(usize, bool, bool)>,
    /// A refuting frame on one side with its counterpart that fails to
    /// refute on the other, labelled `(plus_grz_b, mglb)`.
    pub disagreement: Option<(TwoFrame, TwoFrame)>,
}

fn first_refuting(
    phi: &Formula,
    logic: &LogicId,
    size: usize,
    config: &SearchConfig,
) -> Result<Option<TwoFrame>, DecisionError> {
    for frame in enumerate_frames(size, logic, true, config)? {
        if refute_on(&frame, phi, config)?.is_some() {
            return Ok(Some(frame));
        }
    }
    Ok(None)
}

/// Two independent searches, compared size by size.
pub fn crosscheck_translation(phi: &Formula, max_size: usize, config: &SearchConfig) -> Result<CrossCheck, DecisionError> {
    let plus = LogicId::new(Base::MPlusGrz, true);
    let gl = LogicId::new(Base::MGL, true);
    let translated = boxplus_translate(phi);
    let mut per_size = Vec::new();
    let mut disagreement = None;
    for size in 1..=max_size {
        let a = first_refuting(phi, &plus, size, config)?;
        let b = first_refuting(&translated, &gl, size, config)?;
        per_size.push((size, a.is_some(), b.is_some()));
        if disagreement.is_none() {
            disagreement = match (a, b) {
                (Some(f), None) => Some((f.clone(), f.irreflexivize()?)),
                (None, Some(g)) => Some((g.reflexivize(), g)),
                _ => None,
            };
        }
    }
    Ok(CrossCheck {
        agree: disagreement.is_none(),
        per_size,
        disagreement,
    })
}

/// Adds an isolated point (its own cluster, reflexive exactly when the
/// class is) to `frame`.
pub fn pad_frame(frame: &TwoFrame, logic: &LogicId) -> TwoFrame {
    let n = frame.size();
    let mut r = crate::frame::Relation::empty(n + 1);
    let mut e = crate::frame::Relation::empty(n + 1);
    for (a, b) in frame.r().pairs() {
        r.insert(a, b);
    }
    for (a, b) in frame.e().pairs() {
        e.insert(a, b);
    }
    e.insert(n, n);
    if logic.base != Base::MGL {
        r.insert(n, n);
    }
    let mut worlds = frame.worlds().to_vec();
    let mut fresh = format!("w{n}");
    while worlds.contains(&fresh) {
        fresh.push('\'');
    }
    worlds.push(fresh);
    TwoFrame::from_relations(worlds, r, e).expect("padding keeps E an equivalence")
}

/// Whether padding keeps `frame` in `logic` (the precondition of the
/// monotone-refutability argument).
pub fn padding_preserves_class(frame: &TwoFrame, logic: &LogicId) -> bool {
    !frame_class_check(frame, logic) || frame_class_check(&pad_frame(frame, logic), logic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{mk_bd, mk_named, parse};
    use crate::frame::fixtures::d2;
    use crate::semantics::satisfies;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn casari_refuted_on_a_copy_of_d2() {
        let casari = mk_named("casari").unwrap();
        let out = countermodel(&casari, &"MGrzB".parse().unwrap(), 2, &cfg()).unwrap();
        assert_eq!(out.status, Status::Refuted);
        let w = out.witness.unwrap();
        assert_eq!(canonical_code(&w.model.frame), canonical_code(&d2()));
        assert_eq!(satisfies(&w.model, w.world, &casari), Ok(false));
    }

    #[test]
    fn casari_valid_on_plus_grz_b_up_to_four() {
        let casari = mk_named("casari").unwrap();
        let out = countermodel(&casari, &"MPlusGrzB".parse().unwrap(), 4, &cfg()).unwrap();
        assert_eq!(out.status, Status::ValidUpToBound);
        assert_eq!(out.bound, 4);
        assert!(out.frames_examined > 0);
    }

    #[test]
    fn comr_refuted_without_barcan() {
        let comr = mk_named("com_r").unwrap();
        let out = countermodel(&comr, &"MGrz".parse().unwrap(), 3, &cfg()).unwrap();
        assert_eq!(out.status, Status::Refuted);
        assert_eq!(out.bound, 3);
        let w = out.witness.unwrap();
        assert_eq!(satisfies(&w.model, w.world, &comr), Ok(false));
    }

    #[test]
    fn crosscheck_examples() {
        let c = crosscheck_translation(&mk_named("casari").unwrap(), 3, &cfg()).unwrap();
        assert!(c.agree);
        assert!(c.per_size.iter().all(|&(_, a, b)| !a && !b));

        let c = crosscheck_translation(&parse("p").unwrap(), 3, &cfg()).unwrap();
        assert!(c.agree);
        assert_eq!(c.per_size[0], (1, true, true));

        let c = crosscheck_translation(&mk_bd(2).unwrap(), 3, &cfg()).unwrap();
        assert!(c.agree);
        assert_eq!(c.per_size, vec![(1, false, false), (2, false, false), (3, true, true)]);
    }

    #[test]
    fn padding_keeps_every_registered_class() {
        for logic in LogicId::registry(3) {
            for n in 1..=3 {
                for f in enumerate_frames(n, &logic, true, &cfg()).unwrap() {
                    assert!(padding_preserves_class(&f, &logic), "{logic}: {f:?}");
                }
            }
        }
    }

    #[test]
    fn refutation_is_monotone_in_size() {
        // A refutation survives padding: same valuation, same world.
        let phi = parse("<>p -> []p").unwrap();
        let logic: LogicId = "MS4B".parse().unwrap();
        let out = countermodel(&phi, &logic, 3, &cfg()).unwrap();
        let w = out.witness.unwrap();
        let padded = pad_frame(&w.model.frame, &logic);
        let m = Model::new(padded, w.model.valuation.clone()).unwrap();
        assert_eq!(satisfies(&m, w.world, &phi), Ok(false));
    }

    #[test]
    fn budget_errors_surface() {
        let tight = SearchConfig {
            valuation_budget: 4,
            ..cfg()
        };
        assert!(matches!(
            countermodel(&mk_bd(3).unwrap(), &"MGrz".parse().unwrap(), 2, &tight),
            Err(DecisionError::BudgetExceeded(_))
        ));
    }
}
