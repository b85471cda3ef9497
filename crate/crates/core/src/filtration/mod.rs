//! Selective filtration of a finite source model into a hatted model that
//! still refutes the formula, with independent re-verification.

mod engine;

pub use engine::{PointInfo, SelectionState};

use crate::formula::{subformulas, Formula};
use crate::frame::{frame_class_check, longest_strict_chain, Base, FrameError, LogicId, Relation, TwoFrame, WorldSet};
use crate::semantics::{satisfies, Model, Valuation};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiltrationError {
    #[error("the formula holds at every world of the source model")]
    NotRefuted,
    #[error("the refutation set has no strongly maximal point")]
    SmaxNotFound,
    #[error("no witness for `{obligation}` at `{at}` in the source model")]
    WitnessNotFound { obligation: String, at: String },
    #[error("step budget of {0} exhausted")]
    BudgetExceeded(usize),
    #[error("source frame is not a {0}-frame")]
    SourceClass(LogicId),
    #[error("unknown filtration variant `{0}`")]
    UnknownVariant(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiltrationVariant {
    /// Left commutativity only.
    MGrz,
    /// Alternating left and right commutativity.
    MGrzB,
    /// As `MGrzB`, without horizontal diamond witnesses.
    MPlusGrzB,
    /// As `MPlusGrzB` over irreflexive frames.
    MGLB,
}

impl FiltrationVariant {
    pub const ALL: [FiltrationVariant; 4] = [
        FiltrationVariant::MGrz,
        FiltrationVariant::MGrzB,
        FiltrationVariant::MPlusGrzB,
        FiltrationVariant::MGLB,
    ];

    pub fn barcan(self) -> bool {
        self != FiltrationVariant::MGrz
    }

    pub fn horizontal_step(self) -> bool {
        matches!(self, FiltrationVariant::MGrz | FiltrationVariant::MGrzB)
    }

    /// Source and target frame class.
    pub fn logic(self) -> LogicId {
        match self {
            FiltrationVariant::MGrz => LogicId::new(Base::MGrz, false),
            FiltrationVariant::MGrzB => LogicId::new(Base::MGrz, true),
            FiltrationVariant::MPlusGrzB => LogicId::new(Base::MPlusGrz, true),
            FiltrationVariant::MGLB => LogicId::new(Base::MGL, true),
        }
    }

    /// Exponent `e` of the depth bound `2^e`.
    pub fn depth_bound_exponent(self, subformula_count: usize) -> usize {
        match self {
            FiltrationVariant::MGrz | FiltrationVariant::MGrzB => 2 * subformula_count + 1,
            FiltrationVariant::MPlusGrzB | FiltrationVariant::MGLB => subformula_count + 1,
        }
    }
}

impl fmt::Display for FiltrationVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FiltrationVariant::MGrz => "MGrz",
            FiltrationVariant::MGrzB => "MGrzB",
            FiltrationVariant::MPlusGrzB => "MPlusGrzB",
            FiltrationVariant::MGLB => "MGLB",
        })
    }
}

impl FromStr for FiltrationVariant {
    type Err = FiltrationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "MGrz" => Ok(FiltrationVariant::MGrz),
            "MGrzB" => Ok(FiltrationVariant::MGrzB),
            "MPlusGrzB" | "M+GrzB" | "M⁺GrzB" => Ok(FiltrationVariant::MPlusGrzB),
            "MGLB" => Ok(FiltrationVariant::MGLB),
            _ => Err(FiltrationError::UnknownVariant(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepTag {
    Initial,
    ExistsWitness,
    DiaHorizontal,
    DiaVertical,
    LeftCommutativity,
    RightCommutativity,
}

impl StepTag {
    pub fn as_str(self) -> &'static str {
        match self {
            StepTag::Initial => "initial",
            StepTag::ExistsWitness => "exists-witness",
            StepTag::DiaHorizontal => "dia-horizontal",
            StepTag::DiaVertical => "dia-vertical",
            StepTag::LeftCommutativity => "left-commutativity",
            StepTag::RightCommutativity => "right-commutativity",
        }
    }
}

/// One growth action, with pairs in source indices before closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub round: usize,
    pub step: StepTag,
    /// Newly introduced point, if any.
    pub point: Option<usize>,
    pub r_pairs: Vec<(usize, usize)>,
    pub e_pairs: Vec<(usize, usize)>,
    pub obligation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HattedPoint {
    pub source: usize,
    pub info: PointInfo,
}

/// Outcome of the independent re-verification; each entry records pass or
/// fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Checks {
    pub truth_lemma: bool,
    pub frame_class: bool,
    pub skeleton_depth: bool,
    pub cluster_chains: bool,
    pub total_depth: bool,
    pub provenance: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.truth_lemma && self.frame_class && self.skeleton_depth && self.cluster_chains && self.total_depth && self.provenance
    }
}

#[derive(Clone, Debug)]
pub struct FiltrationReport {
    pub variant: FiltrationVariant,
    pub formula: Formula,
    /// Size of the subformula set of the desugared formula.
    pub subformula_count: usize,
    /// Hatted point `i` is a copy of `points[i].source`.
    pub points: Vec<HattedPoint>,
    /// The hatted model, points in introduction order; point 0 refutes the
    /// formula.
    pub model: Model,
    pub depth: Option<usize>,
    pub depth_bound_exponent: usize,
    pub rounds: usize,
    pub log: Vec<LogEntry>,
    pub checks: Checks,
}

impl FiltrationReport {
    pub fn frame(&self) -> &TwoFrame {
        &self.model.frame
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Growth actions allowed; defaults to `10 * |X|^2`.
    pub budget: Option<usize>,
    /// Reject sources outside the variant's class.
    pub check_source: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            budget: None,
            check_source: true,
        }
    }
}

pub fn default_budget(model: &Model) -> usize {
    10 * model.frame.size() * model.frame.size()
}

/// Runs every stage to a fixpoint and verifies the result.
pub fn run_filtration(
    model: &Model,
    phi: &Formula,
    variant: FiltrationVariant,
    limits: Limits,
) -> Result<FiltrationReport, FiltrationError> {
    if limits.check_source && !frame_class_check(&model.frame, &variant.logic()) {
        return Err(FiltrationError::SourceClass(variant.logic()));
    }
    let budget = limits.budget.unwrap_or_else(|| default_budget(model));
    let mut state = SelectionState::select_initial(model, phi, variant, budget)?;
    state.run_to_fixpoint()?;
    let mut report = finish(&state)?;
    report.checks = verify_report(model, &report);
    Ok(report)
}

/// Packages the current selection as a hatted model (unverified).
pub fn finish(state: &SelectionState<'_>) -> Result<FiltrationReport, FiltrationError> {
    let source = state.model();
    let order = state.order().to_vec();
    let sub = state.selected();
    let mut r = state.r_hat().restrict(sub);
    if state.variant() == FiltrationVariant::MGLB {
        r = r.difference(&Relation::identity(source.frame.size()));
    }
    let e = state.e_hat().restrict(sub);
    // Renumber source indices to introduction order.
    let n = order.len();
    let mut rr = Relation::empty(n);
    let mut ee = Relation::empty(n);
    for (i, &a) in order.iter().enumerate() {
        for (j, &b) in order.iter().enumerate() {
            if r.contains(a, b) {
                rr.insert(i, j);
            }
            if e.contains(a, b) {
                ee.insert(i, j);
            }
        }
    }
    let worlds = order.iter().map(|&a| source.frame.world_name(a).to_string()).collect();
    let frame = TwoFrame::from_relations(worlds, rr, ee)?;
    let valuation: Valuation = state
        .formula()
        .vars()
        .into_iter()
        .map(|p| {
            let v = source.value(&p);
            let hat = order.iter().enumerate().filter(|(_, &a)| v.contains(a)).map(|(i, _)| i).collect();
            (p, hat)
        })
        .collect();
    let model = Model::new(frame, valuation).expect("valuation within carrier");
    let points = order
        .iter()
        .map(|&a| HattedPoint {
            source: a,
            info: state.info(a).unwrap().clone(),
        })
        .collect();
    let count = state.subformulas().len();
    Ok(FiltrationReport {
        variant: state.variant(),
        formula: state.formula().clone(),
        subformula_count: count,
        points,
        depth: model.frame.depth().ok(),
        model,
        depth_bound_exponent: state.variant().depth_bound_exponent(count),
        rounds: state.round(),
        log: state.log().to_vec(),
        checks: Checks::default(),
    })
}

/// `n <= 2^exponent` without overflow.
fn at_most_pow2(n: usize, exponent: usize) -> bool {
    exponent >= 63 || (n as u64) <= (1u64 << exponent)
}

/// Re-checks a report against its source model, using only the report's
/// hatted model and point-to-source map.
pub fn verify_report(source: &Model, report: &FiltrationReport) -> Checks {
    let hat = &report.model;
    let f = &hat.frame;
    let subs = subformulas(&report.formula.desugar());
    let s = subs.len();
    let src: Vec<usize> = report.points.iter().map(|p| p.source).collect();

    let truth_lemma = src.len() == f.size()
        && src.iter().enumerate().all(|(i, &t)| {
            subs.iter()
                .all(|psi| satisfies(hat, i, psi).ok() == satisfies(source, t, psi).ok())
        })
        && satisfies(hat, 0, &report.formula) == Ok(false);

    let mut target = report.variant.logic();
    target.depth_bound = None;
    let frame_class = frame_class_check(f, &target);

    // Depth of the skeleton and of chains inside single clusters. A
    // non-transitive result fails both.
    let skeleton = f.e_skeleton();
    let skeleton_depth = skeleton.depth().map(|d| at_most_pow2(d, s + 1)).unwrap_or(false);
    let cluster_chains = f.r().is_transitive()
        && f
            .e_clusters()
            .iter()
            .all(|&c| at_most_pow2(longest_strict_chain(f.r(), c), s));
    let total_depth = f
        .depth()
        .map(|d| at_most_pow2(d, report.variant.depth_bound_exponent(s)))
        .unwrap_or(false);

    let provenance = provenance_invariants(source, f, &src);
    Checks {
        truth_lemma,
        frame_class,
        skeleton_depth,
        cluster_chains,
        total_depth,
        provenance,
    }
}

/// Injectivity; `E_hat` mirrors `E`; every `R_hat` edge is either an
/// `R`-edge inside an `E`-cluster or a `Q`-edge across clusters.
fn provenance_invariants(source: &Model, hat: &TwoFrame, src: &[usize]) -> bool {
    let sf = &source.frame;
    let q = sf.q_relation();
    let injective = src.iter().copied().collect::<WorldSet>().len() == src.len();
    injective
        && src.iter().enumerate().all(|(i, &u)| {
            src.iter().enumerate().all(|(j, &w)| {
                let e = sf.e().contains(u, w);
                let e_ok = hat.e().contains(i, j) == e;
                let r_ok = !hat.r().contains(i, j)
                    || (q.contains(u, w) && ((e && (u == w || sf.r().contains(u, w))) || !e));
                e_ok && r_ok
            })
        })
}

#[cfg(test)]
mod tests;
