//! The selection state and its growth steps.
//!
//! Selection is injective, so a hatted point is identified with its source
//! world: `r_hat` and `e_hat` are relations over source indices, supported
//! on `selected`.

use super::{FiltrationError, FiltrationVariant, LogEntry, StepTag};
use crate::formula::{subformulas, Formula, SubformulaSet};
use crate::frame::{ClosureKind, Relation, WorldSet};
use crate::semantics::{max_points, smax_points, truth_set, Model};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointInfo {
    pub tag: StepTag,
    /// Definable set in which the point was strongly maximal when chosen.
    pub provenance: WorldSet,
    pub round: usize,
}

#[derive(Clone, Debug)]
pub struct SelectionState<'a> {
    model: &'a Model,
    variant: FiltrationVariant,
    phi: Formula,
    subs: SubformulaSet,
    /// Truth set of each member of `subs`, by position.
    truth: Vec<WorldSet>,
    /// `(position of E psi, position of psi)`.
    exists_pairs: Vec<(usize, usize)>,
    /// `(position of <> psi, position of psi)`.
    dia_pairs: Vec<(usize, usize)>,
    q: Relation,
    selected: WorldSet,
    order: Vec<usize>,
    info: Vec<Option<PointInfo>>,
    r_hat: Relation,
    e_hat: Relation,
    log: Vec<LogEntry>,
    round: usize,
    changes: usize,
    budget: usize,
}

impl<'a> SelectionState<'a> {
    /// Selects the least strongly maximal refutation point of `phi`.
    pub fn select_initial(
        model: &'a Model,
        phi: &Formula,
        variant: FiltrationVariant,
        budget: usize,
    ) -> Result<Self, FiltrationError> {
        let frame = &model.frame;
        let n = frame.size();
        // Boxes become negated diamonds so that every false box shows up as
        // a diamond obligation.
        let subs = subformulas(&phi.desugar());
        let truth: Vec<WorldSet> = subs.iter().map(|f| truth_set(model, f)).collect();
        let mut exists_pairs = Vec::new();
        let mut dia_pairs = Vec::new();
        for (i, f) in subs.iter().enumerate() {
            match f {
                Formula::Exists(a) => exists_pairs.push((i, subs.index_of(a).unwrap())),
                Formula::Dia(a) => dia_pairs.push((i, subs.index_of(a).unwrap())),
                _ => {}
            }
        }
        let refuting = frame.all() - truth_set(model, phi);
        if refuting.is_empty() {
            return Err(FiltrationError::NotRefuted);
        }
        let x = smax_points(frame, refuting)
            .first()
            .ok_or(FiltrationError::SmaxNotFound)?;
        let mut state = SelectionState {
            model,
            variant,
            phi: phi.clone(),
            subs,
            truth,
            exists_pairs,
            dia_pairs,
            q: frame.q_relation(),
            selected: WorldSet::EMPTY,
            order: Vec::new(),
            info: vec![None; n],
            r_hat: Relation::empty(n),
            e_hat: Relation::empty(n),
            log: Vec::new(),
            round: 0,
            changes: 0,
            budget,
        };
        state.add_point(x, StepTag::Initial, refuting)?;
        state.r_hat.insert(x, x);
        state.e_hat.insert(x, x);
        state.log.push(LogEntry {
            round: 0,
            step: StepTag::Initial,
            point: Some(x),
            r_pairs: vec![(x, x)],
            e_pairs: vec![(x, x)],
            obligation: Some(format!("~({phi})")),
        });
        Ok(state)
    }

    pub fn model(&self) -> &Model {
        self.model
    }
    pub fn variant(&self) -> FiltrationVariant {
        self.variant
    }
    pub fn formula(&self) -> &Formula {
        &self.phi
    }
    pub fn subformulas(&self) -> &SubformulaSet {
        &self.subs
    }
    pub fn selected(&self) -> WorldSet {
        self.selected
    }
    /// Source worlds in introduction order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }
    pub fn info(&self, source: usize) -> Option<&PointInfo> {
        self.info[source].as_ref()
    }
    pub fn r_hat(&self) -> &Relation {
        &self.r_hat
    }
    pub fn e_hat(&self) -> &Relation {
        &self.e_hat
    }
    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }
    pub fn round(&self) -> usize {
        self.round
    }

    fn strict(&self) -> bool {
        self.variant == FiltrationVariant::MGLB
    }

    fn tick(&mut self) -> Result<(), FiltrationError> {
        self.changes += 1;
        if self.changes > self.budget {
            return Err(FiltrationError::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn add_point(&mut self, w: usize, tag: StepTag, provenance: WorldSet) -> Result<bool, FiltrationError> {
        if self.selected.contains(w) {
            return Ok(false);
        }
        self.tick()?;
        self.selected.insert(w);
        self.order.push(w);
        self.info[w] = Some(PointInfo {
            tag,
            provenance,
            round: self.round,
        });
        Ok(true)
    }

    fn close(&mut self) {
        self.r_hat = self.r_hat.close_on(ClosureKind::ReflexiveTransitive, self.selected);
        self.e_hat = self.e_hat.close_on(ClosureKind::LeastEquivalence, self.selected);
    }

    fn provenance(&self, w: usize) -> WorldSet {
        self.info[w].as_ref().expect("selected point").provenance
    }

    /// Records a witness: optionally introduces `point`, then adds the
    /// pairs and closes both relations.
    fn extend(
        &mut self,
        step: StepTag,
        point: usize,
        provenance: WorldSet,
        r_pairs: Vec<(usize, usize)>,
        e_pairs: Vec<(usize, usize)>,
        obligation: String,
    ) -> Result<(), FiltrationError> {
        let introduced = self.add_point(point, step, provenance)?;
        if !introduced {
            self.tick()?;
        }
        for &(a, b) in &r_pairs {
            self.r_hat.insert(a, b);
        }
        for &(a, b) in &e_pairs {
            self.e_hat.insert(a, b);
        }
        self.close();
        self.log.push(LogEntry {
            round: self.round,
            step,
            point: introduced.then_some(point),
            r_pairs,
            e_pairs,
            obligation: Some(obligation),
        });
        Ok(())
    }

    fn name(&self, w: usize) -> &str {
        self.model.frame.world_name(w)
    }

    fn missing(&self, obligation: String, at: usize) -> FiltrationError {
        FiltrationError::WitnessNotFound {
            obligation,
            at: self.name(at).to_string(),
        }
    }

    /// Gives every selected point an `E_hat`-mate for each `E psi` it
    /// needs. Returns whether anything changed.
    pub fn exists_step(&mut self) -> Result<bool, FiltrationError> {
        let model: &'a Model = self.model;
        let frame = &model.frame;
        let mut changed = false;
        let mut i = 0;
        while i < self.order.len() {
            let t = self.order[i];
            i += 1;
            for k in 0..self.exists_pairs.len() {
                let (ex, child) = self.exists_pairs[k];
                let body = self.truth[child];
                if !self.truth[ex].contains(t) || body.contains(t) {
                    continue;
                }
                if !(self.e_hat.image(t) & self.selected & body).is_empty() {
                    continue;
                }
                let domain = frame.saturate(self.provenance(t)) & body;
                let candidates = smax_points(frame, domain) & frame.e().image(t);
                let w = candidates
                    .first()
                    .ok_or_else(|| self.missing(self.subs.get(ex).unwrap().to_string(), t))?;
                let ob = self.subs.get(ex).unwrap().to_string();
                self.extend(StepTag::ExistsWitness, w, domain, vec![(w, w)], vec![(t, w)], ob)?;
                changed = true;
            }
        }
        Ok(changed)
    }

    /// Gives every point present at the start of the step an `R_hat`
    /// successor for each `<> psi` it needs: inside its own cluster when
    /// the variant allows it, otherwise strictly above.
    pub fn dia_step(&mut self) -> Result<bool, FiltrationError> {
        let model: &'a Model = self.model;
        let frame = &model.frame;
        let strict = self.strict();
        let all = frame.all();
        let mut changed = false;
        for y in self.order.clone() {
            for k in 0..self.dia_pairs.len() {
                let (dia, child) = self.dia_pairs[k];
                let body = self.truth[child];
                if !self.truth[dia].contains(y) || (!strict && body.contains(y)) {
                    continue;
                }
                let mut seen = self.r_hat.image(y) & self.selected & body;
                if strict {
                    seen.remove(y);
                }
                if !seen.is_empty() {
                    continue;
                }
                // Everything above the witness must keep y's false diamonds
                // false.
                let mut a = if strict { body } else { self.truth[dia] };
                let mut filter = all;
                for &(d, c) in &self.dia_pairs {
                    if !self.truth[d].contains(y) {
                        a = a - self.truth[d];
                        filter = filter - self.truth[c];
                        if strict {
                            a = a - self.truth[c];
                        }
                    }
                }
                let target = smax_points(frame, a) & max_points(frame, body) & filter;
                let sel = self.selected;
                let pick = move |cands: WorldSet| (cands & sel).first().or(cands.first());
                let ob = self.subs.get(dia).unwrap().to_string();
                let same_cluster = frame.e().image(y);
                if self.variant.horizontal_step() {
                    let mut cands = target & frame.r().image(y) & same_cluster;
                    cands.remove(y);
                    if let Some(u) = pick(cands) {
                        self.extend(StepTag::DiaHorizontal, u, a, vec![(y, u), (u, u)], vec![(y, u)], ob)?;
                        changed = true;
                        continue;
                    }
                }
                let cands = (target & self.q.image(y)) - same_cluster;
                let Some(z) = pick(cands) else {
                    return Err(self.missing(ob, y));
                };
                let mates: Vec<(usize, usize)> = std::iter::once((z, z))
                    .chain((frame.e().image(z) & self.selected).iter().map(|s| (z, s)))
                    .collect();
                self.extend(StepTag::DiaVertical, z, a, vec![(y, z), (z, z)], mates, ob)?;
                changed = true;
            }
        }
        Ok(changed)
    }

    /// Closes the points present at the start under left commutativity.
    pub fn lc_step(&mut self) -> Result<bool, FiltrationError> {
        let model: &'a Model = self.model;
        let frame = &model.frame;
        let snapshot = self.selected;
        let mut changed = false;
        for t in self.order.clone() {
            for u in (self.e_hat.image(t) & snapshot).iter() {
                for w in (self.r_hat.image(u) & snapshot).iter() {
                    if self.e_hat.contains(u, w) || !(self.r_hat.image(t) & self.e_hat.image(w)).is_empty() {
                        continue;
                    }
                    let reach = frame.r().image(t) & frame.e().image(w);
                    let provenance = frame.saturate(self.provenance(w));
                    let s = (reach & self.selected)
                        .first()
                        .or((reach & smax_points(frame, provenance)).first())
                        .ok_or_else(|| {
                            let ob = format!("{} E {} R {}", self.name(t), self.name(u), self.name(w));
                            self.missing(ob, t)
                        })?;
                    let ob = format!("{} E {} R {}", self.name(t), self.name(u), self.name(w));
                    self.extend(StepTag::LeftCommutativity, s, provenance, vec![(t, s), (s, s)], vec![(s, w)], ob)?;
                    changed = true;
                }
            }
        }
        Ok(changed)
    }

    /// Closes the points present at the start under right commutativity.
    pub fn rc_step(&mut self) -> Result<bool, FiltrationError> {
        let model: &'a Model = self.model;
        let frame = &model.frame;
        let snapshot = self.selected;
        let mut changed = false;
        for t in self.order.clone() {
            for w in (self.r_hat.image(t) & snapshot).iter() {
                if self.e_hat.contains(t, w) {
                    continue;
                }
                for u in (self.e_hat.image(w) & snapshot).iter() {
                    let below_u = self.r_hat.transpose_image(u);
                    if !(self.e_hat.image(t) & below_u).is_empty() {
                        continue;
                    }
                    // The new point must see every diamond true at u, and
                    // (for irreflexive targets) every subformula true at u.
                    let mut v = frame.all();
                    for &(d, c) in &self.dia_pairs {
                        if self.truth[d].contains(u) || self.truth[c].contains(u) {
                            v &= self.truth[d];
                        }
                    }
                    let base = frame.e().image(t) & v & self.q.transpose_image(u);
                    let provenance = frame.saturate(self.provenance(t)) & v;
                    let s = (base & self.selected)
                        .first()
                        .or((base & smax_points(frame, provenance)).first())
                        .ok_or_else(|| {
                            let ob = format!("{} R {} E {}", self.name(t), self.name(w), self.name(u));
                            self.missing(ob, t)
                        })?;
                    let ob = format!("{} R {} E {}", self.name(t), self.name(w), self.name(u));
                    self.extend(StepTag::RightCommutativity, s, provenance, vec![(s, u), (s, s)], vec![(t, s)], ob)?;
                    changed = true;
                }
            }
        }
        Ok(changed)
    }

    /// Alternates left and right commutativity (left only without Barcan)
    /// until neither adds anything.
    pub fn commutativity_steps(&mut self) -> Result<bool, FiltrationError> {
        let mut changed = false;
        loop {
            let l = self.lc_step()?;
            let r = if self.variant.barcan() { self.rc_step()? } else { false };
            changed |= l || r;
            if !l && !r {
                return Ok(changed);
            }
        }
    }

    /// Runs rounds of the three stages until a whole round adds nothing.
    pub fn run_to_fixpoint(&mut self) -> Result<(), FiltrationError> {
        loop {
            self.round += 1;
            let a = self.exists_step()?;
            let b = self.dia_step()?;
            let c = self.commutativity_steps()?;
            if !(a || b || c) {
                return Ok(());
            }
        }
    }
}
