//! Finite 2-frames `(X, R, E)`: `R` interprets `<>`, the equivalence `E`
//! interprets `E`.

mod construct;
mod dot;
mod logic;
mod relation;

pub use construct::{is_pmorphism, product, KripkeFrame, Skeleton};
pub use dot::to_dot;
pub use logic::{frame_class_check, Base, LogicId};
pub use relation::{close, ClosureKind, Relation, WorldSet, WorldSetIter, MAX_WORLDS};

use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("a frame needs at least one world")]
    Empty,
    #[error("{0} worlds exceed the supported maximum of {MAX_WORLDS}")]
    TooManyWorlds(usize),
    #[error("duplicate world id `{0}`")]
    DuplicateWorld(String),
    #[error("pair mentions undeclared world `{0}`")]
    UnknownWorld(String),
    #[error("relation sizes do not match the carrier")]
    SizeMismatch,
    #[error("E is not an equivalence relation")]
    NotEquivalence,
    #[error("R is not transitive")]
    NonTransitive,
    #[error("frame has a dirty E-cluster at `{0}`")]
    DirtyCluster(String),
    #[error("right factor of a product must be an S5 frame (equivalence relation)")]
    NotS5,
    #[error("left factor of a product must have E = identity")]
    NotUnimodal,
    #[error("unknown logic `{0}`")]
    UnknownLogic(String),
}

/// Which commutativity condition to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `a E b R c` implies `a R d E c` for some `d`.
    Left,
    /// `a R b E c` implies `a E d R c` for some `d`.
    Right,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwoFrame {
    worlds: Vec<String>,
    r: Relation,
    e: Relation,
}

impl std::fmt::Debug for TwoFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = |i: usize| self.worlds[i].as_str();
        f.debug_struct("TwoFrame")
            .field("worlds", &self.worlds)
            .field(
                "R",
                &self.r.pairs().map(|(a, b)| (name(a), name(b))).collect::<Vec<_>>(),
            )
            .field("E-clusters", &self.e_clusters().iter().map(|c| c.iter().map(name).collect::<Vec<_>>()).collect::<Vec<_>>())
            .finish()
    }
}

fn check_names(worlds: &[String]) -> Result<HashMap<&str, usize>, FrameError> {
    if worlds.is_empty() {
        return Err(FrameError::Empty);
    }
    if worlds.len() > MAX_WORLDS {
        return Err(FrameError::TooManyWorlds(worlds.len()));
    }
    let mut index = HashMap::with_capacity(worlds.len());
    for (i, w) in worlds.iter().enumerate() {
        if index.insert(w.as_str(), i).is_some() {
            return Err(FrameError::DuplicateWorld(w.clone()));
        }
    }
    Ok(index)
}

impl TwoFrame {
    /// Builds a frame from named pairs. `R` is taken verbatim; `E` is
    /// replaced by the least equivalence containing the listed pairs.
    pub fn new<S: AsRef<str>>(
        worlds: Vec<String>,
        r_pairs: &[(S, S)],
        e_pairs: &[(S, S)],
    ) -> Result<Self, FrameError> {
        let index = check_names(&worlds)?;
        let n = worlds.len();
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| FrameError::UnknownWorld(s.as_ref().to_string()))
        };
        let mut r = Relation::empty(n);
        for (a, b) in r_pairs {
            r.insert(lookup(a)?, lookup(b)?);
        }
        let mut e = Relation::empty(n);
        for (a, b) in e_pairs {
            e.insert(lookup(a)?, lookup(b)?);
        }
        let e = e.close(ClosureKind::LeastEquivalence);
        Ok(TwoFrame { worlds, r, e })
    }

    /// Builds a frame from index relations; `e` must already be an
    /// equivalence.
    pub fn from_relations(worlds: Vec<String>, r: Relation, e: Relation) -> Result<Self, FrameError> {
        check_names(&worlds)?;
        if r.size() != worlds.len() || e.size() != worlds.len() {
            return Err(FrameError::SizeMismatch);
        }
        if !e.is_equivalence() {
            return Err(FrameError::NotEquivalence);
        }
        Ok(TwoFrame { worlds, r, e })
    }

    /// Worlds are named `w0, w1, ...`.
    pub fn anonymous(r: Relation, e: Relation) -> Result<Self, FrameError> {
        let worlds = (0..r.size()).map(|i| format!("w{i}")).collect();
        Self::from_relations(worlds, r, e)
    }

    pub fn size(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, i: usize) -> &str {
        &self.worlds[i]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn r(&self) -> &Relation {
        &self.r
    }

    pub fn e(&self) -> &Relation {
        &self.e
    }

    pub fn all(&self) -> WorldSet {
        WorldSet::full(self.size())
    }

    /// Same carrier and `E`, new `R`.
    pub fn with_r(&self, r: Relation) -> TwoFrame {
        assert_eq!(r.size(), self.size());
        TwoFrame {
            worlds: self.worlds.clone(),
            r,
            e: self.e.clone(),
        }
    }

    /// Distinct `E`-clusters ordered by least member.
    pub fn e_clusters(&self) -> Vec<WorldSet> {
        let mut seen = WorldSet::EMPTY;
        let mut out = Vec::new();
        for i in 0..self.size() {
            if !seen.contains(i) {
                let c = self.e.image(i);
                seen |= c;
                out.push(c);
            }
        }
        out
    }

    /// `E[U]`, the `E`-saturation of a set.
    pub fn saturate(&self, set: WorldSet) -> WorldSet {
        self.e.image_of(set)
    }

    /// `Q = R ; E`.
    pub fn q_relation(&self) -> Relation {
        self.r.compose(&self.e)
    }

    /// Checks the `forall-exists` commutativity condition on `side`.
    pub fn satisfies_commutativity(&self, side: Side) -> bool {
        let n = self.size();
        match side {
            Side::Left => (0..n).all(|a| {
                let ra = self.r.image(a);
                self.e.image(a).iter().all(|b| {
                    self.r
                        .image(b)
                        .iter()
                        .all(|c| !(ra & self.e.image(c)).is_empty())
                })
            }),
            Side::Right => (0..n).all(|a| {
                let ea = self.e.image(a);
                self.r.image(a).iter().all(|b| {
                    self.e
                        .image(b)
                        .iter()
                        .all(|c| !(ea & self.r.transpose_image(c)).is_empty())
                })
            }),
        }
    }

    /// Every `E`-cluster is clean: `u, v` in one cluster with `u R v` forces
    /// `u = v`.
    pub fn clean_clusters(&self) -> bool {
        self.r
            .pairs()
            .all(|(u, v)| u == v || !self.e.contains(u, v))
    }

    /// Length of the longest strict chain. Requires transitive `R`.
    pub fn depth(&self) -> Result<usize, FrameError> {
        if !self.r.is_transitive() {
            return Err(FrameError::NonTransitive);
        }
        Ok(longest_strict_chain(&self.r, self.all()))
    }

    /// `R^r`: adds the diagonal.
    pub fn reflexivize(&self) -> TwoFrame {
        self.with_r(self.r.close(ClosureKind::Reflexive))
    }

    /// `R^ir`: removes the diagonal. Fails on frames with a dirty cluster,
    /// where the result would lose left commutativity.
    pub fn irreflexivize(&self) -> Result<TwoFrame, FrameError> {
        if let Some((u, _)) = self
            .r
            .pairs()
            .find(|&(u, v)| u != v && self.e.contains(u, v))
        {
            return Err(FrameError::DirtyCluster(self.worlds[u].clone()));
        }
        Ok(self.with_r(self.r.difference(&Relation::identity(self.size()))))
    }

    /// Induced subframe on `set`, renumbered in ascending index order.
    pub fn subframe(&self, set: WorldSet) -> TwoFrame {
        let keep: Vec<usize> = set.iter().collect();
        self.subframe_ordered(&keep)
    }

    /// Induced subframe on `order` (distinct indices), renumbered in the
    /// given order.
    pub fn subframe_ordered(&self, order: &[usize]) -> TwoFrame {
        let n = order.len();
        let mut r = Relation::empty(n);
        let mut e = Relation::empty(n);
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                if self.r.contains(a, b) {
                    r.insert(i, j);
                }
                if self.e.contains(a, b) {
                    e.insert(i, j);
                }
            }
        }
        TwoFrame {
            worlds: order.iter().map(|&i| self.worlds[i].clone()).collect(),
            r,
            e,
        }
    }

    /// Relabels along a permutation: world `i` moves to position `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> TwoFrame {
        let n = self.size();
        let mut worlds = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            worlds[p] = self.worlds[i].clone();
        }
        TwoFrame {
            worlds,
            r: self.r.reindex(n, perm),
            e: self.e.reindex(n, perm),
        }
    }

    /// `E`-skeleton: `E`-classes with `[x] R0 [y]` iff `x Q y`.
    pub fn e_skeleton(&self) -> Skeleton {
        Skeleton::of(self)
    }
}

impl Relation {
    /// `{a | a R c}`.
    pub fn transpose_image(&self, c: usize) -> WorldSet {
        self.preimage(WorldSet::singleton(c))
    }
}

/// Longest strict chain of a transitive relation restricted to `within`.
///
/// Mutually related points collapse into one class; the answer is the
/// number of classes on the longest path of the acyclic condensation.
pub(crate) fn longest_strict_chain(r: &Relation, within: WorldSet) -> usize {
    let r = r.restrict(within);
    let points: Vec<usize> = within.iter().collect();
    if points.is_empty() {
        return 0;
    }
    // Condensation classes: x ~ y iff x = y or (x R y and y R x).
    let mut class_of = vec![usize::MAX; r.size()];
    let mut classes: Vec<WorldSet> = Vec::new();
    for &x in &points {
        if class_of[x] != usize::MAX {
            continue;
        }
        let mut c = WorldSet::singleton(x);
        for &y in &points {
            if y != x && r.contains(x, y) && r.contains(y, x) {
                c.insert(y);
            }
        }
        for y in c.iter() {
            class_of[y] = classes.len();
        }
        classes.push(c);
    }
    // Class C strictly below D iff some x in C sees some y in D, C != D.
    let k = classes.len();
    let succ: Vec<Vec<usize>> = (0..k)
        .map(|ci| {
            let img = r.image_of(classes[ci]);
            (0..k).filter(|&d| d != ci && !(img & classes[d]).is_empty()).collect()
        })
        .collect();
    let mut memo = vec![0usize; k];
    fn longest(c: usize, succ: &[Vec<usize>], memo: &mut [usize]) -> usize {
        if memo[c] != 0 {
            return memo[c];
        }
        let best = 1 + succ[c].iter().map(|&d| longest(d, succ, memo)).max().unwrap_or(0);
        memo[c] = best;
        best
    }
    (0..k).map(|c| longest(c, &succ, &mut memo)).max().unwrap_or(0)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    fn names(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|s| s.to_string()).collect()
    }

    /// Two worlds `x R y`, both reflexive, one total cluster.
    pub fn d2() -> TwoFrame {
        TwoFrame::new(
            names(&["x", "y"]),
            &[("x", "x"), ("x", "y"), ("y", "y")],
            &[("x", "y")],
        )
        .unwrap()
    }

    /// The four-world max/smax example: clusters `{a,b}`, `{c,d}`,
    /// `R = id + {(a,d), (b,c)}`.
    pub fn sm4() -> TwoFrame {
        TwoFrame::new(
            names(&["a", "b", "c", "d"]),
            &[("a", "a"), ("b", "b"), ("c", "c"), ("d", "d"), ("a", "d"), ("b", "c")],
            &[("a", "b"), ("c", "d")],
        )
        .unwrap()
    }

    pub fn point() -> TwoFrame {
        TwoFrame::new(names(&["x"]), &[("x", "x")], &[]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn names(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn loader_rejects_bad_input() {
        let none: &[(&str, &str)] = &[];
        assert_eq!(TwoFrame::new(vec![], none, none), Err(FrameError::Empty));
        assert_eq!(
            TwoFrame::new(names(&["x"]), &[("x", "z")], none),
            Err(FrameError::UnknownWorld("z".into()))
        );
        assert_eq!(
            TwoFrame::new(names(&["x", "x"]), none, none),
            Err(FrameError::DuplicateWorld("x".into()))
        );
    }

    #[test]
    fn loader_closes_e_but_not_r() {
        let f = TwoFrame::new(names(&["x", "y", "z"]), &[("x", "y")], &[("x", "y")]).unwrap();
        assert!(f.e().is_equivalence());
        assert!(f.e().contains(1, 0));
        assert!(!f.e().contains(0, 2));
        assert_eq!(f.r().len(), 1);
    }

    #[test]
    fn sm4_commutes_on_both_sides() {
        assert!(sm4().satisfies_commutativity(Side::Left));
        assert!(sm4().satisfies_commutativity(Side::Right));
    }

    #[test]
    fn left_commutativity_failure() {
        let f = TwoFrame::new(
            names(&["x", "y", "z"]),
            &[("x", "x"), ("y", "y"), ("z", "z"), ("y", "z")],
            &[("x", "y")],
        )
        .unwrap();
        assert!(!f.satisfies_commutativity(Side::Left));
    }

    #[test]
    fn clean_cluster_examples() {
        assert!(!d2().clean_clusters());
        assert!(sm4().clean_clusters());
        let f = TwoFrame::new(names(&["x", "y"]), &[("x", "y")], &[]).unwrap();
        assert!(f.clean_clusters());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(d2().depth(), Ok(2));
        assert_eq!(point().depth(), Ok(1));
        assert_eq!(sm4().depth(), Ok(2));
        let f = TwoFrame::new(names(&["x", "y", "z"]), &[("x", "y"), ("y", "z")], &[]).unwrap();
        assert_eq!(f.depth(), Err(FrameError::NonTransitive));
    }

    #[test]
    fn q_relation_examples() {
        let q = sm4().q_relation();
        assert!(q.contains(0, 2));
        assert_eq!(d2().q_relation(), Relation::total(2));
        let f = TwoFrame::new(names(&["x", "y"]), &[("x", "y")], &[]).unwrap();
        assert_eq!(&f.q_relation(), f.r());
    }

    #[test]
    fn irreflexivize_examples() {
        let ir = sm4().irreflexivize().unwrap();
        assert_eq!(ir.r(), &Relation::from_pairs(4, [(0, 3), (1, 2)]));
        assert!(frame_class_check(&ir, &"MGLB[2]".parse().unwrap()));
        assert_eq!(d2().irreflexivize(), Err(FrameError::DirtyCluster("x".into())));
    }

    #[test]
    fn reflexivize_strict_chain() {
        let f = TwoFrame::new(names(&["x", "y"]), &[("x", "y")], &[]).unwrap();
        let r = f.reflexivize();
        assert!(r.r().is_partial_order());
        assert_eq!(r.r().len(), 3);
    }

    /// Enumerates every sequence of distinct worlds and keeps the strict
    /// chains; independent of the condensation algorithm.
    fn brute_force_depth(r: &Relation) -> usize {
        fn extend(r: &Relation, chain: &mut Vec<usize>, best: &mut usize) {
            *best = (*best).max(chain.len());
            let last = *chain.last().unwrap();
            for next in 0..r.size() {
                if chain.contains(&next) {
                    continue;
                }
                if r.contains(last, next) && !r.contains(next, last) {
                    chain.push(next);
                    extend(r, chain, best);
                    chain.pop();
                }
            }
        }
        let mut best = 0;
        for start in 0..r.size() {
            extend(r, &mut vec![start], &mut best);
        }
        best
    }

    #[test]
    fn depth_matches_brute_force_on_transitive_relations() {
        // Exhaustive for n <= 3, strided sample of all relations for 4 and 5.
        for n in 1..=5usize {
            let total = 1u64 << (n * n);
            let stride = if n <= 3 { 1 } else { 97 };
            let mut code = 0;
            while code < total {
                let r = Relation::from_code(n, code);
                if r.is_transitive() {
                    let f = TwoFrame::anonymous(r.clone(), Relation::identity(n)).unwrap();
                    assert_eq!(f.depth().unwrap(), brute_force_depth(&r), "{r:?}");
                }
                code += stride;
            }
        }
    }

    #[test]
    fn refl_irrefl_round_trip_on_partial_orders() {
        for code in 0..(1u64 << 9) {
            let r = Relation::from_code(3, code);
            if !r.is_partial_order() {
                continue;
            }
            let f = TwoFrame::anonymous(r, Relation::identity(3)).unwrap();
            assert_eq!(f.irreflexivize().unwrap().reflexivize(), f);
        }
    }
}
