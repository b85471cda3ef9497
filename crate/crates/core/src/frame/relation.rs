//! Dense bit-matrix relations and world sets over carriers of at most
//! [`MAX_WORLDS`] points.
//!
//! Every row of a [`Relation`] is a single `u64`, so image, preimage,
//! composition and the closures are word-parallel.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub};

/// Largest supported carrier.
pub const MAX_WORLDS: usize = 64;

/// A set of world indices `< MAX_WORLDS`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet(u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn from_bits(bits: u64) -> Self {
        WorldSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_WORLDS);
        if n == MAX_WORLDS {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        WorldSet(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_WORLDS && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Complement relative to a carrier of size `n`.
    pub fn complement(self, n: usize) -> Self {
        WorldSet(!self.0 & Self::full(n).0)
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Least element, if any.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> WorldSetIter {
        WorldSetIter(self.0)
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = WorldSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl BitAnd for WorldSet {
    type Output = WorldSet;
    fn bitand(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for WorldSet {
    fn bitand_assign(&mut self, rhs: WorldSet) {
        self.0 &= rhs.0;
    }
}

impl BitOr for WorldSet {
    type Output = WorldSet;
    fn bitor(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for WorldSet {
    fn bitor_assign(&mut self, rhs: WorldSet) {
        self.0 |= rhs.0;
    }
}

impl Sub for WorldSet {
    type Output = WorldSet;
    fn sub(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 & !rhs.0)
    }
}

/// Ascending iterator over the members of a [`WorldSet`].
pub struct WorldSetIter(u64);

impl Iterator for WorldSetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Which closure [`Relation::close`] computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    Reflexive,
    Transitive,
    ReflexiveTransitive,
    /// Least equivalence relation containing the input.
    LeastEquivalence,
}

/// A binary relation on `{0, .., size-1}`; row `a` holds the image of `a`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    rows: Vec<u64>,
}

impl Relation {
    /// The empty relation. Panics if `size > MAX_WORLDS`.
    pub fn empty(size: usize) -> Self {
        assert!(size <= MAX_WORLDS, "carrier of {size} worlds exceeds {MAX_WORLDS}");
        Relation {
            size,
            rows: vec![0; size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut r = Self::empty(size);
        for i in 0..size {
            r.rows[i] = 1 << i;
        }
        r
    }

    pub fn total(size: usize) -> Self {
        let mut r = Self::empty(size);
        let full = WorldSet::full(size).bits();
        r.rows.iter_mut().for_each(|row| *row = full);
        r
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(size: usize, pairs: I) -> Self {
        let mut r = Self::empty(size);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    /// Decodes `size * size` bits in row-major order.
    pub fn from_code(size: usize, code: u64) -> Self {
        assert!(size <= 8);
        let mut r = Self::empty(size);
        let mask = WorldSet::full(size).bits();
        for a in 0..size {
            r.rows[a] = (code >> (a * size)) & mask;
        }
        r
    }

    /// Row-major bit encoding; the inverse of [`Relation::from_code`].
    pub fn code(&self) -> u64 {
        assert!(self.size <= 8);
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (a, row)| acc | row << (a * self.size))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.rows[a] >> b & 1 == 1
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        assert!(a < self.size && b < self.size);
        self.rows[a] |= 1 << b;
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.rows[a] &= !(1 << b);
    }

    /// `{b | a R b}`.
    pub fn image(&self, a: usize) -> WorldSet {
        WorldSet::from_bits(self.rows[a])
    }

    /// `{b | a R b for some a in set}`.
    pub fn image_of(&self, set: WorldSet) -> WorldSet {
        set.iter().fold(WorldSet::EMPTY, |acc, a| acc | self.image(a))
    }

    /// `{a | a R b for some b in set}`.
    pub fn preimage(&self, set: WorldSet) -> WorldSet {
        let mut out = 0u64;
        for (a, row) in self.rows.iter().enumerate() {
            if row & set.bits() != 0 {
                out |= 1 << a;
            }
        }
        WorldSet::from_bits(out)
    }

    /// `{a | every b with a R b lies in set}`.
    pub fn box_preimage(&self, set: WorldSet) -> WorldSet {
        let mut out = 0u64;
        for (a, row) in self.rows.iter().enumerate() {
            if row & !set.bits() == 0 {
                out |= 1 << a;
            }
        }
        WorldSet::from_bits(out)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |a| self.image(a).iter().map(move |b| (a, b)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Relational composition `self ; other`: `a (self;other) c` iff
    /// `a self b` and `b other c` for some `b`.
    pub fn compose(&self, other: &Relation) -> Relation {
        assert_eq!(self.size, other.size);
        let mut out = Relation::empty(self.size);
        for a in 0..self.size {
            out.rows[a] = other.image_of(self.image(a)).bits();
        }
        out
    }

    pub fn transpose(&self) -> Relation {
        let mut out = Relation::empty(self.size);
        for (a, b) in self.pairs() {
            out.insert(b, a);
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &Relation) {
        assert_eq!(self.size, other.size);
        for (r, o) in self.rows.iter_mut().zip(&other.rows) {
            *r |= o;
        }
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (r, o) in out.rows.iter_mut().zip(&other.rows) {
            *r &= o;
        }
        out
    }

    pub fn difference(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (r, o) in out.rows.iter_mut().zip(&other.rows) {
            *r &= !o;
        }
        out
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(r, o)| r & !o == 0)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|i| self.contains(i, i))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.size).all(|i| !self.contains(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.contains(b, a))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().all(|(a, b)| a == b || !self.contains(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subset(self)
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    pub fn is_partial_order(&self) -> bool {
        self.is_reflexive() && self.is_antisymmetric() && self.is_transitive()
    }

    pub fn is_strict_order(&self) -> bool {
        self.is_irreflexive() && self.is_transitive()
    }

    /// Least superset of `self` with the property named by `kind`.
    pub fn close(&self, kind: ClosureKind) -> Relation {
        let mut out = self.clone();
        match kind {
            ClosureKind::Reflexive => out.add_diagonal(),
            ClosureKind::Transitive => out.warshall(),
            ClosureKind::ReflexiveTransitive => {
                out.add_diagonal();
                out.warshall();
            }
            ClosureKind::LeastEquivalence => {
                out.union_with(&self.transpose());
                out.add_diagonal();
                out.warshall();
            }
        }
        out
    }

    fn add_diagonal(&mut self) {
        for i in 0..self.size {
            self.rows[i] |= 1 << i;
        }
    }

    fn warshall(&mut self) {
        for k in 0..self.size {
            let row_k = self.rows[k];
            for i in 0..self.size {
                if self.rows[i] >> k & 1 == 1 {
                    self.rows[i] |= row_k;
                }
            }
        }
    }

    /// Transitive closure that only adds diagonal pairs for members of
    /// `carrier`; used when a relation lives on a subset of its index range.
    pub fn close_on(&self, kind: ClosureKind, carrier: WorldSet) -> Relation {
        let mut out = self.clone();
        let add_diag = |r: &mut Relation| {
            for i in carrier.iter() {
                r.rows[i] |= 1 << i;
            }
        };
        match kind {
            ClosureKind::Reflexive => add_diag(&mut out),
            ClosureKind::Transitive => out.warshall(),
            ClosureKind::ReflexiveTransitive => {
                add_diag(&mut out);
                out.warshall();
            }
            ClosureKind::LeastEquivalence => {
                out.union_with(&self.transpose());
                add_diag(&mut out);
                out.warshall();
            }
        }
        out
    }

    /// Restriction to `set`, keeping indices.
    pub fn restrict(&self, set: WorldSet) -> Relation {
        let mut out = Relation::empty(self.size);
        for a in set.iter() {
            out.rows[a] = self.rows[a] & set.bits();
        }
        out
    }

    /// Re-indexes along `map`: the result relates `map[a]` to `map[b]`
    /// whenever `a` relates to `b`. `map` must be injective into `0..size`.
    pub fn reindex(&self, size: usize, map: &[usize]) -> Relation {
        let mut out = Relation::empty(size);
        for (a, b) in self.pairs() {
            out.insert(map[a], map[b]);
        }
        out
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// Free-function form of [`Relation::close`].
pub fn close(rel: &Relation, kind: ClosureKind) -> Relation {
    rel.close(kind)
}
