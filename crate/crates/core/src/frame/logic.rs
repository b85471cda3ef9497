use super::{FrameError, Side, TwoFrame};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    MK,
    MS4,
    MGrz,
    MGL,
    MPlusGrz,
}

impl Base {
    pub const ALL: [Base; 5] = [Base::MK, Base::MS4, Base::MGrz, Base::MGL, Base::MPlusGrz];

    fn name(self) -> &'static str {
        match self {
            Base::MK => "MK",
            Base::MS4 => "MS4",
            Base::MGrz => "MGrz",
            Base::MGL => "MGL",
            Base::MPlusGrz => "MPlusGrz",
        }
    }

    /// Whether frames of this class need a transitive `R`.
    pub fn transitive(self) -> bool {
        !matches!(self, Base::MK)
    }
}

/// A finite-frame class: base, optional right commutativity (`B`) and an
/// optional depth bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LogicId {
    pub base: Base,
    pub barcan: bool,
    pub depth_bound: Option<usize>,
}

impl LogicId {
    pub const fn new(base: Base, barcan: bool) -> Self {
        LogicId {
            base,
            barcan,
            depth_bound: None,
        }
    }

    pub const fn with_depth(self, n: usize) -> Self {
        LogicId {
            depth_bound: Some(n),
            ..self
        }
    }

    /// Every registered class without a depth bound, plus each one bounded
    /// by `1..=max_depth`.
    pub fn registry(max_depth: usize) -> Vec<LogicId> {
        let mut out = Vec::new();
        for base in Base::ALL {
            for barcan in [false, true] {
                let l = LogicId::new(base, barcan);
                out.push(l);
                out.extend((1..=max_depth).map(|n| l.with_depth(n)));
            }
        }
        out
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.name())?;
        if self.barcan {
            f.write_str("B")?;
        }
        if let Some(n) = self.depth_bound {
            write!(f, "[{n}]")?;
        }
        Ok(())
    }
}

impl FromStr for LogicId {
    type Err = FrameError;

    /// Accepts `MGrzB[2]`, `MPlusGrzB`, `M+GrzB` and `M⁺GrzB`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FrameError::UnknownLogic(s.to_string());
        let t = s.trim();
        let (head, depth_bound) = match t.find('[') {
            Some(i) => {
                let inner = t[i + 1..].strip_suffix(']').ok_or_else(bad)?;
                let n: usize = inner.trim().parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(bad());
                }
                (&t[..i], Some(n))
            }
            None => (t, None),
        };
        let head = head.replace("M+", "MPlus").replace("M⁺", "MPlus");
        let lookup = |name: &str| Base::ALL.into_iter().find(|b| b.name() == name);
        let (base, barcan) = match lookup(&head) {
            Some(b) => (b, false),
            None => {
                let stem = head.strip_suffix('B').ok_or_else(bad)?;
                (lookup(stem).ok_or_else(bad)?, true)
            }
        };
        Ok(LogicId {
            base,
            barcan,
            depth_bound,
        })
    }
}

impl serde::Serialize for LogicId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Structural membership in the finite-frame class named by `logic`.
///
/// A depth bound on a class whose `R` is not transitive is never met,
/// since depth is only defined for transitive frames.
pub fn frame_class_check(frame: &TwoFrame, logic: &LogicId) -> bool {
    let r = frame.r();
    let base_ok = match logic.base {
        Base::MK => true,
        Base::MS4 => r.is_reflexive() && r.is_transitive(),
        Base::MGrz => r.is_partial_order(),
        Base::MGL => r.is_strict_order(),
        Base::MPlusGrz => r.is_partial_order() && frame.clean_clusters(),
    };
    base_ok
        && frame.e().is_equivalence()
        && frame.satisfies_commutativity(Side::Left)
        && (!logic.barcan || frame.satisfies_commutativity(Side::Right))
        && match logic.depth_bound {
            None => true,
            Some(n) => frame.depth().map(|d| d <= n).unwrap_or(false),
        }
}
