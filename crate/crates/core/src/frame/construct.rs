use super::{longest_strict_chain, FrameError, Relation, TwoFrame, WorldSet};

/// A unimodal Kripke frame; the left factor of a product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeFrame {
    pub worlds: Vec<String>,
    pub r: Relation,
}

impl KripkeFrame {
    pub fn anonymous(r: Relation) -> Self {
        KripkeFrame {
            worlds: (0..r.size()).map(|i| format!("w{i}")).collect(),
            r,
        }
    }

    /// Coerces a 2-frame whose `E` is the identity.
    pub fn from_unimodal(frame: &TwoFrame) -> Result<Self, FrameError> {
        if frame.e() != &Relation::identity(frame.size()) {
            return Err(FrameError::NotUnimodal);
        }
        Ok(KripkeFrame {
            worlds: frame.worlds().to_vec(),
            r: frame.r().clone(),
        })
    }

    /// The S5 factor as read from a 2-frame file: its `R` must be an
    /// equivalence (its `E` is ignored).
    pub fn s5_from(frame: &TwoFrame) -> Result<Self, FrameError> {
        if !frame.r().is_equivalence() {
            return Err(FrameError::NotS5);
        }
        Ok(KripkeFrame {
            worlds: frame.worlds().to_vec(),
            r: frame.r().clone(),
        })
    }

    pub fn size(&self) -> usize {
        self.worlds.len()
    }
}

/// `F x G`: carrier `X1 x X2` (row-major, world `(x,u)`), `R` moves the
/// left coordinate, `E` moves the right coordinate along `G`.
pub fn product(f: &KripkeFrame, g: &KripkeFrame) -> Result<TwoFrame, FrameError> {
    if !g.r.is_equivalence() {
        return Err(FrameError::NotS5);
    }
    let (n1, n2) = (f.size(), g.size());
    let n = n1 * n2;
    if n > super::MAX_WORLDS {
        return Err(FrameError::TooManyWorlds(n));
    }
    let idx = |x: usize, u: usize| x * n2 + u;
    let mut r = Relation::empty(n);
    let mut e = Relation::empty(n);
    for x in 0..n1 {
        for u in 0..n2 {
            for y in f.r.image(x).iter() {
                r.insert(idx(x, u), idx(y, u));
            }
            for v in g.r.image(u).iter() {
                e.insert(idx(x, u), idx(x, v));
            }
        }
    }
    let mut worlds = Vec::with_capacity(n);
    for x in &f.worlds {
        for u in &g.worlds {
            worlds.push(format!("({x},{u})"));
        }
    }
    TwoFrame::from_relations(worlds, r, e)
}

/// The quotient of a frame by `E`, ordered by `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    /// `E`-clusters ordered by least member.
    pub classes: Vec<WorldSet>,
    /// `[x] R0 [y]` iff `x Q y`, indexed by class position.
    pub r0: Relation,
}

impl Skeleton {
    pub(super) fn of(frame: &TwoFrame) -> Skeleton {
        let classes = frame.e_clusters();
        let q = frame.q_relation();
        let k = classes.len();
        let mut r0 = Relation::empty(k);
        for (i, ci) in classes.iter().enumerate() {
            let img = q.image_of(*ci);
            for (j, cj) in classes.iter().enumerate() {
                if !(img & *cj).is_empty() {
                    r0.insert(i, j);
                }
            }
        }
        Skeleton { classes, r0 }
    }

    /// Least member of each class.
    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.first().unwrap()).collect()
    }

    /// `Q` is `E`-saturated on both sides so that `R0` does not depend on
    /// the chosen representatives.
    pub fn well_defined(frame: &TwoFrame) -> bool {
        let q = frame.q_relation();
        let e = frame.e();
        e.compose(&q).compose(e) == q
    }

    pub fn depth(&self) -> Result<usize, FrameError> {
        if !self.r0.is_transitive() {
            return Err(FrameError::NonTransitive);
        }
        Ok(longest_strict_chain(&self.r0, WorldSet::full(self.classes.len())))
    }

    /// The skeleton as a frame with `E` the identity.
    pub fn to_frame(&self, frame: &TwoFrame) -> TwoFrame {
        let worlds = self
            .classes
            .iter()
            .map(|c| {
                let names: Vec<&str> = c.iter().map(|i| frame.world_name(i)).collect();
                format!("[{}]", names.join(","))
            })
            .collect();
        TwoFrame::from_relations(worlds, self.r0.clone(), Relation::identity(self.classes.len()))
            .expect("skeleton is a valid frame")
    }
}

/// `f` is onto and `f(R[x]) = R'[f(x)]`, `f(E[x]) = E'[f(x)]` for every `x`.
pub fn is_pmorphism(f: &[usize], from: &TwoFrame, to: &TwoFrame) -> bool {
    if f.len() != from.size() || f.iter().any(|&y| y >= to.size()) {
        return false;
    }
    let image = |set: WorldSet| set.iter().map(|i| f[i]).collect::<WorldSet>();
    let onto = f.iter().copied().collect::<WorldSet>() == to.all();
    onto && (0..from.size()).all(|x| {
        image(from.r().image(x)) == to.r().image(f[x]) && image(from.e().image(x)) == to.e().image(f[x])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::fixtures::*;
    use crate::frame::Side;

    fn chain2() -> KripkeFrame {
        KripkeFrame::anonymous(Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)]))
    }

    fn cluster(n: usize) -> KripkeFrame {
        KripkeFrame::anonymous(Relation::total(n))
    }

    #[test]
    fn chain_times_cluster() {
        let p = product(&chain2(), &cluster(2)).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.e_clusters().len(), 2);
        assert!(p.e_clusters().iter().all(|c| c.len() == 2));
        assert!(p.satisfies_commutativity(Side::Left));
        assert!(p.satisfies_commutativity(Side::Right));
        // Same column: (w0,w0) R (w1,w0), never across columns.
        assert!(p.r().contains(0, 2));
        assert!(!p.r().contains(0, 3));
    }

    #[test]
    fn product_with_point_is_the_factor() {
        let f = KripkeFrame::anonymous(Relation::from_pairs(3, [(0, 1), (1, 2), (0, 2)]));
        let p = product(&f, &cluster(1)).unwrap();
        assert_eq!(p.r(), &f.r);
        assert_eq!(p.e(), &Relation::identity(3));
    }

    #[test]
    fn product_rejects_non_s5() {
        let g = KripkeFrame::anonymous(Relation::from_pairs(2, [(0, 1)]));
        assert_eq!(product(&chain2(), &g), Err(FrameError::NotS5));
    }

    #[test]
    fn refl_commutes_with_product_on_strict_chain() {
        let strict = KripkeFrame::anonymous(Relation::from_pairs(2, [(0, 1)]));
        let refl = KripkeFrame::anonymous(strict.r.close(crate::frame::ClosureKind::Reflexive));
        let g = cluster(2);
        assert_eq!(
            product(&strict, &g).unwrap().reflexivize(),
            product(&refl, &g).unwrap()
        );
    }

    #[test]
    fn sm4_is_chain_times_cluster() {
        // a=(bottom,0) b=(bottom,1) c=(top,1) d=(top,0)
        let p = product(&chain2(), &cluster(2)).unwrap();
        let f = [0usize, 1, 3, 2];
        assert!(is_pmorphism(&f, &sm4(), &p));
    }

    #[test]
    fn skeleton_examples() {
        let s = d2().e_skeleton();
        assert_eq!(s.classes.len(), 1);
        assert!(s.r0.contains(0, 0));

        let s = sm4().e_skeleton();
        assert_eq!(s.classes.len(), 2);
        assert_eq!(s.r0, Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)]));
        assert_eq!(s.depth(), Ok(2));

        let f = TwoFrame::anonymous(Relation::from_pairs(3, [(0, 1), (1, 2)]), Relation::identity(3)).unwrap();
        assert_eq!(&f.e_skeleton().r0, f.r());
        assert!(Skeleton::well_defined(&sm4()));
    }

    #[test]
    fn pmorphism_examples() {
        let id: Vec<usize> = (0..4).collect();
        assert!(is_pmorphism(&id, &sm4(), &sm4()));
        // D2 onto a reflexive point with total E.
        assert!(is_pmorphism(&[0, 0], &d2(), &point()));
        // SM4's clusters collapse onto a 2-chain with E = identity.
        let chain = TwoFrame::anonymous(chain2().r, Relation::identity(2)).unwrap();
        assert!(is_pmorphism(&[0, 0, 1, 1], &sm4(), &chain));
        // Not onto.
        assert!(!is_pmorphism(&[0, 0, 0, 0], &sm4(), &chain));
        // Forth condition fails: a sees d, but the image of a sees no top.
        assert!(!is_pmorphism(&[0, 1, 1, 0], &sm4(), &chain));
    }
}
