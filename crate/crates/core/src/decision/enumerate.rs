use super::{DecisionError, SearchConfig};
use crate::frame::{frame_class_check, Base, LogicId, Relation, TwoFrame};

/// Every equivalence relation on `n` points, via restricted-growth strings.
pub fn equivalences(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    let mut block = vec![0usize; n];
    fn go(i: usize, max: usize, block: &mut Vec<usize>, out: &mut Vec<Relation>) {
        let n = block.len();
        if i == n {
            let mut e = Relation::empty(n);
            for a in 0..n {
                for b in 0..n {
                    if block[a] == block[b] {
                        e.insert(a, b);
                    }
                }
            }
            out.push(e);
            return;
        }
        for b in 0..=max + 1 {
            block[i] = b;
            go(i + 1, max.max(b), block, out);
        }
    }
    if n == 0 {
        return out;
    }
    block[0] = 0;
    go(1, 0, &mut block, &mut out);
    out
}

/// How the diagonal of `R` is constrained for a base class.
fn diagonal(base: Base) -> Option<bool> {
    match base {
        Base::MK => None,
        Base::MS4 | Base::MGrz | Base::MPlusGrz => Some(true),
        Base::MGL => Some(false),
    }
}

/// Candidate accessibility relations for a class, before commutativity
/// and depth filtering. Optionally restricted to transitive relations.
pub(crate) fn relations(
    n: usize,
    base: Base,
    force_transitive: bool,
    config: &SearchConfig,
) -> Result<Vec<Relation>, DecisionError> {
    let diag = diagonal(base);
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| diag.is_none() || a != b)
        .collect();
    if free.len() >= 64 || (1u64 << free.len()) > config.enumeration_budget {
        return Err(DecisionError::BudgetExceeded(format!(
            "2^{} candidate relations on {n} worlds exceed the enumeration budget of {}",
            free.len(),
            config.enumeration_budget
        )));
    }
    let transitive = force_transitive || base.transitive();
    let mut out = Vec::new();
    for bits in 0..(1u64 << free.len()) {
        let mut r = if diag == Some(true) { Relation::identity(n) } else { Relation::empty(n) };
        for (k, &(a, b)) in free.iter().enumerate() {
            if bits >> k & 1 == 1 {
                r.insert(a, b);
            }
        }
        let keep = match base {
            Base::MGrz | Base::MPlusGrz => r.is_partial_order(),
            _ => !transitive || r.is_transitive(),
        };
        if keep {
            out.push(r);
        }
    }
    Ok(out)
}

/// Sort key: `R` row-major, then `E` row-major.
pub fn frame_code(frame: &TwoFrame) -> u128 {
    let n2 = frame.size() * frame.size();
    ((frame.r().code() as u128) << n2) | frame.e().code() as u128
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn code_under(frame: &TwoFrame, perm: &[usize]) -> u128 {
    let n = frame.size();
    let n2 = n * n;
    let mut code = 0u128;
    for (a, b) in frame.r().pairs() {
        code |= 1u128 << (n2 + perm[a] * n + perm[b]);
    }
    for (a, b) in frame.e().pairs() {
        code |= 1u128 << (perm[a] * n + perm[b]);
    }
    code
}

/// Least code over all relabellings; two frames are isomorphic iff their
/// canonical codes agree.
pub fn canonical_code(frame: &TwoFrame) -> u128 {
    permutations(frame.size())
        .iter()
        .map(|p| code_under(frame, p))
        .min()
        .unwrap()
}

pub(crate) fn iso_filter(frames: Vec<TwoFrame>) -> Vec<TwoFrame> {
    let Some(first) = frames.first() else {
        return frames;
    };
    let perms = permutations(first.size());
    frames
        .into_iter()
        .filter(|f| {
            let own = frame_code(f);
            perms.iter().all(|p| code_under(f, p) >= own)
        })
        .collect()
}

fn check_size(size: usize, config: &SearchConfig) -> Result<(), DecisionError> {
    if size == 0 {
        return Err(DecisionError::EmptyCarrier);
    }
    if size > config.size_cap {
        return Err(DecisionError::BudgetExceeded(format!(
            "size {size} exceeds the size cap of {}",
            config.size_cap
        )));
    }
    Ok(())
}

/// Calls `visit` on every frame of one size built from the candidate
/// relations for `base` and every equivalence, in generation order.
pub(crate) fn visit_frames(
    size: usize,
    base: Base,
    force_transitive: bool,
    config: &SearchConfig,
    mut visit: impl FnMut(TwoFrame) -> Result<(), DecisionError>,
) -> Result<(), DecisionError> {
    check_size(size, config)?;
    let es = equivalences(size);
    for r in relations(size, base, force_transitive, config)? {
        for e in &es {
            visit(TwoFrame::anonymous(r.clone(), e.clone()).expect("valid carrier"))?;
        }
    }
    Ok(())
}

/// All frames of one size satisfying `keep`, in ascending code order.
pub(crate) fn enumerate_where(
    size: usize,
    base: Base,
    force_transitive: bool,
    modulo_iso: bool,
    config: &SearchConfig,
    keep: impl Fn(&TwoFrame) -> bool,
) -> Result<Vec<TwoFrame>, DecisionError> {
    let mut out = Vec::new();
    visit_frames(size, base, force_transitive, config, |f| {
        if keep(&f) {
            out.push(f);
        }
        Ok(())
    })?;
    out.sort_by_cached_key(frame_code);
    Ok(if modulo_iso { iso_filter(out) } else { out })
}

/// Frames of exactly `size` worlds (named `w0, w1, ...`) in the class
/// `logic`, in ascending code order; with `modulo_iso`, only the
/// least-coded member of each isomorphism class.
pub fn enumerate_frames(
    size: usize,
    logic: &LogicId,
    modulo_iso: bool,
    config: &SearchConfig,
) -> Result<Vec<TwoFrame>, DecisionError> {
    enumerate_where(size, logic.base, false, modulo_iso, config, |f| frame_class_check(f, logic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::fixtures::d2;

    fn config() -> SearchConfig {
        SearchConfig::default()
    }

    /// Every pair of relations, filtered by the class predicate.
    fn naive_count(n: usize, logic: &LogicId) -> usize {
        let mut count = 0;
        for r in 0..(1u64 << (n * n)) {
            for e in 0..(1u64 << (n * n)) {
                let e = Relation::from_code(n, e);
                if !e.is_equivalence() {
                    continue;
                }
                let f = TwoFrame::anonymous(Relation::from_code(n, r), e).unwrap();
                if frame_class_check(&f, logic) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| equivalences(n).len()).collect();
        assert_eq!(counts, [1, 2, 5, 15, 52, 203]);
        assert!(equivalences(4).iter().all(Relation::is_equivalence));
    }

    #[test]
    fn size_one_mgrzb() {
        let fs = enumerate_frames(1, &"MGrzB".parse().unwrap(), false, &config()).unwrap();
        assert_eq!(fs.len(), 1);
        assert!(fs[0].r().is_reflexive());
    }

    #[test]
    fn size_two_mgl_matches_oracle() {
        let l: LogicId = "MGL".parse().unwrap();
        let fs = enumerate_frames(2, &l, false, &config()).unwrap();
        assert_eq!(fs.len(), naive_count(2, &l));
    }

    #[test]
    fn d2_is_a_representative() {
        let fs = enumerate_frames(2, &"MGrzB".parse().unwrap(), true, &config()).unwrap();
        let target = canonical_code(&d2());
        assert!(fs.iter().any(|f| canonical_code(f) == target));
        // The 2-chain with identity E is there too.
        let chain = TwoFrame::anonymous(d2().r().clone(), Relation::identity(2)).unwrap();
        assert!(fs.iter().any(|f| canonical_code(f) == canonical_code(&chain)));
        // Representatives are pairwise non-isomorphic.
        let mut codes: Vec<u128> = fs.iter().map(canonical_code).collect();
        codes.dedup();
        assert_eq!(codes.len(), fs.len());
    }

    #[test]
    fn counts_match_oracle_for_registry_up_to_three() {
        for logic in LogicId::registry(3) {
            for n in 1..=3 {
                let fs = enumerate_frames(n, &logic, false, &config()).unwrap();
                assert_eq!(fs.len(), naive_count(n, &logic), "{logic} at {n}");
            }
        }
    }

    #[test]
    fn output_is_sorted() {
        let fs = enumerate_frames(3, &"MS4".parse().unwrap(), false, &config()).unwrap();
        assert!(fs.windows(2).all(|w| frame_code(&w[0]) < frame_code(&w[1])));
    }

    #[test]
    fn iso_classes_partition_the_labelled_frames() {
        // Orbit sizes of representatives add up to the labelled count.
        let l: LogicId = "MGrz".parse().unwrap();
        let all = enumerate_frames(3, &l, false, &config()).unwrap();
        let reps = enumerate_frames(3, &l, true, &config()).unwrap();
        let perms = permutations(3);
        let orbit_total: usize = reps
            .iter()
            .map(|f| {
                let mut codes: Vec<u128> = perms.iter().map(|p| code_under(f, p)).collect();
                codes.sort();
                codes.dedup();
                codes.len()
            })
            .sum();
        assert_eq!(orbit_total, all.len());
    }

    #[test]
    fn caps_are_enforced() {
        let cfg = config();
        assert!(matches!(
            enumerate_frames(6, &"MGrz".parse().unwrap(), false, &cfg),
            Err(DecisionError::BudgetExceeded(_))
        ));
        assert!(matches!(
            enumerate_frames(5, &"MK".parse().unwrap(), false, &cfg),
            Err(DecisionError::BudgetExceeded(_))
        ));
    }
}
