//! Coloring checkers. Two are provided, written independently, so each can
//! be tested against the other.

use serde::Serialize;

use crate::coloring::Coloring;
use crate::matroid::Matroid;
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { reason: String, class: Option<usize>, matroid: Option<usize>, size: usize, rank: usize },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    fn fail(reason: impl Into<String>) -> Verdict {
        Verdict::Fail { reason: reason.into(), class: None, matroid: None, size: 0, rank: 0 }
    }
}

/// Checks that the classes partition `target` and that each is independent
/// in every matroid; a dependent class is reported with its rank.
pub fn verify_coloring(ms: &[Matroid], coloring: &Coloring, target: &Subset) -> Verdict {
    let mut seen = Subset::empty(target.universe());
    for (ci, class) in coloring.classes.iter().enumerate() {
        if class.universe() != target.universe() {
            return Verdict::fail(format!("class {ci} is over a different universe"));
        }
        if !class.is_disjoint(&seen) {
            return Verdict::fail(format!("class {ci} overlaps an earlier class"));
        }
        if !class.is_subset(target) {
            return Verdict::fail(format!("class {ci} has elements outside the target"));
        }
        seen.union_with(class);
        for (mi, m) in ms.iter().enumerate() {
            if m.universe() != class.universe() || !class.is_subset(m.ground()) {
                return Verdict::fail(format!("class {ci} is not inside the ground set of matroid {mi}"));
            }
            let rank = m.r(class);
            if rank < class.len() {
                return Verdict::Fail {
                    reason: "dependent class".into(),
                    class: Some(ci),
                    matroid: Some(mi),
                    size: class.len(),
                    rank,
                };
            }
        }
    }
    if seen != *target {
        return Verdict::fail(format!("{} target elements are uncovered", target.difference(&seen).len()));
    }
    Verdict::Pass
}

/// Second checker: counts how often each element is colored, then rebuilds
/// every class one element at a time and tests independence incrementally,
/// walking classes and matroids in reverse.
pub fn verify_coloring_alt(ms: &[Matroid], coloring: &Coloring, target: &Subset) -> bool {
    let n = target.universe();
    let mut count = vec![0usize; n];
    for class in coloring.classes.iter().rev() {
        if class.universe() != n {
            return false;
        }
        for e in class.to_vec().into_iter().rev() {
            count[e] += 1;
        }
    }
    for (e, &c) in count.iter().enumerate() {
        let want = usize::from(target.contains(e));
        if c != want {
            return false;
        }
    }
    for class in coloring.classes.iter().rev() {
        for m in ms.iter().rev() {
            if m.universe() != n {
                return false;
            }
            let mut built = Subset::empty(n);
            for e in class.to_vec().into_iter().rev() {
                if !m.ground().contains(e) {
                    return false;
                }
                built.insert(e);
                if !m.indep(&built) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singletons_pass() {
        let m = Matroid::uniform(3, 1).unwrap();
        let c = Coloring::new((0..3).map(|e| Subset::singleton(3, e)).collect());
        assert!(verify_coloring(&[m.clone()], &c, &Subset::full(3)).passed());
        assert!(verify_coloring_alt(&[m], &c, &Subset::full(3)));
    }

    #[test]
    fn circuit_reported() {
        let k3 = Matroid::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = Coloring::new(vec![Subset::full(3)]);
        match verify_coloring(&[Matroid::free(3), k3.clone()], &c, &Subset::full(3)) {
            Verdict::Fail { class, matroid, size, rank, .. } => {
                assert_eq!((class, matroid, size, rank), (Some(0), Some(1), 3, 2));
            }
            Verdict::Pass => panic!(),
        }
        assert!(!verify_coloring_alt(&[k3], &c, &Subset::full(3)));
    }

    #[test]
    fn overlap_and_gap_fail() {
        let f = Matroid::free(3);
        let overlap = Coloring::new(vec![Subset::from_ids(3, [0, 1]), Subset::from_ids(3, [1, 2])]);
        let gap = Coloring::new(vec![Subset::from_ids(3, [0, 1])]);
        for c in [overlap, gap] {
            assert!(!verify_coloring(&[f.clone()], &c, &Subset::full(3)).passed());
            assert!(!verify_coloring_alt(&[f.clone()], &c, &Subset::full(3)));
        }
    }
}
