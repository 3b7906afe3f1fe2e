//! Membership, separation and tight sets for matroid polytopes
//! `{x >= 0 : x(S) <= rank(S) for all S}`.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::colgen::{convex_combination, ColumnOutcome};
use crate::matroid::{Incremental, Matroid};
use crate::rational::{qu, Q};
use crate::subset::Subset;
use crate::union::BRUTE_FORCE_CAP;

/// Supports up to this size are handled by enumeration; larger ones by
/// column generation against the greedy algorithm.
pub const ENUMERATION_LIMIT: usize = 4;

pub fn sum_over(x: &[Q], s: &Subset) -> Q {
    s.iter().fold(Q::zero(), |acc, e| acc + &x[e])
}

/// Elements of `within` with positive value, ascending.
pub fn support_in(within: &Subset, x: &[Q]) -> Vec<usize> {
    within.iter().filter(|&e| x[e].is_positive()).collect()
}

fn subsets_of(universe: usize, ids: &[usize]) -> impl Iterator<Item = Subset> + '_ {
    (1u64..(1u64 << ids.len()))
        .map(move |mask| Subset::from_ids(universe, (0..ids.len()).filter(|i| mask >> i & 1 == 1).map(|i| ids[i])))
}

fn refuse_large(len: usize) -> Result<()> {
    if len > BRUTE_FORCE_CAP {
        return Err(Error::Refusal(format!(
            "enumeration over {len} support elements exceeds the cap of {BRUTE_FORCE_CAP}"
        )));
    }
    Ok(())
}

/// Most violated rank constraint inside `comp` by enumeration (ties: smaller
/// set, then lexicographic). Only the support of `x` is enumerated; elements
/// with `x_e = 0` never make a violation larger.
pub fn separate_brute(m: &Matroid, comp: &Subset, x: &[Q]) -> Result<Option<Subset>> {
    let supp = support_in(comp, x);
    refuse_large(supp.len())?;
    let mut best: Option<(Q, Subset)> = None;
    for s in subsets_of(m.universe(), &supp) {
        let v = sum_over(x, &s) - qu(m.r(&s));
        if !v.is_positive() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bv, bs)) => v > *bv || (v == *bv && s.cmp_size_lex(bs).is_lt()),
        };
        if better {
            best = Some((v, s));
        }
    }
    Ok(best.map(|(_, s)| s))
}

/// Smallest (then lexicographically first) nonempty `S` inside `comp` with
/// `x(S) = rank(S)`, excluding the whole live ground set. `x` must lie in the
/// polytope; then such a smallest set avoids the zeros of `x`.
pub fn tight_set_brute(m: &Matroid, comp: &Subset, x: &[Q]) -> Result<Option<Subset>> {
    let supp = support_in(comp, x);
    refuse_large(supp.len())?;
    let mut best: Option<Subset> = None;
    for s in subsets_of(m.universe(), &supp) {
        if s == *m.ground() || sum_over(x, &s) != qu(m.r(&s)) {
            continue;
        }
        if best.as_ref().is_none_or(|b| s.cmp_size_lex(b).is_lt()) {
            best = Some(s);
        }
    }
    Ok(best)
}

/// Tries to write `x` restricted to `comp` as a convex combination of
/// independent sets, pricing with the greedy algorithm.
pub fn decompose_in_matroid(m: &Matroid, comp: &Subset, x: &[Q]) -> Result<ColumnOutcome> {
    let supp = support_in(comp, x);
    let n = m.universe();
    convex_combination(n, &supp, x, |duals| {
        let mut order: Vec<usize> = supp.iter().copied().filter(|&e| duals[e].is_positive()).collect();
        order.sort_by(|&a, &b| duals[b].cmp(&duals[a]).then(a.cmp(&b)));
        let mut inc = Incremental::new(m);
        Subset::from_ids(n, order.into_iter().filter(|&e| inc.try_add(e)))
    })
}

/// Turns separating duals into a violated rank constraint: some prefix of
/// the elements sorted by decreasing positive dual is violated.
fn level_set_cut(m: &Matroid, supp: &[usize], x: &[Q], duals: &[Q]) -> Result<Subset> {
    let mut order: Vec<usize> = supp.iter().copied().filter(|&e| duals[e].is_positive()).collect();
    order.sort_by(|&a, &b| duals[b].cmp(&duals[a]).then(a.cmp(&b)));
    let mut s = Subset::empty(m.universe());
    let mut best: Option<(Q, Subset)> = None;
    let mut xs = Q::zero();
    for e in order {
        s.insert(e);
        xs += &x[e];
        let v = &xs - qu(m.r(&s));
        if v.is_positive() && best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, s.clone()));
        }
    }
    best.map(|(_, s)| s)
        .ok_or_else(|| Error::Invariant("separating duals yield no violated level set".into()))
}

/// A violated rank constraint of `x` inside the component `comp`, if any.
pub fn separate_component(m: &Matroid, comp: &Subset, x: &[Q]) -> Result<Option<Subset>> {
    let supp = support_in(comp, x);
    if supp.is_empty() {
        return Ok(None);
    }
    if supp.len() <= ENUMERATION_LIMIT {
        return separate_brute(m, comp, x);
    }
    match decompose_in_matroid(m, comp, x)? {
        ColumnOutcome::Combination(_) => Ok(None),
        ColumnOutcome::Separated { duals } => level_set_cut(m, &supp, x, &duals).map(Some),
    }
}

fn check_point(m: &Matroid, x: &[Q]) -> Result<()> {
    if x.len() != m.universe() {
        return Err(Error::Domain(format!("point of length {} for universe {}", x.len(), m.universe())));
    }
    for (e, v) in x.iter().enumerate() {
        if v.is_negative() || (!v.is_zero() && !m.ground().contains(e)) {
            return Err(Error::Domain(format!("coordinate {e} is negative or outside the live ground set")));
        }
    }
    Ok(())
}

/// One violated set per violated direct-sum component.
pub fn violated_sets(m: &Matroid, x: &[Q]) -> Result<Vec<Subset>> {
    check_point(m, x)?;
    let mut out = Vec::new();
    for comp in m.components() {
        if let Some(s) = separate_component(m, &comp, x)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// A violated constraint `x(S) > rank(S)`: the most violated over components
/// (ties: smaller, then lexicographic), or `None` when `x` is in the polytope.
pub fn separate_matroid_polytope(m: &Matroid, x: &[Q]) -> Result<Option<Subset>> {
    let sets = violated_sets(m, x)?;
    let mut best: Option<(Q, Subset)> = None;
    for s in sets {
        let v = sum_over(x, &s) - qu(m.r(&s));
        let better = match &best {
            None => true,
            Some((bv, bs)) => v > *bv || (v == *bv && s.cmp_size_lex(bs).is_lt()),
        };
        if better {
            best = Some((v, s));
        }
    }
    Ok(best.map(|(_, s)| s))
}

pub fn in_matroid_polytope(m: &Matroid, x: &[Q]) -> Result<bool> {
    Ok(separate_matroid_polytope(m, x)?.is_none())
}

/// Least tight set containing `e`, given a decomposition of `x` into
/// independent sets: closes `{e}` under adding the fundamental circuit of
/// every member with respect to every set that misses it.
fn least_tight_containing(m: &Matroid, sets: &[Subset], finders: &[crate::matroid::CircuitFinder], e: usize) -> Option<Subset> {
    let mut s = Subset::singleton(m.universe(), e);
    let mut queue = VecDeque::from([e]);
    while let Some(y) = queue.pop_front() {
        for (set, f) in sets.iter().zip(finders) {
            if set.contains(y) {
                continue;
            }
            let c = f.circuit(y)?;
            for z in c.iter() {
                if s.insert(z) {
                    queue.push_back(z);
                }
            }
        }
    }
    Some(s)
}

/// Smallest tight set inside `comp` (see [`tight_set_brute`]) for a point in
/// the polytope, found through a convex decomposition.
pub fn tight_set_component(m: &Matroid, comp: &Subset, x: &[Q]) -> Result<Option<Subset>> {
    let supp = support_in(comp, x);
    if supp.is_empty() {
        return Ok(None);
    }
    if supp.len() <= ENUMERATION_LIMIT {
        return tight_set_brute(m, comp, x);
    }
    let combo = match decompose_in_matroid(m, comp, x)? {
        ColumnOutcome::Combination(c) => c,
        ColumnOutcome::Separated { .. } => {
            return Err(Error::Domain("tight-set search on a point outside the polytope".into()))
        }
    };
    if combo.iter().any(|(s, _)| s.is_empty()) {
        return Ok(None);
    }
    let sets: Vec<Subset> = combo.into_iter().map(|(s, _)| s).collect();
    let finders: Vec<_> = sets.iter().map(|s| m.circuit_finder(s)).collect();
    let mut best: Option<Subset> = None;
    for &e in &supp {
        if best.as_ref().is_some_and(|b| b.contains(e)) {
            continue;
        }
        if let Some(t) = least_tight_containing(m, &sets, &finders, e) {
            if t != *m.ground() && best.as_ref().is_none_or(|b| t.cmp_size_lex(b).is_lt()) {
                best = Some(t);
            }
        }
    }
    Ok(best)
}

/// Smallest proper nonempty tight set of `x` over all components.
pub fn find_tight_set(m: &Matroid, x: &[Q]) -> Result<Option<Subset>> {
    check_point(m, x)?;
    let mut best: Option<Subset> = None;
    for comp in m.components() {
        if let Some(t) = tight_set_component(m, &comp, x)? {
            if best.as_ref().is_none_or(|b| t.cmp_size_lex(b).is_lt()) {
                best = Some(t);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::colgen::reconstructs;
    use crate::rational::{q, qi};
    use crate::union::chromatic_number;
    use proptest::prelude::*;

    fn k3() -> Matroid {
        Matroid::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn separation_examples() {
        let m = k3();
        let x = vec![q(3, 5), q(3, 5), q(9, 10)];
        assert_eq!(separate_matroid_polytope(&m, &x).unwrap().unwrap().len(), 3);
        assert_eq!(separate_matroid_polytope(&m, &vec![qi(0); 3]).unwrap(), None);
        let k4 = Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let (chi, _) = chromatic_number(&k4);
        for qq in chi..chi + 3 {
            let x = vec![q(1, qq as i64); 6];
            assert_eq!(separate_matroid_polytope(&k4, &x).unwrap(), None);
        }
        assert!(separate_matroid_polytope(&k4, &vec![q(1, 1); 6]).unwrap().is_some());
    }

    #[test]
    fn tight_examples() {
        let m = k3();
        assert_eq!(find_tight_set(&m, &vec![qi(0); 3]).unwrap(), None);
        let x = vec![qi(1), qi(1), qi(0)];
        assert_eq!(find_tight_set(&m, &x).unwrap().unwrap().to_vec(), vec![0]);
        assert_eq!(find_tight_set(&m, &vec![q(1, 2); 3]).unwrap(), None);
    }

    #[test]
    fn refusal_over_cap() {
        let m = Matroid::free(30);
        let x = vec![q(1, 2); 30];
        assert!(matches!(separate_brute(&m, m.ground(), &x), Err(Error::Refusal(_))));
        // The column-generation path still answers.
        assert_eq!(separate_matroid_polytope(&m, &x).unwrap(), None);
    }

    fn arb_point() -> impl Strategy<Value = (Matroid, Vec<Q>)> {
        (6usize..12).prop_flat_map(|n| {
            (
                proptest::collection::vec((0usize..5, 0usize..5), n),
                proptest::collection::vec(0i64..5, n),
                1i64..5,
            )
                .prop_filter_map("loopless", |(es, num, den)| {
                    if es.iter().any(|(a, b)| a == b) {
                        return None;
                    }
                    let m = Matroid::graphic(5, &es).unwrap();
                    let x = num.into_iter().map(|v| q(v, den + 2)).collect();
                    Some((m, x))
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn column_generation_agrees_with_enumeration((m, x) in arb_point()) {
            let comp = m.ground().clone();
            let brute = separate_brute(&m, &comp, &x).unwrap();
            match decompose_in_matroid(&m, &comp, &x).unwrap() {
                ColumnOutcome::Combination(c) => {
                    prop_assert!(brute.is_none());
                    prop_assert!(reconstructs(m.universe(), &c, &x));
                    prop_assert!(c.iter().all(|(s, _)| m.indep(s)));
                    // the decomposition-based tight set equals the enumerated one
                    let supp = support_in(&comp, &x);
                    let sets: Vec<Subset> = c.iter().map(|(s, _)| s.clone()).collect();
                    let expected = tight_set_brute(&m, &comp, &x).unwrap();
                    let got = if sets.iter().any(|s| s.is_empty()) {
                        None
                    } else {
                        let finders: Vec<_> = sets.iter().map(|s| m.circuit_finder(s)).collect();
                        let mut best: Option<Subset> = None;
                        for &e in &supp {
                            if let Some(t) = least_tight_containing(&m, &sets, &finders, e) {
                                if t != *m.ground() && best.as_ref().is_none_or(|b| t.cmp_size_lex(b).is_lt()) {
                                    best = Some(t);
                                }
                            }
                        }
                        best
                    };
                    prop_assert_eq!(got, expected);
                }
                ColumnOutcome::Separated { duals } => {
                    prop_assert!(brute.is_some());
                    let s = level_set_cut(&m, &support_in(&comp, &x), &x, &duals).unwrap();
                    prop_assert!(sum_over(&x, &s) > qu(m.r(&s)));
                }
            }
        }
    }
}
