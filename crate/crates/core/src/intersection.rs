//! Largest and heaviest common independent sets of two matroids.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::rational::Q;
use crate::subset::Subset;

/// Exchange graph of a common independent set `I`.
///
/// Arc `y -> x` (`y` in `I`, `x` outside) when `I - y + x` is independent in
/// the first matroid; arc `x -> y` when it is independent in the second.
/// Sources are the `x` with `I + x` independent in the first matroid, sinks
/// those with `I + x` independent in the second.
#[derive(Debug, Clone)]
pub struct ExchangeGraph {
    pub sources: Vec<usize>,
    pub sinks: Subset,
    pub out: Vec<Vec<usize>>,
}

pub fn check_shared(m1: &Matroid, m2: &Matroid) -> Result<()> {
    if m1.universe() != m2.universe() || m1.ground() != m2.ground() {
        return Err(Error::Domain("matroids do not share a ground set".into()));
    }
    Ok(())
}

/// Builds the exchange graph of `indep` restricted to the elements of `within`.
pub fn exchange_graph(m1: &Matroid, m2: &Matroid, indep: &Subset, within: &Subset) -> ExchangeGraph {
    let n = m1.universe();
    let f1 = m1.circuit_finder(indep);
    let f2 = m2.circuit_finder(indep);
    let mut out = vec![Vec::new(); n];
    let mut sources = Vec::new();
    let mut sinks = Subset::empty(n);
    for x in within.difference(indep).iter() {
        match f1.circuit(x) {
            None => sources.push(x),
            Some(c) => {
                for y in c.iter().filter(|&y| y != x) {
                    out[y].push(x);
                }
            }
        }
        match f2.circuit(x) {
            None => {
                sinks.insert(x);
            }
            Some(c) => out[x].extend(c.iter().filter(|&y| y != x)),
        }
    }
    ExchangeGraph { sources, sinks, out }
}

/// Maximum-cardinality common independent set via shortest augmenting paths.
pub fn max_common_independent(m1: &Matroid, m2: &Matroid) -> Result<Subset> {
    check_shared(m1, m2)?;
    Ok(max_common_within(m1, m2, m1.ground()))
}

pub(crate) fn max_common_within(m1: &Matroid, m2: &Matroid, within: &Subset) -> Subset {
    let n = m1.universe();
    let mut indep = Subset::empty(n);
    loop {
        let g = exchange_graph(m1, m2, &indep, within);
        let mut pred = vec![usize::MAX; n];
        let mut seen = Subset::empty(n);
        let mut queue = VecDeque::new();
        for &s in &g.sources {
            seen.insert(s);
            queue.push_back(s);
        }
        let mut end = None;
        while let Some(u) = queue.pop_front() {
            if g.sinks.contains(u) {
                end = Some(u);
                break;
            }
            for &v in &g.out[u] {
                if seen.insert(v) {
                    pred[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let Some(mut cur) = end else { return indep };
        loop {
            if indep.contains(cur) {
                indep.remove(cur);
            } else {
                indep.insert(cur);
            }
            if pred[cur] == usize::MAX {
                break;
            }
            cur = pred[cur];
        }
        debug_assert!(m1.indep(&indep) && m2.indep(&indep));
    }
}

/// Maximum-weight common independent set. Grows one element at a time along
/// shortest augmenting paths under node lengths (`w` inside, `-w` outside,
/// ties broken by fewer arcs) and keeps the heaviest set seen.
pub fn max_weight_common_independent(m1: &Matroid, m2: &Matroid, w: &[Q]) -> Result<Subset> {
    check_shared(m1, m2)?;
    if w.len() != m1.universe() {
        return Err(Error::Domain(format!("weight vector has length {} for universe {}", w.len(), m1.universe())));
    }
    let positive = Subset::from_ids(m1.universe(), m1.ground().iter().filter(|&e| w[e].is_positive()));
    Ok(max_weight_within(m1, m2, w, &positive))
}

pub(crate) fn max_weight_within(m1: &Matroid, m2: &Matroid, w: &[Q], within: &Subset) -> Subset {
    let n = m1.universe();
    let mut indep = Subset::empty(n);
    let mut best = indep.clone();
    let mut best_w = Q::zero();
    let mut cur_w = Q::zero();
    loop {
        let g = exchange_graph(m1, m2, &indep, within);
        let len = |v: usize| if indep.contains(v) { w[v].clone() } else { -w[v].clone() };
        let mut dist: Vec<Option<(Q, usize)>> = vec![None; n];
        let mut pred = vec![usize::MAX; n];
        for &s in &g.sources {
            dist[s] = Some((len(s), 0));
        }
        let nodes: Vec<usize> = within.iter().collect();
        for _ in 0..nodes.len() {
            let mut changed = false;
            for &u in &nodes {
                let Some((du, au)) = dist[u].clone() else { continue };
                for &v in &g.out[u] {
                    let cand = (&du + len(v), au + 1);
                    let better = match &dist[v] {
                        None => true,
                        Some((dv, av)) => cand.0 < *dv || (cand.0 == *dv && cand.1 < *av),
                    };
                    if better {
                        dist[v] = Some(cand);
                        pred[v] = u;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut end: Option<usize> = None;
        for t in g.sinks.iter() {
            if let Some(dt) = &dist[t] {
                let better = match end {
                    None => true,
                    Some(e) => {
                        let de = dist[e].as_ref().unwrap();
                        dt.0 < de.0 || (dt.0 == de.0 && dt.1 < de.1)
                    }
                };
                if better {
                    end = Some(t);
                }
            }
        }
        let Some(end) = end else { return best };
        let gain = -dist[end].as_ref().unwrap().0.clone();
        let mut cur = end;
        let mut steps = 0;
        loop {
            if indep.contains(cur) {
                indep.remove(cur);
            } else {
                indep.insert(cur);
            }
            steps += 1;
            if pred[cur] == usize::MAX || steps > n {
                break;
            }
            cur = pred[cur];
        }
        debug_assert!(m1.indep(&indep) && m2.indep(&indep));
        cur_w += gain;
        if cur_w > best_w {
            best_w = cur_w.clone();
            best = indep.clone();
        }
    }
}

/// Sum of `w` over `s`.
pub fn weight_of(w: &[Q], s: &Subset) -> Q {
    s.iter().fold(Q::zero(), |acc, e| acc + &w[e])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use proptest::prelude::*;

    fn k22() -> (Matroid, Matroid) {
        // edges u1v1, u1v2, u2v1, u2v2
        let left = Matroid::partition(4, &[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap();
        let right = Matroid::partition(4, &[vec![0, 2], vec![1, 3]], &[1, 1]).unwrap();
        (left, right)
    }

    fn brute(m1: &Matroid, m2: &Matroid, w: &[Q]) -> (usize, Q) {
        let n = m1.universe();
        let mut best = (0, Q::zero());
        for mask in 0u32..(1 << n) {
            let s = Subset::from_ids(n, (0..n).filter(|i| mask >> i & 1 == 1));
            if m1.indep(&s) && m2.indep(&s) {
                best.0 = best.0.max(s.len());
                let ws = weight_of(w, &s);
                if ws > best.1 {
                    best.1 = ws;
                }
            }
        }
        best
    }

    #[test]
    fn cardinality_examples() {
        let (a, b) = k22();
        assert_eq!(max_common_independent(&a, &b).unwrap().len(), 2);
        let k4 = Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let s = max_common_independent(&k4, &k4).unwrap();
        assert_eq!(s.len(), 3);
        let u = Matroid::uniform(5, 1).unwrap();
        assert_eq!(max_common_independent(&u, &Matroid::free(5)).unwrap().len(), 1);
        assert!(max_common_independent(&u, &Matroid::free(4)).is_err());
    }

    #[test]
    fn weighted_examples() {
        let (a, b) = k22();
        let w: Vec<Q> = [3, 1, 1, 3].iter().map(|&x| qi(x)).collect();
        let s = max_weight_common_independent(&a, &b, &w).unwrap();
        assert_eq!(s.to_vec(), vec![0, 3]);
        assert_eq!(weight_of(&w, &s), qi(6));
        let neg = vec![qi(-1); 4];
        assert!(max_weight_common_independent(&a, &b, &neg).unwrap().is_empty());
        let m = Matroid::uniform(4, 2).unwrap();
        let w: Vec<Q> = [1, 5, 2, 4].iter().map(|&x| qi(x)).collect();
        assert_eq!(max_weight_common_independent(&m, &m, &w).unwrap().to_vec(), vec![1, 3]);
    }

    fn arb_pair() -> impl Strategy<Value = (Matroid, Matroid, Vec<i64>)> {
        (3usize..11).prop_flat_map(|n| {
            (
                proptest::collection::vec((0usize..5, 0usize..5), n),
                proptest::collection::vec(0usize..4, n),
                proptest::collection::vec(-3i64..8, n),
            )
                .prop_filter_map("loopless", move |(es, assign, w)| {
                    if es.iter().any(|(a, b)| a == b) {
                        return None;
                    }
                    let g = Matroid::graphic(5, &es).unwrap();
                    let mut parts = vec![Vec::new(); 4];
                    for (e, &p) in assign.iter().enumerate() {
                        parts[p].push(e);
                    }
                    let p = Matroid::partition(n, &parts, &[1, 2, 1, 1]).unwrap();
                    Some((g, p, w))
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn matches_enumeration((m1, m2, w) in arb_pair()) {
            let w: Vec<Q> = w.into_iter().map(qi).collect();
            let (card, weight) = brute(&m1, &m2, &w);
            let s = max_common_independent(&m1, &m2).unwrap();
            prop_assert!(m1.indep(&s) && m2.indep(&s));
            prop_assert_eq!(s.len(), card);
            let t = max_weight_common_independent(&m1, &m2, &w).unwrap();
            prop_assert!(m1.indep(&t) && m2.indep(&t));
            prop_assert_eq!(weight_of(&w, &t), weight);
            let ones = vec![qi(1); m1.universe()];
            prop_assert_eq!(max_weight_common_independent(&m1, &m2, &ones).unwrap().len(), card);
        }
    }
}
