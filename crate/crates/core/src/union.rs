//! Covering a matroid by the fewest independent sets (matroid partition).

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::matroid::{CircuitFinder, Incremental, Matroid};
use crate::rational::Q;
use crate::subset::Subset;

/// Ground-set elements above which brute-force routines refuse to run.
pub const BRUTE_FORCE_CAP: usize = 24;

/// `t` disjoint independent classes covering the live ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub classes: Vec<Subset>,
}

impl PartitionCertificate {
    pub fn t(&self) -> usize {
        self.classes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionOutcome {
    Feasible(PartitionCertificate),
    /// A set `S` with `|S| > t * rank(S)`.
    Infeasible(Subset),
}

struct Partitioner<'a> {
    m: &'a Matroid,
    classes: Vec<Subset>,
    owner: Vec<Option<usize>>,
    finders: Vec<Option<CircuitFinder>>,
}

impl<'a> Partitioner<'a> {
    fn new(m: &'a Matroid, t: usize) -> Self {
        let n = m.universe();
        let mut p = Partitioner {
            m,
            classes: vec![Subset::empty(n); t],
            owner: vec![None; n],
            finders: (0..t).map(|_| None).collect(),
        };
        let mut incs: Vec<Incremental> = (0..t).map(|_| Incremental::new(m)).collect();
        for e in m.ground().iter() {
            if let Some(j) = (0..t).find(|&j| incs[j].try_add(e)) {
                p.classes[j].insert(e);
                p.owner[e] = Some(j);
            }
        }
        p
    }

    fn add_class(&mut self) {
        self.classes.push(Subset::empty(self.m.universe()));
        self.finders.push(None);
    }

    fn finder(&mut self, j: usize) -> &CircuitFinder {
        if self.finders[j].is_none() {
            self.finders[j] = Some(self.m.circuit_finder(&self.classes[j]));
        }
        self.finders[j].as_ref().unwrap()
    }

    /// Shortest augmenting path from the uncovered element `s`. On failure
    /// returns the set reachable from `s`.
    fn augment(&mut self, s: usize) -> std::result::Result<(), Subset> {
        let n = self.m.universe();
        let t = self.classes.len();
        let mut reached = Subset::singleton(n, s);
        let mut pred: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); n];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for j in 0..t {
                if self.owner[x] == Some(j) {
                    continue;
                }
                match self.finder(j).circuit(x) {
                    None => {
                        self.apply(x, j, &pred);
                        return Ok(());
                    }
                    Some(c) => {
                        for y in c.iter() {
                            if y != x && !reached.contains(y) {
                                reached.insert(y);
                                pred[y] = (x, j);
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        Err(reached)
    }

    fn apply(&mut self, end: usize, class: usize, pred: &[(usize, usize)]) {
        let mut moves = vec![(end, class)];
        let mut cur = end;
        while pred[cur].0 != usize::MAX {
            let (x, j) = pred[cur];
            moves.push((x, j));
            cur = x;
        }
        for &(e, _) in &moves {
            if let Some(old) = self.owner[e] {
                self.classes[old].remove(e);
                self.finders[old] = None;
            }
        }
        for &(e, j) in &moves {
            self.classes[j].insert(e);
            self.owner[e] = Some(j);
            self.finders[j] = None;
        }
        debug_assert!(moves.iter().all(|&(_, j)| self.m.indep(&self.classes[j])));
    }

    fn uncovered(&self) -> Vec<usize> {
        self.m.ground().iter().filter(|&e| self.owner[e].is_none()).collect()
    }

    /// Covers every element or returns an infeasibility witness.
    fn run(&mut self) -> std::result::Result<(), Subset> {
        for e in self.uncovered() {
            self.augment(e)?;
        }
        Ok(())
    }
}

/// Partitions the live ground set into `t` independent sets, or proves it
/// impossible with a set `S` satisfying `|S| > t * rank(S)`.
pub fn matroid_partition(m: &Matroid, t: usize) -> Result<PartitionOutcome> {
    if t == 0 {
        return Err(Error::Contract("matroid partition needs t >= 1".into()));
    }
    let mut p = Partitioner::new(m, t);
    match p.run() {
        Ok(()) => Ok(PartitionOutcome::Feasible(PartitionCertificate { classes: p.classes })),
        Err(witness) => {
            debug_assert!(witness.len() > t * m.r(&witness));
            Ok(PartitionOutcome::Infeasible(witness))
        }
    }
}

/// Least number of independent sets covering the live ground set, with a
/// certificate. Starts from `ceil(n / rank)` and grows the class count, reusing
/// the partial partition.
pub fn chromatic_number(m: &Matroid) -> (usize, PartitionCertificate) {
    let n = m.ground().len();
    if n == 0 {
        return (0, PartitionCertificate { classes: vec![] });
    }
    let mut t = n.div_ceil(m.full_rank());
    let mut p = Partitioner::new(m, t);
    loop {
        match p.run() {
            Ok(()) => return (t, PartitionCertificate { classes: p.classes }),
            Err(witness) => {
                let lower = witness.len().div_ceil(m.r(&witness));
                debug_assert!(lower > t);
                while t < lower {
                    p.add_class();
                    t += 1;
                }
            }
        }
    }
}

/// Density `|S| / rank(S)` maximized by brute force over the live ground
/// set; ties go to smaller `|S|`, then lexicographically smaller `S`.
pub fn max_density_witness(m: &Matroid) -> Result<(Subset, Q)> {
    let ids = m.ground().to_vec();
    if ids.len() > BRUTE_FORCE_CAP {
        return Err(Error::Refusal(format!(
            "density search over {} elements exceeds the cap of {BRUTE_FORCE_CAP}",
            ids.len()
        )));
    }
    let mut best: Option<(Subset, Q)> = None;
    for mask in 1u64..(1u64 << ids.len()) {
        let s = Subset::from_ids(m.universe(), (0..ids.len()).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]));
        let d = Q::new(s.len().into(), m.r(&s).into());
        let better = match &best {
            None => true,
            Some((bs, bd)) => d > *bd || (d == *bd && s.cmp_size_lex(bs).is_lt()),
        };
        if better {
            best = Some((s, d));
        }
    }
    Ok(best.unwrap_or_else(|| (Subset::empty(m.universe()), Q::from_integer(0.into()))))
}

/// Checks that a certificate partitions the live ground set into independent sets.
pub fn certificate_is_valid(m: &Matroid, cert: &PartitionCertificate) -> bool {
    let mut seen = Subset::empty(m.universe());
    for c in &cert.classes {
        if !c.is_disjoint(&seen) || !c.is_subset(m.ground()) || !m.indep(c) {
            return false;
        }
        seen.union_with(c);
    }
    seen == *m.ground()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn k4() -> Matroid {
        Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn brute_chi(m: &Matroid) -> usize {
        let ids = m.ground().to_vec();
        let mut best = 0;
        for mask in 1u64..(1 << ids.len()) {
            let s = Subset::from_ids(m.universe(), (0..ids.len()).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]));
            best = best.max(s.len().div_ceil(m.r(&s)));
        }
        best
    }

    #[test]
    fn partition_examples() {
        let free = Matroid::free(4);
        match matroid_partition(&free, 1).unwrap() {
            PartitionOutcome::Feasible(c) => assert_eq!(c.classes[0].len(), 4),
            _ => panic!(),
        }
        let u13 = Matroid::uniform(3, 1).unwrap();
        match matroid_partition(&u13, 3).unwrap() {
            PartitionOutcome::Feasible(c) => {
                assert!(c.classes.iter().all(|s| s.len() == 1));
                assert!(certificate_is_valid(&u13, &c));
            }
            _ => panic!(),
        }
        match matroid_partition(&k4(), 2).unwrap() {
            PartitionOutcome::Feasible(c) => assert!(certificate_is_valid(&k4(), &c)),
            _ => panic!(),
        }
        match matroid_partition(&u13, 2).unwrap() {
            PartitionOutcome::Infeasible(s) => assert!(s.len() > 2 * u13.r(&s)),
            _ => panic!(),
        }
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&Matroid::uniform(5, 2).unwrap()).0, 3);
        let p = Matroid::partition(7, &[vec![0, 1, 2, 3, 4], vec![5, 6]], &[2, 1]).unwrap();
        assert_eq!(chromatic_number(&p).0, 3);
        assert_eq!(chromatic_number(&k4()).0, 2);
        assert_eq!(brute_chi(&k4()), 2);
        assert_eq!(chromatic_number(&Matroid::free(0)).0, 0);
    }

    #[test]
    fn density_examples() {
        let (s, d) = max_density_witness(&Matroid::uniform(5, 2).unwrap()).unwrap();
        assert_eq!((s.len(), d), (5, q(5, 2)));
        let k3 = Matroid::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(max_density_witness(&k3).unwrap().1, q(3, 2));
        let (s, d) = max_density_witness(&k4()).unwrap();
        assert_eq!((s.len(), d), (6, q(2, 1)));
        assert!(matches!(max_density_witness(&Matroid::free(25)), Err(Error::Refusal(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn chi_matches_density(es in proptest::collection::vec((0usize..5, 0usize..5), 1..12)) {
            let es: Vec<_> = es.into_iter().filter(|(a, b)| a != b).collect();
            prop_assume!(!es.is_empty());
            let m = Matroid::graphic(5, &es).unwrap();
            let (chi, cert) = chromatic_number(&m);
            prop_assert!(certificate_is_valid(&m, &cert));
            prop_assert_eq!(cert.t(), chi);
            prop_assert_eq!(chi, brute_chi(&m));
            let (_, d) = max_density_witness(&m).unwrap();
            prop_assert_eq!(chi, crate::rational::ceil_usize(&d));
        }
    }
}
