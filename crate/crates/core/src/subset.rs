//! Ground sets and fixed-width bit-vector subsets.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Element labels bijectively mapped to dense ids `0..n`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut gs = GroundSet::default();
        for l in labels {
            let l = l.into();
            if gs.index.contains_key(&l) {
                return Err(Error::Domain(format!("duplicate element label {l:?}")));
            }
            gs.index.insert(l.clone(), gs.labels.len());
            gs.labels.push(l);
        }
        Ok(gs)
    }

    /// Ground set labelled `"0".."n-1"`.
    pub fn numbered(n: usize) -> Self {
        GroundSet::new((0..n).map(|i| i.to_string())).expect("distinct labels")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown element label {label:?}")))
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn subset_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        let mut s = Subset::empty(self.len());
        for l in labels {
            s.insert(self.id(l.as_ref())?);
        }
        Ok(s)
    }

    pub fn labels_of(&self, s: &Subset) -> Vec<String> {
        s.iter().map(|e| self.labels[e].clone()).collect()
    }

    /// Labels of `copies` disjoint copies: copy `c` of element `e` is
    /// `"<label>#<c>"` with id `c * n + e`.
    pub fn copies(&self, copies: usize) -> GroundSet {
        let labels = (0..copies)
            .flat_map(|c| self.labels.iter().map(move |l| format!("{l}#{c}")));
        GroundSet::new(labels).expect("copy labels are distinct")
    }
}

/// Membership over a universe `0..universe` stored as 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    words: Vec<u64>,
    universe: usize,
}

impl Subset {
    pub fn empty(universe: usize) -> Self {
        Subset { words: vec![0; universe.div_ceil(64)], universe }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Subset::empty(universe);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(universe);
            *w = if hi - lo == 64 { u64::MAX } else { (1u64 << (hi - lo)) - 1 };
        }
        s
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(universe: usize, ids: I) -> Self {
        let mut s = Subset::empty(universe);
        for e in ids {
            s.insert(e);
        }
        s
    }

    pub fn singleton(universe: usize, e: usize) -> Self {
        Subset::from_ids(universe, [e])
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        e < self.universe && self.words[e >> 6] >> (e & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: usize) -> bool {
        assert!(e < self.universe, "element {e} outside universe {}", self.universe);
        let w = &mut self.words[e >> 6];
        let had = *w >> (e & 63) & 1 == 1;
        *w |= 1 << (e & 63);
        !had
    }

    #[inline]
    pub fn remove(&mut self, e: usize) -> bool {
        if e >= self.universe {
            return false;
        }
        let w = &mut self.words[e >> 6];
        let had = *w >> (e & 63) & 1 == 1;
        *w &= !(1 << (e & 63));
        had
    }

    pub fn with(&self, e: usize) -> Subset {
        let mut s = self.clone();
        s.insert(e);
        s
    }

    pub fn without(&self, e: usize) -> Subset {
        let mut s = self.clone();
        s.remove(e);
        s
    }

    /// Popcount.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> SubsetIter<'_> {
        SubsetIter { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check(&self, other: &Subset) {
        assert_eq!(self.universe, other.universe, "subsets over different universes");
    }

    pub fn union(&self, other: &Subset) -> Subset {
        self.check(other);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Subset { words, universe: self.universe }
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        self.check(other);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Subset { words, universe: self.universe }
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        self.check(other);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect();
        Subset { words, universe: self.universe }
    }

    pub fn symmetric_difference(&self, other: &Subset) -> Subset {
        self.check(other);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Subset { words, universe: self.universe }
    }

    pub fn union_with(&mut self, other: &Subset) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &Subset) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Shifts every id by `offset` into a universe of size `universe`.
    pub fn shifted_up(&self, offset: usize, universe: usize) -> Subset {
        let mut s = Subset::empty(universe);
        for e in self.iter() {
            s.insert(e + offset);
        }
        s
    }

    /// Ids in `[offset, offset + universe)` mapped down into `0..universe`.
    pub fn shifted_down(&self, offset: usize, universe: usize) -> Subset {
        let mut s = Subset::empty(universe);
        for e in self.iter() {
            if e >= offset && e < offset + universe {
                s.insert(e - offset);
            }
        }
        s
    }

    /// Ordering by size, then lexicographically on the sorted element list.
    pub fn cmp_size_lex(&self, other: &Subset) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct SubsetIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for SubsetIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Calls `f` on every subset of `items` (as an id list) of size `k`, in
/// lexicographic order. Stops early when `f` returns `false`.
pub fn for_each_combination<F: FnMut(&[usize]) -> bool>(items: &[usize], k: usize, mut f: F) {
    let n = items.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        if !f(&buf) {
            return;
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - k {
            return;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = items[idx[j]];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let a = Subset::from_ids(70, [0, 3, 64, 69]);
        let b = Subset::from_ids(70, [3, 5, 69]);
        assert_eq!(a.len(), 4);
        assert_eq!(a.union(&b).to_vec(), vec![0, 3, 5, 64, 69]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3, 69]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 64]);
        assert!(Subset::from_ids(70, [3]).is_subset(&b));
        assert_eq!(Subset::full(70).len(), 70);
        assert_eq!(Subset::full(64).len(), 64);
        assert!(Subset::empty(0).is_empty());
    }

    #[test]
    fn ground_set_labels() {
        let g = GroundSet::new(["a", "b", "c"]).unwrap();
        assert_eq!(g.id("b").unwrap(), 1);
        assert!(g.id("z").is_err());
        assert!(GroundSet::new(["a", "a"]).is_err());
        let c = g.copies(2);
        assert_eq!(c.label(4), "b#1");
        assert_eq!(c.id("c#0").unwrap(), 2);
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut seen = vec![];
        for_each_combination(&[1, 4, 6, 9], 2, |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![1, 4], vec![1, 6], vec![1, 9], vec![4, 6], vec![4, 9], vec![6, 9]]);
        let mut count = 0;
        for_each_combination(&[0, 1, 2], 0, |c| {
            assert!(c.is_empty());
            count += 1;
            true
        });
        assert_eq!(count, 1);
        let mut count3 = 0;
        for_each_combination(&[0, 1, 2], 3, |_| {
            count3 += 1;
            true
        });
        assert_eq!(count3, 1);
    }

    proptest! {
        #[test]
        fn popcount_matches_iteration(ids in proptest::collection::btree_set(0usize..200, 0..60)) {
            let s = Subset::from_ids(200, ids.iter().copied());
            prop_assert_eq!(s.len(), ids.len());
            prop_assert_eq!(s.to_vec(), ids.into_iter().collect::<Vec<_>>());
        }
    }
}
