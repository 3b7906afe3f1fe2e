//! Colorings of matroid intersections.

use crate::matroid::Matroid;
use crate::subset::Subset;

/// Ordered color classes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coloring {
    pub classes: Vec<Subset>,
}

impl Coloring {
    pub fn new(classes: Vec<Subset>) -> Self {
        Coloring { classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Drops empty classes.
    pub fn compact(mut self) -> Self {
        self.classes.retain(|c| !c.is_empty());
        self
    }

    /// Turns a cover into a partition by keeping each element in the first
    /// class that contains it; empty classes are dropped.
    pub fn dedup_earliest(self) -> Self {
        let Some(first) = self.classes.first() else { return self };
        let mut seen = Subset::empty(first.universe());
        let mut out = Vec::with_capacity(self.classes.len());
        for c in self.classes {
            let fresh = c.difference(&seen);
            seen.union_with(&fresh);
            if !fresh.is_empty() {
                out.push(fresh);
            }
        }
        Coloring { classes: out }
    }

    /// Whether every class is independent in every matroid and the classes
    /// partition `target`.
    pub fn is_valid(&self, ms: &[Matroid], target: &Subset) -> bool {
        let mut seen = Subset::empty(target.universe());
        for c in &self.classes {
            if !c.is_disjoint(&seen) {
                return false;
            }
            seen.union_with(c);
            if ms.iter().any(|m| !c.is_subset(m.ground()) || !m.indep(c)) {
                return false;
            }
        }
        seen == *target
    }
}
