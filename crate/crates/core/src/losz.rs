//! Iterative LP refinement: rounds an extreme point of the program in
//! [`crate::lp::lpmat`] to a basis of the base partition matroid whose trace
//! on every side matroid has a flexible decomposition.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::lpmat::{solve_lp_mat, LpMatInstance, LpMatOutcome, SideMatroid};
use crate::lp::polytope::find_tight_set;
use crate::matroid::Matroid;
use crate::rational::{fmt_q, qi, Q};
use crate::rng::derive_seed;
use crate::subset::{for_each_combination, Subset};
use crate::union::chromatic_number;

/// Parts `T_j` with independent witnesses `A_j` (greedy maximal independent
/// subsets), for parameter `p`.
///
/// Each part also carries the set contracted on the way to the refinement
/// leaf it came from. Ranks, witnesses and exchanges are taken in the minor
/// `M / contexts[j]`; any union of sets independent in those minors is
/// independent in `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlexibleDecomposition {
    pub p: usize,
    pub parts: Vec<Subset>,
    pub contexts: Vec<Subset>,
    pub witnesses: Vec<Subset>,
}

impl FlexibleDecomposition {
    /// Parts read directly in `m` (empty contexts), witnesses built greedily.
    pub fn with_greedy_witnesses(m: &Matroid, p: usize, parts: Vec<Subset>) -> Self {
        let witnesses = parts.iter().map(|t| m.greedy_in(t)).collect();
        let contexts = parts.iter().map(|_| Subset::empty(m.universe())).collect();
        FlexibleDecomposition { p, parts, contexts, witnesses }
    }

    /// Parts with contraction contexts; witnesses are greedy in each minor.
    pub fn in_minors(m: &Matroid, p: usize, parts: Vec<Subset>, contexts: Vec<Subset>) -> Result<Self> {
        if parts.len() != contexts.len() {
            return Err(Error::Contract("need one context per part".into()));
        }
        let mut fd = FlexibleDecomposition { p, parts, contexts, witnesses: vec![] };
        fd.witnesses = (0..fd.parts.len())
            .map(|j| Ok(fd.part_matroid(m, j)?.greedy_in(&fd.parts[j])))
            .collect::<Result<_>>()?;
        Ok(fd)
    }

    /// The minor of `m` in which part `j` is read.
    pub fn part_matroid(&self, m: &Matroid, j: usize) -> Result<Matroid> {
        let ctx = &self.contexts[j];
        if ctx.is_empty() {
            Ok(m.clone())
        } else {
            m.contract(ctx)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Still in the registry when the run ended (only on error paths).
    Active,
    /// Split along a tight set into restriction and contraction.
    Refined,
    /// Had elements contracted; children are a free leaf and the contraction.
    Contracted,
    /// Free matroid on contracted elements.
    FreeLeaf,
    /// Removed because `|U| <= rank(U) + p - 1`.
    Dropped,
    /// Ground set became empty.
    Emptied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    /// Live ground set when the node stopped changing.
    pub ground: Subset,
    /// Elements of the root contracted to reach this node's minor.
    pub context: Subset,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// Minors derived from one side matroid; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementTree {
    pub p: usize,
    pub nodes: Vec<TreeNode>,
}

impl RefinementTree {
    fn push(&mut self, parent: Option<usize>, ground: Subset, context: Subset, kind: NodeKind) -> usize {
        self.nodes.push(TreeNode { ground, context, kind, children: vec![] });
        let id = self.nodes.len() - 1;
        if let Some(p) = parent {
            self.nodes[p].children.push(id);
        }
        id
    }

    /// Leaves that contribute decomposition parts.
    pub fn part_leaves(&self) -> Vec<&TreeNode> {
        self.nodes.iter().filter(|n| matches!(n.kind, NodeKind::FreeLeaf | NodeKind::Dropped)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct LoszOutput {
    /// The rounded basis `R` of the base partition matroid.
    pub picked: Subset,
    pub trees: Vec<RefinementTree>,
    /// Per side matroid, a decomposition of `R` restricted to its ground set.
    pub decompositions: Vec<FlexibleDecomposition>,
    pub trace: Vec<String>,
    pub lp_solves: usize,
    pub first_lp_value: Q,
}

struct Entry {
    side: SideMatroid,
    tree: usize,
    node: usize,
    p: usize,
    no_tight: bool,
}

fn list(s: &Subset) -> String {
    let ids: Vec<String> = s.iter().map(|e| e.to_string()).collect();
    format!("[{}]", ids.join(","))
}

/// Runs the refinement algorithm.
///
/// `base_parts` are the parts of a capacity-one partition matroid; `side`
/// pairs each side matroid (its live ground set is its sub-ground-set) with
/// its parameter `p`.
pub fn losz_run(universe: usize, base_parts: &[Subset], side: &[(Matroid, usize)], w: &[Q]) -> Result<LoszOutput> {
    let mut live = Subset::empty(universe);
    for p in base_parts {
        if !p.is_disjoint(&live) {
            return Err(Error::Domain("base parts overlap".into()));
        }
        live.union_with(p);
    }
    for (i, (m, p)) in side.iter().enumerate() {
        if m.universe() != universe || !m.ground().is_subset(&live) {
            return Err(Error::Domain(format!("side matroid {i} is not over the base ground set")));
        }
        if *p == 0 {
            return Err(Error::Contract(format!("side matroid {i} has p = 0")));
        }
    }
    for e in live.iter() {
        let load = side
            .iter()
            .filter(|(m, _)| m.ground().contains(e))
            .fold(Q::zero(), |acc, (_, p)| acc + Q::new(1.into(), (*p).into()));
        if load > Q::one() {
            return Err(Error::Contract(format!("element {e} has sum of 1/p equal to {}", fmt_q(&load))));
        }
    }

    let mut caps = vec![1usize; base_parts.len()];
    let mut picked = Subset::empty(universe);
    let mut trees: Vec<RefinementTree> = Vec::new();
    let mut registry: Vec<Entry> = Vec::new();
    for (i, (m, p)) in side.iter().enumerate() {
        let mut tree = RefinementTree { p: *p, nodes: vec![] };
        let node = tree.push(None, m.ground().clone(), m.contracted_set(), NodeKind::Active);
        trees.push(tree);
        if m.ground().is_empty() {
            trees[i].nodes[node].kind = NodeKind::Emptied;
            continue;
        }
        registry.push(Entry { side: SideMatroid::new(m.clone()), tree: i, node, p: *p, no_tight: false });
    }
    let mut trace = Vec::new();
    let mut lp_solves = 0;
    let mut first_lp_value = None;

    while !live.is_empty() {
        let mut inst = LpMatInstance {
            universe,
            live: live.clone(),
            base_parts: base_parts.iter().cloned().zip(caps.iter().copied()).collect(),
            side: registry.iter().map(|e| e.side.clone()).collect(),
            weights: w.to_vec(),
        };
        let point = match solve_lp_mat(&mut inst)? {
            LpMatOutcome::Optimal(p) => p,
            LpMatOutcome::Infeasible if lp_solves == 0 => {
                return Err(Error::Domain("the refinement program is infeasible".into()))
            }
            LpMatOutcome::Infeasible => {
                return Err(Error::Invariant("refinement program became infeasible after rounding".into()))
            }
        };
        lp_solves += 1;
        for (entry, s) in registry.iter_mut().zip(inst.side) {
            entry.side.cuts = s.cuts;
            entry.no_tight = false;
        }
        let x = point.x;
        first_lp_value.get_or_insert_with(|| point.value.clone());
        trace.push(format!("solve {} value={} cut_rounds={}", lp_solves, fmt_q(&point.value), point.cut_rounds));

        let zeros = Subset::from_ids(universe, live.iter().filter(|&e| x[e].is_zero()));
        let ones = Subset::from_ids(universe, live.iter().filter(|&e| x[e].is_one()));
        for e in zeros.iter() {
            trace.push(format!("delete {e}"));
        }
        for e in ones.iter() {
            trace.push(format!("contract {e}"));
        }
        live.difference_with(&zeros);
        live.difference_with(&ones);
        picked.union_with(&ones);
        for (k, part) in base_parts.iter().enumerate() {
            caps[k] -= part.intersection(&ones).len().min(caps[k]);
        }

        let mut next = Vec::with_capacity(registry.len());
        for mut entry in registry.drain(..) {
            let g = entry.side.matroid.ground();
            let d = g.intersection(&zeros);
            let c = g.intersection(&ones);
            if d.is_empty() && c.is_empty() {
                next.push(entry);
                continue;
            }
            let minor = entry.side.matroid.minor(&c, &d)?;
            let tree = &mut trees[entry.tree];
            if c.is_empty() {
                tree.nodes[entry.node].ground = minor.ground().clone();
            } else {
                tree.nodes[entry.node].kind = NodeKind::Contracted;
                tree.push(Some(entry.node), c, entry.side.matroid.contracted_set(), NodeKind::FreeLeaf);
                entry.node = tree.push(Some(entry.node), minor.ground().clone(), minor.contracted_set(), NodeKind::Active);
            }
            if minor.ground().is_empty() {
                tree.nodes[entry.node].kind = NodeKind::Emptied;
                continue;
            }
            entry.side = entry.side.derive(minor);
            next.push(entry);
        }
        registry = next;
        if live.is_empty() {
            break;
        }

        let mut i = 0;
        while i < registry.len() {
            if registry[i].no_tight {
                i += 1;
                continue;
            }
            let m = &registry[i].side.matroid;
            let local: Vec<Q> = (0..universe)
                .map(|e| if m.ground().contains(e) { x[e].clone() } else { Q::zero() })
                .collect();
            match find_tight_set(m, &local)? {
                None => {
                    registry[i].no_tight = true;
                    i += 1;
                }
                Some(s) => {
                    let entry = registry.remove(i);
                    let restricted = entry.side.matroid.restrict(&s)?;
                    let contracted = entry.side.matroid.contract(&s)?;
                    trace.push(format!("refine tree={} node={} set={}", entry.tree, entry.node, list(&s)));
                    let tree = &mut trees[entry.tree];
                    tree.nodes[entry.node].kind = NodeKind::Refined;
                    let a = tree.push(Some(entry.node), restricted.ground().clone(), restricted.contracted_set(), NodeKind::Active);
                    let b = tree.push(Some(entry.node), contracted.ground().clone(), contracted.contracted_set(), NodeKind::Active);
                    let first = Entry { side: entry.side.derive(restricted), tree: entry.tree, node: a, p: entry.p, no_tight: false };
                    let second = Entry { side: entry.side.derive(contracted), tree: entry.tree, node: b, p: entry.p, no_tight: false };
                    registry.insert(i, second);
                    registry.insert(i, first);
                }
            }
        }

        let mut drop: Option<usize> = None;
        for (i, entry) in registry.iter().enumerate() {
            let g = entry.side.matroid.ground();
            if g.len() + 1 <= entry.side.matroid.r(g) + entry.p
                && drop.is_none_or(|d| g.len() < registry[d].side.matroid.ground().len())
            {
                drop = Some(i);
            }
        }
        let Some(d) = drop else {
            let pt: Vec<String> = live.iter().map(|e| format!("{e}:{}", fmt_q(&x[e]))).collect();
            return Err(Error::Invariant(format!(
                "no matroid can be dropped at the extreme point {{{}}}",
                pt.join(", ")
            )));
        };
        let entry = registry.remove(d);
        let g = entry.side.matroid.ground().clone();
        trace.push(format!("drop tree={} node={} ground={}", entry.tree, entry.node, list(&g)));
        let node = &mut trees[entry.tree].nodes[entry.node];
        node.kind = NodeKind::Dropped;
        node.ground = g;
    }

    let decompositions = side
        .iter()
        .zip(&trees)
        .map(|((m, p), tree)| {
            let (parts, contexts) = tree
                .part_leaves()
                .into_iter()
                .map(|n| (n.ground.intersection(&picked), n.context.difference(&m.contracted_set())))
                .filter(|(t, _)| !t.is_empty())
                .unzip();
            FlexibleDecomposition::in_minors(m, *p, parts, contexts)
        })
        .collect::<Result<_>>()?;
    Ok(LoszOutput {
        picked,
        trees,
        decompositions,
        trace,
        lp_solves,
        first_lp_value: first_lp_value.unwrap_or_else(Q::zero),
    })
}

/// The copy construction: `q` color copies of every element, a base
/// partition matroid allowing one copy per element, and `q` disjoint copies
/// of each input matroid.
#[derive(Debug, Clone)]
pub struct ColoringInstance {
    pub n: usize,
    pub q: usize,
    pub base_parts: Vec<Subset>,
    pub side: Vec<Matroid>,
}

impl ColoringInstance {
    /// Id of color copy `c` of element `e`.
    pub fn copy_id(&self, e: usize, c: usize) -> usize {
        c * self.n + e
    }

    /// Element and color of a copy id.
    pub fn original(&self, id: usize) -> (usize, usize) {
        (id % self.n, id / self.n)
    }

    /// The part of `s` lying in color copy `c`, as a set of original elements.
    pub fn color_slice(&self, s: &Subset, c: usize) -> Subset {
        s.shifted_down(c * self.n, self.n)
    }
}

fn shared_ground(ms: &[Matroid]) -> Result<Subset> {
    let first = ms.first().ok_or_else(|| Error::Contract("need at least one matroid".into()))?;
    for m in ms {
        if m.universe() != first.universe() || m.ground() != first.ground() {
            return Err(Error::Domain("matroids do not share a ground set".into()));
        }
    }
    Ok(first.ground().clone())
}

pub fn build_coloring_instance(ms: &[Matroid], q: usize) -> Result<ColoringInstance> {
    if q == 0 {
        return Err(Error::Contract("need at least one color".into()));
    }
    let ground = shared_ground(ms)?;
    let n = ms[0].universe();
    let base_parts = ground
        .iter()
        .map(|e| Subset::from_ids(n * q, (0..q).map(|c| c * n + e)))
        .collect();
    let side = ms.iter().map(|m| m.q_copies(q)).collect();
    Ok(ColoringInstance { n, q, base_parts, side })
}

/// A partition into `q` classes, each with a `k`-flexible decomposition in
/// every input matroid.
#[derive(Debug, Clone)]
pub struct Pseudocoloring {
    pub k: usize,
    pub q: usize,
    pub classes: Vec<Subset>,
    /// `decompositions[c][i]`: decomposition of class `c` in matroid `i`.
    pub decompositions: Vec<Vec<FlexibleDecomposition>>,
    pub trace: Vec<String>,
}

impl Pseudocoloring {
    /// Universe size of the class subsets.
    pub fn classes_universe(&self) -> usize {
        self.classes.first().map_or(0, Subset::universe)
    }
}

/// Fixed pseudo-random objective over the copies, with values in `0..1000`.
/// Any objective is admissible.
pub fn copy_weights(universe: usize) -> Vec<Q> {
    (0..universe).map(|e| qi((derive_seed(COPY_WEIGHT_SEED, &[e as u64]) % 1000) as i64)).collect()
}

const COPY_WEIGHT_SEED: u64 = 0x5eed;

/// Colors with `q = max chi(M_i)` copies and `p = k`, then reads the classes
/// and their decompositions off the refinement trees.
pub fn pseudocoloring(ms: &[Matroid]) -> Result<Pseudocoloring> {
    let ground = shared_ground(ms)?;
    let k = ms.len();
    let q = ms.iter().map(|m| chromatic_number(m).0).max().unwrap_or(0);
    if ground.is_empty() {
        return Ok(Pseudocoloring { k, q: 0, classes: vec![], decompositions: vec![], trace: vec![] });
    }
    let inst = build_coloring_instance(ms, q)?;
    let universe = inst.n * q;
    let side: Vec<(Matroid, usize)> = inst.side.iter().map(|m| (m.clone(), k)).collect();
    let out = losz_run(universe, &inst.base_parts, &side, &copy_weights(universe))?;
    let classes: Vec<Subset> = (0..q).map(|c| inst.color_slice(&out.picked, c)).collect();
    let mut decompositions = Vec::with_capacity(q);
    for c in 0..q {
        let per_matroid = ms
            .iter()
            .zip(&out.decompositions)
            .map(|(m, fd)| {
                let (parts, contexts) = fd
                    .parts
                    .iter()
                    .zip(&fd.contexts)
                    .map(|(t, ctx)| (inst.color_slice(t, c), inst.color_slice(ctx, c)))
                    .filter(|(t, _)| !t.is_empty())
                    .unzip();
                FlexibleDecomposition::in_minors(m, k, parts, contexts)
            })
            .collect::<Result<_>>()?;
        decompositions.push(per_matroid);
    }
    Ok(Pseudocoloring { k, q, classes, decompositions, trace: out.trace })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlexMode {
    /// Enumerates every combination of bases of the parts when their number is
    /// at most `budget`; otherwise falls back to 1000 samples.
    Exhaustive { budget: usize },
    Sampled { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlexVerdict {
    Pass,
    Fail { property: char, detail: String, witness: Vec<Subset> },
}

fn bases_of(m: &Matroid, t: &Subset) -> Vec<Subset> {
    let ids = t.to_vec();
    let r = m.r(t);
    let mut out = Vec::new();
    for_each_combination(&ids, r, |c| {
        let s = Subset::from_ids(t.universe(), c.iter().copied());
        if m.indep(&s) {
            out.push(s);
        }
        true
    });
    out
}

/// Checks the three defining properties of a `p`-flexible decomposition of
/// `target` in `m`: (a) the parts partition it, (b) `rank(T_j) >= |T_j| - p + 1`,
/// (c) any union of independent subsets of the parts is independent.
/// Contexts are ignored; witnesses must be independent in `m`.
///
/// Property (c) holds exactly when `rank(union T_j) = sum rank(T_j)`; that
/// identity is always checked, and the combinations are additionally
/// enumerated or sampled as requested.
pub fn validate_flexible(m: &Matroid, target: &Subset, fd: &FlexibleDecomposition, mode: FlexMode) -> FlexVerdict {
    let part_ms = vec![m.clone(); fd.parts.len()];
    if let Some(fail) = check_parts(m, target, fd, &part_ms) {
        return fail;
    }
    let total: usize = fd.parts.iter().map(|t| m.r(t)).sum();
    if m.r(target) != total {
        let witness: Vec<Subset> = fd.parts.iter().map(|t| m.greedy_in(t)).collect();
        return FlexVerdict::Fail {
            property: 'c',
            detail: format!("rank of union {} below sum of part ranks {total}", m.r(target)),
            witness,
        };
    }
    check_unions(m, fd, &part_ms, mode)
}

/// Same checks with every part read in its minor `m / contexts[j]`: ranks in
/// (b), witnesses, and the independent sets combined in (c) are those of the
/// minor, while the union must be independent in `m`. This is the form the
/// conflict-graph construction relies on.
pub fn validate_flexible_in_minors(
    m: &Matroid,
    target: &Subset,
    fd: &FlexibleDecomposition,
    mode: FlexMode,
) -> FlexVerdict {
    let part_ms = match (0..fd.parts.len()).map(|j| fd.part_matroid(m, j)).collect::<Result<Vec<_>>>() {
        Ok(ms) => ms,
        Err(e) => return FlexVerdict::Fail { property: 'a', detail: e.to_string(), witness: vec![] },
    };
    if let Some(fail) = check_parts(m, target, fd, &part_ms) {
        return fail;
    }
    check_unions(m, fd, &part_ms, mode)
}

fn check_parts(m: &Matroid, target: &Subset, fd: &FlexibleDecomposition, part_ms: &[Matroid]) -> Option<FlexVerdict> {
    let mut seen = Subset::empty(m.universe());
    for t in &fd.parts {
        if t.is_empty() || !t.is_disjoint(&seen) {
            return Some(FlexVerdict::Fail { property: 'a', detail: "parts overlap or are empty".into(), witness: vec![t.clone()] });
        }
        seen.union_with(t);
    }
    if seen != *target {
        return Some(FlexVerdict::Fail { property: 'a', detail: "parts do not cover the set".into(), witness: vec![seen] });
    }
    for (t, pm) in fd.parts.iter().zip(part_ms) {
        if pm.r(t) + fd.p < t.len() + 1 {
            return Some(FlexVerdict::Fail {
                property: 'b',
                detail: format!("part of size {} has rank {}", t.len(), pm.r(t)),
                witness: vec![t.clone()],
            });
        }
    }
    for ((t, a), pm) in fd.parts.iter().zip(&fd.witnesses).zip(part_ms) {
        if !a.is_subset(t) || !pm.indep(a) || a.len() + fd.p < t.len() + 1 {
            return Some(FlexVerdict::Fail { property: 'b', detail: "bad witness".into(), witness: vec![a.clone()] });
        }
    }
    None
}

fn check_unions(m: &Matroid, fd: &FlexibleDecomposition, part_ms: &[Matroid], mode: FlexMode) -> FlexVerdict {
    let (trials, seed) = match mode {
        FlexMode::Exhaustive { budget } => {
            let small = fd.parts.iter().all(|t| t.len() <= 20);
            if small {
                let bases: Vec<Vec<Subset>> = fd.parts.iter().zip(part_ms).map(|(t, pm)| bases_of(pm, t)).collect();
                let count = bases.iter().try_fold(1usize, |acc, b| acc.checked_mul(b.len()).filter(|&c| c <= budget));
                if count.is_some() {
                    return enumerate_combinations(m, &bases);
                }
            }
            (1000, 0)
        }
        FlexMode::Sampled { trials, seed } => (trials, seed),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut pick = Vec::with_capacity(fd.parts.len());
        let mut union = Subset::empty(m.universe());
        for (t, pm) in fd.parts.iter().zip(part_ms) {
            let mut order = t.to_vec();
            order.shuffle(&mut rng);
            let basis = pm.greedy_order(order);
            let sub = Subset::from_ids(m.universe(), basis.iter().filter(|_| rng.random_bool(0.75)));
            union.union_with(&sub);
            pick.push(sub);
        }
        if !m.indep(&union) {
            return FlexVerdict::Fail { property: 'c', detail: "sampled union is dependent".into(), witness: pick };
        }
    }
    FlexVerdict::Pass
}

fn enumerate_combinations(m: &Matroid, bases: &[Vec<Subset>]) -> FlexVerdict {
    let mut idx = vec![0usize; bases.len()];
    loop {
        let mut union = Subset::empty(m.universe());
        for (b, &i) in bases.iter().zip(&idx) {
            union.union_with(&b[i]);
        }
        if !m.indep(&union) {
            let witness = bases.iter().zip(&idx).map(|(b, &i)| b[i].clone()).collect();
            return FlexVerdict::Fail { property: 'c', detail: "union of bases is dependent".into(), witness };
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                return FlexVerdict::Pass;
            }
            idx[j] += 1;
            if idx[j] < bases[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn s(n: usize, ids: &[usize]) -> Subset {
        Subset::from_ids(n, ids.iter().copied())
    }

    #[test]
    fn minor_parts_validate_only_in_minors() {
        // Contracting c makes a and b parallel, so {a, b} is a 2-flexible part
        // of the triangle read in M / c, but not read in M.
        let tri = Matroid::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let fd = FlexibleDecomposition::in_minors(&tri, 2, vec![s(3, &[0, 1]), s(3, &[2])], vec![s(3, &[2]), s(3, &[])])
            .unwrap();
        let mode = FlexMode::Exhaustive { budget: 100 };
        assert_eq!(validate_flexible_in_minors(&tri, &Subset::full(3), &fd, mode), FlexVerdict::Pass);
        assert!(matches!(validate_flexible(&tri, &Subset::full(3), &fd, mode), FlexVerdict::Fail { property: 'c', .. }));
        assert_eq!(fd.witnesses[0].len(), 1);
    }

    #[test]
    fn free_side_matroids_give_heaviest_basis() {
        let parts = vec![s(4, &[0, 1]), s(4, &[2, 3])];
        let side = vec![(Matroid::free(4), 2), (Matroid::free(4), 2)];
        let w = vec![qi(1), qi(3), qi(5), qi(2)];
        let out = losz_run(4, &parts, &side, &w).unwrap();
        assert_eq!(out.picked.to_vec(), vec![1, 2]);
        assert_eq!(out.lp_solves, 1);
        for fd in &out.decompositions {
            assert_eq!(fd.parts, vec![s(4, &[1, 2])]);
        }
    }

    #[test]
    fn single_matroid_gives_coloring() {
        let k4 = Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let pc = pseudocoloring(std::slice::from_ref(&k4)).unwrap();
        assert_eq!(pc.q, 2);
        let mut cover = Subset::empty(6);
        for c in &pc.classes {
            assert!(k4.indep(c));
            assert!(c.is_disjoint(&cover));
            cover.union_with(c);
        }
        assert_eq!(cover.len(), 6);
    }

    #[test]
    fn two_free_matroids_one_class() {
        let pc = pseudocoloring(&[Matroid::free(3), Matroid::free(3)]).unwrap();
        assert_eq!(pc.q, 1);
        assert_eq!(pc.classes[0].len(), 3);
        for fd in &pc.decompositions[0] {
            assert_eq!(fd.parts, vec![Subset::full(3)]);
        }
    }

    #[test]
    fn coloring_instance_copies() {
        let inst = build_coloring_instance(&[Matroid::free(2)], 2).unwrap();
        assert_eq!(inst.base_parts.len(), 2);
        assert!(inst.base_parts.iter().all(|p| p.len() == 2));
        assert_eq!(inst.side[0].universe(), 4);
        for id in 0..4 {
            let (e, c) = inst.original(id);
            assert_eq!(inst.copy_id(e, c), id);
        }
        let one = build_coloring_instance(&[Matroid::uniform(2, 1).unwrap()], 1).unwrap();
        let side = vec![(one.side[0].clone(), 1)];
        assert!(losz_run(2, &one.base_parts, &side, &[qi(0), qi(0)]).is_err());
    }

    #[test]
    fn flexible_validator_examples() {
        let u = Matroid::uniform(4, 3).unwrap();
        let all = Subset::full(4);
        let single = FlexibleDecomposition::with_greedy_witnesses(&u, 1, vec![s(4, &[0, 1, 2])]);
        assert_eq!(validate_flexible(&u, &s(4, &[0, 1, 2]), &single, FlexMode::Exhaustive { budget: 1000 }), FlexVerdict::Pass);
        // halves of the 4-circuit of U(3,4): each half independent, union dependent
        let halves = FlexibleDecomposition::with_greedy_witnesses(&u, 1, vec![s(4, &[0, 1]), s(4, &[2, 3])]);
        match validate_flexible(&u, &all, &halves, FlexMode::Exhaustive { budget: 1000 }) {
            FlexVerdict::Fail { property, .. } => assert_eq!(property, 'c'),
            v => panic!("{v:?}"),
        }
        // one part of size 4 is 2-flexible (rank 3 >= 4 - 2 + 1)
        let whole = FlexibleDecomposition::with_greedy_witnesses(&u, 2, vec![all.clone()]);
        assert_eq!(validate_flexible(&u, &all, &whole, FlexMode::Sampled { trials: 50, seed: 1 }), FlexVerdict::Pass);
        let bad = FlexibleDecomposition::with_greedy_witnesses(&u, 1, vec![all.clone()]);
        assert!(matches!(validate_flexible(&u, &all, &bad, FlexMode::Exhaustive { budget: 10 }), FlexVerdict::Fail { property: 'b', .. }));
    }
}
