//! Rank-oracle matroids: concrete families, lazy minors and direct sums.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// A matroid over the id universe `0..universe()`. Only the live ground set
/// (`ground()`) may be queried; minors shrink it.
#[derive(Clone)]
pub struct Matroid {
    inner: Arc<Inner>,
}

struct Inner {
    universe: usize,
    live: Subset,
    kind: Kind,
}

enum Kind {
    Uniform { rank: usize },
    Partition { part_of: Vec<usize>, caps: Vec<usize> },
    Graphic { vertices: usize, ends: Vec<(usize, usize)> },
    Linear { field: u64, dim: usize, columns: Vec<Vec<u64>> },
    Free,
    Minor { base: Matroid, contracted: Subset, contracted_basis: Subset, contracted_rank: usize },
    DirectSum { parts: Vec<(Matroid, usize)> },
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid({}, n={}, live={})", self.family(), self.universe(), self.ground().len())
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Matroid {
    fn build(universe: usize, live: Subset, kind: Kind) -> Matroid {
        Matroid { inner: Arc::new(Inner { universe, live, kind }) }
    }

    pub fn uniform(n: usize, rank: usize) -> Result<Matroid> {
        if rank == 0 && n > 0 {
            return Err(Error::Domain("uniform matroid of rank 0 consists of loops".into()));
        }
        Ok(Matroid::build(n, Subset::full(n), Kind::Uniform { rank: rank.min(n) }))
    }

    pub fn free(n: usize) -> Matroid {
        Matroid::build(n, Subset::full(n), Kind::Free)
    }

    /// Partition matroid; `parts` must partition `0..n`.
    pub fn partition(n: usize, parts: &[Vec<usize>], caps: &[usize]) -> Result<Matroid> {
        if parts.len() != caps.len() {
            return Err(Error::Domain(format!(
                "{} parts but {} capacities",
                parts.len(),
                caps.len()
            )));
        }
        let mut part_of = vec![usize::MAX; n];
        for (j, part) in parts.iter().enumerate() {
            if caps[j] == 0 && !part.is_empty() {
                return Err(Error::Domain(format!("part {j} has capacity 0, its elements are loops")));
            }
            for &e in part {
                if e >= n {
                    return Err(Error::Domain(format!("element {e} outside ground set of size {n}")));
                }
                if part_of[e] != usize::MAX {
                    return Err(Error::Domain(format!("element {e} appears in two parts")));
                }
                part_of[e] = j;
            }
        }
        if let Some(e) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Domain(format!("element {e} is not in any part")));
        }
        Ok(Matroid::build(n, Subset::full(n), Kind::Partition { part_of, caps: caps.to_vec() }))
    }

    /// Cycle matroid of a multigraph; edge `e` joins `ends[e]`.
    pub fn graphic(vertices: usize, ends: &[(usize, usize)]) -> Result<Matroid> {
        for (e, &(u, w)) in ends.iter().enumerate() {
            if u >= vertices || w >= vertices {
                return Err(Error::Domain(format!("edge {e} has an endpoint outside {vertices} vertices")));
            }
            if u == w {
                return Err(Error::Domain(format!("edge {e} is a self-loop")));
            }
        }
        let n = ends.len();
        Ok(Matroid::build(n, Subset::full(n), Kind::Graphic { vertices, ends: ends.to_vec() }))
    }

    /// Column matroid over GF(`field`); entries are reduced modulo `field`.
    pub fn linear(field: u64, columns: &[Vec<i64>]) -> Result<Matroid> {
        if !is_prime(field) || field >= 1 << 31 {
            return Err(Error::Domain(format!("field size {field} is not a prime below 2^31")));
        }
        let dim = columns.first().map_or(0, |c| c.len());
        let mut cols = Vec::with_capacity(columns.len());
        for (e, c) in columns.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::Domain(format!("column {e} has length {} instead of {dim}", c.len())));
            }
            let v: Vec<u64> = c.iter().map(|&x| x.rem_euclid(field as i64) as u64).collect();
            if v.iter().all(|&x| x == 0) {
                return Err(Error::Domain(format!("column {e} is zero, a loop")));
            }
            cols.push(v);
        }
        let n = cols.len();
        Ok(Matroid::build(n, Subset::full(n), Kind::Linear { field, dim, columns: cols }))
    }

    /// Disjoint union. Component `i` occupies ids `[off_i, off_i + universe_i)`
    /// where the offsets are cumulative.
    pub fn direct_sum(ms: &[Matroid]) -> Matroid {
        if ms.len() == 1 {
            return ms[0].clone();
        }
        let universe: usize = ms.iter().map(|m| m.universe()).sum();
        let mut live = Subset::empty(universe);
        let mut parts = Vec::with_capacity(ms.len());
        let mut off = 0;
        for m in ms {
            live.union_with(&m.ground().shifted_up(off, universe));
            parts.push((m.clone(), off));
            off += m.universe();
        }
        Matroid::build(universe, live, Kind::DirectSum { parts })
    }

    /// `q` disjoint copies; copy `c` of id `e` has id `c * universe + e`.
    pub fn q_copies(&self, q: usize) -> Matroid {
        let ms = vec![self.clone(); q];
        if q == 1 {
            return self.clone();
        }
        Matroid::direct_sum(&ms)
    }

    pub fn universe(&self) -> usize {
        self.inner.universe
    }

    /// The live ground set.
    pub fn ground(&self) -> &Subset {
        &self.inner.live
    }

    /// Elements contracted to obtain this matroid from its base (empty unless
    /// it is a minor).
    pub fn contracted_set(&self) -> Subset {
        match &self.inner.kind {
            Kind::Minor { contracted, .. } => contracted.clone(),
            _ => Subset::empty(self.universe()),
        }
    }

    pub fn family(&self) -> &'static str {
        match &self.inner.kind {
            Kind::Uniform { .. } => "uniform",
            Kind::Partition { .. } => "partition",
            Kind::Graphic { .. } => "graphic",
            Kind::Linear { .. } => "linear",
            Kind::Free => "free",
            Kind::Minor { .. } => "minor",
            Kind::DirectSum { .. } => "direct-sum",
        }
    }

    /// Partition data when this is a plain partition matroid.
    pub fn partition_parts(&self) -> Option<(Vec<Vec<usize>>, Vec<usize>)> {
        match &self.inner.kind {
            Kind::Partition { part_of, caps } => {
                let mut parts = vec![Vec::new(); caps.len()];
                for (e, &p) in part_of.iter().enumerate() {
                    parts[p].push(e);
                }
                Some((parts, caps.clone()))
            }
            _ => None,
        }
    }

    fn check(&self, s: &Subset) -> Result<()> {
        if s.universe() != self.universe() {
            return Err(Error::Domain(format!(
                "subset over universe {} queried on matroid over {}",
                s.universe(),
                self.universe()
            )));
        }
        if !s.is_subset(self.ground()) {
            let bad = s.difference(self.ground()).first().unwrap();
            return Err(Error::Domain(format!("element {bad} is not in the live ground set")));
        }
        Ok(())
    }

    /// Rank with domain checking.
    pub fn rank(&self, s: &Subset) -> Result<usize> {
        self.check(s)?;
        Ok(self.r(s))
    }

    pub fn is_independent(&self, s: &Subset) -> Result<bool> {
        self.check(s)?;
        Ok(self.indep(s))
    }

    /// Rank of the live ground set.
    pub fn full_rank(&self) -> usize {
        self.r(self.ground())
    }

    /// Unchecked rank; `s` must lie in the live ground set.
    pub fn r(&self, s: &Subset) -> usize {
        debug_assert!(s.is_subset(self.ground()));
        match &self.inner.kind {
            Kind::Uniform { rank } => s.len().min(*rank),
            Kind::Free => s.len(),
            Kind::Partition { part_of, caps } => {
                let mut count = vec![0usize; caps.len()];
                for e in s.iter() {
                    count[part_of[e]] += 1;
                }
                count.iter().zip(caps).map(|(&c, &k)| c.min(k)).sum()
            }
            Kind::Graphic { vertices, ends } => {
                let mut uf = UnionFind::new(*vertices);
                s.iter().filter(|&e| uf.union(ends[e].0, ends[e].1)).count()
            }
            Kind::Linear { field, dim, columns } => {
                linear_rank(*field, *dim, s.iter().map(|e| &columns[e]))
            }
            Kind::Minor { base, contracted, contracted_rank, .. } => {
                base.r(&s.union(contracted)) - contracted_rank
            }
            Kind::DirectSum { parts } => parts
                .iter()
                .map(|(m, off)| {
                    let piece = s.shifted_down(*off, m.universe());
                    if piece.is_empty() {
                        0
                    } else {
                        m.r(&piece)
                    }
                })
                .sum(),
        }
    }

    /// Unchecked independence test.
    pub fn indep(&self, s: &Subset) -> bool {
        self.r(s) == s.len()
    }

    /// `{e : rank(s + e) = rank(s)}` over the live ground set.
    pub fn closure(&self, s: &Subset) -> Result<Subset> {
        self.check(s)?;
        let basis = self.greedy_in(s);
        let finder = self.circuit_finder(&basis);
        let mut out = s.clone();
        for e in self.ground().difference(s).iter() {
            if finder.circuit(e).is_some() {
                out.insert(e);
            }
        }
        Ok(out)
    }

    /// The unique circuit in `a + e`, where `a` is independent and `a + e` is not.
    pub fn fundamental_circuit(&self, a: &Subset, e: usize) -> Result<Subset> {
        self.check(a)?;
        if !self.ground().contains(e) {
            return Err(Error::Domain(format!("element {e} is not in the live ground set")));
        }
        if a.contains(e) || !self.indep(a) {
            return Err(Error::Contract("fundamental circuit needs an independent set not containing the element".into()));
        }
        self.circuit_finder(a)
            .circuit(e)
            .ok_or_else(|| Error::Contract(format!("adding {e} keeps the set independent")))
    }

    /// Scans `s` in ascending id order, keeping elements that preserve independence.
    pub fn greedy_maximal_independent(&self, s: &Subset) -> Result<Subset> {
        self.check(s)?;
        Ok(self.greedy_in(s))
    }

    pub(crate) fn greedy_in(&self, s: &Subset) -> Subset {
        self.greedy_order(s.iter())
    }

    /// Greedy independent set over the given element order.
    pub fn greedy_order<I: IntoIterator<Item = usize>>(&self, order: I) -> Subset {
        let mut acc = Subset::empty(self.universe());
        let mut inc = Incremental::new(self);
        for e in order {
            if inc.try_add(e) {
                acc.insert(e);
            }
        }
        acc
    }

    pub fn restrict(&self, s: &Subset) -> Result<Matroid> {
        self.check(s)?;
        self.delete(&self.ground().difference(s))
    }

    pub fn delete(&self, s: &Subset) -> Result<Matroid> {
        self.minor(&Subset::empty(self.universe()), s)
    }

    pub fn contract(&self, s: &Subset) -> Result<Matroid> {
        self.minor(s, &Subset::empty(self.universe()))
    }

    /// Contracts `c` and deletes `d` in one step, normalizing nested minors.
    pub fn minor(&self, c: &Subset, d: &Subset) -> Result<Matroid> {
        if c.universe() != self.universe() || d.universe() != self.universe() {
            return Err(Error::Domain("minor sets over the wrong universe".into()));
        }
        if !c.is_disjoint(d) {
            return Err(Error::Contract("contracted and deleted sets overlap".into()));
        }
        let removed = c.union(d);
        if !removed.is_subset(self.ground()) {
            return Err(Error::Contract(
                "minor touches elements already removed from the live ground set".into(),
            ));
        }
        let live = self.ground().difference(&removed);
        let (base, contracted) = match &self.inner.kind {
            Kind::Minor { base, contracted, .. } => (base.clone(), contracted.union(c)),
            _ => (self.clone(), c.clone()),
        };
        if contracted.is_empty() && matches!(&base.inner.kind, Kind::Minor { .. }) {
            unreachable!("minor bases are never minors");
        }
        let contracted_basis = base.greedy_in(&contracted);
        let contracted_rank = contracted_basis.len();
        Ok(Matroid::build(
            self.universe(),
            live,
            Kind::Minor { base, contracted, contracted_basis, contracted_rank },
        ))
    }

    /// Ground sets of the direct-sum components (non-empty ones only). A
    /// matroid that is not a direct sum has its whole ground set as the single
    /// component. Minors of direct sums distribute over the components.
    pub fn components(&self) -> Vec<Subset> {
        let mut out = Vec::new();
        self.collect_components(0, self.universe(), self.ground(), &mut out);
        out
    }

    fn collect_components(&self, off: usize, universe: usize, live: &Subset, out: &mut Vec<Subset>) {
        match &self.inner.kind {
            Kind::DirectSum { parts } => {
                for (m, o) in parts {
                    m.collect_components(off + o, universe, live, out);
                }
            }
            Kind::Minor { base, .. } => base.collect_components(off, universe, live, out),
            _ => {
                let own = self.ground().shifted_up(off, universe).intersection(live);
                if !own.is_empty() {
                    out.push(own);
                }
            }
        }
    }

    /// Parts of the partition matroids inside this matroid (through sums and
    /// minors), cut down to the live ground set; sets with `|S| <= rank(S)`
    /// are dropped.
    pub fn partition_blocks(&self) -> Vec<Subset> {
        let mut out = Vec::new();
        self.collect_blocks(0, self.universe(), &mut out);
        out.into_iter()
            .map(|b| b.intersection(self.ground()))
            .filter(|b| b.len() > self.r(b))
            .collect()
    }

    fn collect_blocks(&self, off: usize, universe: usize, out: &mut Vec<Subset>) {
        match &self.inner.kind {
            Kind::Partition { .. } => {
                let (parts, _) = self.partition_parts().unwrap();
                for p in parts {
                    out.push(Subset::from_ids(universe, p.into_iter().map(|e| e + off)));
                }
            }
            Kind::DirectSum { parts } => {
                for (m, o) in parts {
                    m.collect_blocks(off + o, universe, out);
                }
            }
            Kind::Minor { base, .. } => base.collect_blocks(off, universe, out),
            _ => {}
        }
    }

    /// Precomputes data for repeated fundamental-circuit queries against the
    /// independent set `indep`.
    pub fn circuit_finder(&self, indep: &Subset) -> CircuitFinder {
        debug_assert!(self.indep(indep));
        let data = match &self.inner.kind {
            Kind::Free => Finder::Free,
            Kind::Uniform { rank } => Finder::Uniform { members: indep.clone(), full: indep.len() >= *rank },
            Kind::Partition { part_of, caps } => {
                let mut members = vec![Vec::new(); caps.len()];
                for e in indep.iter() {
                    members[part_of[e]].push(e);
                }
                Finder::Partition { part_of: part_of.clone(), caps: caps.clone(), members }
            }
            Kind::Graphic { vertices, ends } => Finder::Graphic(Forest::new(*vertices, ends, indep)),
            Kind::Linear { field, dim, columns } => {
                Finder::Linear(LinearBasis::new(*field, *dim, columns, indep))
            }
            Kind::Minor { base, contracted_basis, .. } => {
                let extended = indep.union(contracted_basis);
                Finder::Minor { base: Box::new(base.circuit_finder(&extended)), keep: indep.clone() }
            }
            Kind::DirectSum { parts } => Finder::Sum(
                parts
                    .iter()
                    .map(|(m, off)| (m.circuit_finder(&indep.shifted_down(*off, m.universe())), *off, m.universe()))
                    .collect(),
            ),
        };
        CircuitFinder { universe: self.universe(), data }
    }
}

/// Answers "which circuit does `e` close with the fixed independent set".
pub struct CircuitFinder {
    universe: usize,
    data: Finder,
}

enum Finder {
    Free,
    Uniform { members: Subset, full: bool },
    Partition { part_of: Vec<usize>, caps: Vec<usize>, members: Vec<Vec<usize>> },
    Graphic(Forest),
    Linear(LinearBasis),
    Minor { base: Box<CircuitFinder>, keep: Subset },
    Sum(Vec<(CircuitFinder, usize, usize)>),
}

impl CircuitFinder {
    /// `None` when the set plus `e` stays independent, otherwise the
    /// fundamental circuit (which contains `e`). `e` must not be in the set.
    pub fn circuit(&self, e: usize) -> Option<Subset> {
        match &self.data {
            Finder::Free => None,
            Finder::Uniform { members, full } => full.then(|| members.with(e)),
            Finder::Partition { part_of, caps, members } => {
                let p = part_of[e];
                (members[p].len() >= caps[p]).then(|| {
                    let mut c = Subset::from_ids(self.universe, members[p].iter().copied());
                    c.insert(e);
                    c
                })
            }
            Finder::Graphic(f) => f.circuit(e, self.universe),
            Finder::Linear(b) => b.circuit(e, self.universe),
            Finder::Minor { base, keep } => base.circuit(e).map(|c| {
                let mut c = c.intersection(keep);
                c.insert(e);
                c
            }),
            Finder::Sum(parts) => {
                for (f, off, size) in parts {
                    if e >= *off && e < off + size {
                        return f.circuit(e - off).map(|c| c.shifted_up(*off, self.universe));
                    }
                }
                None
            }
        }
    }

    /// True when the set plus `e` stays independent.
    pub fn extends(&self, e: usize) -> bool {
        self.circuit(e).is_none()
    }
}

/// Grows an independent set one element at a time.
pub struct Incremental<'a> {
    m: &'a Matroid,
    state: IncState<'a>,
}

enum IncState<'a> {
    Count { held: usize, cap: usize },
    Parts { part_of: Vec<usize>, caps: Vec<usize>, count: Vec<usize> },
    Graph { ends: Vec<(usize, usize)>, uf: UnionFind },
    Linear(LinearBasis),
    Minor(Box<Incremental<'a>>),
    Sum(Vec<(Incremental<'a>, usize, usize)>),
}

impl<'a> Incremental<'a> {
    pub fn new(m: &'a Matroid) -> Incremental<'a> {
        let state = match &m.inner.kind {
            Kind::Free => IncState::Count { held: 0, cap: usize::MAX },
            Kind::Uniform { rank } => IncState::Count { held: 0, cap: *rank },
            Kind::Partition { part_of, caps } => IncState::Parts {
                part_of: part_of.clone(),
                caps: caps.clone(),
                count: vec![0; caps.len()],
            },
            Kind::Graphic { vertices, ends } => {
                IncState::Graph { ends: ends.clone(), uf: UnionFind::new(*vertices) }
            }
            Kind::Linear { field, dim, .. } => {
                IncState::Linear(LinearBasis::empty(*field, *dim))
            }
            Kind::Minor { base, contracted_basis, .. } => {
                let mut inner = Incremental::new(base);
                for e in contracted_basis.iter() {
                    inner.try_add(e);
                }
                IncState::Minor(Box::new(inner))
            }
            Kind::DirectSum { parts } => IncState::Sum(
                parts.iter().map(|(c, off)| (Incremental::new(c), *off, c.universe())).collect(),
            ),
        };
        Incremental { m, state }
    }

    /// Adds `e` when that keeps the set independent; reports whether it did.
    pub fn try_add(&mut self, e: usize) -> bool {
        match &mut self.state {
            IncState::Count { held, cap } => {
                if *held < *cap {
                    *held += 1;
                    true
                } else {
                    false
                }
            }
            IncState::Parts { part_of, caps, count } => {
                let p = part_of[e];
                if count[p] < caps[p] {
                    count[p] += 1;
                    true
                } else {
                    false
                }
            }
            IncState::Graph { ends, uf } => uf.union(ends[e].0, ends[e].1),
            IncState::Linear(b) => {
                let Kind::Linear { columns, .. } = &self.m.inner.kind else { unreachable!() };
                b.push(e, &columns[e])
            }
            IncState::Minor(inner) => inner.try_add(e),
            IncState::Sum(parts) => {
                for (inc, off, size) in parts.iter_mut() {
                    if e >= *off && e < *off + *size {
                        return inc.try_add(e - *off);
                    }
                }
                false
            }
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

struct Forest {
    ends: Vec<(usize, usize)>,
    parent_edge: Vec<usize>,
    parent: Vec<usize>,
    depth: Vec<usize>,
    root: Vec<usize>,
}

impl Forest {
    fn new(vertices: usize, ends: &[(usize, usize)], edges: &Subset) -> Forest {
        let mut adj = vec![Vec::new(); vertices];
        for e in edges.iter() {
            let (u, w) = ends[e];
            adj[u].push((w, e));
            adj[w].push((u, e));
        }
        let mut parent_edge = vec![usize::MAX; vertices];
        let mut parent = vec![usize::MAX; vertices];
        let mut depth = vec![0; vertices];
        let mut root = vec![usize::MAX; vertices];
        for s in 0..vertices {
            if root[s] != usize::MAX {
                continue;
            }
            root[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(w, e) in &adj[u] {
                    if root[w] == usize::MAX {
                        root[w] = s;
                        parent[w] = u;
                        parent_edge[w] = e;
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        Forest { ends: ends.to_vec(), parent_edge, parent, depth, root }
    }

    fn circuit(&self, e: usize, universe: usize) -> Option<Subset> {
        let (mut u, mut w) = self.ends[e];
        if self.root[u] != self.root[w] {
            return None;
        }
        let mut c = Subset::singleton(universe, e);
        while u != w {
            if self.depth[u] >= self.depth[w] {
                c.insert(self.parent_edge[u]);
                u = self.parent[u];
            } else {
                c.insert(self.parent_edge[w]);
                w = self.parent[w];
            }
        }
        Some(c)
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

fn linear_rank<'a, I: Iterator<Item = &'a Vec<u64>>>(p: u64, dim: usize, cols: I) -> usize {
    let mut basis = LinearBasis::empty(p, dim);
    let mut rank = 0;
    for c in cols {
        if basis.push(usize::MAX, c) {
            rank += 1;
            if rank == dim {
                break;
            }
        }
    }
    rank
}

/// Row-echelon basis over GF(p) that remembers how each reduced row is
/// combined from the original columns.
struct LinearBasis {
    p: u64,
    dim: usize,
    /// (pivot position, reduced vector with 1 at pivot, combination over `ids`).
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
    ids: Vec<usize>,
    columns: Vec<Vec<u64>>,
}

impl LinearBasis {
    fn empty(p: u64, dim: usize) -> Self {
        LinearBasis { p, dim, rows: Vec::new(), ids: Vec::new(), columns: Vec::new() }
    }

    fn new(p: u64, dim: usize, columns: &[Vec<u64>], set: &Subset) -> Self {
        let mut b = LinearBasis::empty(p, dim);
        for e in set.iter() {
            let added = b.push(e, &columns[e]);
            debug_assert!(added);
        }
        b.columns = columns.to_vec();
        b
    }

    /// Reduces `v`; returns residual and the combination of basis ids used.
    fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let p = self.p;
        let mut v = v.to_vec();
        let mut combo = vec![0u64; self.ids.len()];
        for (piv, row, rc) in &self.rows {
            let f = v[*piv];
            if f == 0 {
                continue;
            }
            for i in 0..self.dim {
                v[i] = (v[i] + (p - f) * row[i]) % p;
            }
            for (i, c) in rc.iter().enumerate() {
                combo[i] = (combo[i] + f * c) % p;
            }
        }
        (v, combo)
    }

    fn push(&mut self, id: usize, v: &[u64]) -> bool {
        if self.rows.len() == self.dim {
            return false;
        }
        let p = self.p;
        let (mut v, mut combo) = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else { return false };
        // reduced = v_orig - Σ combo·basis, so record the negated combination.
        for c in combo.iter_mut() {
            *c = (p - *c) % p;
        }
        combo.push(1);
        for r in self.rows.iter_mut() {
            r.2.push(0);
        }
        let inv = inv_mod(v[piv], p);
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        for c in combo.iter_mut() {
            *c = *c * inv % p;
        }
        self.ids.push(id);
        self.rows.push((piv, v, combo));
        true
    }

    fn circuit(&self, e: usize, universe: usize) -> Option<Subset> {
        let (residual, combo) = self.reduce(&self.columns[e]);
        if residual.iter().any(|&x| x != 0) {
            return None;
        }
        let mut c = Subset::singleton(universe, e);
        for (i, &k) in combo.iter().enumerate() {
            if k != 0 {
                c.insert(self.ids[i]);
            }
        }
        Some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k3() -> Matroid {
        Matroid::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn k4() -> Matroid {
        Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn s(n: usize, ids: &[usize]) -> Subset {
        Subset::from_ids(n, ids.iter().copied())
    }

    #[test]
    fn family_ranks() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(u.rank(&s(4, &[0, 1, 2])).unwrap(), 2);
        assert_eq!(k3().rank(&s(3, &[0, 1, 2])).unwrap(), 2);
        let p = Matroid::partition(3, &[vec![0, 1], vec![2]], &[1, 1]).unwrap();
        assert_eq!(p.rank(&s(3, &[0, 1])).unwrap(), 1);
        assert!(u.is_independent(&s(4, &[0, 1])).unwrap());
        assert!(!u.is_independent(&s(4, &[0, 1, 2])).unwrap());
        assert!(!k3().is_independent(&s(3, &[0, 1, 2])).unwrap());
    }

    #[test]
    fn loops_rejected() {
        assert!(Matroid::graphic(2, &[(0, 0)]).is_err());
        assert!(Matroid::linear(2, &[vec![0, 2]]).is_err());
        assert!(Matroid::uniform(3, 0).is_err());
        assert!(Matroid::partition(2, &[vec![0, 1]], &[0]).is_err());
        assert!(Matroid::linear(4, &[vec![1]]).is_err());
    }

    #[test]
    fn closure_and_circuits() {
        let m = k4();
        // edges 0=(0,1), 3=(1,2) span triangle {0,1,2} whose third edge is 1=(0,2)
        assert_eq!(m.closure(&s(6, &[0, 3])).unwrap().to_vec(), vec![0, 1, 3]);
        assert_eq!(m.closure(&s(6, &[0, 1, 2])).unwrap().len(), 6);
        assert!(m.closure(&s(6, &[])).unwrap().is_empty());
        assert_eq!(k3().fundamental_circuit(&s(3, &[0, 1]), 2).unwrap().to_vec(), vec![0, 1, 2]);
        let p = Matroid::partition(3, &[vec![0, 1], vec![2]], &[1, 1]).unwrap();
        assert_eq!(p.fundamental_circuit(&s(3, &[0]), 1).unwrap().to_vec(), vec![0, 1]);
        let lin = Matroid::linear(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(lin.fundamental_circuit(&s(3, &[0, 1]), 2).unwrap().to_vec(), vec![0, 1, 2]);
        assert!(matches!(k3().fundamental_circuit(&s(3, &[0]), 1), Err(Error::Contract(_))));
    }

    #[test]
    fn greedy_basis() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(u.greedy_maximal_independent(&s(4, &[0, 1, 2])).unwrap().to_vec(), vec![0, 1]);
        let t = k4().greedy_maximal_independent(&Subset::full(6)).unwrap();
        assert_eq!(t.len(), 3);
        assert!(k4().indep(&t));
    }

    #[test]
    fn minors() {
        let c = k3().contract(&s(3, &[0])).unwrap();
        assert_eq!(c.rank(&s(3, &[1])).unwrap(), 1);
        assert_eq!(c.rank(&s(3, &[2])).unwrap(), 1);
        assert_eq!(c.rank(&s(3, &[1, 2])).unwrap(), 1);
        assert!(c.rank(&s(3, &[0])).is_err());
        let d = k4().delete(&Subset::empty(6)).unwrap();
        for mask in 0u32..64 {
            let x = Subset::from_ids(6, (0..6).filter(|i| mask >> i & 1 == 1));
            assert_eq!(d.r(&x), k4().r(&x));
        }
        let twice = k4().contract(&s(6, &[0])).unwrap().delete(&s(6, &[5])).unwrap().contract(&s(6, &[1])).unwrap();
        assert_eq!(twice.family(), "minor");
        assert!(matches!(twice.contract(&s(6, &[5])), Err(Error::Contract(_))));
    }

    #[test]
    fn copies_and_sums() {
        let u = Matroid::uniform(2, 1).unwrap();
        let c = u.q_copies(2);
        assert_eq!(c.universe(), 4);
        assert_eq!(c.r(&Subset::full(4)), 2);
        assert_eq!(c.components().len(), 2);
        let one = Matroid::direct_sum(&[k3()]);
        assert_eq!(one.r(&Subset::full(3)), 2);
        let sum = Matroid::direct_sum(&[k3(), u.clone()]);
        let f = sum.circuit_finder(&s(5, &[0, 1, 3]));
        assert_eq!(f.circuit(2).unwrap().to_vec(), vec![0, 1, 2]);
        assert_eq!(f.circuit(4).unwrap().to_vec(), vec![3, 4]);
        let minor = sum.contract(&s(5, &[3])).unwrap();
        let comps = minor.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[1].to_vec(), vec![4]);
    }

    fn arb_matroid() -> impl Strategy<Value = Matroid> {
        prop_oneof![
            (1usize..10, 1usize..6).prop_map(|(n, r)| Matroid::uniform(n, r).unwrap()),
            proptest::collection::vec((0usize..5, 0usize..5), 1..10).prop_filter_map("no loops", |es| {
                let es: Vec<_> = es.into_iter().filter(|(a, b)| a != b).collect();
                (!es.is_empty()).then(|| Matroid::graphic(5, &es).unwrap())
            }),
            proptest::collection::vec(proptest::collection::vec(0i64..3, 3), 1..10).prop_filter_map(
                "no zero columns",
                |cols| {
                    let cols: Vec<_> = cols.into_iter().filter(|c| c.iter().any(|&x| x != 0)).collect();
                    (!cols.is_empty()).then(|| Matroid::linear(3, &cols).unwrap())
                }
            ),
            proptest::collection::vec(0usize..3, 1..10).prop_map(|assign| {
                let n = assign.len();
                let mut parts = vec![Vec::new(); 3];
                for (e, &p) in assign.iter().enumerate() {
                    parts[p].push(e);
                }
                Matroid::partition(n, &parts, &[1, 2, 1]).unwrap()
            }),
        ]
    }

    fn arb_with_sets() -> impl Strategy<Value = (Matroid, u32, u32, u32)> {
        arb_matroid().prop_flat_map(|m| {
            let n = m.universe() as u32;
            let top = 1u32 << n;
            (Just(m), 0..top, 0..top, 0..top)
        })
    }

    fn mask(n: usize, m: u32) -> Subset {
        Subset::from_ids(n, (0..n).filter(|i| m >> i & 1 == 1))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn rank_axioms((m, a, b, c) in arb_with_sets()) {
            let n = m.universe();
            let (a, b, c) = (mask(n, a), mask(n, b), mask(n, c));
            let ab = a.union(&b);
            prop_assert!(m.r(&a) <= m.r(&ab));
            prop_assert!(m.r(&ab) <= m.r(&a) + ab.difference(&a).len());
            prop_assert!(m.r(&a.union(&c)) + m.r(&a.intersection(&c)) <= m.r(&a) + m.r(&c));
            prop_assert!(m.r(&a) <= a.len());
        }

        #[test]
        fn exchange_axiom((m, a, b, _c) in arb_with_sets()) {
            let n = m.universe();
            let a = m.greedy_in(&mask(n, a));
            let b = m.greedy_in(&mask(n, b));
            if a.len() < b.len() {
                prop_assert!(b.difference(&a).iter().any(|e| m.indep(&a.with(e))));
            }
        }

        #[test]
        fn minor_rank_identity((m, c, d, x) in arb_with_sets()) {
            let n = m.universe();
            let c = mask(n, c);
            let d = mask(n, d).difference(&c);
            let minor = m.minor(&c, &d).unwrap();
            let x = mask(n, x).difference(&c.union(&d));
            prop_assert_eq!(minor.r(&x), m.r(&x.union(&c)) - m.r(&c));
            // a second contraction composes with the first
            let inner = x.iter().next();
            if let Some(e) = inner {
                let again = minor.contract(&Subset::singleton(n, e)).unwrap();
                let y = x.without(e);
                let cc = c.with(e);
                prop_assert_eq!(again.r(&y), m.r(&y.union(&cc)) - m.r(&cc));
            }
        }

        #[test]
        fn circuits_are_minimal((m, a, c, _x) in arb_with_sets()) {
            let n = m.universe();
            let cset = mask(n, c);
            let minor = m.contract(&m.greedy_in(&cset).intersection(&cset)).unwrap();
            for mm in [m.clone(), minor] {
                let live = mm.ground().clone();
                let indep = mm.greedy_in(&mask(n, a).intersection(&live));
                let finder = mm.circuit_finder(&indep);
                for e in live.difference(&indep).iter() {
                    match finder.circuit(e) {
                        None => prop_assert!(mm.indep(&indep.with(e))),
                        Some(circ) => {
                            prop_assert!(!mm.indep(&circ));
                            prop_assert!(circ.contains(e));
                            for f in circ.iter() {
                                prop_assert!(mm.indep(&circ.without(f)));
                            }
                        }
                    }
                }
            }
        }
    }
}
