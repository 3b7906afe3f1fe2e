//! Simple undirected graphs and the vertex colorings used on conflict graphs:
//! bipartition, greedy, and a constructive Brooks coloring.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph, dropping loops and duplicate edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || self.has_edge(u, v) {
            return false;
        }
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        true
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Subgraph induced by `vs` (relabelled in the given order).
    pub fn induced(&self, vs: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.len()];
        for (i, &v) in vs.iter().enumerate() {
            local[v] = i;
        }
        let mut g = Graph::new(vs.len());
        for (i, &v) in vs.iter().enumerate() {
            for &w in &self.adj[v] {
                if local[w] != usize::MAX && local[w] > i {
                    g.add_edge(i, local[w]);
                }
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut comp = self.bfs_order(s, &[]);
            for &v in &comp {
                seen[v] = true;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Vertices reachable from `root` avoiding `removed`, in BFS order.
    fn bfs_order(&self, root: usize, removed: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        for &r in removed {
            seen[r] = true;
        }
        seen[root] = true;
        let mut order = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Whether the graph minus `removed` is connected (vacuously true when
    /// nothing is left).
    pub fn connected_without(&self, removed: &[usize]) -> bool {
        let Some(root) = (0..self.len()).find(|v| !removed.contains(v)) else { return true };
        let left = self.len() - removed.iter().filter(|&&r| r < self.len()).count();
        self.bfs_order(root, removed).len() == left
    }

    pub fn is_connected(&self) -> bool {
        self.connected_without(&[])
    }

    pub fn is_complete(&self) -> bool {
        let n = self.len();
        self.adj.iter().all(|ns| ns.len() + 1 == n)
    }

    /// Biconnected components as vertex lists (bridges give two-vertex
    /// blocks, isolated vertices one-vertex blocks), and the cut vertices.
    pub fn blocks(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut is_cut = vec![false; n];
        let mut blocks = Vec::new();
        let mut time = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            if self.adj[root].is_empty() {
                blocks.push(vec![root]);
                continue;
            }
            let mut root_children = 0;
            let mut edge_stack: Vec<(usize, usize)> = Vec::new();
            // frames: (vertex, parent, next neighbor index)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
                if *idx < self.adj[v].len() {
                    let w = self.adj[v][*idx];
                    *idx += 1;
                    if w == parent {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        edge_stack.push((v, w));
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, v, 0));
                    } else if disc[w] < disc[v] {
                        edge_stack.push((v, w));
                        low[v] = low[v].min(disc[w]);
                    }
                    continue;
                }
                stack.pop();
                if parent == usize::MAX {
                    continue;
                }
                low[parent] = low[parent].min(low[v]);
                if low[v] >= disc[parent] {
                    if parent != root {
                        is_cut[parent] = true;
                    }
                    let mut block = Vec::new();
                    while let Some((a, b)) = edge_stack.pop() {
                        block.push(a);
                        block.push(b);
                        if (a, b) == (parent, v) {
                            break;
                        }
                    }
                    block.sort_unstable();
                    block.dedup();
                    blocks.push(block);
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        let cuts = (0..n).filter(|&v| is_cut[v]).collect();
        (blocks, cuts)
    }
}

/// Proper vertex coloring with colors `0..count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphColoring {
    pub colors: Vec<usize>,
    pub count: usize,
}

impl GraphColoring {
    fn from_colors(colors: Vec<usize>) -> GraphColoring {
        let count = colors.iter().map(|c| c + 1).max().unwrap_or(0);
        GraphColoring { colors, count }
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        self.colors.len() == g.len() && g.edges().iter().all(|&(u, v)| self.colors[u] != self.colors[v])
    }

    /// Vertices grouped by color.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

fn smallest_free(g: &Graph, colors: &[usize], v: usize) -> usize {
    let mut used: Vec<bool> = vec![false; g.degree(v) + 1];
    for &w in g.neighbors(v) {
        if colors[w] < used.len() {
            used[colors[w]] = true;
        }
    }
    used.iter().position(|u| !u).unwrap_or(used.len())
}

/// First-fit coloring in the given order; uses at most `max degree + 1` colors.
pub fn greedy_color(g: &Graph, order: &[usize]) -> GraphColoring {
    let mut colors = vec![usize::MAX; g.len()];
    for &v in order {
        colors[v] = smallest_free(g, &colors, v);
    }
    GraphColoring::from_colors(colors)
}

/// Two-coloring by breadth-first search; `None` when an odd cycle exists.
pub fn bipartition(g: &Graph) -> Option<GraphColoring> {
    let mut colors = vec![usize::MAX; g.len()];
    for s in 0..g.len() {
        if colors[s] != usize::MAX {
            continue;
        }
        colors[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if colors[w] == usize::MAX {
                    colors[w] = 1 - colors[v];
                    queue.push_back(w);
                } else if colors[w] == colors[v] {
                    return None;
                }
            }
        }
    }
    Some(GraphColoring::from_colors(colors))
}

/// Colors a connected graph whose maximum degree is at most `delta` with at
/// most `delta` colors, provided `delta >= 3` and the graph is not the
/// complete graph on `delta + 1` vertices.
pub fn brooks_color(g: &Graph, delta: usize) -> Result<GraphColoring> {
    if delta < 3 {
        return Err(Error::Contract(format!("Brooks coloring needs delta >= 3, got {delta}")));
    }
    if g.max_degree() > delta {
        return Err(Error::Contract(format!("maximum degree {} exceeds {delta}", g.max_degree())));
    }
    if !g.is_connected() {
        return Err(Error::Contract("Brooks coloring needs a connected graph".into()));
    }
    if g.len() == delta + 1 && g.is_complete() {
        return Err(Error::Contract(format!("graph is complete on {} vertices", delta + 1)));
    }
    let colors = brooks_inner(g, delta)?;
    let out = GraphColoring::from_colors(colors);
    if !out.is_proper(g) || out.count > delta {
        return Err(Error::Invariant("Brooks coloring produced an improper coloring".into()));
    }
    Ok(out)
}

fn brooks_inner(g: &Graph, delta: usize) -> Result<Vec<usize>> {
    if g.is_empty() {
        return Ok(vec![]);
    }
    if let Some(root) = (0..g.len()).find(|&v| g.degree(v) < delta) {
        return Ok(rooted_greedy(g, root, &[]));
    }
    // Every vertex has degree exactly delta from here on.
    let (blocks, cuts) = g.blocks();
    if !cuts.is_empty() {
        return color_by_blocks(g, delta, &blocks);
    }
    let (a, b, v) = find_anchor(g).ok_or_else(|| {
        Error::Invariant("no pair of non-adjacent neighbours keeps the graph connected".into())
    })?;
    Ok(rooted_greedy(g, v, &[a, b]))
}

/// Colors `pre` (pairwise non-adjacent) with color 0, then the rest in
/// reverse BFS order from `root`, so every vertex but the root still has an
/// uncolored neighbor (its BFS parent) when it is colored.
fn rooted_greedy(g: &Graph, root: usize, pre: &[usize]) -> Vec<usize> {
    let mut colors = vec![usize::MAX; g.len()];
    for &p in pre {
        colors[p] = 0;
    }
    let order = g.bfs_order(root, pre);
    for &v in order.iter().rev() {
        colors[v] = smallest_free(g, &colors, v);
    }
    colors
}

fn color_by_blocks(g: &Graph, delta: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut colors = vec![usize::MAX; g.len()];
    let mut done = vec![false; blocks.len()];
    let mut remaining = blocks.len();
    while remaining > 0 {
        // Next block sharing a colored vertex (or the first block).
        let pick = (0..blocks.len())
            .filter(|&i| !done[i])
            .find(|&i| remaining == blocks.len() || blocks[i].iter().any(|&v| colors[v] != usize::MAX))
            .ok_or_else(|| Error::Invariant("block graph is disconnected".into()))?;
        let block = &blocks[pick];
        let sub = g.induced(block);
        let local = brooks_inner(&sub, delta)?;
        let mut perm: Vec<usize> = (0..delta.max(1)).collect();
        if let Some(i) = block.iter().position(|&v| colors[v] != usize::MAX) {
            perm.swap(local[i], colors[block[i]]);
        }
        for (i, &v) in block.iter().enumerate() {
            let c = perm[local[i]];
            if colors[v] != usize::MAX && colors[v] != c {
                return Err(Error::Invariant("block shares more than one vertex with colored blocks".into()));
            }
            colors[v] = c;
        }
        done[pick] = true;
        remaining -= 1;
    }
    Ok(colors)
}

/// Finds non-adjacent `a`, `b` with a common neighbor `v` such that removing
/// `a` and `b` keeps the graph connected. In a 3-connected graph any such
/// triple works; otherwise `v` is a vertex whose removal leaves a cut vertex,
/// and `a`, `b` are its neighbors inside two different end blocks.
fn find_anchor(g: &Graph) -> Option<(usize, usize, usize)> {
    let n = g.len();
    let three_connected = (0..n).all(|x| (x + 1..n).all(|y| g.connected_without(&[x, y])));
    if three_connected {
        for v in 0..n {
            if let Some((a, b)) = nonadjacent_pair(g, g.neighbors(v)) {
                return Some((a, b, v));
            }
        }
    } else {
        for x in 0..n {
            if g.degree(x) < 3 || g.degree(x) + 1 == n {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|&v| v != x).collect();
            let sub = g.induced(&rest);
            let (blocks, cuts) = sub.blocks();
            if cuts.is_empty() {
                continue;
            }
            let mut picks = Vec::new();
            for block in &blocks {
                if block.iter().filter(|v| cuts.contains(v)).count() != 1 {
                    continue;
                }
                let inner = block
                    .iter()
                    .map(|&v| rest[v])
                    .find(|&v| g.has_edge(x, v) && !cuts.contains(&rest.iter().position(|&r| r == v).unwrap()));
                if let Some(v) = inner {
                    picks.push(v);
                }
                if picks.len() == 2 {
                    break;
                }
            }
            if let [a, b] = picks[..] {
                if !g.has_edge(a, b) && g.connected_without(&[a, b]) {
                    return Some((a, b, x));
                }
            }
        }
    }
    // Exhaustive fallback.
    for v in 0..n {
        let ns = g.neighbors(v);
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                if !g.has_edge(a, b) && g.connected_without(&[a, b]) {
                    return Some((a, b, v));
                }
            }
        }
    }
    None
}

fn nonadjacent_pair(g: &Graph, ns: &[usize]) -> Option<(usize, usize)> {
    for (i, &a) in ns.iter().enumerate() {
        for &b in &ns[i + 1..] {
            if !g.has_edge(a, b) {
                return Some((a, b));
            }
        }
    }
    None
}
