//! Conflict graphs: turning a pseudocoloring into a coloring whose classes
//! are independent in every matroid.

use std::fmt::Write as _;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::{bipartition, brooks_color, greedy_color, Graph, GraphColoring};
use crate::losz::{pseudocoloring, FlexibleDecomposition, Pseudocoloring};
use crate::matroid::Matroid;
use crate::subset::Subset;

/// Conflict graph over one pseudocolor class. Vertex `v` is element
/// `elements[v]`.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub elements: Vec<usize>,
    pub graph: Graph,
    /// Edges contributed by each matroid, as element pairs `(low, high)`.
    pub per_matroid: Vec<Vec<(usize, usize)>>,
}

impl ConflictGraph {
    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    /// Graphviz rendering with element ids as node names.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph conflict {\n");
        for &e in &self.elements {
            let _ = writeln!(out, "  {e};");
        }
        for (u, v) in self.graph.edges() {
            let _ = writeln!(out, "  {} -- {};", self.elements[u], self.elements[v]);
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the conflict graph of `class` from one decomposition per matroid:
/// a clique on every `T_j - A_j`, and for each `e` there an edge to the
/// smallest element `e' != e` of the circuit of `A_j + e`. Circuits are taken
/// in the minor each part is read in.
pub fn build_conflict_graph(ms: &[Matroid], class: &Subset, fds: &[FlexibleDecomposition]) -> Result<ConflictGraph> {
    if ms.len() != fds.len() {
        return Err(Error::Contract("need one decomposition per matroid".into()));
    }
    let elements = class.to_vec();
    let mut local = vec![usize::MAX; class.universe()];
    for (v, &e) in elements.iter().enumerate() {
        local[e] = v;
    }
    let mut graph = Graph::new(elements.len());
    let mut per_matroid = Vec::with_capacity(ms.len());
    for (m, fd) in ms.iter().zip(fds) {
        let mut edges = Vec::new();
        let mut covered = Subset::empty(class.universe());
        for (j, (t, a)) in fd.parts.iter().zip(&fd.witnesses).enumerate() {
            covered.union_with(t);
            let outside = t.difference(a).to_vec();
            if outside.is_empty() {
                continue;
            }
            let pm = fd.part_matroid(m, j)?;
            for (i, &e) in outside.iter().enumerate() {
                for &f in &outside[i + 1..] {
                    edges.push((e, f));
                }
                let circuit = pm.fundamental_circuit(a, e)?;
                let partner = circuit
                    .iter()
                    .find(|&f| f != e)
                    .ok_or_else(|| Error::Invariant(format!("element {e} is a loop")))?;
                if !pm.indep(&a.with(e).without(partner)) {
                    return Err(Error::Invariant(format!("exchange {e} for {partner} is not independent")));
                }
                edges.push((e.min(partner), e.max(partner)));
            }
        }
        if covered != *class {
            return Err(Error::Contract("decomposition parts do not cover the class".into()));
        }
        for &(e, f) in &edges {
            graph.add_edge(local[e], local[f]);
        }
        edges.sort_unstable();
        edges.dedup();
        per_matroid.push(edges);
    }
    Ok(ConflictGraph { elements, graph, per_matroid })
}

/// Colors a conflict graph built with parameter `k` using at most
/// `max(1, k(k-1))` colors.
pub fn color_conflict_graph(g: &ConflictGraph, k: usize) -> Result<GraphColoring> {
    let graph = &g.graph;
    if graph.edge_count() == 0 {
        return Ok(GraphColoring { colors: vec![0; graph.len()], count: usize::from(!graph.is_empty()) });
    }
    if k < 2 {
        return Err(Error::Contract("a conflict graph with edges needs k >= 2".into()));
    }
    if k == 2 {
        return bipartition(graph).ok_or_else(|| Error::Invariant("conflict graph for k = 2 has an odd cycle".into()));
    }
    let bound = k * (k - 1);
    let delta = graph.max_degree();
    if delta > bound {
        return Err(Error::Invariant(format!("conflict graph has degree {delta} above {bound}")));
    }
    let order: Vec<usize> = (0..graph.len()).collect();
    if delta < bound {
        return Ok(greedy_color(graph, &order));
    }
    let mut colors = vec![0; graph.len()];
    for comp in graph.components() {
        let sub = graph.induced(&comp);
        if sub.len() == bound + 1 && sub.is_complete() {
            return Err(Error::Invariant(format!("conflict graph has a complete component on {} vertices", bound + 1)));
        }
        let local = brooks_color(&sub, bound)?;
        for (i, &v) in comp.iter().enumerate() {
            colors[v] = local.colors[i];
        }
    }
    let count = colors.iter().map(|c| c + 1).max().unwrap_or(0);
    Ok(GraphColoring { colors, count })
}

/// Conflict graphs of every class of a pseudocoloring.
pub fn conflict_graphs(ms: &[Matroid], pseudo: &Pseudocoloring) -> Result<Vec<ConflictGraph>> {
    pseudo
        .classes
        .iter()
        .zip(&pseudo.decompositions)
        .map(|(class, fds)| build_conflict_graph(ms, class, fds))
        .collect()
}

/// Splits every pseudocolor class along a coloring of its conflict graph.
pub fn finalize_coloring(ms: &[Matroid], pseudo: &Pseudocoloring) -> Result<Coloring> {
    let mut classes = Vec::new();
    for g in conflict_graphs(ms, pseudo)? {
        let gc = color_conflict_graph(&g, pseudo.k)?;
        for group in gc.classes() {
            let class = Subset::from_ids(pseudo.classes_universe(), group.iter().map(|&v| g.elements[v]));
            if let Some(i) = ms.iter().position(|m| !m.indep(&class)) {
                return Err(Error::Invariant(format!("color class is dependent in matroid {i}")));
            }
            classes.push(class);
        }
    }
    Ok(Coloring::new(classes).compact())
}

/// The full pipeline: pseudocoloring followed by conflict-graph coloring,
/// using at most `k(k-1) * max chi(M_i)` classes for `k >= 2` matroids.
pub fn color_intersection(ms: &[Matroid]) -> Result<Coloring> {
    let pseudo = pseudocoloring(ms)?;
    finalize_coloring(ms, &pseudo)
}
