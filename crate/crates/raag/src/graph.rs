//! Finite simplicial graphs, induced subgraphs, and the rigidity predicates
//! read off the defining graph.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of vertices; vertex sets are 64-bit masks.
pub const MAX_VERTICES: usize = 64;

/// A subset of the vertices of a fixed graph, stored as a bitmask over
/// vertex indices. Iteration follows the vertex order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    /// The first `n` vertices.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    pub fn union(self, o: Self) -> Self {
        VertexSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        VertexSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let full = self.0;
        let mut cur = Some(0u64);
        std::iter::from_fn(move || {
            let out = cur?;
            cur = if out == full { None } else { Some((out.wrapping_sub(full)) & full) };
            Some(VertexSet(out))
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(VertexSet::EMPTY, |s, v| s.with(v))
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// Graph JSON: `{"vertices": [...], "edges": [[a, b], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
}

/// A finite simplicial graph with a fixed vertex order.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct SimplicialGraph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    adj: Vec<u64>,
}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({:?}; ", self.names)?;
        for (a, b) in self.edges() {
            write!(f, "{}-{} ", self.names[a], self.names[b])?;
        }
        write!(f, ")")
    }
}

impl TryFrom<GraphJson> for SimplicialGraph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Self> {
        let edges: Vec<(String, String)> = j.edges.into_iter().map(|[a, b]| (a, b)).collect();
        SimplicialGraph::new(j.vertices, &edges)
    }
}

impl From<SimplicialGraph> for GraphJson {
    fn from(g: SimplicialGraph) -> Self {
        let edges = g.edges().map(|(a, b)| [g.names[a].clone(), g.names[b].clone()]).collect();
        GraphJson { vertices: g.names, edges }
    }
}

impl SimplicialGraph {
    pub fn new<S: AsRef<str>>(vertices: Vec<String>, edges: &[(S, S)]) -> Result<Self> {
        if vertices.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(vertices.len()));
        }
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.is_empty() || v.contains(char::is_whitespace) || v.contains('^') || v.contains(',') {
                return Err(Error::Invalid(format!("bad vertex name {v:?}")));
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut adj = vec![0u64; vertices.len()];
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let i = *index.get(a).ok_or_else(|| Error::UnknownVertex(a.to_string()))?;
            let j = *index.get(b).ok_or_else(|| Error::UnknownVertex(b.to_string()))?;
            if i == j {
                return Err(Error::LoopEdge(a.to_string()));
            }
            if adj[i] >> j & 1 == 1 {
                return Err(Error::RepeatedEdge(a.to_string(), b.to_string()));
            }
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        Ok(SimplicialGraph { names: vertices, index, adj })
    }

    /// Convenience constructor from string slices; panics on invalid input.
    pub fn from_parts(vertices: &[&str], edges: &[(&str, &str)]) -> Self {
        SimplicialGraph::new(vertices.iter().map(|s| s.to_string()).collect(), edges)
            .expect("invalid graph literal")
    }

    pub fn from_json_str(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }

    /// Cycle on vertices "1".."n".
    pub fn cycle(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let edges: Vec<(String, String)> =
            (0..n).map(|i| (names[i].clone(), names[(i + 1) % n].clone())).collect();
        SimplicialGraph::new(names, &edges).expect("cycle")
    }

    /// Path through the given vertices in order.
    pub fn path(names: &[&str]) -> Self {
        let edges: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
        SimplicialGraph::from_parts(names, &edges)
    }

    pub fn complete(names: &[&str]) -> Self {
        let mut edges = Vec::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                edges.push((names[i], names[j]));
            }
        }
        SimplicialGraph::from_parts(names, &edges)
    }

    pub fn discrete(names: &[&str]) -> Self {
        SimplicialGraph::from_parts(names, &[])
    }

    /// Graph on `n` vertices named "0".."n-1" whose edges are the set bits of
    /// `mask` over the pairs (i, j), i < j, in lexicographic order.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> bit & 1 == 1 {
                    edges.push((names[i].clone(), names[j].clone()));
                }
                bit += 1;
            }
        }
        SimplicialGraph::new(names, &edges).expect("edge mask")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Parses a comma- or whitespace-separated list of vertex names.
    pub fn vertex_set(&self, list: &str) -> Result<VertexSet> {
        let list = list.trim().trim_start_matches('{').trim_end_matches('}');
        list.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| self.vertex(s))
            .collect()
    }

    pub fn set_names(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|v| self.names[v].clone()).collect()
    }

    pub fn format_set(&self, s: VertexSet) -> String {
        format!("{{{}}}", self.set_names(s).join(","))
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Edges (i, j) with i < j in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |i| {
            VertexSet(self.adj[i]).iter().filter(move |&j| j > i).map(move |j| (i, j))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn link(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn star(&self, v: usize) -> VertexSet {
        self.link(v).with(v)
    }

    /// Vertices outside `lambda` adjacent to every vertex of `lambda`.
    pub fn orthogonal(&self, lambda: VertexSet) -> VertexSet {
        let mut out = self.all().difference(lambda);
        for v in lambda.iter() {
            out = out.intersection(self.link(v));
        }
        out
    }

    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| s.without(v).is_subset(self.link(v)))
    }

    /// Every clique, including the empty one, ordered by size then mask.
    pub fn cliques(&self) -> Vec<VertexSet> {
        let mut out = vec![VertexSet::EMPTY];
        let mut frontier = vec![VertexSet::EMPTY];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for c in frontier {
                let start = 64 - c.0.leading_zeros() as usize;
                let cand = self.orthogonal(c);
                for v in cand.iter().filter(|&v| v >= start) {
                    next.push(c.with(v));
                }
            }
            next.sort();
            out.extend(next.iter().copied());
            frontier = next;
        }
        out
    }

    pub fn maximal_cliques(&self) -> Vec<VertexSet> {
        self.cliques().into_iter().filter(|&c| self.orthogonal(c).is_empty()).collect()
    }

    pub fn clique_number(&self) -> usize {
        self.cliques().last().map_or(0, |c| c.len())
    }

    /// Induced subgraph on `s`, vertices kept in the parent order. The second
    /// component maps new indices to parent indices.
    pub fn induced(&self, s: VertexSet) -> (SimplicialGraph, Vec<usize>) {
        let map: Vec<usize> = s.iter().collect();
        let names = map.iter().map(|&v| self.names[v].clone()).collect();
        let mut edges = Vec::new();
        for (i, &a) in map.iter().enumerate() {
            for &b in &map[i + 1..] {
                if self.adjacent(a, b) {
                    edges.push((self.names[a].clone(), self.names[b].clone()));
                }
            }
        }
        (SimplicialGraph::new(names, &edges).expect("induced"), map)
    }

    /// Connected components of the subgraph induced on `s`, in order of
    /// their least vertex.
    pub fn components_within(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut left = s;
        let mut out = Vec::new();
        while let Some(v) = left.first() {
            let mut comp = VertexSet::singleton(v);
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                for y in self.link(x).intersection(s).difference(comp).iter() {
                    comp = comp.with(y);
                    stack.push(y);
                }
            }
            left = left.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components_within(self.all()).len() <= 1
    }

    pub fn complement(&self) -> SimplicialGraph {
        let n = self.len();
        let mut g = self.clone();
        for i in 0..n {
            g.adj[i] = VertexSet::full(n).without(i).0 & !self.adj[i];
        }
        g
    }

    /// The join: every vertex of `self` adjacent to every vertex of `other`.
    pub fn join(&self, other: &SimplicialGraph) -> Result<SimplicialGraph> {
        for name in &other.names {
            if self.index.contains_key(name) {
                return Err(Error::NameCollision(name.clone()));
            }
        }
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let mut edges: Vec<(String, String)> =
            self.edges().map(|(a, b)| (self.names[a].clone(), self.names[b].clone())).collect();
        edges.extend(other.edges().map(|(a, b)| (other.names[a].clone(), other.names[b].clone())));
        for a in &self.names {
            for b in &other.names {
                edges.push((a.clone(), b.clone()));
            }
        }
        SimplicialGraph::new(names, &edges)
    }

    /// Maximal join decomposition: the vertex sets of the complement's
    /// connected components.
    pub fn join_factors(&self) -> Vec<VertexSet> {
        self.complement().components_within(self.all())
    }

    pub fn join_decomposition(&self) -> Vec<SimplicialGraph> {
        self.join_factors().into_iter().map(|s| self.induced(s).0).collect()
    }

    /// Backtracking search for isomorphisms `self -> other` that fix each
    /// vertex of `fixed` (only meaningful when both graphs are the same).
    /// `visit` returns `false` to stop the search.
    fn search_isomorphisms(
        &self,
        other: &SimplicialGraph,
        fixed: VertexSet,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) {
        let n = self.len();
        if n != other.len() || self.edge_count() != other.edge_count() {
            return;
        }
        // assign high-degree vertices first; fixed ones are forced
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (!fixed.contains(v), std::cmp::Reverse(self.degree(v)), v));
        let mut image = vec![usize::MAX; n];
        let mut used = 0u64;
        fn rec(
            g: &SimplicialGraph,
            h: &SimplicialGraph,
            order: &[usize],
            k: usize,
            fixed: VertexSet,
            image: &mut Vec<usize>,
            used: &mut u64,
            visit: &mut dyn FnMut(&[usize]) -> bool,
        ) -> bool {
            if k == order.len() {
                return visit(image);
            }
            let v = order[k];
            let cands: Vec<usize> = if fixed.contains(v) { vec![v] } else { (0..h.len()).collect() };
            for w in cands {
                if *used >> w & 1 == 1 || g.degree(v) != h.degree(w) {
                    continue;
                }
                let ok = order[..k].iter().all(|&u| g.adjacent(u, v) == h.adjacent(image[u], w));
                if !ok {
                    continue;
                }
                image[v] = w;
                *used |= 1 << w;
                let go = rec(g, h, order, k + 1, fixed, image, used, visit);
                *used &= !(1 << w);
                image[v] = usize::MAX;
                if !go {
                    return false;
                }
            }
            true
        }
        rec(self, other, &order, 0, fixed, &mut image, &mut used, visit);
    }

    /// Some isomorphism `self -> other`, as an index map.
    pub fn isomorphism(&self, other: &SimplicialGraph) -> Option<Vec<usize>> {
        let mut found = None;
        self.search_isomorphisms(other, VertexSet::EMPTY, &mut |m| {
            found = Some(m.to_vec());
            false
        });
        found
    }

    /// All automorphisms fixing `fixed` pointwise, lexicographically sorted.
    pub fn automorphisms_fixing(&self, fixed: VertexSet) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.search_isomorphisms(self, fixed, &mut |m| {
            out.push(m.to_vec());
            true
        });
        out.sort();
        out
    }

    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        self.automorphisms_fixing(VertexSet::EMPTY)
    }

    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let n = self.len();
        if perm.len() != n {
            return false;
        }
        let mut seen = 0u64;
        for &p in perm {
            if p >= n || seen >> p & 1 == 1 {
                return false;
            }
            seen |= 1 << p;
        }
        self.edges().all(|(a, b)| self.adjacent(perm[a], perm[b]))
    }

    pub fn star_rigidity(&self) -> StarRigidity {
        for v in 0..self.len() {
            let mut witness = None;
            self.search_isomorphisms(self, self.star(v), &mut |m| {
                if m.iter().enumerate().any(|(i, &j)| i != j) {
                    witness = Some(m.to_vec());
                    false
                } else {
                    true
                }
            });
            if let Some(perm) = witness {
                return StarRigidity { rigid: false, witness: Some((v, perm)) };
            }
        }
        StarRigidity { rigid: true, witness: None }
    }

    pub fn is_star_rigid(&self) -> bool {
        self.star_rigidity().rigid
    }

    /// An induced 4-cycle `[a, b, c, d]`, the first in vertex order.
    pub fn induced_square(&self) -> Option<[usize; 4]> {
        for a in 0..self.len() {
            let la = self.link(a);
            for b in la.iter() {
                for d in la.iter().filter(|&d| d > b && !self.adjacent(b, d)) {
                    let common = self.link(b).intersection(self.link(d)).difference(self.star(a));
                    if let Some(c) = common.first() {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
        None
    }

    pub fn has_induced_square(&self) -> bool {
        self.induced_square().is_some()
    }

    pub fn out_finiteness(&self) -> OutReport {
        let mut dominations = Vec::new();
        for v in 0..self.len() {
            for w in 0..self.len() {
                if v != w && self.link(v).is_subset(self.star(w)) {
                    dominations.push((v, w));
                }
            }
        }
        let separating_stars: Vec<usize> = (0..self.len())
            .filter(|&v| self.components_within(self.all().difference(self.star(v))).len() > 1)
            .collect();
        OutReport { finite: dominations.is_empty() && separating_stars.is_empty(), dominations, separating_stars }
    }

    /// `n` copies of the graph glued along `st(v)`.
    pub fn glue_along_star(&self, v: usize, n: u32) -> Result<GluedGraph> {
        if n < 1 {
            return Err(Error::BadCopyCount);
        }
        let st = self.star(v);
        if n == 1 {
            let copy = (0..self.len()).map(|u| if st.contains(u) { None } else { Some(1) }).collect();
            return Ok(GluedGraph { graph: self.clone(), base_vertex: v, copies: 1, origin: (0..self.len()).collect(), copy });
        }
        let mut origin = Vec::new();
        let mut copy = Vec::new();
        let mut names = Vec::new();
        for u in st.iter() {
            origin.push(u);
            copy.push(None);
            names.push(self.names[u].clone());
        }
        let rest = self.all().difference(st);
        for j in 1..=n {
            for u in rest.iter() {
                origin.push(u);
                copy.push(Some(j));
                names.push(if n == 1 { self.names[u].clone() } else { format!("{}[{}]", self.names[u], j) });
            }
        }
        let mut edges = Vec::new();
        for i in 0..names.len() {
            for k in i + 1..names.len() {
                let same_copy = match (copy[i], copy[k]) {
                    (Some(a), Some(b)) => a == b,
                    _ => true,
                };
                if same_copy && self.adjacent(origin[i], origin[k]) {
                    edges.push((names[i].clone(), names[k].clone()));
                }
            }
        }
        let graph = SimplicialGraph::new(names, &edges)?;
        Ok(GluedGraph { graph, base_vertex: v, copies: n, origin, copy })
    }

    /// DOT export with vertices and edges in index order.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for n in &self.names {
            s += &format!("  \"{n}\";\n");
        }
        for (a, b) in self.edges() {
            s += &format!("  \"{}\" -- \"{}\";\n", self.names[a], self.names[b]);
        }
        s += "}\n";
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarRigidity {
    pub rigid: bool,
    /// A vertex and a nontrivial automorphism fixing its star pointwise.
    pub witness: Option<(usize, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutReport {
    pub finite: bool,
    /// Pairs (v, w) with lk(v) ⊆ st(w), v ≠ w.
    pub dominations: Vec<(usize, usize)>,
    /// Vertices whose star separates the graph.
    pub separating_stars: Vec<usize>,
}

/// The result of gluing copies along a star.
#[derive(Clone, Debug)]
pub struct GluedGraph {
    pub graph: SimplicialGraph,
    pub base_vertex: usize,
    pub copies: u32,
    /// Vertex of the original graph each new vertex comes from.
    pub origin: Vec<usize>,
    /// Copy index (1-based) of each new vertex; `None` on the shared star.
    pub copy: Vec<Option<u32>>,
}

impl GluedGraph {
    /// The vertex of copy `j` coming from `w`, or the shared vertex when
    /// `w` lies in the star.
    pub fn copy_of(&self, w: usize, j: u32) -> Option<usize> {
        (0..self.origin.len()).find(|&i| self.origin[i] == w && (self.copy[i].is_none() || self.copy[i] == Some(j)))
    }

    /// The vertex set of copy `j` (shared star included).
    pub fn copy_set(&self, j: u32) -> VertexSet {
        (0..self.origin.len()).filter(|&i| self.copy[i].is_none() || self.copy[i] == Some(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> SimplicialGraph {
        SimplicialGraph::path(&["a", "b", "c"])
    }

    #[test]
    fn links_and_stars() {
        let c5 = SimplicialGraph::cycle(5);
        let v1 = c5.vertex("1").unwrap();
        assert_eq!(c5.set_names(c5.link(v1)), ["2", "5"]);
        assert_eq!(c5.star(v1).len(), 3);
        let g = p3();
        assert_eq!(g.set_names(g.link(1)), ["a", "c"]);
        assert_eq!(g.set_names(g.star(0)), ["a", "b"]);
        let k1 = SimplicialGraph::discrete(&["a"]);
        assert!(k1.link(0).is_empty());
        assert!(g.vertex("z").is_err());
    }

    #[test]
    fn orthogonal_examples() {
        let c4 = SimplicialGraph::from_parts(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
        let a = c4.vertex_set("a").unwrap();
        assert_eq!(c4.set_names(c4.orthogonal(a)), ["b", "d"]);
        let ac = c4.vertex_set("a,c").unwrap();
        assert_eq!(c4.set_names(c4.orthogonal(ac)), ["b", "d"]);
        assert!(c4.orthogonal(c4.all()).is_empty());
    }

    #[test]
    fn joins() {
        let two = SimplicialGraph::discrete(&["a", "c"]);
        let two2 = SimplicialGraph::discrete(&["b", "d"]);
        let c4 = two.join(&two2).unwrap();
        assert!(c4.isomorphism(&SimplicialGraph::cycle(4)).is_some());
        let k1 = SimplicialGraph::discrete(&["x"]);
        let k1b = SimplicialGraph::discrete(&["y"]);
        assert_eq!(k1.join(&k1b).unwrap().edge_count(), 1);
        let j = p3().join(&k1).unwrap();
        assert_eq!(j.edge_count(), 2 + 0 + 3);
        assert_eq!(p3().join(&p3()), Err(Error::NameCollision("a".into())));
    }

    #[test]
    fn complements() {
        let c5 = SimplicialGraph::cycle(5);
        assert!(c5.complement().isomorphism(&c5).is_some());
        let k4 = SimplicialGraph::complete(&["a", "b", "c", "d"]);
        assert_eq!(k4.complement().edge_count(), 0);
        assert_eq!(p3().complement().complement(), p3());
    }

    #[test]
    fn join_decompositions() {
        let c4 = SimplicialGraph::cycle(4);
        let f = c4.join_decomposition();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|g| g.len() == 2 && g.edge_count() == 0));
        assert_eq!(SimplicialGraph::cycle(5).join_decomposition().len(), 1);
        assert_eq!(SimplicialGraph::complete(&["a", "b", "c"]).join_decomposition().len(), 3);
    }

    #[test]
    fn rigidity() {
        assert!(SimplicialGraph::cycle(5).is_star_rigid());
        assert!(SimplicialGraph::cycle(8).is_star_rigid());
        let claw = SimplicialGraph::from_parts(&["o", "x", "y", "z"], &[("o", "x"), ("o", "y"), ("o", "z")]);
        let r = claw.star_rigidity();
        assert!(!r.rigid);
        let (v, perm) = r.witness.unwrap();
        assert!(claw.is_automorphism(&perm));
        assert!(claw.star(v).iter().all(|u| perm[u] == u));
        assert!(perm.iter().enumerate().any(|(i, &j)| i != j));
    }

    #[test]
    fn squares() {
        assert_eq!(SimplicialGraph::cycle(4).induced_square(), Some([0, 1, 2, 3]));
        assert!(!SimplicialGraph::cycle(5).has_induced_square());
        assert!(!SimplicialGraph::complete(&["a", "b", "c", "d"]).has_induced_square());
    }

    #[test]
    fn out_finiteness_examples() {
        assert!(SimplicialGraph::cycle(5).out_finiteness().finite);
        let c4 = SimplicialGraph::cycle(4);
        let r = c4.out_finiteness();
        assert!(!r.finite);
        assert!(r.dominations.contains(&(0, 2)));
        assert!(SimplicialGraph::discrete(&["a"]).out_finiteness().finite);
        let p5 = SimplicialGraph::path(&["a", "b", "c", "d", "e"]);
        assert!(p5.out_finiteness().separating_stars.contains(&2));
    }

    #[test]
    fn gluing() {
        let g = p3();
        let c = g.vertex("c").unwrap();
        assert_eq!(g.glue_along_star(c, 1).unwrap().graph, g);
        let glued = g.glue_along_star(c, 2).unwrap();
        assert_eq!(glued.graph.names(), ["b", "c", "a[1]", "a[2]"]);
        let e: Vec<(String, String)> = glued
            .graph
            .edges()
            .map(|(x, y)| (glued.graph.name(x).to_string(), glued.graph.name(y).to_string()))
            .collect();
        assert_eq!(e.len(), 3);
        assert!(e.contains(&("b".into(), "c".into())));
        assert!(e.contains(&("b".into(), "a[1]".into())));
        assert!(e.contains(&("b".into(), "a[2]".into())));
        let c5 = SimplicialGraph::cycle(5);
        let g3 = c5.glue_along_star(0, 3).unwrap();
        assert_eq!(g3.graph.len(), 9);
        for j in 1..=3 {
            let (sub, _) = g3.graph.induced(g3.copy_set(j));
            assert!(sub.isomorphism(&c5).is_some());
        }
        assert_eq!(g.glue_along_star(c, 0).unwrap_err(), Error::BadCopyCount);
    }

    #[test]
    fn cliques_enumerated() {
        let c4 = SimplicialGraph::cycle(4);
        assert_eq!(c4.maximal_cliques().len(), 4);
        assert_eq!(c4.cliques().len(), 1 + 4 + 4);
        let empty = SimplicialGraph::discrete(&[]);
        assert_eq!(empty.cliques(), vec![VertexSet::EMPTY]);
        assert_eq!(empty.maximal_cliques(), vec![VertexSet::EMPTY]);
    }

    #[test]
    fn json_round_trip() {
        let g: SimplicialGraph =
            serde_json::from_str(r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"]]}"#).unwrap();
        assert_eq!(g, p3());
        let back: SimplicialGraph = serde_json::from_value(g.to_json()).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<SimplicialGraph>(r#"{"vertices":["a"],"edges":[["a","a"]]}"#).is_err());
    }

    #[test]
    fn subset_enumeration() {
        let s: VertexSet = [1, 3, 4].into_iter().collect();
        let subs: Vec<VertexSet> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
    }
}
