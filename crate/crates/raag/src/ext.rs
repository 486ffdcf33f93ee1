//! The extension graph: vertices are conjugates of cyclic standard
//! subgroups `g⟨v⟩g⁻¹`, adjacent when they commute.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::words::{Raag, Word};

/// A vertex `conj·⟨ty⟩·conj⁻¹`, with `conj` the shortest element of
/// `conj·G_{st(ty)}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ExtVertex {
    pub ty: usize,
    pub conj: Word,
}

/// A truncated ball in the extension graph. Neighbours of each vertex are
/// enumerated through conjugators of length at most `length_bound`.
#[derive(Clone, Debug)]
pub struct ExtBall {
    pub base: ExtVertex,
    pub radius: u32,
    pub length_bound: u64,
    pub vertices: Vec<ExtVertex>,
    pub distance: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
    /// `exhausted[i]` is true when every neighbour of vertex `i` is listed.
    pub exhausted: Vec<bool>,
}

impl ExtBall {
    pub fn index_of(&self, u: &ExtVertex) -> Option<usize> {
        self.vertices.iter().position(|x| x == u)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl Raag {
    pub fn ext_vertex(&self, g: &Word, v: usize) -> Result<ExtVertex> {
        if v >= self.rank() {
            return Err(Error::UnknownVertex(format!("#{v}")));
        }
        Ok(ExtVertex { ty: v, conj: self.coset_min_rep(g, self.graph().star(v)) })
    }

    pub fn ext_adjacent(&self, u1: &ExtVertex, u2: &ExtVertex) -> bool {
        // Γ has no loops, so equal types are never adjacent.
        if u1.ty == u2.ty || !self.graph().adjacent(u1.ty, u2.ty) {
            return false;
        }
        let g = self.left_quotient(&u1.conj, &u2.conj);
        self.double_coset_member(&g, self.graph().star(u1.ty), self.graph().star(u2.ty))
    }

    pub fn conj_action(&self, g: &Word, u: &ExtVertex) -> ExtVertex {
        ExtVertex { ty: u.ty, conj: self.coset_min_rep(&self.multiply(g, &u.conj), self.graph().star(u.ty)) }
    }

    /// The subgroup `conj⟨v⟩conj⁻¹` generated by the vertex.
    pub fn ext_generator(&self, u: &ExtVertex) -> Word {
        self.conjugate(&u.conj, &self.gen(u.ty, 1))
    }

    /// Neighbours `conj·μ⟨x⟩` with `x ∈ lk(v)` and `μ ∈ G_{lk(v)}`, `|μ| ≤ L`.
    /// Every neighbour has this form; `μ` is the lk-part of any conjugator.
    pub fn ext_neighbors(&self, u: &ExtVertex, length_bound: u64) -> BTreeSet<ExtVertex> {
        let lk = self.graph().link(u.ty);
        let mut out = BTreeSet::new();
        let mus = self.subgroup_ball(lk, length_bound);
        for x in lk.iter() {
            for mu in &mus {
                out.insert(self.ext_vertex(&self.multiply(&u.conj, mu), x).expect("x is a vertex"));
            }
        }
        out
    }

    /// Whether `u` has finitely many neighbours, all with `μ = id`.
    pub fn ext_locally_finite(&self, u: &ExtVertex) -> bool {
        let g = self.graph();
        g.link(u.ty).iter().all(|x| g.link(u.ty).is_subset(g.star(x)))
    }

    pub fn ext_ball(&self, base: &ExtVertex, radius: u32, length_bound: u64) -> ExtBall {
        let mut index: BTreeMap<ExtVertex, usize> = BTreeMap::new();
        let mut vertices = vec![base.clone()];
        let mut distance = vec![0];
        index.insert(base.clone(), 0);
        let mut frontier = vec![0usize];
        for d in 1..=radius {
            let mut next = Vec::new();
            for &i in &frontier {
                for n in self.ext_neighbors(&vertices[i].clone(), length_bound) {
                    if !index.contains_key(&n) {
                        index.insert(n.clone(), vertices.len());
                        next.push(vertices.len());
                        vertices.push(n);
                        distance.push(d);
                    }
                }
            }
            frontier = next;
        }
        let mut edges = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if self.ext_adjacent(&vertices[i], &vertices[j]) {
                    edges.push((i, j));
                }
            }
        }
        let exhausted = (0..vertices.len())
            .map(|i| distance[i] < radius && self.ext_locally_finite(&vertices[i]))
            .collect();
        ExtBall { base: base.clone(), radius, length_bound, vertices, distance, edges, exhausted }
    }

    pub fn ext_to_json(&self, u: &ExtVertex) -> Value {
        json!({"type": self.graph().name(u.ty), "conjugator": self.format(&u.conj)})
    }

    /// Parses `g,v`, for example `a b^-1,c`.
    pub fn parse_ext(&self, text: &str) -> Result<ExtVertex> {
        let (g, v) = text
            .rsplit_once(',')
            .ok_or_else(|| Error::WordSyntax(format!("expected `word,vertex`, got `{text}`")))?;
        let v = self.graph().vertex(v.trim())?;
        self.ext_vertex(&self.parse(g)?, v)
    }

    pub fn format_ext(&self, u: &ExtVertex) -> String {
        format!("{}⟨{}⟩", if u.conj.is_identity() { String::new() } else { format!("[{}]", self.format(&u.conj)) }, self.graph().name(u.ty))
    }

    pub fn ext_ball_to_json(&self, b: &ExtBall) -> Value {
        json!({
            "base": self.ext_to_json(&b.base),
            "radius": b.radius,
            "length_bound": b.length_bound,
            "vertices": b.vertices.iter().enumerate().map(|(i, u)| json!({
                "vertex": self.ext_to_json(u),
                "distance": b.distance[i],
                "exhausted": b.exhausted[i],
            })).collect::<Vec<_>>(),
            "edges": b.edges,
        })
    }

    pub fn ext_ball_to_dot(&self, b: &ExtBall) -> String {
        let mut s = String::from("graph ext {\n");
        for (i, u) in b.vertices.iter().enumerate() {
            s.push_str(&format!("  {i} [label=\"{}\"];\n", self.format_ext(u)));
        }
        for (x, y) in &b.edges {
            s.push_str(&format!("  {x} -- {y};\n"));
        }
        s.push_str("}\n");
        s
    }
}
