//! Glued graphs and the embeddings `q_n`, type cocycles, and canonical
//! completion of labeled digraphs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dictionary::PointMap;
use crate::error::{Error, Result};
use crate::ext::ExtVertex;
use crate::graph::GluedGraph;
use crate::words::{Raag, Syllable, Word};

/// Exponent sum of `v`, mod `n`.
pub fn phi_n(word: &Word, v: usize, n: u32) -> u32 {
    word.exponent_sum(v).rem_euclid(n as i64) as u32
}

/// The embedding `G(Γ_n) → G(Γ)` attached to a gluing of `n` copies of
/// `Γ` along `st(v)`.
#[derive(Clone, Debug)]
pub struct QEmbedding {
    pub glued: GluedGraph,
    pub source: Raag,
    pub target: Raag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCertificate {
    pub index: u32,
    pub window: usize,
    /// Residues hit by the coset representatives `v^0, …, v^{n−1}`.
    pub residues: BTreeSet<u32>,
    /// Window elements whose coset could not be certified by a preimage.
    pub failures: Vec<Word>,
}

impl QEmbedding {
    pub fn new(target: &Raag, v: usize, n: u32) -> Result<Self> {
        let glued = target.graph().glue_along_star(v, n)?;
        Ok(QEmbedding { source: Raag::new(glued.graph.clone()), glued, target: target.clone() })
    }

    pub fn n(&self) -> u32 {
        self.glued.copies
    }

    pub fn v(&self) -> usize {
        self.glued.base_vertex
    }

    /// Image of a generator of `Γ_n`: `v^n` for the glued copy of `v`,
    /// `v^{j−1}·ū·v^{−(j−1)}` for a vertex of copy `j`, `ū` on the link.
    pub fn q_generator(&self, u: usize) -> Result<Word> {
        if u >= self.glued.origin.len() {
            return Err(Error::UnknownVertex(format!("#{u}")));
        }
        let (bar, v, n) = (self.glued.origin[u], self.v(), self.n());
        Ok(match self.glued.copy[u] {
            None if bar == v => self.target.gen(v, n as i64),
            None => self.target.gen(bar, 1),
            Some(j) => self.target.conjugate(&self.target.gen(v, j as i64 - 1), &self.target.gen(bar, 1)),
        })
    }

    pub fn q_embed(&self, w: &Word) -> Word {
        let mut out = Word::identity();
        for s in w.syllables() {
            let g = self.q_generator(s.gen).expect("source generator");
            out = self.target.multiply(&out, &self.target.power(&g, s.exp));
        }
        out
    }

    /// Rewrites an element of `ker φ_n` as a word over `Γ_n`: each letter
    /// `u^e` read after `v`-exponent `s = mn + (j−1)` becomes
    /// `v_n^m·u[j]^e·v_n^{−m}`, and the leftover `v^{mn}` becomes `v_n^m`.
    pub fn q_preimage(&self, w: &Word) -> Option<Word> {
        let (v, n) = (self.v(), self.n() as i64);
        if w.exponent_sum(v).rem_euclid(n) != 0 {
            return None;
        }
        let vn = self.glued.copy_of(v, 1)?;
        let lk = self.target.graph().link(v);
        let mut out: Vec<Syllable> = Vec::new();
        let mut s = 0i64;
        for syl in w.syllables() {
            if syl.gen == v {
                s += syl.exp;
                continue;
            }
            if lk.contains(syl.gen) {
                out.push(Syllable::new(self.glued.copy_of(syl.gen, 1)?, syl.exp));
                continue;
            }
            let (m, j) = (s.div_euclid(n), s.rem_euclid(n) + 1);
            let u = self.glued.copy_of(syl.gen, j as u32)?;
            out.extend([Syllable::new(vn, m), Syllable::new(u, syl.exp), Syllable::new(vn, -m)]);
        }
        out.push(Syllable::new(vn, s / n));
        let out: Vec<Syllable> = out.into_iter().filter(|s| s.exp != 0).collect();
        Some(self.source.normalize(&out))
    }

    /// Relations of `Γ_n` whose images fail to commute.
    pub fn broken_relations(&self) -> Vec<(usize, usize)> {
        self.source
            .graph()
            .edges()
            .into_iter()
            .filter(|&(a, b)| {
                let (x, y) = (self.q_generator(a).expect("vertex"), self.q_generator(b).expect("vertex"));
                self.target.multiply(&x, &y) != self.target.multiply(&y, &x)
            })
            .collect()
    }

    /// Generators whose image has nonzero `φ_n`.
    pub fn off_kernel(&self) -> Vec<usize> {
        (0..self.source.rank()).filter(|&u| phi_n(&self.q_generator(u).expect("vertex"), self.v(), self.n()) != 0).collect()
    }

    /// Pairs of distinct elements of the source ball with equal images.
    pub fn collisions(&self, radius: u64) -> Vec<(Word, Word)> {
        let mut seen: BTreeMap<Word, Word> = BTreeMap::new();
        let mut out = Vec::new();
        for w in self.source.ball(radius) {
            let img = self.q_embed(&w);
            if let Some(prev) = seen.insert(img, w.clone()) {
                out.push((prev, w));
            }
        }
        out
    }

    /// Every element of the target ball of `radius` lies in the coset
    /// `v^k·q(G(Γ_n))` for `k = φ_n(x)`, witnessed by a preimage of
    /// `v^{−k}x`, and in no other since `φ_n ∘ q = 0`.
    pub fn index_certificate(&self, radius: u64) -> IndexCertificate {
        let (v, n) = (self.v(), self.n());
        let residues = (0..n).map(|k| phi_n(&self.target.gen(v, k as i64), v, n)).collect();
        let window = self.target.ball(radius);
        let mut failures = Vec::new();
        for x in &window {
            let k = phi_n(x, v, n);
            let y = self.target.multiply(&self.target.gen(v, -(k as i64)), x);
            match self.q_preimage(&y) {
                Some(p) if self.q_embed(&p) == y => {}
                _ => failures.push(x.clone()),
            }
        }
        let index = if failures.is_empty() && self.off_kernel().is_empty() { n } else { 0 };
        IndexCertificate { index, window: window.len(), residues, failures }
    }

    /// The image under `q` of the parallelism class of a standard line.
    pub fn q_star(&self, u: &ExtVertex) -> ExtVertex {
        let (bar, v) = (self.glued.origin[u.ty], self.v());
        let base = self.q_embed(&u.conj);
        let conj = match self.glued.copy[u.ty] {
            Some(j) => self.target.multiply(&base, &self.target.gen(v, j as i64 - 1)),
            None => base,
        };
        self.target.ext_vertex(&conj, bar).expect("vertex in range")
    }
}

/// `c(h, x)`: the permutation sending `v` to the type of `h(x⟨v⟩)`, the
/// line spanned by the images of `x·v^k`, `|k| ≤ samples`.
pub fn type_cocycle(raag: &Raag, h: &dyn PointMap, x: &Word, samples: i64) -> Result<Vec<usize>> {
    let mut theta = Vec::with_capacity(raag.rank());
    for v in 0..raag.rank() {
        let pts: Vec<Word> = (-samples..=samples)
            .map(|k| h.apply(raag, &raag.multiply(x, &raag.gen(v, k))))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::NotAnAutomorphism(format!("map undefined near {}", raag.display(x))))?;
        let f = raag.span(&pts).expect("nonempty");
        if f.ty.len() != 1 {
            return Err(Error::NotAnAutomorphism(format!("image of the {}-line is not a line", raag.graph().name(v))));
        }
        theta.push(f.ty.first().expect("one vertex"));
    }
    if !raag.graph().is_automorphism(&theta) {
        return Err(Error::NotAnAutomorphism(format!("{theta:?} at {}", raag.display(x))));
    }
    Ok(theta)
}

#[derive(Clone, Debug, Default)]
pub struct TypeCocycleTable {
    pub entries: BTreeMap<(String, Word), Vec<usize>>,
}

impl TypeCocycleTable {
    pub fn record(&mut self, raag: &Raag, label: &str, h: &dyn PointMap, window: &[Word], samples: i64) -> Result<()> {
        for x in window {
            self.entries.insert((label.to_string(), x.clone()), type_cocycle(raag, h, x, samples)?);
        }
        Ok(())
    }

    pub fn get(&self, label: &str, x: &Word) -> Option<&Vec<usize>> {
        self.entries.get(&(label.to_string(), x.clone()))
    }
}

#[derive(Clone, Debug)]
pub struct CocycleLawReport {
    pub holds: bool,
    pub checked: usize,
    pub witness: Option<Word>,
}

/// `c(h1∘h2, x) = c(h1, h2 x) ∘ c(h2, x)` at every window point.
pub fn cocycle_law_check(raag: &Raag, h1: &dyn PointMap, h2: &dyn PointMap, window: &[Word], samples: i64) -> Result<CocycleLawReport> {
    let comp = |r: &Raag, x: &Word| h2.apply(r, x).and_then(|y| h1.apply(r, &y));
    let mut checked = 0;
    for x in window {
        let c12 = type_cocycle(raag, &comp, x, samples)?;
        let c2 = type_cocycle(raag, h2, x, samples)?;
        let hx = h2.apply(raag, x).ok_or_else(|| Error::Invalid("map undefined".into()))?;
        let c1 = type_cocycle(raag, h1, &hx, samples)?;
        checked += 1;
        if (0..raag.rank()).any(|v| c12[v] != c1[c2[v]]) {
            return Ok(CocycleLawReport { holds: false, checked, witness: Some(x.clone()) });
        }
    }
    Ok(CocycleLawReport { holds: true, checked, witness: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
    Gray,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    #[default]
    Original,
    Reversed,
    Loop,
    Closing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DVertex {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DEdge {
    pub from: usize,
    pub to: usize,
    pub label: usize,
    #[serde(default)]
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledDigraph {
    pub alphabet: Vec<String>,
    pub vertices: Vec<DVertex>,
    pub edges: Vec<DEdge>,
}

#[derive(Serialize, Deserialize)]
struct DigraphJson {
    #[serde(default)]
    alphabet: Vec<String>,
    vertices: Vec<DVertex>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: String,
    to: String,
    label: String,
    #[serde(default)]
    kind: EdgeKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringCertificate {
    pub total: bool,
    /// Per vertex, the labels missing as incoming and as outgoing.
    pub missing: Vec<(usize, Vec<usize>, Vec<usize>)>,
    /// Edges added by the completion that produced this certificate; for
    /// a bare `certificate()` call, all edges of that kind.
    pub loops_added: usize,
    pub closing_added: usize,
}

impl LabeledDigraph {
    pub fn new(alphabet: Vec<String>) -> Self {
        LabeledDigraph { alphabet, vertices: Vec::new(), edges: Vec::new() }
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, color: Option<Color>) -> usize {
        self.vertices.push(DVertex { id: id.into(), color });
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize, label: usize, kind: EdgeKind) {
        self.edges.push(DEdge { from, to, label, kind });
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.from == v && e.to == v && e.kind == EdgeKind::Loop).count()
    }

    /// Each label at most once in and once out at every vertex.
    pub fn check_immersion(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if e.label >= self.alphabet.len() || e.from >= self.vertices.len() || e.to >= self.vertices.len() {
                return Err(Error::Digraph("edge out of range".into()));
            }
            for key in [(e.from, e.label, true), (e.to, e.label, false)] {
                if !seen.insert(key) {
                    let dir = if key.2 { "outgoing" } else { "incoming" };
                    return Err(Error::Digraph(format!("two {dir} {}-edges at {}", self.alphabet[e.label], self.vertices[key.0].id)));
                }
            }
        }
        Ok(())
    }

    pub fn certificate(&self) -> CoveringCertificate {
        let mut missing = Vec::new();
        for v in 0..self.vertices.len() {
            let ins: Vec<usize> = (0..self.alphabet.len())
                .filter(|&a| self.edges.iter().filter(|e| e.to == v && e.label == a).count() != 1)
                .collect();
            let outs: Vec<usize> = (0..self.alphabet.len())
                .filter(|&a| self.edges.iter().filter(|e| e.from == v && e.label == a).count() != 1)
                .collect();
            if !ins.is_empty() || !outs.is_empty() {
                missing.push((v, ins, outs));
            }
        }
        CoveringCertificate {
            total: missing.is_empty(),
            missing,
            loops_added: self.edges.iter().filter(|e| e.kind == EdgeKind::Loop).count(),
            closing_added: self.edges.iter().filter(|e| e.kind == EdgeKind::Closing).count(),
        }
    }

    /// Adds, for every original edge, the same-label edge in the opposite
    /// direction.
    pub fn with_reversed_edges(&self) -> Self {
        let mut out = self.clone();
        for e in &self.edges {
            if e.kind == EdgeKind::Original {
                out.add_edge(e.to, e.from, e.label, EdgeKind::Reversed);
            }
        }
        out
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: DigraphJson = serde_json::from_str(s).map_err(|e| Error::Digraph(e.to_string()))?;
        let index: BTreeMap<String, usize> = j.vertices.iter().enumerate().map(|(i, v)| (v.id.clone(), i)).collect();
        if index.len() != j.vertices.len() {
            return Err(Error::Digraph("duplicate vertex id".into()));
        }
        let mut alphabet = j.alphabet.clone();
        for e in &j.edges {
            if !alphabet.contains(&e.label) {
                alphabet.push(e.label.clone());
            }
        }
        let find = |id: &str| index.get(id).copied().ok_or_else(|| Error::Digraph(format!("unknown vertex {id}")));
        let mut g = LabeledDigraph { alphabet, vertices: j.vertices, edges: Vec::new() };
        for e in &j.edges {
            let label = g.label_index(&e.label).expect("added above");
            g.edges.push(DEdge { from: find(&e.from)?, to: find(&e.to)?, label, kind: e.kind });
        }
        Ok(g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = DigraphJson {
            alphabet: self.alphabet.clone(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: self.vertices[e.from].id.clone(),
                    to: self.vertices[e.to].id.clone(),
                    label: self.alphabet[e.label].clone(),
                    kind: e.kind,
                })
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }
}

/// Canonical completion onto the wedge of `|alphabet|` circles: for each
/// label, the edges of that label form directed paths and cycles; every
/// path is closed by an edge from its end back to its start (a loop when
/// the path is a single vertex).
pub fn canonical_complete(d: &LabeledDigraph) -> Result<(LabeledDigraph, CoveringCertificate)> {
    d.check_immersion()?;
    let mut out = d.clone();
    for a in 0..d.alphabet.len() {
        let mut next = BTreeMap::new();
        let mut has_in = BTreeSet::new();
        for e in d.edges.iter().filter(|e| e.label == a) {
            next.insert(e.from, e.to);
            has_in.insert(e.to);
        }
        for start in 0..d.vertices.len() {
            if has_in.contains(&start) {
                continue;
            }
            let mut end = start;
            while let Some(&t) = next.get(&end) {
                end = t;
            }
            let kind = if end == start { EdgeKind::Loop } else { EdgeKind::Closing };
            out.add_edge(end, start, a, kind);
        }
    }
    let mut cert = out.certificate();
    let added = &out.edges[d.edges.len()..];
    cert.loops_added = added.iter().filter(|e| e.kind == EdgeKind::Loop).count();
    cert.closing_added = added.iter().filter(|e| e.kind == EdgeKind::Closing).count();
    Ok((out, cert))
}

/// A ball in the `n`-regular tree with edges labeled `s_1..s_n` (one of
/// each at every vertex) and the bipartite colouring, white at the root.
#[derive(Clone, Debug)]
pub struct TreeWindow {
    pub n: usize,
    pub names: Vec<String>,
    pub colors: Vec<Color>,
    /// `(u, w, i)`: an `s_i`-edge.
    pub edges: Vec<(usize, usize, usize)>,
}

pub fn tree_window(n: usize, radius: usize) -> TreeWindow {
    let mut names = vec![String::new()];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut colors = vec![Color::White];
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    for depth in 1..=radius {
        let mut next = Vec::new();
        for &p in &frontier {
            for i in 0..n {
                if words[p].last() == Some(&i) {
                    continue;
                }
                let mut w = words[p].clone();
                w.push(i);
                names.push(w.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join(" "));
                words.push(w);
                colors.push(if depth % 2 == 0 { Color::White } else { Color::Black });
                edges.push((p, words.len() - 1, i));
                next.push(words.len() - 1);
            }
        }
        frontier = next;
    }
    names[0] = "e".into();
    TreeWindow { n, names, colors, edges }
}

/// The subdivided window with edges oriented toward the midpoints, labeled
/// `a_i` from white and `a_i'` from black endpoints of `s_i`-edges.
pub fn barycentric_label(t: &TreeWindow) -> Result<LabeledDigraph> {
    let alphabet: Vec<String> = (1..=t.n).map(|i| format!("a{i}")).chain((1..=t.n).map(|i| format!("a{i}'"))).collect();
    let mut d = LabeledDigraph::new(alphabet);
    for (name, &c) in t.names.iter().zip(&t.colors) {
        d.add_vertex(name.clone(), Some(c));
    }
    for &(u, w, i) in &t.edges {
        if t.colors[u] == t.colors[w] || i >= t.n {
            return Err(Error::Digraph(format!("edge {}–{} breaks the colouring", t.names[u], t.names[w])));
        }
        let mid = d.add_vertex(format!("[{}|{}]", t.names[u], t.names[w]), Some(Color::Gray));
        for x in [u, w] {
            let label = if t.colors[x] == Color::White { i } else { t.n + i };
            d.add_edge(x, mid, label, EdgeKind::Original);
        }
    }
    d.check_immersion()?;
    Ok(d)
}

/// The `T'_n` window with reversed edges, ready for completion.
pub fn tprime_preset(n: usize, radius: usize) -> Result<LabeledDigraph> {
    Ok(barycentric_label(&tree_window(n, radius))?.with_reversed_edges())
}

/// Pairs of loops at `x` whose labels are adjacent, i.e. the pairs that
/// must commute and span a square in the higher skeleton.
pub fn loop_commutation(d: &LabeledDigraph, x: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let labels: Vec<usize> = d.edges.iter().filter(|e| e.from == x && e.to == x && e.kind == EdgeKind::Loop).map(|e| e.label).collect();
    let mut out = Vec::new();
    for (i, &a) in labels.iter().enumerate() {
        for &b in &labels[i + 1..] {
            if adjacent(a, b) {
                out.push((a, b));
            }
        }
    }
    out
}
