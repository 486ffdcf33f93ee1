//! Exact arithmetic in the right-angled Artin group of a graph.
//!
//! Elements are stored as canonical normal forms: a reduced sequence of
//! syllables `v^k`, reordered to the lexicographically least arrangement
//! (by vertex order) among all commutation-equivalent ones.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, VertexSet};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Syllable {
    pub gen: usize,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: usize, exp: i64) -> Self {
        Syllable { gen, exp }
    }
}

/// A group element in canonical normal form. Only [`Raag`] builds these, so
/// two words are equal as elements iff they are equal as values.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Syllable>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    /// Word length: the sum of absolute exponents.
    pub fn len(&self) -> u64 {
        self.0.iter().map(|s| s.exp.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn syllable_count(&self) -> usize {
        self.0.len()
    }

    pub fn support(&self) -> VertexSet {
        self.0.iter().map(|s| s.gen).collect()
    }

    /// Sum of the exponents on generator `v`.
    pub fn exponent_sum(&self, v: usize) -> i64 {
        self.0.iter().filter(|s| s.gen == v).map(|s| s.exp).sum()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.0.iter().map(|s| format!("{}^{}", s.gen, s.exp)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

// Shortlex: word length first, then the syllable sequence.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The group G_Γ together with its defining graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raag {
    graph: SimplicialGraph,
}

impl Raag {
    pub fn new(graph: SimplicialGraph) -> Self {
        Raag { graph }
    }

    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.graph.len()
    }

    fn commutes_mask(&self, v: usize) -> u64 {
        self.graph.link(v).0
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.graph.adjacent(a, b)
    }

    /// The generators and their inverses as one-letter words.
    pub fn letters(&self) -> Vec<Word> {
        (0..self.rank()).flat_map(|v| [self.gen(v, 1), self.gen(v, -1)]).collect()
    }

    pub fn gen(&self, v: usize, exp: i64) -> Word {
        assert!(v < self.rank(), "generator out of range");
        if exp == 0 {
            Word::identity()
        } else {
            Word(vec![Syllable::new(v, exp)])
        }
    }

    // Append a syllable to a reduced sequence, merging with the last
    // same-generator syllable it can be shuffled next to.
    fn push(&self, out: &mut Vec<Syllable>, s: Syllable) {
        if s.exp == 0 {
            return;
        }
        let c = self.commutes_mask(s.gen);
        for j in (0..out.len()).rev() {
            let g = out[j].gen;
            if g == s.gen {
                let e = out[j].exp.checked_add(s.exp).expect("exponent overflow");
                if e == 0 {
                    out.remove(j);
                } else {
                    out[j].exp = e;
                }
                return;
            }
            if c >> g & 1 == 0 {
                break;
            }
        }
        out.push(s);
    }

    // Lexicographically least rearrangement of a reduced sequence: repeatedly
    // emit the smallest generator that can be moved to the front.
    fn canonical(&self, mut rest: Vec<Syllable>) -> Word {
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut seen = 0u64;
            let mut best = 0;
            for (i, s) in rest.iter().enumerate() {
                if seen & !self.commutes_mask(s.gen) == 0 && (i == 0 || s.gen < rest[best].gen) {
                    best = i;
                }
                seen |= 1 << s.gen;
            }
            out.push(rest.remove(best));
        }
        Word(out)
    }

    /// Normal form of an arbitrary sequence of syllables.
    pub fn normalize(&self, raw: &[Syllable]) -> Word {
        let mut out = Vec::with_capacity(raw.len());
        for &s in raw {
            assert!(s.gen < self.rank(), "generator out of range");
            self.push(&mut out, s);
        }
        self.canonical(out)
    }

    pub fn multiply(&self, a: &Word, b: &Word) -> Word {
        if b.is_identity() {
            return a.clone();
        }
        if a.is_identity() {
            return b.clone();
        }
        let mut out = a.0.clone();
        for &s in &b.0 {
            self.push(&mut out, s);
        }
        self.canonical(out)
    }

    pub fn product(&self, words: &[&Word]) -> Word {
        words.iter().fold(Word::identity(), |acc, w| self.multiply(&acc, w))
    }

    pub fn invert(&self, w: &Word) -> Word {
        let rev: Vec<Syllable> = w.0.iter().rev().map(|s| Syllable::new(s.gen, -s.exp)).collect();
        self.canonical(rev)
    }

    /// `a⁻¹ b`.
    pub fn left_quotient(&self, a: &Word, b: &Word) -> Word {
        self.multiply(&self.invert(a), b)
    }

    pub fn equals(&self, a: &Word, b: &Word) -> bool {
        a == b
    }

    pub fn power(&self, w: &Word, k: i64) -> Word {
        let base = if k < 0 { self.invert(w) } else { w.clone() };
        let mut acc = Word::identity();
        let mut sq = base;
        let mut k = k.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.multiply(&sq, &sq);
            }
        }
        acc
    }

    pub fn conjugate(&self, g: &Word, w: &Word) -> Word {
        self.product(&[g, w, &self.invert(g)])
    }

    /// Splits `w = p · r` where `p ∈ G_A` is the maximal left divisor of `w`
    /// supported in `A`.
    pub fn split_prefix(&self, w: &Word, a: VertexSet) -> (Word, Word) {
        let mut p = Vec::new();
        let mut r = Vec::new();
        let mut blocked = 0u64;
        for &s in &w.0 {
            if a.contains(s.gen) && blocked & !self.commutes_mask(s.gen) == 0 {
                p.push(s);
            } else {
                blocked |= 1 << s.gen;
                r.push(s);
            }
        }
        (self.canonical(p), self.canonical(r))
    }

    /// Splits `w = r · s` where `s ∈ G_A` is the maximal right divisor of `w`
    /// supported in `A`.
    pub fn split_suffix(&self, w: &Word, a: VertexSet) -> (Word, Word) {
        let mut s_part = Vec::new();
        let mut r = Vec::new();
        let mut blocked = 0u64;
        for &s in w.0.iter().rev() {
            if a.contains(s.gen) && blocked & !self.commutes_mask(s.gen) == 0 {
                s_part.push(s);
            } else {
                blocked |= 1 << s.gen;
                r.push(s);
            }
        }
        s_part.reverse();
        r.reverse();
        (self.canonical(r), self.canonical(s_part))
    }

    /// The shortest element of the coset `w·G_Λ`.
    pub fn coset_min_rep(&self, w: &Word, lambda: VertexSet) -> Word {
        self.split_suffix(w, lambda).0
    }

    /// Decomposes `g = p · r` with `p ∈ G_A`, `r ∈ G_B`, if possible.
    pub fn double_coset_factor(&self, g: &Word, a: VertexSet, b: VertexSet) -> Option<(Word, Word)> {
        let (p, r) = self.split_prefix(g, a);
        if r.support().is_subset(b) {
            Some((p, r))
        } else {
            None
        }
    }

    /// Whether `g ∈ G_A · G_B`.
    pub fn double_coset_member(&self, g: &Word, a: VertexSet, b: VertexSet) -> bool {
        self.double_coset_factor(g, a, b).is_some()
    }

    pub fn in_subgroup(&self, g: &Word, a: VertexSet) -> bool {
        g.support().is_subset(a)
    }

    /// Deletes the syllables on generators outside `s`. This is the
    /// projection `G_{S ∪ T} → G_S` when `S` and `T` commute elementwise.
    pub fn restrict(&self, w: &Word, s: VertexSet) -> Word {
        self.normalize(&w.0.iter().copied().filter(|x| s.contains(x.gen)).collect::<Vec<_>>())
    }

    /// Image under the graph automorphism `perm`.
    pub fn relabel(&self, w: &Word, perm: &[usize]) -> Word {
        let raw: Vec<Syllable> = w.0.iter().map(|s| Syllable::new(perm[s.gen], s.exp)).collect();
        self.canonical(raw)
    }

    /// Image under the endomorphism sending generator `v` to `images[v]`.
    pub fn apply_endomorphism(&self, w: &Word, images: &[Word]) -> Word {
        w.0.iter().fold(Word::identity(), |acc, s| self.multiply(&acc, &self.power(&images[s.gen], s.exp)))
    }

    /// All elements of word length at most `radius`, in shortlex order,
    /// grouped by length.
    pub fn ball_layers(&self, radius: u64) -> Vec<Vec<Word>> {
        self.subgroup_ball_layers(self.graph.all(), radius)
    }

    /// Layers of the ball in the special subgroup `G_A`, with its own word
    /// metric (which agrees with the ambient one).
    pub fn subgroup_ball_layers(&self, a: VertexSet, radius: u64) -> Vec<Vec<Word>> {
        let letters: Vec<Word> = a.iter().flat_map(|v| [self.gen(v, 1), self.gen(v, -1)]).collect();
        let mut seen: HashSet<Word> = HashSet::new();
        seen.insert(Word::identity());
        let mut layers = vec![vec![Word::identity()]];
        for k in 0..radius {
            let mut next = BTreeSet::new();
            for w in &layers[k as usize] {
                for l in &letters {
                    let x = self.multiply(w, l);
                    if x.len() == k + 1 && !seen.contains(&x) {
                        next.insert(x);
                    }
                }
            }
            seen.extend(next.iter().cloned());
            layers.push(next.into_iter().collect());
        }
        layers
    }

    pub fn ball(&self, radius: u64) -> Vec<Word> {
        self.ball_layers(radius).into_iter().flatten().collect()
    }

    pub fn subgroup_ball(&self, a: VertexSet, radius: u64) -> Vec<Word> {
        self.subgroup_ball_layers(a, radius).into_iter().flatten().collect()
    }

    /// Parses `a^3 b c^-1`; whitespace-separated, the empty string is the identity.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let mut raw = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| Error::WordSyntax(format!("bad exponent in `{tok}`")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            if name.is_empty() {
                return Err(Error::WordSyntax(format!("missing generator in `{tok}`")));
            }
            let v = self.graph.vertex(name)?;
            raw.push(Syllable::new(v, exp));
        }
        Ok(self.normalize(&raw))
    }

    /// Inverse of [`Raag::parse`]; the identity prints as the empty string.
    pub fn format(&self, w: &Word) -> String {
        let parts: Vec<String> = w
            .0
            .iter()
            .map(|s| {
                let n = self.graph.name(s.gen);
                if s.exp == 1 {
                    n.to_string()
                } else {
                    format!("{n}^{}", s.exp)
                }
            })
            .collect();
        parts.join(" ")
    }

    /// Like [`Raag::format`] but prints the identity as `id`.
    pub fn display(&self, w: &Word) -> String {
        if w.is_identity() {
            "id".into()
        } else {
            self.format(w)
        }
    }

    /// JSON form: a list of `[generator, exponent]` pairs.
    pub fn word_to_json(&self, w: &Word) -> Value {
        Value::Array(w.0.iter().map(|s| serde_json::json!([self.graph.name(s.gen), s.exp])).collect())
    }

    pub fn word_from_json(&self, v: &Value) -> Result<Word> {
        let arr = v.as_array().ok_or_else(|| Error::WordSyntax("expected a list of pairs".into()))?;
        let mut raw = Vec::new();
        for p in arr {
            let pair = p.as_array().filter(|a| a.len() == 2);
            let (g, e) = match pair {
                Some(a) => (a[0].as_str(), a[1].as_i64()),
                None => (None, None),
            };
            match (g, e) {
                (Some(g), Some(e)) => raw.push(Syllable::new(self.graph.vertex(g)?, e)),
                _ => return Err(Error::WordSyntax(format!("bad pair {p}"))),
            }
        }
        Ok(self.normalize(&raw))
    }

    /// Checks that the transvection `v ↦ v·w` (other generators fixed)
    /// respects every commutation relation and has infinite order on the
    /// abelianization.
    pub fn verify_transvection(&self, v: usize, w: usize) -> TransvectionCheck {
        let mut images: Vec<Word> = (0..self.rank()).map(|u| self.gen(u, 1)).collect();
        images[v] = self.multiply(&self.gen(v, 1), &self.gen(w, 1));
        let mut broken = Vec::new();
        for (x, y) in self.graph.edges() {
            let (a, b) = (&images[x], &images[y]);
            if self.multiply(a, b) != self.multiply(b, a) {
                broken.push((x, y));
            }
        }
        // iterate the endomorphism on v and read off the w-coordinate
        let mut cur = self.gen(v, 1);
        let mut grows = v != w;
        for k in 1..=4 {
            cur = self.apply_endomorphism(&cur, &images);
            grows &= cur.exponent_sum(w) == k && cur.exponent_sum(v) == 1;
        }
        TransvectionCheck { preserves_relations: broken.is_empty(), broken_relations: broken, infinite_order: grows }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransvectionCheck {
    pub preserves_relations: bool,
    pub broken_relations: Vec<(usize, usize)>,
    pub infinite_order: bool,
}
