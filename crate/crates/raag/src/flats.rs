//! Standard cosets `gG_Λ`, standard flats (Λ a clique), parallelism and
//! the product regions `P_𝗏 = gG_{st(v)}` of extension-graph vertices.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ext::ExtVertex;
use crate::graph::VertexSet;
use crate::words::{Raag, Word};

/// The coset `rep·G_ty` with `rep` its shortest element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StandardCoset {
    pub rep: Word,
    pub ty: VertexSet,
}

/// A standard coset whose type is a clique.
pub type StandardFlat = StandardCoset;

impl StandardCoset {
    pub fn dim(&self) -> usize {
        self.ty.len()
    }
}

impl Ord for StandardCoset {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ty.len(), &self.rep, self.ty.0).cmp(&(other.ty.len(), &other.rep, other.ty.0))
    }
}

impl PartialOrd for StandardCoset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite view of `P_𝗏 ≅ ℤ × L`: the `ℤ` coordinates and the `𝗏`-lines
/// whose points have length at most `length_bound` relative to the region's
/// representative.
#[derive(Clone, Debug)]
pub struct ProductRegion {
    pub vertex: ExtVertex,
    pub coset: StandardCoset,
    pub length_bound: u64,
    pub z_window: Vec<i64>,
    pub l_window: Vec<StandardFlat>,
}

impl Raag {
    pub fn coset(&self, g: &Word, ty: VertexSet) -> StandardCoset {
        StandardCoset { rep: self.coset_min_rep(g, ty), ty }
    }

    pub fn make_flat(&self, g: &Word, ty: VertexSet) -> Result<StandardFlat> {
        if !self.graph().is_clique(ty) {
            return Err(Error::NotAClique(self.graph().format_set(ty)));
        }
        Ok(self.coset(g, ty))
    }

    pub fn point_flat(&self, g: &Word) -> StandardFlat {
        StandardCoset { rep: g.clone(), ty: VertexSet::EMPTY }
    }

    pub fn member(&self, f: &StandardCoset, g: &Word) -> bool {
        self.in_subgroup(&self.left_quotient(&f.rep, g), f.ty)
    }

    pub fn flat_leq(&self, f1: &StandardCoset, f2: &StandardCoset) -> bool {
        f1.ty.is_subset(f2.ty) && self.member(f2, &f1.rep)
    }

    /// `Λ ∪ Λ^⊥`, the type of the normalizer of `G_Λ`.
    pub fn normalizer_type(&self, ty: VertexSet) -> VertexSet {
        ty.union(self.graph().orthogonal(ty))
    }

    pub fn are_parallel(&self, f1: &StandardCoset, f2: &StandardCoset) -> bool {
        f1.ty == f2.ty && self.in_subgroup(&self.left_quotient(&f1.rep, &f2.rep), self.normalizer_type(f1.ty))
    }

    pub fn parallel_set(&self, f: &StandardCoset) -> StandardCoset {
        self.coset(&f.rep, self.normalizer_type(f.ty))
    }

    /// Splits a point of `parallel_set(f)` as `p·λ·μ` with `λ ∈ G_Λ`,
    /// `μ ∈ G_{Λ^⊥}`, `p` the parallel set's representative.
    pub fn parallel_coordinates(&self, f: &StandardCoset, x: &Word) -> Result<(Word, Word)> {
        let p = self.parallel_set(f);
        let h = self.left_quotient(&p.rep, x);
        if !self.in_subgroup(&h, p.ty) {
            return Err(Error::NotMember(self.display(x), self.format_coset(&p)));
        }
        let perp = self.graph().orthogonal(f.ty);
        Ok((self.restrict(&h, f.ty), self.restrict(&h, perp)))
    }

    pub fn parallelism_map(&self, f1: &StandardCoset, f2: &StandardCoset, x: &Word) -> Result<Word> {
        if !self.are_parallel(f1, f2) {
            return Err(Error::NotParallel);
        }
        if !self.member(f1, x) {
            return Err(Error::NotMember(self.display(x), self.format_coset(f1)));
        }
        let p = self.parallel_set(f1).rep;
        let (lambda, _) = self.parallel_coordinates(f1, x)?;
        let (_, mu2) = self.parallel_coordinates(f1, &f2.rep)?;
        Ok(self.product(&[&p, &mu2, &lambda]))
    }

    pub fn flat_intersection(&self, f1: &StandardCoset, f2: &StandardCoset) -> Option<StandardCoset> {
        let g = self.left_quotient(&f1.rep, &f2.rep);
        let (p, _) = self.double_coset_factor(&g, f1.ty, f2.ty)?;
        Some(self.coset(&self.multiply(&f1.rep, &p), f1.ty.intersection(f2.ty)))
    }

    /// Flats `gG_Λ` for every clique Λ (or every maximal clique).
    pub fn flats_through(&self, g: &Word, only_maximal: bool) -> Vec<StandardFlat> {
        let cliques = if only_maximal { self.graph().maximal_cliques() } else { self.graph().cliques() };
        let mut out: Vec<StandardFlat> = cliques.into_iter().map(|c| self.coset(g, c)).collect();
        out.sort();
        out
    }

    /// The clique `Δ(F)` of the extension graph whose vertices generate the
    /// stabilizer of `F`.
    pub fn delta(&self, f: &StandardFlat) -> Vec<ExtVertex> {
        let mut out: Vec<ExtVertex> =
            f.ty.iter().map(|v| self.ext_vertex(&f.rep, v).expect("type vertex in range")).collect();
        out.sort();
        out
    }

    pub fn product_region_coset(&self, u: &ExtVertex) -> StandardCoset {
        StandardCoset { rep: u.conj.clone(), ty: self.graph().star(u.ty) }
    }

    pub fn product_region(&self, u: &ExtVertex, length_bound: u64) -> ProductRegion {
        let lk = self.graph().link(u.ty);
        let bound = length_bound as i64;
        let z_window = (-bound..=bound).collect();
        let mut l_window: Vec<StandardFlat> = self
            .subgroup_ball(lk, length_bound)
            .iter()
            .map(|mu| self.coset(&self.multiply(&u.conj, mu), VertexSet::singleton(u.ty)))
            .collect();
        l_window.sort();
        ProductRegion { vertex: u.clone(), coset: self.product_region_coset(u), length_bound, z_window, l_window }
    }

    /// `g ↦ (z, ℓ)` where `g = rep(ℓ)·v^z` and `ℓ` is the `𝗏`-line through `g`.
    pub fn decompose_point(&self, u: &ExtVertex, g: &Word) -> Result<(i64, StandardFlat)> {
        let st = self.graph().star(u.ty);
        let h = self.left_quotient(&u.conj, g);
        if !self.in_subgroup(&h, st) {
            return Err(Error::NotMember(self.display(g), self.format_coset(&self.product_region_coset(u))));
        }
        let z = h.exponent_sum(u.ty);
        let mu = self.restrict(&h, self.graph().link(u.ty));
        Ok((z, self.coset(&self.multiply(&u.conj, &mu), VertexSet::singleton(u.ty))))
    }

    pub fn recombine_point(&self, u: &ExtVertex, z: i64, line: &StandardFlat) -> Word {
        self.multiply(&line.rep, &self.gen(u.ty, z))
    }

    /// `REP@TYPE`, for example `a b@c,d`; an empty type gives a point.
    pub fn parse_coset(&self, text: &str) -> Result<StandardCoset> {
        let (rep, ty) = text.rsplit_once('@').ok_or_else(|| Error::WordSyntax(format!("expected `REP@TYPE`, got `{text}`")))?;
        let ty = self.graph().vertex_set(ty)?;
        Ok(self.coset(&self.parse(rep)?, ty))
    }

    pub fn parse_flat(&self, text: &str) -> Result<StandardFlat> {
        let c = self.parse_coset(text)?;
        self.make_flat(&c.rep, c.ty)
    }

    pub fn format_coset(&self, f: &StandardCoset) -> String {
        format!("{}@{}", self.format(&f.rep), self.graph().set_names(f.ty).join(","))
    }

    pub fn coset_to_json(&self, f: &StandardCoset) -> Value {
        json!({"rep": self.format(&f.rep), "type": self.graph().set_names(f.ty)})
    }
}
