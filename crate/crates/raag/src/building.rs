//! Truncated balls in the right-angled building: the cubical realization of
//! the inclusion poset of standard flats.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::flats::StandardFlat;
use crate::graph::VertexSet;
use crate::words::{Raag, Word};

/// The interval `[low, high]` of the flat poset, a cube of dimension
/// `rank(high) − rank(low)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Cube {
    pub low: usize,
    pub high: usize,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct BuildingBall {
    pub base: StandardFlat,
    pub radius: u32,
    pub length_bound: u64,
    pub vertices: Vec<StandardFlat>,
    /// Combinatorial distance to `base` inside the ball (`u32::MAX` if
    /// unreachable, which only happens for hand-built windows).
    pub distance: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
    /// Every cube of dimension at least one, edges included.
    pub cubes: Vec<Cube>,
    /// True when every neighbour of the vertex in the whole building is in
    /// the ball. Only rank-0 vertices can be exhausted.
    pub exhausted: Vec<bool>,
    index: HashMap<StandardFlat, usize>,
}

impl BuildingBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, f: &StandardFlat) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn contains(&self, f: &StandardFlat) -> bool {
        self.index.contains_key(f)
    }

    pub fn cubes_of_dim(&self, d: usize) -> impl Iterator<Item = &Cube> {
        self.cubes.iter().filter(move |c| c.dim == d)
    }

    /// Counts of cells by dimension, vertices first.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.cubes.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        f[0] = self.vertices.len();
        for c in &self.cubes {
            f[c.dim] += 1;
        }
        f
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        self.distance.iter().all(|&d| d != u32::MAX)
    }

    pub fn remove_cube(&mut self, low: usize, high: usize) -> bool {
        let before = self.cubes.len();
        self.cubes.retain(|c| !(c.low == low && c.high == high));
        self.edges.retain(|&(a, b)| !(a == low && b == high));
        before != self.cubes.len()
    }

    pub fn distance_between(&self, from: usize, to: usize) -> Option<u32> {
        Some(bfs(&self.adjacency(), from)[to]).filter(|&d| d != u32::MAX)
    }
}

fn bfs(adj: &[Vec<usize>], from: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adj.len()];
    if adj.is_empty() {
        return dist;
    }
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// The link of a vertex inside a ball. Link vertices are the ball
/// neighbours; each cube through the vertex contributes one simplex.
#[derive(Clone, Debug)]
pub struct VertexLink {
    pub vertex: usize,
    pub neighbors: Vec<usize>,
    /// Simplices as sorted positions into `neighbors`.
    pub simplices: Vec<Vec<usize>>,
    /// Positions of the upward neighbours (finitely many in the building).
    pub lk_plus: Vec<usize>,
    /// Downward neighbours grouped by the type vertex that is dropped; each
    /// class is a parallelism class and is infinite in the building.
    pub classes: Vec<(usize, Vec<usize>)>,
    /// Whether the link is the full link in the building.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlagViolation {
    /// Every flat of the interval is present but the cube is not listed.
    MissingCube { low: usize, high: usize },
    /// A listed cube whose interval is not entirely present.
    BrokenInterval { low: usize, high: usize },
    /// Link vertices pairwise joined without a simplex spanning them.
    NonFlagLink { vertex: usize, clique: Vec<usize> },
    /// A rank-0 link that is not the flag completion of Γ.
    LinkMismatch { vertex: usize },
}

#[derive(Clone, Debug)]
pub struct FlagReport {
    pub flag: bool,
    pub judged: usize,
    pub inconclusive: usize,
    pub violations: Vec<FlagViolation>,
}

#[derive(Clone, Debug)]
pub struct ProductSplit {
    pub factor_types: (VertexSet, VertexSet),
    pub factors: (Raag, Raag),
    pub balls: (BuildingBall, BuildingBall),
    /// For each ball vertex, its components as indices into the factor balls.
    pub pairs: Vec<(usize, usize)>,
    pub injective: bool,
    pub cubes_are_products: bool,
    /// Vertex index maps from each factor graph into Γ.
    pub maps: (Vec<usize>, Vec<usize>),
}

impl ProductSplit {
    pub fn consistent(&self) -> bool {
        self.injective && self.cubes_are_products
    }
}

/// An element `(g, θ)` of `G ⋊ Aut(Γ)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HatElement {
    pub g: Word,
    pub theta: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct GeodesicCheck {
    pub path_length: usize,
    pub is_edge_path: bool,
    pub bfs_distance: Option<u32>,
    /// Twice the syllable count of `start⁻¹·end`, the rank-0 distance.
    pub syllable_distance: Option<u64>,
    pub radius: u32,
    pub length_bound: u64,
    pub ball_size: usize,
    pub geodesic: bool,
}

impl Raag {
    pub fn rank_of(&self, f: &StandardFlat) -> usize {
        f.ty.len()
    }

    /// Upward neighbours `rep·G_{Λ∪x}`.
    pub fn building_up(&self, f: &StandardFlat) -> Vec<StandardFlat> {
        self.graph().orthogonal(f.ty).iter().map(|x| self.coset(&f.rep, f.ty.with(x))).collect()
    }

    /// Downward neighbours `rep·v^k·G_{Λ∖v}` with representative length at
    /// most `length_bound`.
    pub fn building_down(&self, f: &StandardFlat, length_bound: u64) -> Vec<StandardFlat> {
        let room = length_bound.saturating_sub(f.rep.len()) as i64;
        if f.rep.len() > length_bound {
            return Vec::new();
        }
        let mut out = Vec::new();
        for v in f.ty.iter() {
            for k in -room..=room {
                out.push(self.coset(&self.multiply(&f.rep, &self.gen(v, k)), f.ty.without(v)));
            }
        }
        out
    }

    pub fn building_neighbors(&self, f: &StandardFlat, length_bound: u64) -> Vec<StandardFlat> {
        let mut out = self.building_down(f, length_bound);
        out.extend(self.building_up(f).into_iter().filter(|u| u.rep.len() <= length_bound));
        out.sort();
        out
    }

    /// All flats within combinatorial distance `radius` of `base` reachable
    /// through flats whose representative has length at most `length_bound`.
    pub fn building_ball(&self, base: &StandardFlat, radius: u32, length_bound: u64) -> BuildingBall {
        let mut seen: HashMap<StandardFlat, u32> = HashMap::new();
        let mut order = vec![base.clone()];
        seen.insert(base.clone(), 0);
        let mut frontier = vec![base.clone()];
        for d in 1..=radius {
            let mut next = BTreeSet::new();
            for f in &frontier {
                for n in self.building_neighbors(f, length_bound) {
                    if !seen.contains_key(&n) {
                        next.insert(n);
                    }
                }
            }
            for n in &next {
                seen.insert(n.clone(), d);
            }
            order.extend(next.iter().cloned());
            frontier = next.into_iter().collect();
        }
        let mut ball = self.building_window(base, order);
        ball.radius = radius;
        ball.length_bound = length_bound;
        ball
    }

    /// The full subcomplex spanned by an arbitrary finite set of flats.
    /// Radius and length bound are recorded as the observed maxima.
    pub fn building_window(&self, base: &StandardFlat, vertices: Vec<StandardFlat>) -> BuildingBall {
        let mut vs = Vec::with_capacity(vertices.len());
        let mut index = HashMap::new();
        for f in vertices {
            if !index.contains_key(&f) {
                index.insert(f.clone(), vs.len());
                vs.push(f);
            }
        }
        let cliques = self.graph().cliques();
        let mut cubes = Vec::new();
        for (i, f) in vs.iter().enumerate() {
            for &c in &cliques {
                if c == f.ty || !f.ty.is_subset(c) {
                    continue;
                }
                let extra = c.difference(f.ty);
                let full = extra.subsets().all(|s| index.contains_key(&self.coset(&f.rep, f.ty.union(s))));
                if full {
                    let high = index[&self.coset(&f.rep, c)];
                    cubes.push(Cube { low: i, high, dim: extra.len() });
                }
            }
        }
        cubes.sort_by_key(|c| (c.dim, c.low, c.high));
        let edges: Vec<(usize, usize)> = cubes.iter().filter(|c| c.dim == 1).map(|c| (c.low, c.high)).collect();
        let mut adj = vec![Vec::new(); vs.len()];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let start = index.get(base).copied();
        let distance = match start {
            Some(s) => bfs(&adj, s),
            None => vec![u32::MAX; vs.len()],
        };
        let exhausted = vs
            .iter()
            .map(|f| f.ty.is_empty() && self.building_up(f).iter().all(|u| index.contains_key(u)))
            .collect();
        let radius = distance.iter().copied().filter(|&d| d != u32::MAX).max().unwrap_or(0);
        let length_bound = vs.iter().map(|f| f.rep.len()).max().unwrap_or(0);
        BuildingBall { base: base.clone(), radius, length_bound, vertices: vs, distance, edges, cubes, exhausted, index }
    }

    /// Cubes through each vertex of the ball.
    pub fn cube_incidence(&self, ball: &BuildingBall) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); ball.len()];
        for (ci, c) in ball.cubes.iter().enumerate() {
            let low = &ball.vertices[c.low];
            let extra = ball.vertices[c.high].ty.difference(low.ty);
            for s in extra.subsets() {
                if let Some(i) = ball.index_of(&self.coset(&low.rep, low.ty.union(s))) {
                    inc[i].push(ci);
                }
            }
        }
        inc
    }

    pub fn vertex_link(&self, ball: &BuildingBall, f: &StandardFlat) -> Result<VertexLink> {
        let i = ball.index_of(f).ok_or_else(|| Error::NotMember(self.format_coset(f), "the ball".into()))?;
        Ok(self.link_at(ball, i, &self.cube_incidence(ball)[i]))
    }

    fn link_at(&self, ball: &BuildingBall, i: usize, cubes: &[usize]) -> VertexLink {
        let f = &ball.vertices[i];
        let mut neighbors: Vec<usize> = ball
            .cubes
            .iter()
            .filter(|c| c.dim == 1 && (c.low == i || c.high == i))
            .map(|c| if c.low == i { c.high } else { c.low })
            .collect();
        neighbors.sort();
        neighbors.dedup();
        let pos: HashMap<usize, usize> = neighbors.iter().enumerate().map(|(p, &n)| (n, p)).collect();
        let mut simplices = Vec::new();
        for &ci in cubes {
            let c = ball.cubes[ci];
            let low = &ball.vertices[c.low];
            let high_ty = ball.vertices[c.high].ty;
            let mut s = Vec::new();
            for v in f.ty.difference(low.ty).iter() {
                s.push(ball.index_of(&self.coset(&low.rep, f.ty.without(v))));
            }
            for v in high_ty.difference(f.ty).iter() {
                s.push(ball.index_of(&self.coset(&low.rep, f.ty.with(v))));
            }
            let mut s: Vec<usize> = s.into_iter().flatten().filter_map(|n| pos.get(&n).copied()).collect();
            s.sort();
            simplices.push(s);
        }
        simplices.sort();
        simplices.dedup();
        let lk_plus = (0..neighbors.len()).filter(|&p| ball.vertices[neighbors[p]].ty.len() > f.ty.len()).collect();
        let mut classes = Vec::new();
        for v in f.ty.iter() {
            let ty = f.ty.without(v);
            let members: Vec<usize> = (0..neighbors.len()).filter(|&p| ball.vertices[neighbors[p]].ty == ty).collect();
            classes.push((v, members));
        }
        let complete = f.ty.is_empty()
            && self.graph().cliques().iter().all(|&c| ball.contains(&self.coset(&f.rep, c)));
        VertexLink { vertex: i, neighbors, simplices, lk_plus, classes, complete }
    }

    /// Checks the interval law on all listed cubes and the no-missing-cube
    /// law on all intervals, then judges every complete link for flagness
    /// and for matching the flag completion of Γ.
    pub fn check_flag(&self, ball: &BuildingBall) -> FlagReport {
        let mut violations = Vec::new();
        let listed: BTreeSet<(usize, usize)> = ball.cubes.iter().map(|c| (c.low, c.high)).collect();
        for c in &ball.cubes {
            let (low, high) = (&ball.vertices[c.low], &ball.vertices[c.high]);
            let ok = low.ty.is_subset(high.ty)
                && self.member(high, &low.rep)
                && high.ty.len() - low.ty.len() == c.dim
                && high.ty.difference(low.ty).subsets().all(|s| ball.contains(&self.coset(&low.rep, low.ty.union(s))));
            if !ok {
                violations.push(FlagViolation::BrokenInterval { low: c.low, high: c.high });
            }
        }
        let cliques = self.graph().cliques();
        for (i, f) in ball.vertices.iter().enumerate() {
            for &c in &cliques {
                if c == f.ty || !f.ty.is_subset(c) {
                    continue;
                }
                let extra = c.difference(f.ty);
                if extra.subsets().all(|s| ball.contains(&self.coset(&f.rep, f.ty.union(s)))) {
                    let high = ball.index_of(&self.coset(&f.rep, c)).expect("checked above");
                    if !listed.contains(&(i, high)) {
                        violations.push(FlagViolation::MissingCube { low: i, high });
                    }
                }
            }
        }
        let incidence = self.cube_incidence(ball);
        let nonempty: BTreeSet<u64> = cliques.iter().filter(|c| !c.is_empty()).map(|c| c.0).collect();
        let (mut judged, mut inconclusive) = (0, 0);
        for i in 0..ball.len() {
            let link = self.link_at(ball, i, &incidence[i]);
            if !link.complete || link.neighbors.len() > 64 {
                inconclusive += 1;
                continue;
            }
            judged += 1;
            if let Some(clique) = non_flag_clique(&link) {
                let clique = clique.iter().map(|&p| link.neighbors[p]).collect();
                violations.push(FlagViolation::NonFlagLink { vertex: i, clique });
            }
            let types: BTreeSet<u64> = link
                .simplices
                .iter()
                .map(|s| s.iter().fold(0u64, |m, &p| m | ball.vertices[link.neighbors[p]].ty.0))
                .collect();
            if types != nonempty || link.neighbors.len() != self.rank() {
                violations.push(FlagViolation::LinkMismatch { vertex: i });
            }
        }
        FlagReport { flag: violations.is_empty(), judged, inconclusive, violations }
    }

    /// Splits a ball over `Γ = A ∘ B` into its factor components and checks
    /// that the splitting is injective, respects cubes and lands in the
    /// factor balls of the same radius and length bound.
    pub fn product_split(&self, ball: &BuildingBall, a: VertexSet) -> Result<ProductSplit> {
        let g = self.graph();
        let b = g.all().difference(a);
        if a.is_empty() || b.is_empty() || a.iter().any(|x| !b.is_subset(g.link(x))) {
            return Err(Error::NotAJoin);
        }
        let (ga, map_a) = g.induced(a);
        let (gb, map_b) = g.induced(b);
        let (ra, rb) = (Raag::new(ga), Raag::new(gb));
        let project = |f: &StandardFlat, sub: &Raag, map: &[usize], s: VertexSet| -> StandardFlat {
            let inv: HashMap<usize, usize> = map.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let rep = self.restrict(&f.rep, s);
            let raw: Vec<crate::Syllable> =
                rep.syllables().iter().map(|x| crate::Syllable::new(inv[&x.gen], x.exp)).collect();
            let ty: VertexSet = f.ty.intersection(s).iter().map(|v| inv[&v]).collect();
            sub.coset(&sub.normalize(&raw), ty)
        };
        let comps: Vec<(StandardFlat, StandardFlat)> =
            ball.vertices.iter().map(|f| (project(f, &ra, &map_a, a), project(f, &rb, &map_b, b))).collect();
        let (base_a, base_b) = (project(&ball.base, &ra, &map_a, a), project(&ball.base, &rb, &map_b, b));
        let ball_a = ra.building_ball(&base_a, ball.radius, ball.length_bound);
        let ball_b = rb.building_ball(&base_b, ball.radius, ball.length_bound);
        let mut pairs = Vec::new();
        let mut contained = true;
        for (fa, fb) in &comps {
            match (ball_a.index_of(fa), ball_b.index_of(fb)) {
                (Some(x), Some(y)) => pairs.push((x, y)),
                _ => {
                    contained = false;
                    pairs.push((usize::MAX, usize::MAX));
                }
            }
        }
        let distinct: BTreeSet<&(usize, usize)> = pairs.iter().collect();
        let injective = contained && distinct.len() == pairs.len();
        let cubes_are_products = contained
            && ball.cubes.iter().all(|c| {
                let (l, h) = (&comps[c.low], &comps[c.high]);
                ra.flat_leq(&l.0, &h.0) && rb.flat_leq(&l.1, &h.1) && h.0.dim() + h.1.dim() - l.0.dim() - l.1.dim() == c.dim
            });
        Ok(ProductSplit {
            factor_types: (a, b),
            factors: (ra, rb),
            balls: (ball_a, ball_b),
            pairs,
            injective,
            cubes_are_products,
            maps: (map_a, map_b),
        })
    }

    /// The window of all products `F_A × F_B` of vertices of the two factor
    /// balls, as a subcomplex of the building over Γ.
    pub fn product_window(&self, split: &ProductSplit) -> BuildingBall {
        let (ma, mb) = &split.maps;
        let lift = |w: &Word, m: &[usize]| -> Word {
            let raw: Vec<crate::Syllable> = w.syllables().iter().map(|x| crate::Syllable::new(m[x.gen], x.exp)).collect();
            self.normalize(&raw)
        };
        let mut vs = Vec::new();
        for fa in &split.balls.0.vertices {
            for fb in &split.balls.1.vertices {
                let rep = self.multiply(&lift(&fa.rep, ma), &lift(&fb.rep, mb));
                let ty: VertexSet = fa.ty.iter().map(|v| ma[v]).chain(fb.ty.iter().map(|v| mb[v])).collect();
                vs.push(self.coset(&rep, ty));
            }
        }
        let base_a = &split.balls.0.base;
        let base_b = &split.balls.1.base;
        let base_ty: VertexSet = base_a.ty.iter().map(|v| ma[v]).chain(base_b.ty.iter().map(|v| mb[v])).collect();
        let base = self.coset(&self.multiply(&lift(&base_a.rep, ma), &lift(&base_b.rep, mb)), base_ty);
        self.building_window(&base, vs)
    }

    pub fn hat_element(&self, g: Word, theta: Vec<usize>) -> Result<HatElement> {
        if !self.graph().is_automorphism(&theta) {
            return Err(Error::NotAnAutomorphism(format!("{theta:?}")));
        }
        Ok(HatElement { g, theta })
    }

    pub fn hat_identity(&self) -> HatElement {
        HatElement { g: Word::identity(), theta: (0..self.rank()).collect() }
    }

    pub fn hat_on_point(&self, h: &HatElement, x: &Word) -> Word {
        self.multiply(&h.g, &self.relabel(x, &h.theta))
    }

    pub fn hat_action(&self, h: &HatElement, f: &StandardFlat) -> StandardFlat {
        let ty: VertexSet = f.ty.iter().map(|v| h.theta[v]).collect();
        self.coset(&self.hat_on_point(h, &f.rep), ty)
    }

    /// `(g1, θ1)(g2, θ2) = (g1·θ1(g2), θ1∘θ2)`.
    pub fn hat_compose(&self, h1: &HatElement, h2: &HatElement) -> HatElement {
        HatElement {
            g: self.multiply(&h1.g, &self.relabel(&h2.g, &h1.theta)),
            theta: h2.theta.iter().map(|&v| h1.theta[v]).collect(),
        }
    }

    pub fn hat_inverse(&self, h: &HatElement) -> HatElement {
        let mut inv = vec![0; h.theta.len()];
        for (v, &t) in h.theta.iter().enumerate() {
            inv[t] = v;
        }
        let g = self.invert(&self.relabel(&h.g, &inv));
        HatElement { g, theta: inv }
    }

    /// An element carrying the edge `(low1, high1)` to `(low2, high2)`, if
    /// some graph automorphism carries the type pair of one to the other.
    pub fn edge_orbit_witness(
        &self,
        e1: (&StandardFlat, &StandardFlat),
        e2: (&StandardFlat, &StandardFlat),
    ) -> Option<HatElement> {
        for theta in self.graph().automorphisms() {
            let img = |s: VertexSet| -> VertexSet { s.iter().map(|v| theta[v]).collect() };
            if img(e1.0.ty) != e2.0.ty || img(e1.1.ty) != e2.1.ty {
                continue;
            }
            let g = self.multiply(&e2.0.rep, &self.invert(&self.relabel(&e1.0.rep, &theta)));
            let h = HatElement { g, theta: theta.clone() };
            if self.hat_action(&h, e1.0) == *e2.0 && self.hat_action(&h, e1.1) == *e2.1 {
                return Some(h);
            }
        }
        None
    }

    /// The edge path `{id}, ⟨a1⟩, a1, a1⟨a2⟩, a1a2, …` for a loop
    /// `a1, …, an` whose cyclically consecutive vertices are distinct and
    /// non-adjacent in Γ. A repeated final vertex closing the loop is dropped.
    pub fn complement_loop_path(&self, cycle: &[usize]) -> Result<Vec<StandardFlat>> {
        let mut cycle = cycle.to_vec();
        if cycle.len() > 1 && cycle.first() == cycle.last() {
            cycle.pop();
        }
        let n = cycle.len();
        let g = self.graph();
        if n < 2 {
            return Err(Error::NotImmersed("a loop needs at least two vertices".into()));
        }
        for i in 0..n {
            let (x, y) = (cycle[i], cycle[(i + 1) % n]);
            if x >= g.len() || y >= g.len() {
                return Err(Error::UnknownVertex(format!("#{}", x.max(y))));
            }
            if x == y || g.adjacent(x, y) {
                return Err(Error::NotImmersed(format!("{} and {} are not joined in the complement", g.name(x), g.name(y))));
            }
        }
        let mut path = vec![self.point_flat(&Word::identity())];
        let mut p = Word::identity();
        for &a in &cycle {
            path.push(self.coset(&p, VertexSet::singleton(a)));
            p = self.multiply(&p, &self.gen(a, 1));
            path.push(self.point_flat(&p));
        }
        Ok(path)
    }

    /// Whether `path` is a geodesic edge path: BFS from its start in the ball
    /// of radius `len + 1` whose length bound is one more than the longest
    /// representative on the path. Also reports the rank-0 distance when
    /// both ends are points.
    pub fn verify_geodesic(&self, path: &[StandardFlat]) -> GeodesicCheck {
        let len = path.len().saturating_sub(1);
        let radius = len as u32 + 1;
        let length_bound = path.iter().map(|f| f.rep.len()).max().unwrap_or(0) + 1;
        let is_edge_path = path.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            let (lo, hi) = if a.ty.len() < b.ty.len() { (a, b) } else { (b, a) };
            hi.ty.len() == lo.ty.len() + 1 && self.flat_leq(lo, hi)
        });
        let (start, end) = match (path.first(), path.last()) {
            (Some(s), Some(e)) => (s, e),
            _ => {
                return GeodesicCheck {
                    path_length: 0,
                    is_edge_path: true,
                    bfs_distance: Some(0),
                    syllable_distance: Some(0),
                    radius,
                    length_bound,
                    ball_size: 0,
                    geodesic: true,
                }
            }
        };
        let syllable_distance = (start.ty.is_empty() && end.ty.is_empty())
            .then(|| 2 * self.left_quotient(&start.rep, &end.rep).syllable_count() as u64);
        let ball = self.building_ball(start, radius, length_bound);
        let bfs_distance = ball.index_of(end).map(|j| ball.distance[j]).filter(|&d| d != u32::MAX);
        let geodesic = is_edge_path && bfs_distance == Some(len as u32);
        GeodesicCheck { path_length: len, is_edge_path, bfs_distance, syllable_distance, radius, length_bound, ball_size: ball.len(), geodesic }
    }

    pub fn building_ball_to_json(&self, ball: &BuildingBall) -> Value {
        json!({
            "base": self.coset_to_json(&ball.base),
            "radius": ball.radius,
            "length_bound": ball.length_bound,
            "vertices": ball.vertices.iter().enumerate().map(|(i, f)| json!({
                "flat": self.coset_to_json(f),
                "rank": f.dim(),
                "distance": ball.distance[i],
                "exhausted": ball.exhausted[i],
            })).collect::<Vec<_>>(),
            "cubes": ball.cubes.iter().map(|c| json!({"low": c.low, "high": c.high, "dim": c.dim})).collect::<Vec<_>>(),
            "f_vector": ball.f_vector(),
        })
    }

    pub fn building_ball_to_dot(&self, ball: &BuildingBall) -> String {
        const COLORS: [&str; 6] = ["black", "red", "blue", "darkgreen", "orange", "purple"];
        let mut s = String::from("graph building {\n");
        for (i, f) in ball.vertices.iter().enumerate() {
            let color = COLORS[f.dim().min(COLORS.len() - 1)];
            s.push_str(&format!("  {i} [label=\"{}\", color={color}];\n", self.format_coset(f)));
        }
        for (a, b) in &ball.edges {
            s.push_str(&format!("  {a} -- {b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

// Finds a clique of the link's 1-skeleton with no simplex on it.
fn non_flag_clique(link: &VertexLink) -> Option<Vec<usize>> {
    let n = link.neighbors.len();
    let masks: BTreeSet<u64> = link.simplices.iter().map(|s| s.iter().fold(0u64, |m, &p| m | 1 << p)).collect();
    let mut adj = vec![0u64; n];
    for s in &link.simplices {
        for &x in s {
            for &y in s {
                if x != y {
                    adj[x] |= 1 << y;
                }
            }
        }
    }
    // Every clique is reached by adding vertices in increasing order.
    let mut stack: Vec<(u64, u64)> = (0..n).map(|v| (1u64 << v, adj[v] & !((2u64 << v) - 1))).collect();
    while let Some((clique, cand)) = stack.pop() {
        if !masks.contains(&clique) {
            return Some((0..n).filter(|&p| clique >> p & 1 == 1).collect());
        }
        let mut c = cand;
        while c != 0 {
            let v = c.trailing_zeros() as usize;
            c &= c - 1;
            stack.push((clique | 1 << v, cand & adj[v] & !((2u64 << v) - 1)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SimplicialGraph;

    #[test]
    fn k1_ball() {
        let r = Raag::new(SimplicialGraph::discrete(&["a"]));
        let ball = r.building_ball(&r.parse_flat("@a").unwrap(), 1, 2);
        assert_eq!(ball.len(), 6);
        assert_eq!(ball.edges.len(), 5);
        assert!(r.check_flag(&ball).flag);
        let link = r.vertex_link(&ball, &r.parse_flat("@a").unwrap()).unwrap();
        assert!(link.lk_plus.is_empty());
        assert_eq!(link.classes.len(), 1);
        assert!(!link.complete);
    }

    #[test]
    fn edge_graph_balls() {
        let r = Raag::new(SimplicialGraph::path(&["a", "b"]));
        let id = r.parse_flat("@").unwrap();
        let b1 = r.building_ball(&id, 1, 1);
        assert_eq!(b1.len(), 3);
        assert_eq!(b1.edges.len(), 2);
        assert_eq!(b1.cubes_of_dim(2).count(), 0);
        let b2 = r.building_ball(&id, 2, 1);
        assert!(b2.contains(&r.parse_flat("@a,b").unwrap()));
        let sq: Vec<&Cube> = b2.cubes_of_dim(2).collect();
        assert_eq!(sq.len(), 1);
        assert_eq!(b2.vertices[sq[0].low], id);
        let top = r.parse_flat("@a,b").unwrap();
        let link = r.vertex_link(&b2, &top).unwrap();
        assert_eq!(link.classes.len(), 2);
        let (na, nb) = (link.classes[0].1.len(), link.classes[1].1.len());
        assert_eq!(link.simplices.iter().filter(|s| s.len() == 1).count(), na + nb);
        assert_eq!(link.simplices.iter().filter(|s| s.len() == 2).count(), na * nb);
    }

    #[test]
    fn removing_a_square_is_detected() {
        let r = Raag::new(SimplicialGraph::path(&["a", "b"]));
        let id = r.parse_flat("@").unwrap();
        let mut ball = r.building_ball(&id, 3, 1);
        assert!(r.check_flag(&ball).flag);
        let sq = *ball.cubes_of_dim(2).next().unwrap();
        assert!(ball.remove_cube(sq.low, sq.high));
        let report = r.check_flag(&ball);
        assert!(!report.flag);
        assert!(report.violations.contains(&FlagViolation::MissingCube { low: sq.low, high: sq.high }));
    }

    #[test]
    fn hat_action_examples() {
        let r = Raag::new(SimplicialGraph::cycle(5));
        let rot: Vec<usize> = (0..5).map(|v| (v + 1) % 5).collect();
        let h = r.hat_element(Word::identity(), rot).unwrap();
        assert_eq!(r.format_coset(&r.hat_action(&h, &r.parse_flat("@1").unwrap())), "@2");
        let t = r.hat_element(r.parse("1 3").unwrap(), (0..5).collect()).unwrap();
        let f = r.parse_flat("2@4").unwrap();
        assert_eq!(r.hat_action(&t, &f), r.coset(&r.parse("1 3 2").unwrap(), f.ty));
        assert!(r.hat_element(Word::identity(), vec![0, 2, 1, 3, 4]).is_err());
    }

    #[test]
    fn complement_loops() {
        let p3 = Raag::new(SimplicialGraph::path(&["a", "b", "c"]));
        let path = p3.complement_loop_path(&[0, 2, 0]).unwrap();
        assert_eq!(path.len() - 1, 4);
        let check = p3.verify_geodesic(&path);
        assert!(check.geodesic, "{check:?}");
        assert_eq!(check.syllable_distance, Some(4));
        let k3 = Raag::new(SimplicialGraph::complete(&["x", "y", "z"]));
        assert!(k3.complement_loop_path(&[0, 1]).is_err());
        assert!(p3.complement_loop_path(&[0, 1]).is_err());
    }
}
