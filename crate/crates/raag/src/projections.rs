//! Star projections onto product regions, factor actions on `Z_𝗏`, and
//! straightening of window quasi-isometries.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::dictionary::PointMap;
use crate::error::{Error, Result};
use crate::ext::ExtVertex;
use crate::flats::StandardFlat;
use crate::words::{Raag, Word};

/// A partial bijection of `Z_𝗏` recorded on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorTable {
    pub vertex: ExtVertex,
    pub label: String,
    pub map: BTreeMap<i64, i64>,
}

impl FactorTable {
    pub fn new(vertex: ExtVertex, label: impl Into<String>, map: BTreeMap<i64, i64>) -> Self {
        FactorTable { vertex, label: label.into(), map }
    }

    pub fn apply(&self, z: i64) -> Option<i64> {
        self.map.get(&z).copied()
    }

    pub fn is_injective(&self) -> bool {
        self.map.values().collect::<BTreeSet<_>>().len() == self.map.len()
    }

    /// `self ∘ other` where both are defined.
    pub fn compose(&self, other: &FactorTable) -> FactorTable {
        let map = other.map.iter().filter_map(|(&z, &y)| self.apply(y).map(|w| (z, w))).collect();
        FactorTable { vertex: self.vertex.clone(), label: format!("{}*{}", self.label, other.label), map }
    }

    pub fn inverse(&self) -> FactorTable {
        FactorTable { vertex: self.vertex.clone(), label: format!("{}^-1", self.label), map: self.map.iter().map(|(&a, &b)| (b, a)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub point: Word,
    pub coordinate: i64,
    pub distance: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineProjection {
    pub value: i64,
    pub lines_checked: usize,
    pub points_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyWitness {
    pub line: StandardFlat,
    pub image: StandardFlat,
    pub expected: Option<i64>,
    pub found: i64,
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub holds: bool,
    pub checked: usize,
    /// Lines whose projection fell outside the action table.
    pub skipped: usize,
    pub witnesses: Vec<ConsistencyWitness>,
}

#[derive(Clone, Debug)]
pub struct StraightenReport {
    pub d_search: u64,
    pub patch_radius: u64,
    /// `q'` on the interior.
    pub map: BTreeMap<Word, Word>,
    /// Interior points for which no certificate could be produced.
    pub failures: Vec<(Word, String)>,
    /// Points in the boundary ring, left undecided.
    pub inconclusive: Vec<Word>,
    pub sup_distance: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub points: Vec<i64>,
    /// Some generator sends a point of the orbit out of the window.
    pub exits: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitReport {
    pub orbits: Vec<Orbit>,
    pub finite: Vec<usize>,
    /// Per generator, displacement over iterates from the window centre.
    pub translation_numbers: Vec<(String, f64)>,
}

/// Default Hausdorff search radius and patch radius for an `(L, A)`
/// quasi-isometry on a window of radius `r`: `D = ⌈(L−1)·r/2 + A/2⌉` and
/// `ρ = ⌈L·(D+1) + A/2⌉`.
pub fn default_search(l: f64, a: f64, r: u64) -> (u64, u64) {
    let d = ((l - 1.0) * r as f64 / 2.0 + a / 2.0).ceil().max(0.0);
    let rho = (l * (d + 1.0) + a / 2.0).ceil();
    (d as u64, rho as u64)
}

impl Raag {
    /// The gate of `x` in the product region of `u`: strip from
    /// `conj⁻¹·x` its maximal left divisor supported in `st(v)`.
    pub fn gate(&self, u: &ExtVertex, x: &Word) -> Gate {
        let h = self.left_quotient(&u.conj, x);
        let (p, rest) = self.split_prefix(&h, self.graph().star(u.ty));
        Gate { point: self.multiply(&u.conj, &p), coordinate: p.exponent_sum(u.ty), distance: rest.len() }
    }

    pub fn star_project(&self, u: &ExtVertex, x: &Word) -> i64 {
        self.gate(u, x).coordinate
    }

    /// Distance from `x` to the standard coset `f`.
    pub fn distance_to_coset(&self, x: &Word, f: &StandardFlat) -> u64 {
        self.split_prefix(&self.left_quotient(&f.rep, x), f.ty).1.len()
    }

    /// The projection of `𝗐`-lines to `Z_𝗏`, checked constant on the lines
    /// `conj_𝗐·μ⟨w⟩` with `|μ| ≤ length_bound`, sampled at `|k| ≤ length_bound`.
    pub fn pi_v(&self, u: &ExtVertex, w: &ExtVertex, length_bound: u64) -> Result<LineProjection> {
        if u == w || self.ext_adjacent(u, w) {
            return Err(Error::Projection(format!("{} lies in the star of {}", self.format_ext(w), self.format_ext(u))));
        }
        let lk = self.graph().link(w.ty);
        let bound = length_bound as i64;
        let mut value = None;
        let (mut lines, mut points) = (0, 0);
        for mu in self.subgroup_ball(lk, length_bound) {
            let rep = self.multiply(&w.conj, &mu);
            lines += 1;
            for k in -bound..=bound {
                let x = self.multiply(&rep, &self.gen(w.ty, k));
                let c = self.star_project(u, &x);
                points += 1;
                match value {
                    None => value = Some(c),
                    Some(v) if v != c => {
                        return Err(Error::Projection(format!("{} projects to both {v} and {c}", self.format_ext(w))))
                    }
                    _ => {}
                }
            }
        }
        Ok(LineProjection { value: value.expect("at least one point"), lines_checked: lines, points_checked: points })
    }

    /// Projection of the type of a line: the gate coordinate of its base point.
    pub fn line_projection(&self, u: &ExtVertex, line: &StandardFlat) -> Result<i64> {
        let v = line.ty.first().filter(|_| line.ty.len() == 1).ok_or_else(|| Error::Projection("not a line".into()))?;
        let w = self.ext_vertex(&line.rep, v)?;
        if &w == u || self.ext_adjacent(u, &w) {
            return Err(Error::Projection(format!("{} lies in the star of {}", self.format_ext(&w), self.format_ext(u))));
        }
        Ok(self.star_project(u, &line.rep))
    }

    /// `π₁ ∘ h` on the `ℤ`-coordinates of the window points in `P_𝗏`. Fails
    /// if `h` leaves `P_𝗏`, mixes `𝗏`-lines, or is not a function of `z`.
    pub fn factor_action(&self, h: &dyn PointMap, u: &ExtVertex, window: &[Word], label: &str) -> Result<FactorTable> {
        let mut map = BTreeMap::new();
        let mut line_images: BTreeMap<StandardFlat, StandardFlat> = BTreeMap::new();
        for x in window {
            let Ok((z, line)) = self.decompose_point(u, x) else { continue };
            let y = h.apply(self, x).ok_or_else(|| Error::Projection(format!("map undefined at {}", self.display(x))))?;
            let (z2, line2) = self
                .decompose_point(u, &y)
                .map_err(|_| Error::Projection(format!("moves {}: {} leaves the product region", self.format_ext(u), self.display(x))))?;
            if let Some(prev) = map.insert(z, z2) {
                if prev != z2 {
                    return Err(Error::Projection(format!("coordinate {z} goes to both {prev} and {z2}")));
                }
            }
            if let Some(prev) = line_images.insert(line.clone(), line2.clone()) {
                if prev != line2 {
                    return Err(Error::Projection(format!("line {} is split", self.format_coset(&line))));
                }
            }
        }
        let t = FactorTable::new(u.clone(), label, map);
        if !t.is_injective() {
            return Err(Error::Projection("factor action is not injective".into()));
        }
        Ok(t)
    }

    /// The line spanned by the images of `line ∩ window`.
    pub fn line_image(&self, h: &dyn PointMap, line: &StandardFlat, samples: u64) -> Option<StandardFlat> {
        let v = line.ty.first()?;
        let s = samples as i64;
        let pts: Vec<Word> =
            (-s..=s).map(|k| h.apply(self, &self.multiply(&line.rep, &self.gen(v, k)))).collect::<Option<_>>()?;
        let f = self.span(&pts)?;
        (f.dim() == 1).then_some(f)
    }

    /// `α_𝗏(h)(π_𝗏(Δ ℓ')) = π_𝗏(Δ h(ℓ'))` on each supplied pair `(ℓ', h(ℓ'))`.
    pub fn consistency_check(&self, action: &FactorTable, u: &ExtVertex, pairs: &[(StandardFlat, StandardFlat)]) -> ConsistencyReport {
        let mut witnesses = Vec::new();
        let (mut checked, mut skipped) = (0, 0);
        for (line, image) in pairs {
            let (Ok(before), Ok(after)) = (self.line_projection(u, line), self.line_projection(u, image)) else {
                skipped += 1;
                continue;
            };
            let Some(expected) = action.apply(before) else {
                skipped += 1;
                continue;
            };
            checked += 1;
            if expected != after {
                witnesses.push(ConsistencyWitness { line: line.clone(), image: image.clone(), expected: Some(expected), found: after });
            }
        }
        ConsistencyReport { holds: witnesses.is_empty(), checked, skipped, witnesses }
    }

    /// For each interior point `x`, intersects the flats `q_*(F)` over the
    /// maximal flats `F ∋ x`, where `q_*(F)` is the unique maximal flat
    /// within `d_search` of `q` on the patch of `F` of radius `patch_radius`
    /// around `x`. The interior is the set of window points whose patch
    /// ball lies in `window`.
    pub fn straighten_qi(&self, q: &dyn PointMap, window: &[Word], d_search: u64, patch_radius: u64) -> StraightenReport {
        let points: BTreeSet<Word> = window.iter().cloned().collect();
        let near: Vec<Word> = self.ball(patch_radius);
        let mut report = StraightenReport {
            d_search,
            patch_radius,
            map: BTreeMap::new(),
            failures: Vec::new(),
            inconclusive: Vec::new(),
            sup_distance: 0,
        };
        let search_ball = self.ball(d_search);
        'points: for x in &points {
            if !near.iter().all(|h| points.contains(&self.multiply(x, h))) {
                report.inconclusive.push(x.clone());
                continue;
            }
            let Some(qx) = q.apply(self, x) else {
                report.failures.push((x.clone(), "map undefined".into()));
                continue;
            };
            let mut candidates = BTreeSet::new();
            for h in &search_ball {
                candidates.extend(self.flats_through(&self.multiply(&qx, h), true));
            }
            let mut meet: Option<StandardFlat> = None;
            for f in self.flats_through(x, true) {
                let mut images = Vec::new();
                for h in self.subgroup_ball(f.ty, patch_radius) {
                    match q.apply(self, &self.multiply(x, &h)) {
                        Some(p) => images.push(p),
                        None => {
                            report.failures.push((x.clone(), "map undefined on patch".into()));
                            continue 'points;
                        }
                    }
                }
                let close: Vec<&StandardFlat> =
                    candidates.iter().filter(|c| images.iter().all(|p| self.distance_to_coset(p, c) <= d_search)).collect();
                let chosen = match close.as_slice() {
                    [one] => (*one).clone(),
                    [] => {
                        report.failures.push((x.clone(), format!("no flat within {d_search} of q({})", self.format_coset(&f))));
                        continue 'points;
                    }
                    many => {
                        report.failures.push((x.clone(), format!("{} flats within {d_search} of q({})", many.len(), self.format_coset(&f))));
                        continue 'points;
                    }
                };
                meet = match meet {
                    None => Some(chosen),
                    Some(m) => match self.flat_intersection(&m, &chosen) {
                        Some(c) => Some(c),
                        None => {
                            report.failures.push((x.clone(), "image flats are disjoint".into()));
                            continue 'points;
                        }
                    },
                };
            }
            match meet {
                Some(m) if m.ty.is_empty() => {
                    report.sup_distance = report.sup_distance.max(self.left_quotient(&qx, &m.rep).len());
                    report.map.insert(x.clone(), m.rep);
                }
                Some(m) => report.failures.push((x.clone(), format!("intersection {} is not a point", self.format_coset(&m)))),
                None => report.failures.push((x.clone(), "no maximal flats".into())),
            }
        }
        report
    }
}

/// Orbits of the partial action generated by `tables` on `window`, and
/// empirical translation numbers.
pub fn orbit_analysis(tables: &[FactorTable], window: &[i64]) -> OrbitReport {
    let pts: BTreeSet<i64> = window.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for &start in &pts {
        if seen.contains(&start) {
            continue;
        }
        let mut orbit = BTreeSet::from([start]);
        let mut exits = false;
        let mut queue = VecDeque::from([start]);
        while let Some(z) = queue.pop_front() {
            for t in tables {
                for step in [t.apply(z), t.map.iter().find(|e| *e.1 == z).map(|e| *e.0)] {
                    match step {
                        Some(y) if pts.contains(&y) => {
                            if orbit.insert(y) {
                                queue.push_back(y);
                            }
                        }
                        _ => exits = true,
                    }
                }
            }
        }
        seen.extend(orbit.iter().copied());
        orbits.push(Orbit { points: orbit.into_iter().collect(), exits });
    }
    let finite = (0..orbits.len()).filter(|&i| !orbits[i].exits).collect();
    let centre = if pts.is_empty() { 0 } else { window.iter().sum::<i64>().div_euclid(window.len() as i64) };
    let translation_numbers = tables
        .iter()
        .map(|t| {
            let (mut z, mut k) = (centre, 0i64);
            while let Some(y) = t.apply(z).filter(|y| pts.contains(y)) {
                z = y;
                k += 1;
                if z == centre || k > pts.len() as i64 {
                    break;
                }
            }
            (t.label.clone(), if k == 0 { 0.0 } else { (z - centre) as f64 / k as f64 })
        })
        .collect();
    OrbitReport { orbits, finite, translation_numbers }
}
