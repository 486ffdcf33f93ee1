//! Blow-up data, branched lines and the blow-up building `Y` over a finite
//! window of the group, with the collapse `π: Y → B_Γ`.
//!
//! A `𝗏`-line `ℓ` is identified with `ℤ` through the `ℤ`-coordinate of the
//! product region `P_𝗏` (so the reference line is `conj·⟨v⟩`), and a datum
//! assigns one table `g_𝗏: ℤ → ℤ` per extension-graph vertex; every line of
//! type `𝗏` uses `g_𝗏` in that coordinate, which is exactly the parallelism
//! rule `g_{ℓ2} = g_{ℓ1} ∘ p`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ext::ExtVertex;
use crate::flats::StandardFlat;
use crate::words::{Raag, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableSpec {
    Identity,
    /// `z ↦ ⌊z/d⌋`.
    FloorDiv(i64),
    /// A finite table; undefined outside its entries.
    Explicit(Vec<(i64, i64)>),
}

impl TableSpec {
    pub fn eval(&self, z: i64) -> Option<i64> {
        match self {
            TableSpec::Identity => Some(z),
            TableSpec::FloorDiv(d) if *d > 0 => Some(z.div_euclid(*d)),
            TableSpec::FloorDiv(_) => None,
            TableSpec::Explicit(t) => t.iter().find(|e| e.0 == z).map(|e| e.1),
        }
    }

    pub fn from_map(m: &BTreeMap<i64, i64>) -> Self {
        TableSpec::Explicit(m.iter().map(|(&a, &b)| (a, b)).collect())
    }
}

/// Tables per type of Γ, overridable per extension-graph vertex.
#[derive(Clone, Debug)]
pub struct BlowupDatum {
    pub types: BTreeMap<usize, TableSpec>,
    pub overrides: BTreeMap<ExtVertex, TableSpec>,
    pub fiber_bound: usize,
}

#[derive(Serialize, Deserialize)]
struct DatumJson {
    fiber_bound: usize,
    types: BTreeMap<String, TableSpec>,
    #[serde(default)]
    overrides: Vec<OverrideJson>,
}

#[derive(Serialize, Deserialize)]
struct OverrideJson {
    vertex: String,
    table: TableSpec,
}

impl BlowupDatum {
    pub fn uniform(raag: &Raag, table: TableSpec, fiber_bound: usize) -> Self {
        BlowupDatum { types: (0..raag.rank()).map(|v| (v, table.clone())).collect(), overrides: BTreeMap::new(), fiber_bound }
    }

    pub fn identity(raag: &Raag) -> Self {
        Self::uniform(raag, TableSpec::Identity, 1)
    }

    pub fn table(&self, u: &ExtVertex) -> Option<&TableSpec> {
        self.overrides.get(u).or_else(|| self.types.get(&u.ty))
    }

    /// Reads `{"fiber_bound": C, "types": {"a": "identity", "b": {"floor_div": 2}},
    /// "overrides": [{"vertex": "b,a", "table": ...}]}`.
    pub fn from_json_str(raag: &Raag, s: &str) -> Result<Self> {
        let j: DatumJson = serde_json::from_str(s).map_err(|e| Error::Datum(e.to_string()))?;
        let mut types = BTreeMap::new();
        for (name, t) in j.types {
            types.insert(raag.graph().vertex(&name)?, t);
        }
        let mut overrides = BTreeMap::new();
        for o in j.overrides {
            overrides.insert(raag.parse_ext(&o.vertex)?, o.table);
        }
        Ok(BlowupDatum { types, overrides, fiber_bound: j.fiber_bound })
    }

    pub fn to_json(&self, raag: &Raag) -> Value {
        let j = DatumJson {
            fiber_bound: self.fiber_bound,
            types: self.types.iter().map(|(&v, t)| (raag.graph().name(v).to_string(), t.clone())).collect(),
            overrides: self
                .overrides
                .iter()
                .map(|(u, t)| OverrideJson { vertex: format!("{},{}", raag.format(&u.conj), raag.graph().name(u.ty)), table: t.clone() })
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }
}

/// A finite piece of a branched line: the core interval and one tip per
/// domain point, attached at its image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedLine {
    pub core: (i64, i64),
    pub tips: Vec<(i64, i64)>,
}

/// Checks a table on `[lo, hi]`: defined everywhere, onto the interval
/// between its extreme values, fibers of size at most `fiber_bound`.
pub fn make_branched_line(table: &TableSpec, window: (i64, i64), fiber_bound: usize) -> Result<BranchedLine> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::Datum(format!("empty window [{lo}, {hi}]")));
    }
    let mut tips = Vec::new();
    let mut fibers: BTreeMap<i64, usize> = BTreeMap::new();
    for z in lo..=hi {
        let c = table.eval(z).ok_or_else(|| Error::Datum(format!("table undefined at {z}")))?;
        tips.push((z, c));
        *fibers.entry(c).or_default() += 1;
    }
    let (&cmin, &cmax) = (fibers.keys().next().expect("nonempty"), fibers.keys().next_back().expect("nonempty"));
    if let Some(gap) = (cmin..=cmax).find(|c| !fibers.contains_key(c)) {
        return Err(Error::Datum(format!("not surjective onto [{cmin}, {cmax}]: misses {gap}")));
    }
    if let Some((c, n)) = fibers.iter().find(|(_, &n)| n > fiber_bound) {
        return Err(Error::Datum(format!("fiber over {c} has {n} points, bound is {fiber_bound}")));
    }
    Ok(BranchedLine { core: (cmin, cmax), tips })
}

/// A vertex of `Y`: the flat `F` whose branched flat has this vertex in its
/// core, and the core coordinates indexed by the type vertices of `F`.
/// Rank-0 vertices (empty type) are the tips, one per group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YVertex {
    pub flat: StandardFlat,
    pub core: Vec<(usize, i64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Tip(i64),
    Core(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// A vertex of the core.
    Core(i64),
    /// The core edge `[c, c+1]`.
    CoreEdge(i64),
    /// The edge from tip `z` to the core point it is attached at.
    TipEdge(i64),
}

/// A cube of a branched flat `β_F`, one factor per type vertex of `F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YCell {
    pub flat: StandardFlat,
    pub factors: Vec<(usize, Factor)>,
}

impl YCell {
    pub fn dim(&self) -> usize {
        self.factors.iter().filter(|f| !matches!(f.1, Factor::Core(_))).count()
    }
}

/// The part of `Y` above a finite window `W` of the group: every vertex
/// `(F, g(z(x)))` for `x ∈ W` and `F` a standard flat through `x`, with all
/// cubes of the branched flats whose corners are present.
#[derive(Clone, Debug)]
pub struct BlowupComplex {
    pub window: Vec<Word>,
    pub flats: Vec<StandardFlat>,
    pub vertices: Vec<YVertex>,
    pub cells: Vec<YCell>,
    pub edges: Vec<(usize, usize)>,
    /// `tips[i]` is the vertex `f(window[i])`.
    pub tips: Vec<usize>,
    pub z_windows: BTreeMap<ExtVertex, (i64, i64)>,
    pub lines: BTreeMap<ExtVertex, BranchedLine>,
    pub fiber_bound: usize,
    index: HashMap<YVertex, usize>,
    tables: BTreeMap<ExtVertex, BTreeMap<i64, i64>>,
}

impl BlowupComplex {
    pub fn index_of(&self, v: &YVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn g(&self, u: &ExtVertex, z: i64) -> Option<i64> {
        self.tables.get(u)?.get(&z).copied()
    }

    pub fn distances_from(&self, i: usize) -> Vec<u32> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut dist = vec![u32::MAX; self.vertices.len()];
        dist[i] = 0;
        let mut q = VecDeque::from([i]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        dist
    }
}

/// The image of a cube of `Y` in the building: the interval `[low, high]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiImage {
    pub low: StandardFlat,
    pub high: StandardFlat,
    pub dim: usize,
    pub isometric: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Distortion {
    /// Multiplicative constant `L` for the additive constant `A`.
    pub multiplicative: f64,
    pub additive: f64,
    pub max_ratio_y_over_g: f64,
    pub max_ratio_g_over_y: f64,
    pub pairs: usize,
}

/// An isometry `z ↦ sign·z + shift` of `ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isometry {
    pub sign: i64,
    pub shift: i64,
}

impl Isometry {
    pub fn apply(&self, z: i64) -> i64 {
        self.sign * z + self.shift
    }
}

/// One element of a stabilizer acting on `Z_𝗏` through `map`, and the
/// isometry it is claimed to be semi-conjugate to.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZAction {
    pub label: String,
    pub map: Vec<(i64, i64)>,
    pub isometry: Isometry,
}

#[derive(Clone, Debug)]
pub struct OrbitRep {
    pub vertex: ExtVertex,
    pub semiconj: TableSpec,
    pub actions: Vec<ZAction>,
}

/// The chosen element `h_𝗐` moving `𝗐` to orbit representative `rep`,
/// recorded by its effect `Z_𝗐 → Z_{𝗏_i}` on the window.
#[derive(Clone, Debug)]
pub struct Transport {
    pub vertex: ExtVertex,
    pub rep: usize,
    pub map: Vec<(i64, i64)>,
}

/// An element sending a `source`-line to a `target`-line, recorded by the
/// induced map of `ℤ`-coordinates.
#[derive(Clone, Debug)]
pub struct LineMove {
    pub label: String,
    pub source: ExtVertex,
    pub target: ExtVertex,
    pub map: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatibilityWitness {
    /// Two tips over one core point go to different core points.
    NotWellDefined { label: String, z1: i64, z2: i64 },
    /// The induced core map is not `c ↦ ±c + s`.
    NotIsometric { label: String, c1: i64, c2: i64 },
    /// Interior fibers of different sizes are matched.
    FiberMismatch { label: String, core: i64, source_size: usize, target_size: usize },
    MissingTable { label: String },
}

#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub checked: usize,
    pub witnesses: Vec<CompatibilityWitness>,
}

impl Raag {
    /// `ℤ`-coordinate of `x` in the product region of `u`.
    pub fn z_coord(&self, u: &ExtVertex, x: &Word) -> Result<i64> {
        Ok(self.decompose_point(u, x)?.0)
    }

    fn delta_of(&self, f: &StandardFlat) -> Vec<(usize, ExtVertex)> {
        f.ty.iter().map(|v| (v, self.ext_vertex(&f.rep, v).expect("vertex in range"))).collect()
    }

    /// The canonical vertex of `Y` named by a tuple of branched-line
    /// coordinates of `β_F`: tip coordinates pick out a subflat.
    pub fn y_canonical(&self, f: &StandardFlat, coords: &[(usize, Coord)]) -> YVertex {
        let mut y = f.rep.clone();
        let mut ty = f.ty;
        let mut core = Vec::new();
        for &(v, c) in coords {
            match c {
                Coord::Tip(z) => {
                    let u = self.ext_vertex(&f.rep, v).expect("vertex in range");
                    let z0 = self.z_coord(&u, &y).expect("point of F lies in P_v");
                    y = self.multiply(&y, &self.gen(v, z - z0));
                    ty = ty.without(v);
                }
                Coord::Core(c) => core.push((v, c)),
            }
        }
        core.sort();
        YVertex { flat: self.coset(&y, ty), core }
    }

    /// Builds `Y` above `window`, validating the datum on the `ℤ`-window of
    /// every extension-graph vertex that occurs.
    pub fn assemble(&self, datum: &BlowupDatum, window: &[Word]) -> Result<BlowupComplex> {
        let window: Vec<Word> = window.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let mut zs: BTreeMap<ExtVertex, (i64, i64)> = BTreeMap::new();
        for x in &window {
            for v in 0..self.rank() {
                let u = self.ext_vertex(x, v).expect("vertex in range");
                let z = self.z_coord(&u, x)?;
                let e = zs.entry(u).or_insert((z, z));
                e.0 = e.0.min(z);
                e.1 = e.1.max(z);
            }
        }
        let mut tables = BTreeMap::new();
        let mut lines = BTreeMap::new();
        for (u, &(lo, hi)) in &zs {
            let spec = datum
                .table(u)
                .ok_or_else(|| Error::Datum(format!("no table for type {}", self.graph().name(u.ty))))?;
            let line = make_branched_line(spec, (lo, hi), datum.fiber_bound)
                .map_err(|e| Error::Datum(format!("{} on [{lo}, {hi}]: {e}", self.format_ext(u))))?;
            tables.insert(u.clone(), line.tips.iter().copied().collect::<BTreeMap<i64, i64>>());
            lines.insert(u.clone(), line);
        }
        let mut flats = BTreeSet::new();
        let mut vertices = BTreeSet::new();
        for x in &window {
            for f in self.flats_through(x, false) {
                let core = self
                    .delta_of(&f)
                    .into_iter()
                    .map(|(v, u)| (v, tables[&u][&self.z_coord(&u, x).expect("in region")]))
                    .collect();
                vertices.insert(YVertex { flat: f.clone(), core });
                flats.insert(f);
            }
        }
        let vertices: Vec<YVertex> = vertices.into_iter().collect();
        let index: HashMap<YVertex, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let tips = window.iter().map(|x| index[&YVertex { flat: self.point_flat(x), core: vec![] }]).collect();
        let mut y = BlowupComplex {
            window,
            flats: flats.into_iter().collect(),
            vertices,
            cells: Vec::new(),
            edges: Vec::new(),
            tips,
            z_windows: zs,
            lines,
            fiber_bound: datum.fiber_bound,
            index,
            tables,
        };
        let cells = self.enumerate_cells(&y);
        y.edges = cells
            .iter()
            .filter(|c| c.dim() == 1)
            .map(|c| {
                let vs = self.cell_vertices(c, &y);
                let (a, b) = (y.index[&vs[0]], y.index[&vs[1]]);
                (a.min(b), a.max(b))
            })
            .collect();
        y.cells = cells;
        Ok(y)
    }

    fn enumerate_cells(&self, y: &BlowupComplex) -> Vec<YCell> {
        let mut cells = Vec::new();
        for base in &y.vertices {
            let delta: BTreeMap<usize, ExtVertex> = self.delta_of(&base.flat).into_iter().collect();
            // Per coordinate, the factors whose lower corner is `base`.
            let mut options: Vec<Vec<(usize, Factor)>> = Vec::new();
            for &(v, c) in &base.core {
                let u = &delta[&v];
                let mut opts = vec![(v, Factor::Core(c)), (v, Factor::CoreEdge(c))];
                if let Some(t) = y.tables.get(u) {
                    opts.extend(t.iter().filter(|e| *e.1 == c).map(|e| (v, Factor::TipEdge(*e.0))));
                }
                options.push(opts);
            }
            let mut choice = vec![0usize; options.len()];
            loop {
                let factors: Vec<(usize, Factor)> = choice.iter().zip(&options).map(|(&i, o)| o[i]).collect();
                let cell = YCell { flat: base.flat.clone(), factors };
                if cell.dim() > 0 && self.cell_vertices(&cell, y).iter().all(|v| y.index.contains_key(v)) {
                    cells.push(cell);
                }
                let mut k = 0;
                while k < choice.len() {
                    choice[k] += 1;
                    if choice[k] < options[k].len() {
                        break;
                    }
                    choice[k] = 0;
                    k += 1;
                }
                if k == choice.len() {
                    break;
                }
            }
        }
        cells.sort();
        cells
    }

    /// Corners of a cube, canonicalized.
    pub fn cell_vertices(&self, cell: &YCell, y: &BlowupComplex) -> Vec<YVertex> {
        let mut out = vec![Vec::new()];
        for &(v, f) in &cell.factors {
            let ends = match f {
                Factor::Core(c) => vec![Coord::Core(c)],
                Factor::CoreEdge(c) => vec![Coord::Core(c), Coord::Core(c + 1)],
                Factor::TipEdge(z) => vec![Coord::Core(0), Coord::Tip(z)],
            };
            let mut next = Vec::new();
            for t in &out {
                for &e in &ends {
                    let mut t2: Vec<(usize, Coord)> = t.clone();
                    t2.push((v, e));
                    next.push(t2);
                }
            }
            out = next;
        }
        // The core end of a tip edge sits at the attachment point.
        out.into_iter()
            .map(|t| {
                let t: Vec<(usize, Coord)> = t
                    .into_iter()
                    .map(|(v, c)| match (c, cell.factors.iter().find(|f| f.0 == v).map(|f| f.1)) {
                        (Coord::Core(_), Some(Factor::TipEdge(z))) => {
                            let u = self.ext_vertex(&cell.flat.rep, v).expect("vertex in range");
                            (v, Coord::Core(y.g(&u, z).expect("tip edges only for tabled points")))
                        }
                        other => (v, other.0),
                    })
                    .collect();
                self.y_canonical(&cell.flat, &t)
            })
            .collect()
    }

    /// The vertex set of the branched flat `β_F` inside `Y`, generated from
    /// coordinate tuples and canonicalized.
    pub fn branched_flat_vertices(&self, y: &BlowupComplex, f: &StandardFlat) -> BTreeSet<usize> {
        let delta = self.delta_of(f);
        let mut ranges: Vec<Vec<(usize, Coord)>> = Vec::new();
        for (v, u) in &delta {
            let Some(line) = y.lines.get(u) else { return BTreeSet::new() };
            let mut r: Vec<(usize, Coord)> = line.tips.iter().map(|t| (*v, Coord::Tip(t.0))).collect();
            r.extend((line.core.0..=line.core.1).map(|c| (*v, Coord::Core(c))));
            ranges.push(r);
        }
        let mut tuples = vec![Vec::new()];
        for r in &ranges {
            let mut next = Vec::new();
            for t in &tuples {
                for &c in r {
                    let mut t2: Vec<(usize, Coord)> = t.clone();
                    t2.push(c);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        tuples.iter().filter_map(|t| y.index_of(&self.y_canonical(f, t))).collect()
    }

    pub fn project_vertex(&self, v: &YVertex) -> StandardFlat {
        v.flat.clone()
    }

    /// `π` on a cube: tip edges map onto building edges, core edges collapse.
    pub fn project_pi(&self, y: &BlowupComplex, cell: &YCell) -> Result<PiImage> {
        let corners = self.cell_vertices(cell, y);
        if corners.iter().any(|c| y.index_of(c).is_none()) {
            return Err(Error::NotMember(format!("{cell:?}"), "Y".into()));
        }
        let low = corners.iter().map(|c| c.flat.clone()).min_by_key(|f| f.dim()).expect("nonempty");
        let tip_edges = cell.factors.iter().filter(|f| matches!(f.1, Factor::TipEdge(_))).count();
        let core_edges = cell.factors.iter().filter(|f| matches!(f.1, Factor::CoreEdge(_))).count();
        Ok(PiImage { low, high: cell.flat.clone(), dim: tip_edges, isometric: core_edges == 0 })
    }

    /// Empirical quasi-isometry constants between the word metric on the
    /// window and the 1-skeleton metric of `Y` between tips. The additive
    /// constant is fixed at twice the clique number; `L` is the least value
    /// making both inequalities hold on every pair.
    pub fn distortion(&self, y: &BlowupComplex) -> Distortion {
        let n = y.window.len();
        if n < 2 {
            return Distortion { multiplicative: 1.0, additive: 0.0, max_ratio_y_over_g: 1.0, max_ratio_g_over_y: 1.0, pairs: 0 };
        }
        let a = 2.0 * self.graph().clique_number() as f64;
        let (mut l, mut ryg, mut rgy) = (1.0f64, 0.0f64, 0.0f64);
        let mut pairs = 0;
        for i in 0..n {
            let dist = y.distances_from(y.tips[i]);
            for j in i + 1..n {
                let dg = self.left_quotient(&y.window[i], &y.window[j]).len() as f64;
                let dy = dist[y.tips[j]];
                if dy == u32::MAX {
                    continue;
                }
                let dy = dy as f64;
                l = l.max((dy - a) / dg).max((dg - a) / dy);
                ryg = ryg.max(dy / dg);
                rgy = rgy.max(dg / dy);
                pairs += 1;
            }
        }
        Distortion { multiplicative: l, additive: a, max_ratio_y_over_g: ryg, max_ratio_g_over_y: rgy, pairs }
    }

    /// Builds the datum `g_𝗐 = g_i ∘ h_𝗐` from orbit representatives and
    /// transports, after checking on `window` that each `g_i` intertwines
    /// the supplied actions with their isometries.
    pub fn datum_from_actions(
        &self,
        reps: &[OrbitRep],
        transports: &[Transport],
        window: (i64, i64),
        fiber_bound: usize,
    ) -> Result<BlowupDatum> {
        let mut overrides = BTreeMap::new();
        for rep in reps {
            make_branched_line(&rep.semiconj, window, fiber_bound)?;
            for act in &rep.actions {
                for &(z, az) in &act.map {
                    if z < window.0 || z > window.1 || az < window.0 || az > window.1 {
                        continue;
                    }
                    let (gz, gaz) = (rep.semiconj.eval(z), rep.semiconj.eval(az));
                    if gz.map(|g| act.isometry.apply(g)) != gaz {
                        return Err(Error::NotEquivariant(format!("{} at z = {z}", act.label)));
                    }
                }
            }
            overrides.insert(rep.vertex.clone(), rep.semiconj.clone());
        }
        for t in transports {
            let rep = reps.get(t.rep).ok_or_else(|| Error::Datum(format!("no orbit representative {}", t.rep)))?;
            let mut table = BTreeMap::new();
            for &(z, hz) in &t.map {
                if let Some(g) = rep.semiconj.eval(hz) {
                    table.insert(z, g);
                }
            }
            let spec = TableSpec::from_map(&table);
            let lo = table.keys().next().copied().unwrap_or(0);
            let hi = table.keys().next_back().copied().unwrap_or(-1);
            make_branched_line(&spec, (lo, hi), fiber_bound)?;
            overrides.insert(t.vertex.clone(), spec);
        }
        Ok(BlowupDatum { types: BTreeMap::new(), overrides, fiber_bound })
    }

    /// For each move, the tip map `f_{ℓ'} ∘ h ∘ f_ℓ⁻¹` must extend to an
    /// isometry of branched lines: it induces a well-defined map of cores of
    /// the form `c ↦ ±c + s`, and fibers away from the window edge keep
    /// their size.
    pub fn check_compatibility(&self, moves: &[LineMove], datum: &BlowupDatum) -> CompatibilityReport {
        let mut witnesses = Vec::new();
        for m in moves {
            let (Some(gs), Some(gt)) = (datum.table(&m.source), datum.table(&m.target)) else {
                witnesses.push(CompatibilityWitness::MissingTable { label: m.label.clone() });
                continue;
            };
            let mut core_map: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
            let mut bad = false;
            for &(z, hz) in &m.map {
                let (Some(c), Some(c2)) = (gs.eval(z), gt.eval(hz)) else { continue };
                match core_map.get(&c) {
                    Some(&(prev, z0)) if prev != c2 => {
                        witnesses.push(CompatibilityWitness::NotWellDefined { label: m.label.clone(), z1: z0, z2: z });
                        bad = true;
                        break;
                    }
                    _ => {
                        core_map.insert(c, (c2, z));
                    }
                }
            }
            if bad {
                continue;
            }
            let pts: Vec<(i64, i64)> = core_map.iter().map(|(&c, &(c2, _))| (c, c2)).collect();
            if pts.len() >= 2 {
                let sign = if pts[1].1 > pts[0].1 { 1 } else { -1 };
                let shift = pts[0].1 - sign * pts[0].0;
                if let Some(&(c1, _)) = pts.iter().find(|(c, c2)| sign * c + shift != *c2 || (pts[1].0 - pts[0].0).abs() != (pts[1].1 - pts[0].1).abs()) {
                    witnesses.push(CompatibilityWitness::NotIsometric { label: m.label.clone(), c1: pts[0].0, c2: c1 });
                    continue;
                }
            }
            // Fibers counted over the move's domain and image; only core points
            // whose whole fiber lies strictly inside the listed window count.
            let (lo, hi) = match (m.map.iter().map(|e| e.0).min(), m.map.iter().map(|e| e.0).max()) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            let (tlo, thi) = (m.map.iter().map(|e| e.1).min().unwrap_or(0), m.map.iter().map(|e| e.1).max().unwrap_or(0));
            let fiber = |t: &TableSpec, lo: i64, hi: i64, c: i64| (lo..=hi).filter(|&z| t.eval(z) == Some(c)).count();
            let interior = |t: &TableSpec, lo: i64, hi: i64, c: i64| {
                t.eval(lo) != Some(c) && t.eval(hi) != Some(c) && (lo..=hi).any(|z| t.eval(z) == Some(c))
            };
            for (&c, &(c2, _)) in &core_map {
                if interior(gs, lo, hi, c) && interior(gt, tlo, thi, c2) {
                    let (a, b) = (fiber(gs, lo, hi, c), fiber(gt, tlo, thi, c2));
                    if a != b {
                        witnesses.push(CompatibilityWitness::FiberMismatch { label: m.label.clone(), core: c, source_size: a, target_size: b });
                        break;
                    }
                }
            }
        }
        CompatibilityReport { compatible: witnesses.is_empty(), checked: moves.len(), witnesses }
    }

    pub fn y_vertex_label(&self, v: &YVertex) -> String {
        let core: Vec<String> = v.core.iter().map(|(t, c)| format!("{}={c}", self.graph().name(*t))).collect();
        format!("{} [{}]", self.format_coset(&v.flat), core.join(","))
    }

    pub fn blowup_to_json(&self, y: &BlowupComplex) -> Value {
        json!({
            "window": y.window.iter().map(|w| self.format(w)).collect::<Vec<_>>(),
            "fiber_bound": y.fiber_bound,
            "vertices": y.vertices.iter().map(|v| json!({
                "flat": self.coset_to_json(&v.flat),
                "rank": v.flat.dim(),
                "core": v.core.iter().map(|(t, c)| json!([self.graph().name(*t), c])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "cells": y.cells.iter().map(|c| json!({
                "flat": self.coset_to_json(&c.flat),
                "dim": c.dim(),
                "factors": c.factors.iter().map(|(t, f)| json!([self.graph().name(*t), format!("{f:?}")])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "z_windows": y.z_windows.iter().map(|(u, w)| json!({"vertex": self.ext_to_json(u), "window": [w.0, w.1]})).collect::<Vec<_>>(),
        })
    }

    pub fn blowup_to_dot(&self, y: &BlowupComplex) -> String {
        let mut s = String::from("graph blowup {\n");
        for (i, v) in y.vertices.iter().enumerate() {
            let shape = if v.flat.ty.is_empty() { "box" } else { "ellipse" };
            s.push_str(&format!("  {i} [label=\"{}\", shape={shape}];\n", self.y_vertex_label(v)));
        }
        for (a, b) in &y.edges {
            s.push_str(&format!("  {a} -- {b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SimplicialGraph;

    #[test]
    fn branched_lines() {
        let id = make_branched_line(&TableSpec::Identity, (-3, 3), 1).unwrap();
        assert_eq!(id.tips.len(), 7);
        assert_eq!(id.core, (-3, 3));
        let half = make_branched_line(&TableSpec::FloorDiv(2), (-4, 4), 2).unwrap();
        assert_eq!(half.core, (-2, 2));
        let over = |c: i64| half.tips.iter().filter(|t| t.1 == c).count();
        assert_eq!((over(-2), over(0), over(2)), (2, 2, 1));
        let constant = TableSpec::Explicit((-4..=4).map(|z| (z, 0)).collect());
        assert!(make_branched_line(&constant, (-4, 4), 2).is_err());
        let gappy = TableSpec::Explicit(vec![(0, 0), (1, 2)]);
        assert!(make_branched_line(&gappy, (0, 1), 2).is_err());
    }

    #[test]
    fn k1_floor_half() {
        let r = Raag::new(SimplicialGraph::discrete(&["a"]));
        let window: Vec<Word> = (-4..=4).map(|k| r.gen(0, k)).collect();
        let y = r.assemble(&BlowupDatum::uniform(&r, TableSpec::FloorDiv(2), 2), &window).unwrap();
        // 9 tips, core −2..2, 4 core edges and 9 tip edges.
        assert_eq!(y.vertices.len(), 9 + 5);
        assert_eq!(y.edges.len(), 4 + 9);
        let d = r.distortion(&y);
        assert!(d.multiplicative <= 2.0);
    }

    #[test]
    fn single_point_window() {
        let r = Raag::new(SimplicialGraph::discrete(&["a"]));
        let y = r.assemble(&BlowupDatum::identity(&r), &[Word::identity()]).unwrap();
        let d = r.distortion(&y);
        assert_eq!((d.multiplicative, d.additive), (1.0, 0.0));
    }

    #[test]
    fn datum_json_round_trip() {
        let r = Raag::new(SimplicialGraph::path(&["a", "b"]));
        let text = r#"{"fiber_bound": 2, "types": {"a": "identity", "b": {"floor_div": 2}}, "overrides": [{"vertex": "a,b", "table": "identity"}]}"#;
        let d = BlowupDatum::from_json_str(&r, text).unwrap();
        assert_eq!(d.types[&1], TableSpec::FloorDiv(2));
        let again = BlowupDatum::from_json_str(&r, &d.to_json(&r).to_string()).unwrap();
        assert_eq!(again.types, d.types);
        assert_eq!(again.overrides, d.overrides);
    }
}
