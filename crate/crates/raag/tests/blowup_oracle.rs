mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use proptest::prelude::*;
use raag::blowup::{Coord, Factor, Isometry, LineMove, OrbitRep, Transport, ZAction};
use raag::{BlowupComplex, BlowupDatum, Raag, SimplicialGraph, StandardFlat, TableSpec, Word};

fn line_window(r: &Raag, lo: i64, hi: i64) -> Vec<Word> {
    (lo..=hi).map(|k| r.gen(0, k)).collect()
}

fn check_tips(r: &Raag, y: &BlowupComplex) {
    let rank0: BTreeSet<usize> = (0..y.len()).filter(|&i| y.vertices[i].flat.ty.is_empty()).collect();
    let tips: BTreeSet<usize> = y.tips.iter().copied().collect();
    assert_eq!(tips.len(), y.window.len());
    assert_eq!(tips, rank0);
    for (i, x) in y.window.iter().enumerate() {
        for f in r.flats_through(x, false) {
            if f.dim() != 1 {
                continue;
            }
            let v = f.ty.first().unwrap();
            let u = r.ext_vertex(&f.rep, v).unwrap();
            let z = r.z_coord(&u, x).unwrap();
            assert_eq!(y.index_of(&r.y_canonical(&f, &[(v, Coord::Tip(z))])), Some(y.tips[i]));
        }
    }
}

/// `β_F` is the set of vertices whose core flat lies in `F`, and two
/// branched flats meet in the branched flat of the intersection.
fn check_intersections(r: &Raag, y: &BlowupComplex) -> usize {
    let beta: BTreeMap<&StandardFlat, BTreeSet<usize>> = y.flats.iter().map(|f| (f, r.branched_flat_vertices(y, f))).collect();
    for (f, vs) in &beta {
        let expect: BTreeSet<usize> = (0..y.len()).filter(|&i| r.flat_leq(&y.vertices[i].flat, f)).collect();
        assert_eq!(*vs, expect, "{f:?}");
    }
    let mut checked = 0;
    for (f1, v1) in &beta {
        for (f2, v2) in &beta {
            let meet: BTreeSet<usize> = v1.intersection(v2).copied().collect();
            match r.flat_intersection(f1, f2) {
                Some(c) => assert_eq!(meet, r.branched_flat_vertices(y, &c), "{f1:?} {f2:?}"),
                None => assert!(meet.is_empty()),
            }
            checked += 1;
        }
    }
    checked
}

#[test]
fn k1_half_speed_line() {
    let r = k1();
    let y = r.assemble(&BlowupDatum::uniform(&r, TableSpec::FloorDiv(2), 2), &line_window(&r, -16, 16)).unwrap();
    check_tips(&r, &y);
    check_intersections(&r, &y);
    assert_eq!(y.vertices.len(), 33 + 17);
    assert_eq!(y.edges.len(), 16 + 33);
    // Tip to core, along the core, back out.
    for i in 0..y.window.len() {
        let d = y.distances_from(y.tips[i]);
        for j in 0..y.window.len() {
            let (a, b) = (y.window[i].exponent_sum(0), y.window[j].exponent_sum(0));
            let expect = if i == j { 0 } else { 2 + (a.div_euclid(2) - b.div_euclid(2)).unsigned_abs() as u32 };
            assert_eq!(d[y.tips[j]], expect);
        }
    }
    let dist = r.distortion(&y);
    assert_eq!(dist.additive, 2.0);
    assert!(dist.multiplicative <= 2.25, "{dist:?}");
    let mut expect = 1.0f64;
    for a in -16i64..=16 {
        for b in a + 1..=16 {
            let (dg, dy) = ((b - a) as f64, (2 + (a.div_euclid(2) - b.div_euclid(2)).abs()) as f64);
            expect = expect.max((dy - 2.0) / dg).max((dg - 2.0) / dy);
        }
    }
    assert_eq!(dist.multiplicative, expect);
}

#[test]
fn z2_blowup_is_a_product_of_branched_lines() {
    let r = edge();
    for datum in [BlowupDatum::identity(&r), BlowupDatum::uniform(&r, TableSpec::FloorDiv(2), 2)] {
        let y = r.assemble(&datum, &r.ball(3)).unwrap();
        check_tips(&r, &y);
        let top = r.parse_flat("@a,b").unwrap();
        let ua = r.ext_vertex(&Word::identity(), 0).unwrap();
        let ub = r.ext_vertex(&Word::identity(), 1).unwrap();
        let coords = |u: &raag::ExtVertex| -> Vec<Coord> {
            let line = &y.lines[u];
            let mut c: Vec<Coord> = line.tips.iter().map(|t| Coord::Tip(t.0)).collect();
            c.extend((line.core.0..=line.core.1).map(Coord::Core));
            c
        };
        let edge_of = |u: &raag::ExtVertex, p: Coord, q: Coord| match (p, q) {
            (Coord::Core(a), Coord::Core(b)) => (a - b).abs() == 1,
            (Coord::Tip(z), Coord::Core(c)) | (Coord::Core(c), Coord::Tip(z)) => y.g(u, z) == Some(c),
            _ => false,
        };
        let mut present = BTreeMap::new();
        for &p in &coords(&ua) {
            for &q in &coords(&ub) {
                if let Some(i) = y.index_of(&r.y_canonical(&top, &[(0, p), (1, q)])) {
                    assert!(present.insert((p, q), i).is_none());
                }
            }
        }
        assert_eq!(present.len(), y.len());
        let mut expect = BTreeSet::new();
        for (&(p1, q1), &i) in &present {
            for (&(p2, q2), &j) in &present {
                if i < j && ((p1 == p2 && edge_of(&ub, q1, q2)) || (q1 == q2 && edge_of(&ua, p1, p2))) {
                    expect.insert((i, j));
                }
            }
        }
        let got: BTreeSet<(usize, usize)> = y.edges.iter().copied().collect();
        assert_eq!(got, expect);
        assert!(y.cells.iter().any(|c| c.dim() == 2));
    }
}

#[test]
fn branched_flats_intersect_like_flats() {
    for (r, radius) in [(edge(), 2), (p3(), 2), (raag(SimplicialGraph::discrete(&["a", "b"])), 2)] {
        for datum in [BlowupDatum::identity(&r), BlowupDatum::uniform(&r, TableSpec::FloorDiv(2), 2)] {
            let y = r.assemble(&datum, &r.ball(radius)).unwrap();
            check_tips(&r, &y);
            assert!(check_intersections(&r, &y) > 0);
        }
    }
}

/// Order isomorphism `F ↦ β_F` onto the poset of branched flats, and `π`
/// maps cubes onto the cubes of the building window over the same flats.
fn check_poset_and_pi(r: &Raag, y: &BlowupComplex) {
    let beta: Vec<BTreeSet<usize>> = y.flats.iter().map(|f| r.branched_flat_vertices(y, f)).collect();
    for (i, f1) in y.flats.iter().enumerate() {
        for (j, f2) in y.flats.iter().enumerate() {
            assert_eq!(beta[i].is_subset(&beta[j]), r.flat_leq(f1, f2));
        }
    }
    let building = r.building_window(&r.point_flat(&y.window[0]), y.flats.clone());
    let cubes: BTreeSet<(StandardFlat, StandardFlat)> =
        building.cubes.iter().map(|c| (building.vertices[c.low].clone(), building.vertices[c.high].clone())).collect();
    let mut hit = BTreeSet::new();
    for cell in &y.cells {
        let img = r.project_pi(y, cell).unwrap();
        assert_eq!(img.isometric, cell.factors.iter().all(|f| !matches!(f.1, Factor::CoreEdge(_))));
        assert_eq!(img.dim, img.high.dim() - img.low.dim());
        if img.dim > 0 {
            assert!(cubes.contains(&(img.low.clone(), img.high.clone())));
            hit.insert((img.low, img.high));
        }
    }
    assert_eq!(hit, cubes);
}

#[test]
fn identity_datum_recovers_the_building_window() {
    for r in [k1(), edge(), p3()] {
        let window = if r.rank() == 1 { line_window(&r, -4, 4) } else { r.ball(2) };
        let y = r.assemble(&BlowupDatum::identity(&r), &window).unwrap();
        check_poset_and_pi(&r, &y);
        // With identity tables every core fiber is one tip.
        for line in y.lines.values() {
            assert_eq!(line.tips.len() as i64, line.core.1 - line.core.0 + 1);
        }
    }
    let r = p3();
    let y = r.assemble(&BlowupDatum::uniform(&r, TableSpec::FloorDiv(2), 2), &r.ball(2)).unwrap();
    check_poset_and_pi(&r, &y);
}

#[test]
fn data_that_fail_the_fiber_conditions_are_rejected() {
    let r = k1();
    let constant = TableSpec::Explicit((-4..=4).map(|z| (z, 0)).collect());
    let d = BlowupDatum::uniform(&r, constant, 2);
    assert!(r.assemble(&d, &line_window(&r, -4, 4)).is_err());
    let d = BlowupDatum::uniform(&r, TableSpec::FloorDiv(3), 2);
    assert!(r.assemble(&d, &line_window(&r, -4, 4)).is_err());
    let partial = TableSpec::Explicit((0..=4).map(|z| (z, z)).collect());
    assert!(r.assemble(&BlowupDatum::uniform(&r, partial, 1), &line_window(&r, -1, 4)).is_err());
}

#[test]
fn overrides_change_single_orbits() {
    let r = raag(SimplicialGraph::discrete(&["a", "b"]));
    let mut d = BlowupDatum::uniform(&r, TableSpec::Identity, 2);
    let moved = r.parse_ext("b,a").unwrap();
    d.overrides.insert(moved.clone(), TableSpec::FloorDiv(2));
    let window: Vec<Word> = r.ball(3);
    let y = r.assemble(&d, &window).unwrap();
    let base = r.parse_ext(",a").unwrap();
    let (l0, l1) = (&y.lines[&base], &y.lines[&moved]);
    assert_eq!(l0.tips.len() as i64, l0.core.1 - l0.core.0 + 1);
    assert!(l1.tips.len() as i64 > l1.core.1 - l1.core.0 + 1);
}

fn translate(lo: i64, hi: i64, s: i64) -> Vec<(i64, i64)> {
    (lo..=hi).map(|z| (z, z + s)).collect()
}

#[test]
fn compatibility_of_line_moves() {
    let r = k1();
    let u = r.parse_ext(",a").unwrap();
    let d = BlowupDatum::uniform(&r, TableSpec::FloorDiv(2), 2);
    let even = LineMove { label: "a^2".into(), source: u.clone(), target: u.clone(), map: translate(-8, 8, 2) };
    let report = r.check_compatibility(&[even.clone()], &d);
    assert!(report.compatible, "{:?}", report.witnesses);
    let odd = LineMove { label: "a".into(), source: u.clone(), target: u.clone(), map: translate(-8, 8, 1) };
    let report = r.check_compatibility(&[even, odd], &d);
    assert!(!report.compatible);
    assert_eq!(report.witnesses.len(), 1);
    assert!(r.check_compatibility(&[], &d).compatible);

    // Two lines in one orbit with fibers of sizes two and one.
    let f2 = raag(SimplicialGraph::discrete(&["a", "b"]));
    let (u0, u1) = (f2.parse_ext(",a").unwrap(), f2.parse_ext("b,a").unwrap());
    let mut d = BlowupDatum::uniform(&f2, TableSpec::FloorDiv(2), 2);
    d.overrides.insert(u1.clone(), TableSpec::Identity);
    let mv = LineMove { label: "b".into(), source: u0, target: u1, map: translate(-8, 8, 0) };
    let report = f2.check_compatibility(&[mv], &d);
    assert!(!report.compatible);
    assert!(!report.witnesses.is_empty());
}

#[test]
fn datum_from_orbit_representatives() {
    let r = raag(SimplicialGraph::discrete(&["a", "b"]));
    let (u0, u1) = (r.parse_ext(",a").unwrap(), r.parse_ext("b,a").unwrap());
    let rep = OrbitRep {
        vertex: u0.clone(),
        semiconj: TableSpec::FloorDiv(2),
        actions: vec![ZAction { label: "a^2".into(), map: translate(-10, 10, 2), isometry: Isometry { sign: 1, shift: 1 } }],
    };
    let t = Transport { vertex: u1.clone(), rep: 0, map: translate(-10, 10, 3) };
    let d = r.datum_from_actions(&[rep.clone()], &[t], (-10, 10), 2).unwrap();
    for z in -10..=10 {
        assert_eq!(d.table(&u1).unwrap().eval(z), Some((z + 3).div_euclid(2)));
        assert_eq!(d.table(&u0).unwrap().eval(z), Some(z.div_euclid(2)));
    }
    let mut wrong = rep;
    wrong.actions[0].isometry.shift = 2;
    assert!(matches!(r.datum_from_actions(&[wrong], &[], (-10, 10), 2), Err(raag::Error::NotEquivariant(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Random monotone tables with fibers of size one or two.
    #[test]
    fn random_tables_satisfy_the_invariants(steps in proptest::collection::vec(any::<bool>(), 12)) {
        let r = k1();
        let mut table = Vec::new();
        let mut c = 0i64;
        for (i, &stay) in steps.iter().enumerate() {
            let z = i as i64 - 6;
            if i > 0 && !(stay && table.last().map(|e: &(i64, i64)| table.iter().filter(|t| t.1 == e.1).count() < 2).unwrap_or(false)) {
                c += 1;
            }
            table.push((z, c));
        }
        let d = BlowupDatum::uniform(&r, TableSpec::Explicit(table.clone()), 2);
        let y = r.assemble(&d, &line_window(&r, -6, 5)).unwrap();
        check_tips(&r, &y);
        check_intersections(&r, &y);
        check_poset_and_pi(&r, &y);
        prop_assert_eq!(y.edges.len() + 1, y.len());
        let dist = r.distortion(&y);
        prop_assert!(dist.multiplicative <= 2.0 + 1e-12);
    }
}
