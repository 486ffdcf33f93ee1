//! Browser bindings. Each export takes plain strings and numbers and
//! returns a JSON document; the `*_json` functions are the same
//! computations without the wasm-bindgen layer.

use raag::coupling::{CylinderSpace, Support};
use raag::{Raag, SimplicialGraph};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Bigger balls freeze the page.
const MAX_BALL: usize = 4000;

fn graph_from(text: &str) -> Result<Raag, String> {
    let t = text.trim();
    if let Some(n) = t.strip_prefix("cycle:") {
        let n: usize = n.trim().parse().map_err(|_| format!("bad cycle length `{n}`"))?;
        if n < 3 {
            return Err("a cycle needs at least 3 vertices".into());
        }
        return Ok(Raag::new(SimplicialGraph::cycle(n)));
    }
    SimplicialGraph::from_json_str(t).map(Raag::new).map_err(|e| e.to_string())
}

pub fn normalize_json(graph: &str, word: &str) -> Result<Value, String> {
    let r = graph_from(graph)?;
    let w = r.parse(word).map_err(|e| e.to_string())?;
    let inv = r.invert(&w);
    Ok(json!({
        "normal_form": r.display(&w),
        "length": w.len(),
        "syllables": w.syllable_count(),
        "inverse": r.display(&inv),
        "flats_through": r.flats_through(&w, true).iter().map(|f| r.format_coset(f)).collect::<Vec<_>>(),
    }))
}

pub fn building_ball_json(graph: &str, base: &str, radius: u32, length_bound: u64) -> Result<Value, String> {
    let r = graph_from(graph)?;
    let base = r.parse_flat(if base.trim().is_empty() { "@" } else { base }).map_err(|e| e.to_string())?;
    let ball = r.building_ball(&base, radius.min(4), length_bound.min(3));
    if ball.len() > MAX_BALL {
        return Err(format!("ball has {} vertices; lower the radius or length bound", ball.len()));
    }
    let flag = r.check_flag(&ball);
    Ok(json!({
        "vertices": ball.len(),
        "f_vector": ball.f_vector(),
        "flag": flag.flag,
        "judged_links": flag.judged,
        "dot": r.building_ball_to_dot(&ball),
        "nodes": ball.vertices.iter().zip(&ball.distance).map(|(f, d)| json!({"label": r.format_coset(f), "rank": f.dim(), "distance": d})).collect::<Vec<_>>(),
        "edges": ball.edges,
    }))
}

pub fn odometer_json(bits: u32, support: &str) -> Result<Value, String> {
    let c = CylinderSpace::new(bits.min(16)).map_err(|e| e.to_string())?;
    let s = Support::parse(support).map_err(|e| e.to_string())?;
    let table = c.cocycle_table(&[s]).map_err(|e| e.to_string())?;
    let row: Vec<Option<i64>> = table.values[&s].clone();
    let mut hist = std::collections::BTreeMap::new();
    for k in row.iter().flatten() {
        *hist.entry(*k).or_insert(0u64) += 1;
    }
    Ok(json!({
        "support": s.to_string(),
        "bits": c.bits,
        "linfty": table.sup_norm(s),
        "law": table.law_check().holds,
        "histogram": hist.iter().map(|(k, n)| json!([k, n])).collect::<Vec<_>>(),
        "first": row.iter().take(32).collect::<Vec<_>>(),
    }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn normalize(graph: &str, word: &str) -> Result<String, JsValue> {
    to_js(normalize_json(graph, word))
}

#[wasm_bindgen]
pub fn building_ball(graph: &str, base: &str, radius: u32, length_bound: u32) -> Result<String, JsValue> {
    to_js(building_ball_json(graph, base, radius, length_bound as u64))
}

#[wasm_bindgen]
pub fn odometer_cocycle(bits: u32, support: &str) -> Result<String, JsValue> {
    to_js(odometer_json(bits, support))
}
