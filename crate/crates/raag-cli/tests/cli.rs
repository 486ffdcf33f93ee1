use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn raag(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raag")).args(args).current_dir(dir).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn status_of(v: &Value, name: &str) -> String {
    v["certificates"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()["status"].as_str().unwrap().to_string()
}

fn workdir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("pentagon.json"),
        r#"{"vertices": ["1","2","3","4","5"], "edges": [["1","2"],["2","3"],["3","4"],["4","5"],["5","1"]]}"#,
    )
    .unwrap();
    fs::write(dir.path().join("edge.json"), r#"{"vertices": ["a","b"], "edges": [["a","b"]]}"#).unwrap();
    fs::write(dir.path().join("square.json"), r#"{"vertices": ["a","b","c","d"], "edges": [["a","b"],["b","c"],["c","d"],["d","a"]]}"#).unwrap();
    dir
}

#[test]
fn pentagon_analysis() {
    let dir = workdir();
    let out = raag(&["graph", "analyze", "pentagon.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["results"]["out_finite"], true);
    assert_eq!(v["results"]["star_rigid"], true);
    assert_eq!(v["results"]["induced_square"], false);
    let out = raag(&["graph", "analyze", "square.json", "--dot", "sq.dot"], dir.path());
    let v = report(&out);
    assert_eq!(status_of(&v, "out_finite"), "refuted");
    assert_eq!(v["certificates"][0]["witness"]["dominations"][0]["transvection_preserves_relations"], true);
    assert!(fs::read_to_string(dir.path().join("sq.dot")).unwrap().starts_with("graph"));
}

#[test]
fn word_commands() {
    let dir = workdir();
    let v = report(&raag(&["word", "normalize", "--graph", "edge.json", "a b a^-1"], dir.path()));
    assert_eq!(v["results"]["normal_form"], "b");
    let v = report(&raag(&["word", "min-rep", "-g", "edge.json", "--type", "a", "a^3 b"], dir.path()));
    assert_eq!(v["results"]["min_rep"], "b");
    let out = raag(&["word", "double-coset", "-g", "path:a,b,c", "--left", "a", "--right", "c", "b"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(status_of(&report(&out), "double_coset_membership"), "refuted");
}

#[test]
fn input_errors_exit_one() {
    let dir = workdir();
    let out = raag(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    fs::write(dir.path().join("bad.json"), "{\"vertices\": [\"a\",\n  3]}").unwrap();
    let out = raag(&["graph", "analyze", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2 column"));
    let out = raag(&["word", "normalize", "-g", "edge.json", "a z"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(raag(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn truncation_is_reported_with_exit_two() {
    let dir = workdir();
    let out = raag(&["ext", "ball", "-g", "path:a,b,c", "--base", ",a", "-r", "2", "-L", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let v = report(&out);
    let cert = &v["certificates"][0];
    assert_eq!(cert["status"], "inconclusive");
    assert_eq!(cert["truncation"]["radius"], 2);
    assert_eq!(cert["truncation"]["length_bound"], 1);
    // Finite extension graph of a complete graph: nothing is missing.
    let out = raag(&["ext", "ball", "-g", "complete:x,y", "--base", ",x", "-r", "2", "-L", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical() {
    let dir = workdir();
    let args = ["building", "ball", "-g", "pentagon.json", "-r", "2", "-L", "1", "--json"];
    let a = raag(&args, dir.path());
    let b = raag(&args, dir.path());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(status_of(&report(&a), "flag_links"), "proved");
    fs::write(dir.path().join("pentagon.json"), r#"{"vertices": ["1","2","3","4","5"], "edges": [["1","2"],["2","3"],["3","4"],["4","5"]]}"#).unwrap();
    let c = raag(&args, dir.path());
    assert_ne!(report(&a)["inputs_digest"], report(&c)["inputs_digest"]);
}

#[test]
fn geodesic_in_the_pentagon_building() {
    let dir = workdir();
    let out = raag(&["building", "geodesic", "-g", "pentagon.json", "--loop", "1,3,5,2,4,1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["results"]["path_length"], 10);
    assert_eq!(v["results"]["bfs_distance"], 10);
    assert_eq!(status_of(&v, "geodesic"), "proved");
}

#[test]
fn blowup_and_projection_commands() {
    let dir = workdir();
    let v = report(&raag(&["blowup", "distort", "-g", "discrete:a", "--floor-div", "2", "-r", "8"], dir.path()));
    assert!(v["results"]["distortion"]["multiplicative"].as_f64().unwrap() <= 2.25);
    fs::write(dir.path().join("datum.json"), r#"{"fiber_bound": 2, "types": {"a": {"floor_div": 2}, "b": "identity"}}"#).unwrap();
    let out = raag(&["blowup", "assemble", "-g", "edge.json", "--datum", "datum.json", "-r", "2", "--dot", "y.dot"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(report(&out)["results"]["vertices"].as_u64().unwrap() > 0);
    let v = report(&raag(&["project", "star", "-g", "path:a,b,c", "--vertex", ",a", "a^2 c"], dir.path()));
    assert_eq!(v["results"]["distance"], 1);
    assert_eq!(v["results"]["gate"], "a^2");
    let v = report(&raag(&["project", "factor", "-g", "path:a,b,c", "--vertex", ",a", "--elem", "a^2 b"], dir.path()));
    assert!(v["results"]["table"].as_array().unwrap().iter().all(|p| p[1].as_i64().unwrap() == p[0].as_i64().unwrap() + 2));
    let out = raag(&["project", "straighten", "-g", "cycle:5", "--translate", "1 3", "--perturb", "-r", "4"], dir.path());
    let v = report(&out);
    assert_eq!(status_of(&v, "straightened_interior"), "proved");
    assert_eq!(v["results"]["sup_distance"], 1);
}

#[test]
fn lab_and_coupling_commands() {
    let dir = workdir();
    let v = report(&raag(&["lab", "complete", "--tprime", "2", "--radius", "2"], dir.path()));
    assert_eq!(status_of(&v, "covering"), "proved");
    let out = raag(&["lab", "qembed", "-g", "path:a,b,c", "--vertex", "a", "--n", "2", "-r", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let v = report(&out);
    assert_eq!(status_of(&v, "homomorphism"), "proved");
    assert_eq!(status_of(&v, "index_n"), "proved");
    assert_eq!(v["results"]["index"], 2);
    let out = raag(&["couple", "odometer", "--bits", "10", "--gen", "{0,2}", "--gen", "{0}", "--gen", "{2}", "--stats", "out.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(status_of(&report(&out), "cocycle_law"), "proved");
    let stats: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out.json")).unwrap()).unwrap();
    assert_eq!(stats["table"][0]["values"].as_array().unwrap().len(), 1024);
    let out = raag(&["couple", "odometer", "--bits", "3", "--gen", "{5}"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}
