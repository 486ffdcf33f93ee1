mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use raag::coupling::{CylinderSpace, Support};
use raag::lab::{canonical_complete, tprime_preset};
use raag::projections::default_search;
use raag::{BlowupDatum, LabeledDigraph, QEmbedding, Raag, SimplicialGraph, TableSpec, Translation, Word};
use serde_json::{json, Value};

use report::{RunReport, Status};

#[derive(Parser)]
#[command(name = "raag", version, about = "Exact computations in right-angled Artin groups")]
struct Cli {
    /// Print the report as a single line instead of pretty JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rigidity and structure of the defining graph
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Normal forms and coset representatives
    #[command(subcommand)]
    Word(WordCmd),
    /// Standard flats, parallelism and the Δ map
    #[command(subcommand)]
    Flat(FlatCmd),
    /// Balls in the extension graph
    #[command(subcommand)]
    Ext(ExtCmd),
    /// Balls and geodesics in the flat building
    #[command(subcommand)]
    Building(BuildingCmd),
    /// Assemble a blow-up complex from a datum
    #[command(subcommand)]
    Blowup(BlowupCmd),
    /// Star projections and straightening
    #[command(subcommand)]
    Project(ProjectCmd),
    /// Canonical completion and q-embeddings
    #[command(subcommand)]
    Lab(LabCmd),
    /// Odometer cocycles on cylinder truncations
    #[command(subcommand)]
    Couple(CoupleCmd),
}

/// A graph JSON file, or one of `cycle:N`, `path:a,b,c`, `complete:a,b`, `discrete:a,b`.
#[derive(Args, Clone)]
struct GraphArg {
    #[arg(long = "graph", short = 'g')]
    graph: String,
}

#[derive(Args, Clone)]
struct Window {
    #[arg(short = 'r', long = "radius", default_value_t = 2)]
    radius: u32,
    #[arg(short = 'L', long = "length-bound", default_value_t = 2)]
    length_bound: u64,
    /// Write a DOT rendering to this file.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Rigidity predicates with witnesses.
    Analyze {
        file: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum WordCmd {
    Normalize {
        #[command(flatten)]
        g: GraphArg,
        word: String,
    },
    /// Shortest representative of `w·G_Λ`.
    MinRep {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long = "type")]
        ty: String,
        word: String,
    },
    /// Factor `g = a·b` with `a ∈ G_A`, `b ∈ G_B` if possible.
    DoubleCoset {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        word: String,
    },
}

#[derive(Subcommand)]
enum FlatCmd {
    /// Standard flats through a point.
    Through {
        #[command(flatten)]
        g: GraphArg,
        word: String,
        #[arg(long)]
        maximal: bool,
    },
    /// Parallelism of two flats written `REP@TYPE`.
    Parallel {
        #[command(flatten)]
        g: GraphArg,
        first: String,
        second: String,
    },
    Intersect {
        #[command(flatten)]
        g: GraphArg,
        first: String,
        second: String,
    },
    /// The clique of extension-graph vertices of a flat.
    Delta {
        #[command(flatten)]
        g: GraphArg,
        flat: String,
    },
}

#[derive(Subcommand)]
enum ExtCmd {
    /// Ball in the extension graph around `word,vertex`.
    Ball {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value = "")]
        base: String,
        #[command(flatten)]
        w: Window,
    },
}

#[derive(Subcommand)]
enum BuildingCmd {
    /// Ball in the right-angled building around a flat `REP@TYPE`.
    Ball {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value = "@")]
        base: String,
        #[command(flatten)]
        w: Window,
    },
    /// Path from a loop in the complement graph, checked by BFS.
    Geodesic {
        #[command(flatten)]
        g: GraphArg,
        /// Comma-separated vertex names, e.g. `1,3,5,2,4,1`.
        #[arg(long = "loop")]
        cycle: String,
    },
}

#[derive(Args, Clone)]
struct DatumArg {
    /// Datum JSON file; overrides `--floor-div`.
    #[arg(long)]
    datum: Option<PathBuf>,
    /// Uniform `z ↦ ⌊z/d⌋` tables (1 is the identity datum).
    #[arg(long, default_value_t = 1)]
    floor_div: i64,
    /// Word-ball radius of the window.
    #[arg(short = 'r', long = "radius", default_value_t = 2)]
    radius: u64,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BlowupCmd {
    Assemble {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        d: DatumArg,
    },
    /// Empirical quasi-isometry constants of the tip map.
    Distort {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        d: DatumArg,
    },
}

#[derive(Subcommand)]
enum ProjectCmd {
    /// Gate of a point in the product region of `word,vertex`.
    Star {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        vertex: String,
        word: String,
    },
    /// Action of a left translation on the `Z` factor of a product region.
    Factor {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        elem: String,
        #[arg(short = 'r', long = "radius", default_value_t = 3)]
        radius: u64,
    },
    /// Straighten a (perturbed) left translation on a word ball.
    Straighten {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        translate: String,
        /// Compose with a deterministic sup-norm-1 perturbation.
        #[arg(long)]
        perturb: bool,
        #[arg(short = 'r', long = "radius", default_value_t = 4)]
        radius: u64,
    },
}

#[derive(Subcommand)]
enum LabCmd {
    /// Canonical completion of a labeled digraph file, or of the T' preset.
    Complete {
        file: Option<PathBuf>,
        #[arg(long)]
        tprime: Option<usize>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// The embedding of n copies glued along st(v).
    Qembed {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        vertex: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(short = 'r', long = "radius", default_value_t = 3)]
        radius: u64,
    },
}

#[derive(Subcommand)]
enum CoupleCmd {
    /// Orbit-equivalence cocycle of a flip against the odometer.
    Odometer {
        #[arg(long, default_value_t = 8)]
        bits: u32,
        /// Finite support such as `{0,2}`; repeat for several generators.
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        /// Write the full cocycle table here.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
}

type Fallible<T> = Result<T, String>;

fn read_input(report: &mut RunReport, path: &Path) -> Fallible<String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    report.input(text.as_bytes());
    Ok(text)
}

fn load_graph(report: &mut RunReport, spec: &str) -> Fallible<SimplicialGraph> {
    let names = |list: &str| -> Vec<String> { list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect() };
    if let Some((kind, arg)) = spec.split_once(':') {
        if !Path::new(spec).exists() {
            let list = names(arg);
            let refs: Vec<&str> = list.iter().map(String::as_str).collect();
            return match kind {
                "cycle" => arg.parse::<usize>().ok().filter(|&n| n >= 3).map(SimplicialGraph::cycle).ok_or(format!("bad cycle length `{arg}`")),
                "path" => Ok(SimplicialGraph::path(&refs)),
                "complete" => Ok(SimplicialGraph::complete(&refs)),
                "discrete" => Ok(SimplicialGraph::discrete(&refs)),
                _ => Err(format!("unknown graph preset `{kind}`")),
            };
        }
    }
    let text = read_input(report, Path::new(spec))?;
    SimplicialGraph::from_json_str(&text).map_err(|e| format!("{spec}: {e}"))
}

fn write_dot(report: &mut RunReport, path: &Option<PathBuf>, dot: impl FnOnce() -> String) -> Fallible<()> {
    if let Some(p) = path {
        fs::write(p, dot()).map_err(|e| format!("{}: {e}", p.display()))?;
        report.result("dot", p.display().to_string());
    }
    Ok(())
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run(cli: &Cli, args: &[String]) -> Fallible<RunReport> {
    match &cli.command {
        Command::Graph(GraphCmd::Analyze { file, dot }) => {
            let mut rep = RunReport::new("graph analyze", args);
            let g = load_graph(&mut rep, file)?;
            let out = g.out_finiteness();
            let star = g.star_rigidity();
            let square = g.induced_square();
            let names = |vs: &[usize]| vs.iter().map(|&v| g.name(v).to_string()).collect::<Vec<_>>();
            rep.result("vertices", g.len());
            rep.result("edges", g.edge_count());
            rep.result("out_finite", out.finite);
            rep.result("star_rigid", star.rigid);
            rep.result("induced_square", square.is_some());
            rep.result("clique_number", g.clique_number());
            rep.result("join_factors", g.join_factors().iter().map(|f| json!(g.set_names(*f))).collect::<Vec<_>>());
            let dominations: Vec<Value> = out
                .dominations
                .iter()
                .map(|&(v, w)| {
                    let t = Raag::new(g.clone()).verify_transvection(v, w);
                    json!({"v": g.name(v), "w": g.name(w), "transvection_preserves_relations": t.preserves_relations})
                })
                .collect();
            rep.verdict("out_finite", out.finite, json!({"dominations": dominations, "separating_stars": names(&out.separating_stars)}));
            rep.verdict(
                "star_rigid",
                star.rigid,
                star.witness.map(|(v, p)| json!({"vertex": g.name(v), "automorphism": names(&p)})).unwrap_or(Value::Null),
            );
            rep.verdict("no_induced_square", square.is_none(), square.map(|s| json!(names(&s))).unwrap_or(Value::Null));
            write_dot(&mut rep, dot, || g.to_dot())?;
            Ok(rep)
        }
        Command::Word(cmd) => {
            let (name, g) = match cmd {
                WordCmd::Normalize { g, .. } => ("word normalize", g),
                WordCmd::MinRep { g, .. } => ("word min-rep", g),
                WordCmd::DoubleCoset { g, .. } => ("word double-coset", g),
            };
            let mut rep = RunReport::new(name, args);
            let r = Raag::new(load_graph(&mut rep, &g.graph)?);
            match cmd {
                WordCmd::Normalize { word, .. } => {
                    let w = r.parse(word).map_err(err)?;
                    rep.result("normal_form", r.format(&w));
                    rep.result("length", w.len());
                    rep.result("syllables", r.word_to_json(&w));
                }
                WordCmd::MinRep { ty, word, .. } => {
                    let (w, ty) = (r.parse(word).map_err(err)?, r.graph().vertex_set(ty).map_err(err)?);
                    let m = r.coset_min_rep(&w, ty);
                    rep.result("min_rep", r.format(&m));
                    rep.result("coset", r.format_coset(&r.coset(&m, ty)));
                }
                WordCmd::DoubleCoset { left, right, word, .. } => {
                    let w = r.parse(word).map_err(err)?;
                    let (a, b) = (r.graph().vertex_set(left).map_err(err)?, r.graph().vertex_set(right).map_err(err)?);
                    let f = r.double_coset_factor(&w, a, b);
                    let witness = f.as_ref().map(|(x, y)| json!({"left": r.format(x), "right": r.format(y)})).unwrap_or(Value::Null);
                    rep.result("member", f.is_some());
                    rep.verdict("double_coset_membership", f.is_some(), witness);
                }
            }
            Ok(rep)
        }
        Command::Flat(cmd) => {
            let (name, g) = match cmd {
                FlatCmd::Through { g, .. } => ("flat through", g),
                FlatCmd::Parallel { g, .. } => ("flat parallel", g),
                FlatCmd::Intersect { g, .. } => ("flat intersect", g),
                FlatCmd::Delta { g, .. } => ("flat delta", g),
            };
            let mut rep = RunReport::new(name, args);
            let r = Raag::new(load_graph(&mut rep, &g.graph)?);
            match cmd {
                FlatCmd::Through { word, maximal, .. } => {
                    let x = r.parse(word).map_err(err)?;
                    let flats: Vec<Value> = r.flats_through(&x, *maximal).iter().map(|f| r.coset_to_json(f)).collect();
                    rep.result("count", flats.len());
                    rep.result("flats", flats);
                }
                FlatCmd::Parallel { first, second, .. } => {
                    let (f1, f2) = (r.parse_flat(first).map_err(err)?, r.parse_flat(second).map_err(err)?);
                    let par = r.are_parallel(&f1, &f2);
                    rep.result("parallel", par);
                    rep.result("parallel_set", r.coset_to_json(&r.parallel_set(&f1)));
                    let witness = if par {
                        Value::Null
                    } else {
                        json!({"same_type": f1.ty == f2.ty, "first_parallel_set": r.format_coset(&r.parallel_set(&f1))})
                    };
                    rep.verdict("parallel", par, witness);
                }
                FlatCmd::Intersect { first, second, .. } => {
                    let (f1, f2) = (r.parse_coset(first).map_err(err)?, r.parse_coset(second).map_err(err)?);
                    rep.result("intersection", r.flat_intersection(&f1, &f2).map(|c| r.coset_to_json(&c)).unwrap_or(Value::Null));
                }
                FlatCmd::Delta { flat, .. } => {
                    let f = r.parse_flat(flat).map_err(err)?;
                    rep.result("delta", r.delta(&f).iter().map(|u| r.ext_to_json(u)).collect::<Vec<_>>());
                }
            }
            Ok(rep)
        }
        Command::Ext(ExtCmd::Ball { g, base, w }) => {
            let mut rep = RunReport::new("ext ball", args);
            let r = Raag::new(load_graph(&mut rep, &g.graph)?);
            let base = if base.is_empty() { format!(",{}", r.graph().name(0)) } else { base.clone() };
            let u = r.parse_ext(&base).map_err(err)?;
            rep.truncate("radius", w.radius);
            rep.truncate("length_bound", w.length_bound);
            let ball = r.ext_ball(&u, w.radius, w.length_bound);
            let inner_open = (0..ball.vertices.len()).filter(|&i| ball.distance[i] < w.radius && !ball.exhausted[i]).count();
            rep.result("ball", r.ext_ball_to_json(&ball));
            let status = if inner_open == 0 { Status::Proved } else { Status::Inconclusive };
            rep.certify("ball_complete", status, json!({"vertices_with_missing_neighbours": inner_open}), Value::Null);
            write_dot(&mut rep, &w.dot, || r.ext_ball_to_dot(&ball))?;
            Ok(rep)
        }
        Command::Building(BuildingCmd::Ball { g, base, w }) => {
            let mut rep = RunReport::new("building ball", args);
            let r = Raag::new(load_graph(&mut rep, &g.graph)?);
            let base = r.parse_flat(base).map_err(err)?;
            rep.truncate("radius", w.radius);
            rep.truncate("length_bound", w.length_bound);
            let ball = r.building_ball(&base, w.radius, w.length_bound);
            let flag = r.check_flag(&ball);
            rep.result("ball", r.building_ball_to_json(&ball));
            rep.result("f_vector", ball.f_vector());
            let status = if !flag.flag {
                Status::Refuted
            } else if flag.judged == 0 {
                Status::Inconclusive
            } else {
                Status::Proved
            };
            let witness = json!({"judged_links": flag.judged, "unjudged_links": flag.inconclusive, "violations": format!("{:?}", flag.violations)});
            rep.certify("flag_links", status, witness, Value::Null);
            write_dot(&mut rep, &w.dot, || r.building_ball_to_dot(&ball))?;
            Ok(rep)
        }
        Command::Building(BuildingCmd::Geodesic { g, cycle }) => {
            let mut rep = RunReport::new("building geodesic", args);
            let r = Raag::new(load_graph(&mut rep, &g.graph)?);
            let cycle: Vec<usize> = cycle.split(',').map(|s| r.graph().vertex(s.trim())).collect::<raag::Result<_>>().map_err(err)?;
            let path = r.complement_loop_path(&cycle).map_err(err)?;
            let check = r.verify_geodesic(&path);
            rep.truncate("radius", check.radius);
            rep.truncate("length_bound", check.length_bound);
            rep.result("path", path.iter().map(|f| r.format_coset(f)).collect::<Vec<_>>());
            rep.result("path_length", check.path_length);
            rep.result("bfs_distance", check.bfs_distance);
            rep.result("ball_size", check.ball_size);
            let status = match check.bfs_distance {
                None => Status::Inconclusive,
                Some(_) if check.geodesic => Status::Proved,
                Some(_) => Status::Refuted,
            };
            rep.certify("geodesic", status, json!({"syllable_distance": check.syllable_distance}), Value::Null);
            Ok(rep)
        }
        Command::Blowup(cmd) => {
            let (name, g, d, distort) = match cmd {
                BlowupCmd::Assemble { g, d } => ("blowup assemble", g, d, false),
                BlowupCmd::Distort { g, d } => ("blowup distort", g, d, true),
            };
            let mut rep = RunReport::new(name, args);
            let r = Raag::new(load_graph(&mut rep, &g.graph)?);
            let datum = match &d.datum {
                Some(p) => {
                    let text = read_input(&mut rep, p)?;
                    BlowupDatum::from_json_str(&r, &text).map_err(|e| format!("{}: {e}", p.display()))?
                }
                None if d.floor_div == 1 => BlowupDatum::identity(&r),
                None if d.floor_div > 1 => BlowupDatum::uniform(&r, TableSpec::FloorDiv(d.floor_div), d.floor_div as usize),
                None => return Err(format!("--floor-div must be positive, got {}", d.floor_div)),
            };
            rep.truncate("radius", d.radius);
            let y = r.assemble(&datum, &r.ball(d.radius)).map_err(err)?;
            rep.result("datum", datum.to_json(&r));
            rep.result("vertices", y.len());
            rep.result("cells", y.cells.len());
            if distort {
                let dist = r.distortion(&y);
                rep.result(
                    "distortion",
                    json!({"multiplicative": dist.multiplicative, "additive": dist.additive, "pairs": dist.pairs,
                        "max_ratio_y_over_g": dist.max_ratio_y_over_g, "max_ratio_g_over_y": dist.max_ratio_g_over_y}),
                );
            } else {
                rep.result("complex", r.blowup_to_json(&y));
            }
            write_dot(&mut rep, &d.dot, || r.blowup_to_dot(&y))?;
            Ok(rep)
        }
        Command::Project(cmd) => {
            let (name, g) = match cmd {
                ProjectCmd::Star { g, .. } => ("project star", g),
                ProjectCmd::Factor { g, .. } => ("project factor", g),
                ProjectCmd::Straighten { g, .. } => ("project straighten", g),
            };
            let mut rep = RunReport::new(name, args);
            let r = Raag::new(load_graph(&mut rep, &g.graph)?);
            match cmd {
                ProjectCmd::Star { vertex, word, .. } => {
                    let u = r.parse_ext(vertex).map_err(err)?;
                    let gate = r.gate(&u, &r.parse(word).map_err(err)?);
                    rep.result("gate", r.format(&gate.point));
                    rep.result("coordinate", gate.coordinate);
                    rep.result("distance", gate.distance);
                }
                ProjectCmd::Factor { vertex, elem, radius, .. } => {
                    let u = r.parse_ext(vertex).map_err(err)?;
                    let h = Translation(r.parse(elem).map_err(err)?);
                    rep.truncate("radius", *radius);
                    let t = r.factor_action(&h, &u, &r.ball(*radius), elem).map_err(err)?;
                    rep.result("table", t.map.iter().map(|(z, y)| json!([z, y])).collect::<Vec<_>>());
                    rep.result("injective", t.is_injective());
                }
                ProjectCmd::Straighten { translate, perturb, radius, .. } => {
                    let t = r.parse(translate).map_err(err)?;
                    let (d, rho) = default_search(1.0, 2.0 * *perturb as u8 as f64, *radius);
                    rep.truncate("radius", *radius);
                    rep.truncate("search_radius", d);
                    rep.truncate("patch_radius", rho);
                    let window = r.ball(*radius);
                    let perturb = *perturb;
                    let q = move |r: &Raag, x: &Word| Some(if perturb { perturbed(r, &t, x) } else { r.multiply(&t, x) });
                    let out = r.straighten_qi(&q, &window, d, rho);
                    rep.result("interior", out.map.len());
                    rep.result("boundary", out.inconclusive.len());
                    rep.result("sup_distance", out.sup_distance);
                    rep.result("map", out.map.iter().map(|(x, y)| json!([r.format(x), r.format(y)])).collect::<Vec<_>>());
                    let witness: Vec<Value> = out.failures.iter().take(8).map(|(x, why)| json!([r.format(x), why])).collect();
                    rep.verdict("straightened_interior", out.failures.is_empty(), if witness.is_empty() { Value::Null } else { json!(witness) });
                }
            }
            Ok(rep)
        }
        Command::Lab(LabCmd::Complete { file, tprime, radius }) => {
            let mut rep = RunReport::new("lab complete", args);
            let d = match (file, tprime) {
                (Some(p), _) => {
                    let text = read_input(&mut rep, p)?;
                    LabeledDigraph::from_json_str(&text).map_err(|e| format!("{}: {e}", p.display()))?
                }
                (None, Some(n)) => {
                    rep.truncate("radius", *radius);
                    tprime_preset(*n, *radius).map_err(err)?
                }
                (None, None) => return Err("give a digraph file or --tprime N".into()),
            };
            let (k, cert) = canonical_complete(&d).map_err(err)?;
            rep.result("completed", k.to_json());
            rep.result("loops_added", cert.loops_added);
            rep.result("closing_added", cert.closing_added);
            rep.verdict("covering", cert.total, if cert.total { Value::Null } else { json!(format!("{:?}", cert.missing)) });
            Ok(rep)
        }
        Command::Lab(LabCmd::Qembed { g, vertex, n, radius }) => {
            let mut rep = RunReport::new("lab qembed", args);
            let r = Raag::new(load_graph(&mut rep, &g.graph)?);
            let v = r.graph().vertex(vertex).map_err(err)?;
            let q = QEmbedding::new(&r, v, *n).map_err(err)?;
            rep.truncate("radius", *radius);
            rep.result("source_graph", q.source.graph().to_json());
            rep.result(
                "generators",
                (0..q.source.rank()).map(|a| json!([q.source.graph().name(a), r.format(&q.q_generator(a).unwrap())])).collect::<Vec<_>>(),
            );
            let broken = q.broken_relations();
            rep.verdict("homomorphism", broken.is_empty(), if broken.is_empty() { Value::Null } else { json!(format!("{broken:?}")) });
            let off = q.off_kernel();
            rep.verdict("image_in_kernel", off.is_empty(), if off.is_empty() { Value::Null } else { json!(off) });
            let coll = q.collisions(*radius);
            let status = if coll.is_empty() { Status::Inconclusive } else { Status::Refuted };
            let witness = coll.first().map(|(a, b)| json!([q.source.format(a), q.source.format(b)])).unwrap_or(Value::Null);
            // Injectivity on a ball proves nothing about the whole group.
            rep.certify("injective_on_ball", status, witness, Value::Null);
            let cert = q.index_certificate(*radius);
            rep.result("index", cert.index);
            rep.verdict("index_n", cert.index == *n && cert.failures.is_empty(), json!({"failures": cert.failures.len()}));
            Ok(rep)
        }
        Command::Couple(CoupleCmd::Odometer { bits, gens, stats }) => {
            let mut rep = RunReport::new("couple odometer", args);
            let c = CylinderSpace::new(*bits).map_err(err)?;
            rep.truncate("bits", *bits);
            let supports: Vec<Support> = gens.iter().map(|s| Support::parse(s)).collect::<raag::Result<_>>().map_err(err)?;
            let table = c.cocycle_table(&supports).map_err(err)?;
            let law = table.law_check();
            let mut per = Vec::new();
            for s in &supports {
                let row = &table.values[s];
                let mean = row.iter().flatten().map(|&k| k.unsigned_abs() as f64).sum::<f64>() * c.weight();
                per.push(json!({"support": s.to_string(), "linfty": table.sup_norm(*s), "l1": mean,
                    "overflow": row.iter().filter(|k| k.is_none()).count()}));
            }
            rep.result("generators", per);
            rep.result("law_checked", law.checked);
            let witness: Vec<Value> = law
                .violations
                .iter()
                .map(|v| json!({"s1": v.s1.to_string(), "s2": v.s2.to_string(), "x": v.x, "lhs": v.lhs, "rhs": v.rhs}))
                .collect();
            rep.verdict("cocycle_law", law.holds, if witness.is_empty() { Value::Null } else { json!(witness) });
            if let Some(p) = stats {
                let rows: Vec<Value> = table.values.iter().map(|(s, row)| json!({"support": s.to_string(), "values": row})).collect();
                let text = serde_json::to_string_pretty(&json!({"bits": bits, "table": rows})).expect("serializable");
                fs::write(p, text + "\n").map_err(|e| format!("{}: {e}", p.display()))?;
                rep.result("stats", p.display().to_string());
            }
            Ok(rep)
        }
    }
}

/// Right multiplication by a letter picked by a hash of the point, or by nothing.
fn perturbed(r: &Raag, t: &Word, x: &Word) -> Word {
    let letters = r.letters();
    let h = r.format(x).bytes().fold(7u64, |a, b| a.wrapping_mul(31).wrapping_add(b as u64));
    let y = r.multiply(t, x);
    match h % (letters.len() as u64 + 2) {
        k if (k as usize) < letters.len() => r.multiply(&y, &letters[k as usize]),
        _ => y,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli, &argv[1..]) {
        Ok(rep) => {
            let doc = rep.to_json();
            let text = if cli.json { doc.to_string() } else { serde_json::to_string_pretty(&doc).expect("serializable") };
            println!("{text}");
            ExitCode::from(rep.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
