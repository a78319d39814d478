use clap::{Args, Parser, Subcommand};
use discrete_homotopy::covering::{
    fiber_coset_check, universal_cover, verify_r_covering, Covering,
};
use discrete_homotopy::fpgroup::{abelianize, identify, word_is_trivial, Decision, Presentation};
use discrete_homotopy::fundamental::{cw_presentation_with, even_part, DEFAULT_MAX_COSETS};
use discrete_homotopy::graph::{BasedGraph, Graph, GraphJson, GraphMap, GraphMapJson, GraphRef};
use discrete_homotopy::homcx::{
    poset_cover_check, pullback_cover, times_homotopic, DEFAULT_ENUM_CAP,
};
use discrete_homotopy::homotopy::{
    are_r_homotopic, enumerate_classes, geodesic_length, metric_d, stable_length_upper, Walk,
};
use discrete_homotopy::ncomplex::{
    edge_loop_presentation, homology, neighborhood_complex, neighborhood_group_check, ComplexJson,
};
use discrete_homotopy::obstruct::{
    chromatic_number, cycle_obstruction_report, find_hom, h1_obstruction_report, odd_girth,
    torsion_obstruction_report, HomSearch, Verdict, DEFAULT_SEARCH_CAP,
};
use discrete_homotopy::suite;
use discrete_homotopy::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::Path;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dhtool",
    version,
    about = "Discrete homotopy of graphs: r-fundamental groups, coverings, neighborhood complexes, obstructions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct GraphArg {
    /// Graph file (JSON), or `family:name,p1,...`.
    #[arg(long)]
    graph: Option<String>,
    /// Built-in family, e.g. `cycle,5`, `petersen`, `x,5`.
    #[arg(long)]
    family: Option<String>,
}

impl GraphArg {
    fn load(&self) -> Result<Graph> {
        match (&self.graph, &self.family) {
            (Some(g), None) => GraphRef::Named(g.clone()).resolve(Path::new(".")),
            (None, Some(f)) => GraphRef::Named(format!("family:{f}")).resolve(Path::new(".")),
            _ => Err(Error::Param(
                "give exactly one of --graph or --family".into(),
            )),
        }
    }

    fn based(&self, base: &Option<String>) -> Result<BasedGraph> {
        let g = self.load()?;
        let b = match base {
            Some(b) => b.clone(),
            None => g
                .ids()
                .first()
                .cloned()
                .ok_or_else(|| Error::Param("empty graph".into()))?,
        };
        BasedGraph::new(g, &b)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a built-in graph as JSON or DOT.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        dot: bool,
    },
    /// Walk-level operations.
    Walk {
        #[command(subcommand)]
        op: WalkCmd,
    },
    /// Presentation of π₁^r(G, v).
    Pi1 {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        identify: bool,
        #[arg(long)]
        abelianize: bool,
        #[arg(long)]
        even: bool,
        #[arg(long)]
        presentation: bool,
        /// Drop relators from decomposable cycles.
        #[arg(long)]
        filter_decomposable: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
    },
    /// Finitely presented groups, e.g. `<a,b | a^2, b^3, (ab)^2>`.
    Group {
        #[arg(long)]
        presentation: String,
        /// Decide whether this word is trivial.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
    },
    /// r-coverings.
    Cover {
        #[command(subcommand)]
        op: CoverCmd,
    },
    /// r-neighborhood complexes.
    Ncomplex {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        homology: bool,
        #[arg(long)]
        pi1: bool,
        /// Compare π₁ of the complex with the even part of π₁^{2r}.
        #[arg(long)]
        check_even_part: bool,
        #[arg(long)]
        complex: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
    },
    /// Graph maps, ×-homotopy and pullbacks.
    Homcx {
        #[command(subcommand)]
        op: HomcxCmd,
    },
    /// Obstructions to graph maps.
    Obstruct {
        #[command(subcommand)]
        op: ObstructCmd,
    },
    /// Run the reproduction suite.
    PaperCheck {
        #[arg(long, default_value = "core")]
        suite: String,
        #[arg(long)]
        only: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum WalkCmd {
    Homotopic {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    Classes {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        cap: usize,
    },
    Geodesic {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        walk: String,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    Metric {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    Stable {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long = "loop")]
        lp: String,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 4)]
        max_power: usize,
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum CoverCmd {
    Verify {
        #[arg(long)]
        map: String,
        #[arg(long)]
        r: usize,
    },
    Fiber {
        #[arg(long)]
        map: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        vertex: String,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
    },
    Universal {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        cap: usize,
        #[arg(long)]
        dot: bool,
    },
    Lift {
        #[arg(long)]
        map: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        walk: String,
        #[arg(long)]
        start: String,
    },
}

#[derive(Subcommand)]
enum HomcxCmd {
    Homotopic {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        based: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: usize,
    },
    Pullback {
        #[arg(long)]
        f: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        r: usize,
    },
    PosetCheck {
        #[arg(long)]
        t: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum ObstructCmd {
    Hom {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: u64,
    },
    Cycle {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 4)]
        max_power: usize,
        #[arg(long, default_value_t = 16)]
        walk_cap: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: u64,
    },
    H1 {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: u64,
    },
    Torsion {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: u64,
    },
    Chromatic {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 5)]
        max_k: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: u64,
    },
    OddGirth {
        #[command(flatten)]
        g: GraphArg,
    },
}

/// A result to print and the exit code it implies.
struct Out {
    value: Value,
    code: u8,
}

fn ok(v: impl Serialize) -> Result<Out> {
    Ok(Out {
        value: serde_json::to_value(v)?,
        code: 0,
    })
}

fn graph_ref(s: &str) -> Result<Graph> {
    GraphRef::Named(s.to_string()).resolve(Path::new("."))
}

fn load_map(path: &str) -> Result<GraphMap> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str::<GraphMapJson>(&text)?.to_map(Path::new("."))
}

/// `0,1,0` or a JSON array of ids.
fn parse_walk(g: &Graph, s: &str) -> Result<Walk> {
    let ids: Vec<String> = if s.trim_start().starts_with('[') {
        serde_json::from_str(s)?
    } else {
        s.split(',').map(|x| x.trim().to_string()).collect()
    };
    Walk::from_ids(g, &ids)
}

fn decision(d: Decision) -> &'static str {
    match d {
        Decision::Yes => "yes",
        Decision::No => "no",
        Decision::Unknown => "unknown",
    }
}

fn verdict_code(v: Verdict) -> u8 {
    if v == Verdict::Inconclusive {
        3
    } else {
        0
    }
}

fn run(cli: Cli) -> Result<Out> {
    match cli.cmd {
        Cmd::Gen { family, base, dot } => {
            let g = graph_ref(&format!("family:{family}"))?;
            if dot {
                return Ok(Out {
                    value: Value::String(g.to_dot()),
                    code: 0,
                });
            }
            let b = base.map(|b| g.vertex(&b)).transpose()?;
            ok(GraphJson::from_graph(&g, b))
        }
        Cmd::Walk { op } => run_walk(op),
        Cmd::Pi1 {
            g,
            base,
            r,
            identify: want_id,
            abelianize: want_ab,
            even,
            presentation,
            filter_decomposable,
            max_cosets,
        } => {
            let bg = g.based(&base)?;
            let pp = cw_presentation_with(&bg, r, filter_decomposable)?;
            let mut out = serde_json::Map::new();
            let nothing = !(want_id || want_ab || even);
            if presentation || nothing {
                out.insert("presentation".into(), json!(pp.presentation.to_string()));
                let gens: Vec<Value> = pp
                    .chords
                    .iter()
                    .zip(&pp.parity)
                    .map(|(&(a, b), &p)| json!({"chord": [bg.graph.id(a), bg.graph.id(b)], "parity": p}))
                    .collect();
                out.insert("generators".into(), Value::Array(gens));
            }
            if want_id {
                out.insert(
                    "group".into(),
                    json!(identify(&pp.presentation, max_cosets).to_string()),
                );
            }
            if want_ab {
                out.insert(
                    "abelianization".into(),
                    json!(abelianize(&pp.presentation).to_string()),
                );
            }
            if even {
                let ev = even_part(&pp)?;
                out.insert(
                    "even_part".into(),
                    json!(identify(&ev, max_cosets).to_string()),
                );
            }
            Ok(Out {
                value: Value::Object(out),
                code: 0,
            })
        }
        Cmd::Group {
            presentation,
            word,
            max_cosets,
        } => {
            let p = Presentation::parse(&presentation)?;
            match word {
                Some(w) => {
                    let w = discrete_homotopy::fpgroup::parse_word(&w, &p.generators)?;
                    let d = word_is_trivial(&p, &w, max_cosets);
                    Ok(Out {
                        value: json!({"trivial": decision(d)}),
                        code: if d == Decision::Unknown { 3 } else { 0 },
                    })
                }
                None => {
                    let id = identify(&p, max_cosets);
                    let code = if id.is_certified() { 0 } else { 3 };
                    Ok(Out {
                        value: json!({"group": id.to_string(), "id": id, "abelianization": abelianize(&p).to_string()}),
                        code,
                    })
                }
            }
        }
        Cmd::Cover { op } => run_cover(op),
        Cmd::Ncomplex {
            g,
            r,
            base,
            homology: want_h,
            pi1,
            check_even_part,
            complex,
            max_cosets,
        } => {
            let graph = g.load()?;
            let c = neighborhood_complex(&graph, r)?;
            let mut out = serde_json::Map::new();
            if complex || !(want_h || pi1 || check_even_part) {
                out.insert(
                    "complex".into(),
                    serde_json::to_value(ComplexJson::from_complex(&c))?,
                );
            }
            if want_h {
                out.insert("homology".into(), serde_json::to_value(homology(&c))?);
            }
            let mut code = 0;
            if pi1 || check_even_part {
                let bg = g.based(&base)?;
                if pi1 {
                    let v = c.vertex(bg.graph.id(bg.base))?;
                    let el = edge_loop_presentation(&c, v);
                    out.insert(
                        "pi1".into(),
                        json!(identify(&el.presentation, max_cosets).to_string()),
                    );
                }
                if check_even_part {
                    let rep = neighborhood_group_check(&bg, r, max_cosets)?;
                    code = if rep.pass { 0 } else { 1 };
                    out.insert("check".into(), serde_json::to_value(rep)?);
                }
            }
            Ok(Out {
                value: Value::Object(out),
                code,
            })
        }
        Cmd::Homcx { op } => run_homcx(op),
        Cmd::Obstruct { op } => run_obstruct(op),
        Cmd::PaperCheck {
            suite: name,
            only,
            json: as_json,
        } => {
            if name != "core" {
                return Err(Error::Param(format!("unknown suite {name}")));
            }
            let results = match only {
                Some(i) if (1..=suite::CRITERIA).contains(&i) => vec![suite::run(i)],
                Some(i) => return Err(Error::Param(format!("no criterion {i}"))),
                None => suite::run_all(),
            };
            let code = if results.iter().all(|r| r.pass) { 0 } else { 1 };
            if as_json {
                return Ok(Out {
                    value: serde_json::to_value(&results)?,
                    code,
                });
            }
            let text: Vec<String> = results.iter().map(|r| r.to_string()).collect();
            Ok(Out {
                value: Value::String(text.join("\n")),
                code,
            })
        }
    }
}

fn run_walk(op: WalkCmd) -> Result<Out> {
    match op {
        WalkCmd::Homotopic { g, a, b, r, cap } => {
            let graph = g.load()?;
            let d = are_r_homotopic(
                &graph,
                &parse_walk(&graph, &a)?,
                &parse_walk(&graph, &b)?,
                r,
                cap,
            )?;
            Ok(Out {
                value: json!({"homotopic": decision(d)}),
                code: if d == Decision::Unknown { 3 } else { 0 },
            })
        }
        WalkCmd::Classes {
            g,
            from,
            to,
            r,
            cap,
        } => {
            let graph = g.load()?;
            let t = enumerate_classes(&graph, graph.vertex(&from)?, graph.vertex(&to)?, r, cap)?;
            let blocks: Vec<Vec<Vec<String>>> = t
                .blocks()
                .iter()
                .map(|b| b.iter().map(|w| w.ids(&graph)).collect())
                .collect();
            ok(json!({"walks": t.len(), "classes": blocks}))
        }
        WalkCmd::Geodesic { g, walk, r, cap } => {
            let graph = g.load()?;
            ok(geodesic_length(
                &graph,
                &parse_walk(&graph, &walk)?,
                r,
                cap,
            )?)
        }
        WalkCmd::Metric { g, a, b, r, cap } => {
            let graph = g.load()?;
            ok(metric_d(
                &graph,
                &parse_walk(&graph, &a)?,
                &parse_walk(&graph, &b)?,
                r,
                cap,
            )?)
        }
        WalkCmd::Stable {
            g,
            lp,
            r,
            max_power,
            cap,
        } => {
            let graph = g.load()?;
            ok(stable_length_upper(
                &graph,
                &parse_walk(&graph, &lp)?,
                r,
                max_power,
                cap,
            )?)
        }
    }
}

fn run_cover(op: CoverCmd) -> Result<Out> {
    match op {
        CoverCmd::Verify { map, r } => {
            let c = verify_r_covering(&load_map(&map)?, r);
            let code = if c.pass { 0 } else { 1 };
            Ok(Out {
                value: serde_json::to_value(c)?,
                code,
            })
        }
        CoverCmd::Fiber {
            map,
            r,
            vertex,
            max_cosets,
        } => {
            let m = load_map(&map)?;
            let v = m.domain().vertex(&vertex)?;
            let rep = fiber_coset_check(&Covering::certify(m, r)?, v, max_cosets)?;
            let code = match rep.consistent {
                Some(true) => 0,
                Some(false) => 1,
                None => 3,
            };
            Ok(Out {
                value: serde_json::to_value(rep)?,
                code,
            })
        }
        CoverCmd::Universal {
            g,
            base,
            r,
            cap,
            dot,
        } => {
            let tc = universal_cover(&g.based(&base)?, r, cap)?;
            if dot {
                return Ok(Out {
                    value: Value::String(tc.graph.to_dot()),
                    code: 0,
                });
            }
            ok(json!({
                "graph": GraphJson::from_graph(&tc.graph, Some(tc.base)),
                "projection": GraphMapJson::from_map(&tc.projection).map,
                "certified_radius": tc.certified_radius,
            }))
        }
        CoverCmd::Lift {
            map,
            r,
            walk,
            start,
        } => {
            let cov = Covering::certify(load_map(&map)?, r)?;
            let w = parse_walk(cov.map().codomain(), &walk)?;
            let s = cov.map().domain().vertex(&start)?;
            let lift = cov.lift_path(&w, s)?;
            ok(json!({"lift": lift.ids(cov.map().domain())}))
        }
    }
}

fn run_homcx(op: HomcxCmd) -> Result<Out> {
    match op {
        HomcxCmd::Homotopic { f, g, based, cap } => {
            let (f, g) = (load_map(&f)?, load_map(&g)?);
            let b = based.map(|b| f.domain().vertex(&b)).transpose()?;
            let h = times_homotopic(&f, &g, b, cap)?;
            let chain: Vec<_> = h
                .chain
                .iter()
                .map(|m| GraphMapJson::from_map(m).map)
                .collect();
            ok(json!({"homotopic": h.homotopic, "chain": chain, "explored": h.explored}))
        }
        HomcxCmd::Pullback { f, p, r } => {
            let cov = Covering::certify(load_map(&p)?, r)?;
            let (pb, proj) = pullback_cover(&load_map(&f)?, &cov)?;
            ok(
                json!({"graph": GraphJson::from_graph(&pb, None), "projection": GraphMapJson::from_map(&proj).map}),
            )
        }
        HomcxCmd::PosetCheck { t, p, r, cap } => {
            let cov = Covering::certify(load_map(&p)?, r)?;
            let rep = poset_cover_check(&graph_ref(&t)?, &cov, cap)?;
            let code = if rep.pass { 0 } else { 1 };
            Ok(Out {
                value: serde_json::to_value(rep)?,
                code,
            })
        }
    }
}

fn run_obstruct(op: ObstructCmd) -> Result<Out> {
    match op {
        ObstructCmd::Hom {
            source,
            target,
            cap,
        } => {
            let (g, h) = (graph_ref(&source)?, graph_ref(&target)?);
            Ok(match find_hom(&g, &h, cap) {
                HomSearch::Found(f) => Out {
                    value: json!({"result": "found", "map": GraphMapJson::from_map(&f).map}),
                    code: 0,
                },
                HomSearch::None => Out {
                    value: json!({"result": "none"}),
                    code: 0,
                },
                HomSearch::Inconclusive { nodes } => Out {
                    value: json!({"result": "inconclusive", "nodes": nodes}),
                    code: 3,
                },
            })
        }
        ObstructCmd::Cycle {
            g,
            base,
            n,
            r,
            max_power,
            walk_cap,
            max_cosets,
            cap,
        } => {
            let rep = cycle_obstruction_report(
                &g.based(&base)?,
                n,
                r,
                max_power,
                walk_cap,
                max_cosets,
                cap,
            )?;
            let code = if !rep.consistent {
                1
            } else {
                verdict_code(rep.verdict)
            };
            Ok(Out {
                value: serde_json::to_value(rep)?,
                code,
            })
        }
        ObstructCmd::H1 { g, n, r, cap } => {
            let rep = h1_obstruction_report(&g.load()?, n, r, cap)?;
            let code = if rep.consistent { 0 } else { 1 };
            Ok(Out {
                value: serde_json::to_value(rep)?,
                code,
            })
        }
        ObstructCmd::Torsion {
            source,
            target,
            r,
            max_cosets,
            cap,
        } => {
            let rep = torsion_obstruction_report(
                &graph_ref(&source)?,
                &graph_ref(&target)?,
                r,
                max_cosets,
                cap,
            )?;
            let code = if !rep.consistent {
                1
            } else {
                verdict_code(rep.verdict)
            };
            Ok(Out {
                value: serde_json::to_value(rep)?,
                code,
            })
        }
        ObstructCmd::Chromatic { g, max_k, cap } => ok(chromatic_number(&g.load()?, max_k, cap)),
        ObstructCmd::OddGirth { g } => ok(json!({"odd_girth": odd_girth(&g.load()?)})),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            match &out.value {
                Value::String(s) => println!("{s}"),
                v => println!("{}", serde_json::to_string_pretty(v).expect("json")),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Budget(_) => 3,
                Error::Param(_) | Error::Parse(_) | Error::Lookup(_) | Error::Io(_) => 2,
                _ => 1,
            })
        }
    }
}
