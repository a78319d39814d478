//! The reproduction suite: fifteen exact checks with wall-clock limits,
//! shared by `dhtool paper-check` and the acceptance test target.

use crate::covering::{fiber_coset_check, replay_witness, verify_r_covering, Covering};
use crate::error::Result;
use crate::fpgroup::{abelianize, identify, Decision, GroupId};
use crate::fundamental::cw_presentation;
use crate::graph::{make_family, BasedGraph, Graph, GraphMap, Vertex};
use crate::homcx::{
    endpoint_pullback_iso, enumerate_maps, homotopy_map, induced_images_agree, one_step_neighbors,
    pullback_cover, three_way, times_homotopic,
};
use crate::homotopy::{are_r_homotopic, enumerate_classes, move_neighbors, HomotopyOracle, Walk};
use crate::ncomplex::{
    complex_covering_check, homology, neighborhood_complex, neighborhood_group_check,
};
use crate::obstruct::{
    chromatic_number, cycle_obstruction_report, find_hom, h1_obstruction_report, odd_girth,
    torsion_obstruction_report, Chromatic, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: String,
    pub pass: bool,
    pub seconds: f64,
    pub limit_seconds: f64,
    pub detail: String,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} {} [{:.2}s / {}s] {}: {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.seconds,
            self.limit_seconds,
            self.title,
            self.detail
        )
    }
}

pub const CRITERIA: usize = 15;

/// Criteria whose stated outcome contradicts the computed truth; they are
/// reported as failures. See the README.
pub const KNOWN_UNATTAINABLE: [usize; 2] = [5, 10];

fn fam(name: &str, p: &[i64]) -> Graph {
    make_family(name, p).expect("built-in family")
}

fn based(g: Graph, base: &str) -> BasedGraph {
    BasedGraph::new(g, base).expect("base vertex exists")
}

fn winding(m: usize, n: usize) -> GraphMap {
    GraphMap::by_rule(fam("cycle", &[m as i64]), fam("cycle", &[n as i64]), |s| {
        (s.parse::<usize>().unwrap() % n).to_string()
    })
    .expect("winding is a graph map")
}

/// Collects check outcomes and a readable transcript.
#[derive(Default)]
struct Log {
    ok: bool,
    lines: Vec<String>,
}

impl Log {
    fn new() -> Log {
        Log {
            ok: true,
            lines: vec![],
        }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        let what = what.into();
        if !cond {
            self.ok = false;
            self.lines.push(format!("MISMATCH {what}"));
        } else {
            self.lines.push(what);
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.lines.push(what.into());
    }
}

fn expect_order(log: &mut Log, label: &str, got: &GroupId, order: u64) {
    log.check(
        got.order() == Some(order),
        format!("{label} = {got}, order {:?} (want {order})", got.order()),
    );
}

fn c1() -> Result<Log> {
    let mut log = Log::new();
    let mut wrong = 0;
    for n in 3..=8usize {
        for r in 1..=8usize {
            let want = match (n % 2 == 1, r) {
                (true, r) if r < n => GroupId::free_abelian(1),
                (true, _) => GroupId::cyclic(2),
                (false, r) if 2 * r < n => GroupId::free_abelian(1),
                (false, _) => GroupId::cyclic(1),
            };
            let got = identify(
                &cw_presentation(&based(fam("cycle", &[n as i64]), "0"), r)?.presentation,
                100_000,
            );
            if got != want {
                wrong += 1;
                log.check(false, format!("C{n} r={r}: {got} (want {want})"));
            }
        }
    }
    log.note(format!("48 cells, {wrong} wrong"));
    Ok(log)
}

fn c2() -> Result<Log> {
    let mut log = Log::new();
    for n in [4i64, 5] {
        for r in [2, 3] {
            let got = identify(
                &cw_presentation(&based(fam("complete", &[n]), "1"), r)?.presentation,
                100_000,
            );
            expect_order(&mut log, &format!("K{n} r={r}"), &got, 2);
        }
    }
    Ok(log)
}

fn c3() -> Result<Log> {
    let mut log = Log::new();
    let pet = fam("petersen", &[]);
    let base = pet.ids()[0].clone();
    let got = identify(
        &cw_presentation(&based(pet, &base), 3)?.presentation,
        1_000_000,
    );
    expect_order(&mut log, "petersen r=3", &got, 2);
    Ok(log)
}

fn c4() -> Result<Log> {
    let mut log = Log::new();
    let pet = fam("petersen", &[]);
    let to_c5 = find_hom(&pet, &fam("cycle", &[5]), 50_000_000);
    log.check(
        to_c5.exists() == Some(false),
        format!("petersen -> C5 exists: {:?}", to_c5.exists()),
    );
    let to_k3 = find_hom(&pet, &fam("complete", &[3]), 50_000_000);
    log.check(
        to_k3.exists() == Some(true),
        format!("petersen -> K3 exists: {:?}", to_k3.exists()),
    );
    let base = pet.ids()[0].clone();
    let rep = cycle_obstruction_report(&based(pet, &base), 5, 3, 4, 24, 1_000_000, 50_000_000)?;
    log.check(
        rep.verdict == Verdict::Obstructed && rep.consistent,
        format!("cycle report r=3: {:?}, group {}", rep.verdict, rep.group),
    );
    Ok(log)
}

fn c5() -> Result<Log> {
    let mut log = Log::new();
    let x5 = fam("x", &[5]);
    let ab =
        abelianize(&cw_presentation(&based(x5.clone(), &x5.ids()[0].clone()), 2)?.presentation);
    log.check(
        ab.rank == 0 && ab.torsion == [4],
        format!("H1 of pi1^2(X5) = {ab}"),
    );
    let pet = fam("petersen", &[]);
    let rep = torsion_obstruction_report(&pet, &x5, 2, 1_000_000, 50_000_000)?;
    let groups = |v: &[crate::obstruct::ComponentGroup]| {
        v.iter()
            .map(|c| c.group.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    log.check(
        rep.verdict == Verdict::Obstructed,
        format!(
            "torsion report petersen -> X5 at r=2: {:?} (pi1^2 source {}, target {}; exhaustive search finds a map: {:?})",
            rep.verdict,
            groups(&rep.source),
            groups(&rep.target),
            rep.map_exists
        ),
    );
    let rep3 = torsion_obstruction_report(&pet, &x5, 3, 1_000_000, 50_000_000)?;
    log.note(format!(
        "at r=3: {:?} (source {}, target {})",
        rep3.verdict,
        groups(&rep3.source),
        groups(&rep3.target)
    ));
    let k4 = torsion_obstruction_report(&fam("complete", &[4]), &x5, 2, 1_000_000, 50_000_000)?;
    log.note(format!(
        "K4 -> X5 at r=2: {:?}, map exists {:?}",
        k4.verdict, k4.map_exists
    ));
    let chi = chromatic_number(&x5, 5, 50_000_000);
    log.check(chi == Chromatic::Exact(4), format!("chi(X5) = {chi:?}"));
    Ok(log)
}

fn c6() -> Result<Log> {
    let mut log = Log::new();
    let w = winding(15, 5);
    log.check(verify_r_covering(&w, 4).pass, "C15 -> C5 is a 4-covering");
    let c = verify_r_covering(&w, 5);
    let replay = match &c.witness {
        Some(wit) => replay_witness(&w, wit)?,
        None => false,
    };
    log.check(
        !c.pass && replay,
        format!(
            "C15 -> C5 at r=5 fails, witness {:?} replays: {replay}",
            c.witness.map(|x| (x.vertex, x.radius))
        ),
    );
    let w10 = winding(10, 5);
    let all = (1..=8).all(|r| verify_r_covering(&w10, r).pass);
    log.check(all, format!("C10 -> C5 passes for r = 1..8: {all}"));
    Ok(log)
}

fn c7() -> Result<Log> {
    let mut log = Log::new();
    let cov = Covering::certify(winding(15, 5), 4)?;
    let rep = fiber_coset_check(&cov, 0, 100_000)?;
    log.check(
        rep.fiber == 3 && rep.index == Some(3),
        format!("C15 -> C5 r=4: fiber {} index {:?}", rep.fiber, rep.index),
    );
    let (_, q) = fam("complete", &[2]).product_projections(&fam("complete", &[4]))?;
    let cov = Covering::certify(q, 2)?;
    let rep = fiber_coset_check(&cov, 0, 100_000)?;
    log.check(
        rep.fiber == 2 && rep.index == Some(2),
        format!("K2xK4 -> K4 r=2: fiber {} index {:?}", rep.fiber, rep.index),
    );
    Ok(log)
}

fn c8() -> Result<Log> {
    let mut log = Log::new();
    let pet = fam("petersen", &[]);
    let pb = pet.ids()[0].clone();
    for (g, b) in [
        (fam("cycle", &[5]), "0".to_string()),
        (fam("cycle", &[6]), "0".into()),
        (fam("complete", &[4]), "1".into()),
        (pet, pb),
    ] {
        let name = g.name().to_string();
        let rep = neighborhood_group_check(&based(g, &b), 1, 1_000_000)?;
        log.check(
            rep.pass,
            format!(
                "{name}: complex {} / even part {}",
                rep.complex_group, rep.even_group
            ),
        );
    }
    Ok(log)
}

fn c9() -> Result<Log> {
    let mut log = Log::new();
    let (_, q) = fam("complete", &[2]).product_projections(&fam("petersen", &[]))?;
    let rep = complex_covering_check(&q, 1)?;
    log.check(
        rep.pass,
        format!("K2 x petersen -> petersen: {} failures", rep.failures.len()),
    );
    let rep = complex_covering_check(&winding(10, 5), 1)?;
    log.check(
        rep.pass,
        format!("C10 -> C5: {} failures", rep.failures.len()),
    );
    Ok(log)
}

fn c10() -> Result<Log> {
    let mut log = Log::new();
    let h = homology(&neighborhood_complex(&fam("cycle", &[5]), 1)?);
    log.check(h.h1.to_string() == "Z", format!("H1(N1(C5)) = {}", h.h1));
    let h = homology(&neighborhood_complex(&fam("complete", &[4]), 1)?);
    log.check(
        h.h1.is_trivial() && h.h2_truncated.to_string() == "Z",
        format!("H1(N1(K4)) = {}, H2 = {}", h.h1, h.h2_truncated),
    );
    let pet = fam("petersen", &[]);
    let rep = h1_obstruction_report(&pet, 5, 1, 50_000_000)?;
    log.check(
        rep.verdict == Verdict::Obstructed && rep.consistent,
        format!(
            "h1 report petersen n=5 r=1: H1(N1) = {}, {:?}",
            rep.h1, rep.verdict
        ),
    );
    let rep2 = h1_obstruction_report(&pet, 5, 2, 50_000_000)?;
    log.note(format!(
        "at r=2: H1(N2) = {}, {:?}, map exists {:?}",
        rep2.h1, rep2.verdict, rep2.map_exists
    ));
    Ok(log)
}

/// Sum over groups of C(size, 2).
fn pairs<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> u64 {
    let mut m: HashMap<K, u64> = HashMap::new();
    for k in keys {
        *m.entry(k).or_default() += 1;
    }
    m.values().map(|&c| c * c.saturating_sub(1) / 2).sum()
}

fn c11() -> Result<Log> {
    let mut log = Log::new();
    const MAX_LEN: usize = 8;
    const ENUM_CAP: usize = 10;
    let mut total_disagree = 0u64;
    for (g, b) in [(fam("cycle", &[5]), "0"), (fam("complete", &[4]), "1")] {
        let v = g.vertex(b)?;
        for r in [1usize, 2] {
            let table = enumerate_classes(&g, v, v, r, ENUM_CAP)?;
            let oracle = HomotopyOracle::new(&g, v, r, 100_000)?;
            let mut rows = Vec::new();
            for (blk, walks) in table.blocks().into_iter().enumerate() {
                for w in walks.into_iter().filter(|w| w.len() <= MAX_LEN) {
                    let e = oracle.element(&w)?;
                    rows.push((blk, e, w));
                }
            }
            let same_block = pairs(rows.iter().map(|x| x.0));
            let same_elem = pairs(rows.iter().map(|x| &x.1));
            let same_both = pairs(rows.iter().map(|x| (x.0, &x.1)));
            let disagree = same_block + same_elem - 2 * same_both;
            total_disagree += disagree;
            // Spot-check the public entry point on a stride of pairs.
            let mut spot = 0;
            let mut spot_bad = 0;
            for i in (0..rows.len()).step_by(97) {
                for j in (i..rows.len()).step_by(89) {
                    let d = are_r_homotopic(&g, &rows[i].2, &rows[j].2, r, ENUM_CAP)?;
                    spot += 1;
                    if (d == Decision::Yes) != (rows[i].0 == rows[j].0) {
                        spot_bad += 1;
                    }
                }
            }
            total_disagree += spot_bad;
            log.note(format!(
                "{} r={r}: {} loops, {} classes in table, {disagree} disagreeing pairs, {spot} direct calls with {spot_bad} mismatches",
                g.name(),
                rows.len(),
                table.block_count()
            ));
        }
    }
    log.check(
        total_disagree == 0,
        format!("{total_disagree} disagreements"),
    );
    Ok(log)
}

fn random_loop(g: &Graph, base: Vertex, rng: &mut ChaCha8Rng) -> Walk {
    let steps = rng.gen_range(1..=5);
    let mut v = vec![base];
    for _ in 0..steps {
        let n = g.neighbors(*v.last().unwrap());
        v.push(n[rng.gen_range(0..n.len())]);
    }
    let (parent, _) = g.bfs_tree(base);
    let mut x = *v.last().unwrap();
    while x != base {
        x = parent[x];
        v.push(x);
    }
    Walk { vertices: v }
}

fn random_moves(g: &Graph, w: &Walk, r: usize, rng: &mut ChaCha8Rng) -> Walk {
    let mut cur = w.clone();
    for _ in 0..rng.gen_range(1..=6) {
        let nb: Vec<Walk> = move_neighbors(g, &cur, r)
            .into_iter()
            .filter(|x| x.len() <= 12)
            .collect();
        if nb.is_empty() {
            break;
        }
        cur = nb[rng.gen_range(0..nb.len())].clone();
    }
    cur
}

fn c12() -> Result<Log> {
    let mut log = Log::new();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (_, q) = fam("complete", &[2]).product_projections(&fam("complete", &[4]))?;
    let mut violations = 0;
    for (map, r) in [(winding(10, 5), 2usize), (q, 2)] {
        let cov = Covering::certify(map, r)?;
        let (cover, base_graph) = (cov.map().domain().clone(), cov.map().codomain().clone());
        let x = 0;
        let v = cov.map().apply(x);
        let down = HomotopyOracle::new(&base_graph, v, r, 100_000)?;
        let up = HomotopyOracle::new(&cover, x, r, 100_000)?;
        for _ in 0..100 {
            let a = random_loop(&base_graph, v, &mut rng);
            let b = random_moves(&base_graph, &a, r, &mut rng);
            let (la, lb) = (cov.lift_path(&a, x)?, cov.lift_path(&b, x)?);
            if la.terminal() != lb.terminal() {
                violations += 1;
            }
            if up.geodesic(&la)? != down.geodesic(&a)? {
                violations += 1;
            }
        }
        log.note(format!(
            "{} over {}: 100 pairs",
            cover.name(),
            base_graph.name()
        ));
    }
    log.check(violations == 0, format!("{violations} violations"));
    Ok(log)
}

fn c13() -> Result<Log> {
    let mut log = Log::new();
    let g = fam("torus67", &[3, 5, 4]);
    log.note(format!("{} vertices, {} edges", g.n(), g.edge_count()));
    let og = odd_girth(&g);
    log.check(og == Some(5), format!("odd girth {og:?}"));
    let to3 = find_hom(&g, &fam("cycle", &[3]), 200_000_000);
    log.check(
        to3.exists() == Some(true),
        format!("map to C3: {:?}", to3.exists()),
    );
    let to5 = find_hom(&g, &fam("cycle", &[5]), 200_000_000);
    log.check(
        to5.exists() == Some(false),
        format!("map to C5: {:?}", to5.exists()),
    );
    let base = g.ids()[0].clone();
    let got = identify(
        &cw_presentation(&based(g, &base), 3)?.presentation,
        1_000_000,
    );
    expect_order(&mut log, "pi1^3", &got, 2);
    Ok(log)
}

fn c14() -> Result<Log> {
    let mut log = Log::new();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let c6 = fam("cycle", &[6]);
    let k3 = fam("complete", &[3]);
    let c5 = fam("cycle", &[5]);
    let k4 = fam("complete", &[4]);
    let sources = [
        enumerate_maps(&c6, &k3, &[], 1_000_000)?,
        enumerate_maps(&c5, &k4, &[], 1_000_000)?,
    ];
    let mut bad = 0;
    let mut positive = 0;
    for i in 0..100 {
        let maps = &sources[i % 2];
        let f = &maps[rng.gen_range(0..maps.len())];
        let g = if i % 4 < 2 {
            maps[rng.gen_range(0..maps.len())].clone()
        } else {
            let nb = one_step_neighbors(f, None, 1_000_000)?;
            nb[rng.gen_range(0..nb.len())].clone()
        };
        let t = three_way(f, &g)?;
        positive += t.one_step as usize;
        bad += !t.agree() as usize;
    }
    log.check(
        bad == 0,
        format!("three-way: 100 pairs, {positive} one-step, {bad} disagreements"),
    );

    let mut bad = 0;
    let mut nontrivial = 0;
    for i in 0..20 {
        let maps = &sources[i % 2];
        let f = maps[rng.gen_range(0..maps.len())].clone();
        let mut g = f.clone();
        for _ in 0..rng.gen_range(1..=4) {
            let nb = one_step_neighbors(&g, Some(0), 1_000_000)?;
            g = nb[rng.gen_range(0..nb.len())].clone();
        }
        nontrivial += (g != f) as usize;
        if induced_images_agree(&f, &g, 0, 2, 100_000)? != Decision::Yes {
            bad += 1;
        }
    }
    log.check(
        bad == 0,
        format!(
            "based homotopic pairs: 20 ({nontrivial} distinct), {bad} with different induced maps"
        ),
    );

    let mut ok = 0;
    let e = Covering::certify(winding(10, 5), 2)?;
    let (pb, _) = pullback_cover(&GraphMap::identity(&c5), &e)?;
    ok += crate::graph::are_isomorphic(&pb, &fam("cycle", &[10])) as usize;
    let (pb, _) = pullback_cover(&winding(9, 3), &Covering::certify(winding(6, 3), 1)?)?;
    ok += crate::graph::are_isomorphic(&pb, &fam("cycle", &[18])) as usize;
    let k2 = fam("complete", &[2]);
    let (_, q) = k2.product_projections(&c6)?;
    let f = GraphMap::new(k2.clone(), c6.clone(), vec![0, 1])?;
    let (pb, _) = pullback_cover(&f, &Covering::certify(q, 3)?)?;
    ok += (pb.n() == 4 && pb.edge_count() == 2 && pb.components().len() == 2) as usize;
    log.check(
        ok == 3,
        format!("pullbacks re-verified and identified: {ok}/3"),
    );

    let base = c5.product(&fam("interval", &[1]));
    let (_, q) = k2.product_projections(&base)?;
    let iso = endpoint_pullback_iso(&Covering::certify(q, 2)?, &c5, 1);
    log.check(
        iso.is_ok(),
        format!("endpoint isomorphism over C5 x I1: {}", iso.is_ok()),
    );
    let f = GraphMap::new(c6.clone(), c6.clone(), vec![0, 1, 0, 1, 0, 1])?;
    let g = GraphMap::new(c6.clone(), c6.clone(), vec![2, 1, 2, 1, 2, 1])?;
    let chain = times_homotopic(&f, &g, None, 100_000)?.chain;
    let (_, proj) = pullback_cover(
        &homotopy_map(&chain)?,
        &Covering::certify(winding(12, 6), 2)?,
    )?;
    let iso = endpoint_pullback_iso(&Covering::certify(proj, 2)?, &c6, chain.len() - 1);
    log.check(
        iso.is_ok(),
        format!(
            "endpoint isomorphism along a homotopy of C6 folds: {}",
            iso.is_ok()
        ),
    );
    Ok(log)
}

fn c15() -> Result<Log> {
    let mut log = Log::new();
    for (g, b, len) in [
        (fam("triangle-pendant", &[]), "v", 5usize),
        (fam("complete", &[3]), "1", 3),
    ] {
        let name = g.name().to_string();
        let bg = based(g.clone(), b);
        let pp = cw_presentation(&bg, 2)?;
        let id = identify(&pp.presentation, 100_000);
        let oracle = HomotopyOracle::new(&g, bg.base, 2, 100_000)?;
        let geo = oracle.geodesic(&Walk::new(&g, pp.generator_loop(1))?)?;
        log.check(
            id == GroupId::free_abelian(1) && pp.ngens() == 1 && geo == len,
            format!("{name}: {id}, generator length {geo}"),
        );
    }
    Ok(log)
}

type Check = fn() -> Result<Log>;

const TABLE: [(&str, f64, Check); CRITERIA] = [
    ("cycle groups for n <= 8, r <= 8", 60.0, c1),
    ("complete graphs K4, K5 at r = 2, 3", 30.0, c2),
    ("petersen graph at r = 3", 300.0, c3),
    ("petersen graph maps to K3, not C5", 10.0, c4),
    (
        "X5 abelianization, torsion argument, chromatic number",
        120.0,
        c5,
    ),
    ("windings as coverings", 1.0, c6),
    ("fibers against subgroup indices", 30.0, c7),
    ("neighborhood complex groups against even parts", 120.0, c8),
    ("neighborhood complexes of coverings", 30.0, c9),
    ("homology and the H1 argument", 30.0, c10),
    ("word problem against move enumeration", 120.0, c11),
    ("lifting of homotopic loops", 120.0, c12),
    ("the odd-girth torus instance", 600.0, c13),
    ("homotopies of maps and pullback covers", 180.0, c14),
    (
        "lengths are not preserved by homotopy equivalence",
        5.0,
        c15,
    ),
];

pub fn run(id: usize) -> CriterionResult {
    let (title, limit, f) = TABLE[id - 1];
    let t0 = Instant::now();
    let outcome = f();
    let seconds = t0.elapsed().as_secs_f64();
    let (mut pass, mut detail) = match outcome {
        Ok(log) => (log.ok, log.lines.join("; ")),
        Err(e) => (false, format!("error: {e}")),
    };
    if seconds > limit {
        pass = false;
        let _ = write!(detail, "; over the time limit");
    }
    CriterionResult {
        id,
        title: title.to_string(),
        pass,
        seconds,
        limit_seconds: limit,
        detail,
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=CRITERIA).map(run).collect()
}
