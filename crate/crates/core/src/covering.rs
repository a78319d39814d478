//! r-coverings: verification, lifting, covering actions, fibers against
//! cosets, truncated universal covers and covers attached to subgroups.

use crate::error::{Error, Result};
use crate::fpgroup::{coset_enumerate, CosetTable, Word};
use crate::fundamental::DEFAULT_MAX_COSETS;
use crate::fundamental::{cw_presentation, induced_hom, Pi1Presentation};
use crate::graph::{BasedGraph, Graph, GraphMap, Vertex, VertexAction};
use crate::homotopy::{enumerate_classes, HomotopyOracle, Walk};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverViolation {
    /// Some neighbor of p(v) has no preimage among the neighbors of v.
    NotSurjective { missing: String },
    /// Two vertices of N_i(v) share an image.
    Collision { a: String, b: String, image: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverWitness {
    pub vertex: String,
    pub radius: usize,
    pub violation: CoverViolation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverCertificate {
    pub r: usize,
    pub pass: bool,
    pub witness: Option<CoverWitness>,
}

/// First collision in N_i(v) under p, as (a, b) with a < b.
fn collision(p: &GraphMap, v: Vertex, i: usize) -> Option<(Vertex, Vertex)> {
    let mut seen: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut best: Option<(Vertex, Vertex)> = None;
    for x in p.domain().neighborhood(v, i) {
        if let Some(&a) = seen.get(&p.apply(x)) {
            if best.map_or(true, |b| (a, x) < b) {
                best = Some((a, x));
            }
        } else {
            seen.insert(p.apply(x), x);
        }
    }
    best
}

fn missing_neighbor(p: &GraphMap, v: Vertex) -> Option<Vertex> {
    let (g, h) = (p.domain(), p.codomain());
    let hit: Vec<Vertex> = g.neighbors(v).iter().map(|&x| p.apply(x)).collect();
    h.neighbors(p.apply(v))
        .iter()
        .copied()
        .find(|y| !hit.contains(y))
}

/// Checks that N(v) → N(p(v)) is onto and N_r(v) → N_r(p(v)) is
/// one-to-one for every v. The witness is the least failing vertex with
/// the least failing radius.
pub fn verify_r_covering(p: &GraphMap, r: usize) -> CoverCertificate {
    let (g, h) = (p.domain(), p.codomain());
    for v in 0..g.n() {
        if let Some(y) = missing_neighbor(p, v) {
            let violation = CoverViolation::NotSurjective {
                missing: h.id(y).into(),
            };
            return CoverCertificate {
                r,
                pass: false,
                witness: Some(CoverWitness {
                    vertex: g.id(v).into(),
                    radius: 1,
                    violation,
                }),
            };
        }
        if collision(p, v, r).is_some() {
            let i = (1..=r).find(|&i| collision(p, v, i).is_some()).unwrap();
            let (a, b) = collision(p, v, i).unwrap();
            let violation = CoverViolation::Collision {
                a: g.id(a).into(),
                b: g.id(b).into(),
                image: h.id(p.apply(a)).into(),
            };
            return CoverCertificate {
                r,
                pass: false,
                witness: Some(CoverWitness {
                    vertex: g.id(v).into(),
                    radius: i,
                    violation,
                }),
            };
        }
    }
    CoverCertificate {
        r,
        pass: true,
        witness: None,
    }
}

/// Re-checks a witness against the map.
pub fn replay_witness(p: &GraphMap, w: &CoverWitness) -> Result<bool> {
    let (g, h) = (p.domain(), p.codomain());
    let v = g.vertex(&w.vertex)?;
    Ok(match &w.violation {
        CoverViolation::NotSurjective { missing } => {
            let y = h.vertex(missing)?;
            h.has_edge(p.apply(v), y) && g.neighbors(v).iter().all(|&x| p.apply(x) != y)
        }
        CoverViolation::Collision { a, b, image } => {
            let (a, b, im) = (g.vertex(a)?, g.vertex(b)?, h.vertex(image)?);
            let n = g.neighborhood(v, w.radius);
            a != b && n.contains(&a) && n.contains(&b) && p.apply(a) == im && p.apply(b) == im
        }
    })
}

/// A graph map certified to be an r-covering.
#[derive(Clone, Debug)]
pub struct Covering {
    map: GraphMap,
    r: usize,
}

impl Covering {
    pub fn certify(map: GraphMap, r: usize) -> Result<Covering> {
        let c = verify_r_covering(&map, r);
        if !c.pass {
            let w = c.witness.unwrap();
            return Err(Error::Precondition(format!(
                "not a {r}-covering: vertex {} at radius {}",
                w.vertex, w.radius
            )));
        }
        Ok(Covering { map, r })
    }

    pub fn map(&self) -> &GraphMap {
        &self.map
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// The unique neighbor of x lying over y.
    pub fn lift_step(&self, x: Vertex, y: Vertex) -> Option<Vertex> {
        self.map
            .domain()
            .neighbors(x)
            .iter()
            .copied()
            .find(|&z| self.map.apply(z) == y)
    }

    /// The unique lift of `walk` starting at `start`.
    pub fn lift_path(&self, walk: &Walk, start: Vertex) -> Result<Walk> {
        if self.map.apply(start) != walk.initial() {
            return Err(Error::Precondition(
                "start is not over the initial vertex".into(),
            ));
        }
        let mut out = vec![start];
        for &y in &walk.vertices[1..] {
            let x = *out.last().unwrap();
            let z = self
                .lift_step(x, y)
                .ok_or_else(|| Error::Validation("walk is not in the base graph".into()))?;
            out.push(z);
        }
        Ok(Walk { vertices: out })
    }

    /// Whether the lift of the loop from `start` closes up.
    pub fn loop_in_image(&self, lp: &Walk, start: Vertex) -> Result<bool> {
        if !lp.is_loop() {
            return Err(Error::Validation("not a loop".into()));
        }
        Ok(self.lift_path(lp, start)?.terminal() == start)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionWitness {
    pub vertex: String,
    /// Image of `vertex` under the offending group element.
    pub translate: String,
    pub common: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionCertificate {
    pub r: usize,
    pub pass: bool,
    pub witness: Option<ActionWitness>,
}

/// Checks N_r(v) ∩ N_r(vγ) = ∅ for every v and every non-identity γ.
pub fn verify_covering_action(a: &VertexAction, r: usize) -> ActionCertificate {
    let g = a.graph();
    let elements = a.elements();
    let balls: Vec<Vec<Vertex>> = (0..g.n()).map(|v| g.neighborhood(v, r)).collect();
    for v in 0..g.n() {
        for gamma in elements.iter().skip(1) {
            let u = gamma[v];
            if let Some(&c) = balls[v].iter().find(|x| balls[u].binary_search(x).is_ok()) {
                return ActionCertificate {
                    r,
                    pass: false,
                    witness: Some(ActionWitness {
                        vertex: g.id(v).into(),
                        translate: g.id(u).into(),
                        common: g.id(c).into(),
                    }),
                };
            }
        }
    }
    ActionCertificate {
        r,
        pass: true,
        witness: None,
    }
}

/// Ball of the universal r-covering around the base.
#[derive(Clone, Debug)]
pub struct TruncatedCover {
    pub graph: Graph,
    pub projection: GraphMap,
    pub base: Vertex,
    pub r: usize,
    pub cap: usize,
    /// Depth of each cover vertex (class length).
    pub depth: Vec<usize>,
    /// Radius of the ball on which the projection is a certified covering.
    pub certified_radius: usize,
}

/// Vertices are r-homotopy classes of walks from the base of length at
/// most `cap`, named by a shortest representative.
pub fn universal_cover(g: &BasedGraph, r: usize, cap: usize) -> Result<TruncatedCover> {
    match HomotopyOracle::new(&g.graph, g.base, r, DEFAULT_MAX_COSETS) {
        Ok(o) => universal_cover_exact(&o, cap),
        Err(Error::Budget(_)) => universal_cover_enumerated(g, r, cap),
        Err(e) => Err(e),
    }
}

fn walk_name(g: &Graph, w: &[Vertex]) -> String {
    w.iter().map(|&v| g.id(v)).collect::<Vec<_>>().join(".")
}

fn universal_cover_exact(o: &HomotopyOracle, cap: usize) -> Result<TruncatedCover> {
    let g = o.graph();
    let states = o.ball(cap, 2_000_000)?;
    let index: HashMap<(Vertex, &crate::fpgroup::Element), usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| ((s.vertex, &s.element), i))
        .collect();
    let rep = |mut i: usize| -> Vec<Vertex> {
        let mut w = vec![states[i].vertex];
        while let Some(p) = states[i].parent {
            w.push(states[p].vertex);
            i = p;
        }
        w.reverse();
        w
    };
    let names: Vec<String> = (0..states.len()).map(|i| walk_name(g, &rep(i))).collect();
    let mut edges = Vec::new();
    for (i, s) in states.iter().enumerate() {
        for &x in g.neighbors(s.vertex) {
            let e = o.step(&s.element, s.vertex, x);
            if let Some(&j) = index.get(&(x, &e)) {
                if i <= j {
                    edges.push((i, j));
                }
            }
        }
    }
    finish_cover(
        g,
        names,
        &edges,
        states.iter().map(|s| (s.vertex, s.depth)).collect(),
        o.pi1.r,
        cap,
    )
}

fn finish_cover(
    g: &Graph,
    names: Vec<String>,
    edges: &[(usize, usize)],
    info: Vec<(Vertex, usize)>,
    r: usize,
    cap: usize,
) -> Result<TruncatedCover> {
    let cover = Graph::from_edges(&format!("{}~", g.name()), names.clone(), edges);
    // from_edges sorts ids; carry vertex data across by name.
    let mut proj = vec![0; cover.n()];
    let mut depth = vec![0; cover.n()];
    for (i, name) in names.iter().enumerate() {
        let k = cover.vertex(name)?;
        proj[k] = info[i].0;
        depth[k] = info[i].1;
    }
    let base = cover.vertex(&names[0])?;
    let projection = GraphMap::new(cover.clone(), g.clone(), proj)?;
    Ok(TruncatedCover {
        graph: cover,
        projection,
        base,
        r,
        cap,
        depth,
        certified_radius: cap.saturating_sub(r),
    })
}

/// Fallback without a word-problem solution: classes come from
/// union-find enumeration at cap + 2r.
fn universal_cover_enumerated(g: &BasedGraph, r: usize, cap: usize) -> Result<TruncatedCover> {
    let graph = &g.graph;
    let mut names = Vec::new();
    let mut info = Vec::new();
    let mut class_id: HashMap<(Vertex, usize), usize> = HashMap::new();
    let mut tables = Vec::new();
    for w in graph.component(g.base) {
        let t = enumerate_classes(graph, g.base, w, r, cap + 2 * r)?;
        for (b, block) in t.blocks().into_iter().enumerate() {
            let shortest = &block[0];
            if shortest.len() <= cap {
                class_id.insert((w, b), names.len());
                names.push(walk_name(graph, &shortest.vertices));
                info.push((w, shortest.len()));
            }
        }
        tables.push((w, t));
    }
    let table_of: HashMap<Vertex, &crate::homotopy::ClassTable> =
        tables.iter().map(|(w, t)| (*w, t)).collect();
    let mut edges = Vec::new();
    for (&(w, b), &i) in &class_id {
        let t = table_of[&w];
        for walk in t.blocks()[b]
            .iter()
            .filter(|x| x.len() >= 1 && x.len() <= cap)
        {
            let prefix = Walk {
                vertices: walk.vertices[..walk.vertices.len() - 1].to_vec(),
            };
            let u = prefix.terminal();
            if let Some(pb) = table_of[&u].class_of(&prefix) {
                if let Some(&j) = class_id.get(&(u, pb)) {
                    edges.push((i.min(j), i.max(j)));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by_key(|&i| (info[i].1, names[i].clone()));
    let pos: Vec<usize> = {
        let mut p = vec![0; order.len()];
        for (k, &i) in order.iter().enumerate() {
            p[i] = k;
        }
        p
    };
    let names2 = order.iter().map(|&i| names[i].clone()).collect();
    let info2 = order.iter().map(|&i| info[i]).collect();
    let edges2: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (pos[a], pos[b])).collect();
    let mut tc = finish_cover(graph, names2, &edges2, info2, r, cap)?;
    tc.certified_radius = cap.saturating_sub(2 * r);
    Ok(tc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub fiber: usize,
    /// Index of the image subgroup, when coset enumeration completes.
    pub index: Option<usize>,
    pub consistent: Option<bool>,
}

/// Compares |p⁻¹(p(v))| with the index of p_*(π₁^r(cover, v)) in
/// π₁^r(base, p(v)).
pub fn fiber_coset_check(cov: &Covering, v: Vertex, max_cosets: usize) -> Result<FiberReport> {
    let p = cov.map();
    if !p.domain().is_connected() {
        return Err(Error::Precondition("cover is not connected".into()));
    }
    let w = p.apply(v);
    let dom = cw_presentation(
        &BasedGraph {
            graph: p.domain().clone(),
            base: v,
        },
        cov.r(),
    )?;
    let cod = cw_presentation(
        &BasedGraph {
            graph: p.codomain().clone(),
            base: w,
        },
        cov.r(),
    )?;
    let images = induced_hom(p, &dom, &cod)?;
    let fiber = p.fiber(w).len();
    let index = coset_enumerate(&cod.presentation, &images, max_cosets).map(|t| t.index());
    Ok(FiberReport {
        fiber,
        index,
        consistent: index.map(|i| i == fiber),
    })
}

/// Schreier generators of the kernel of the parity map, as words.
pub fn parity_kernel_words(pp: &Pi1Presentation) -> Vec<Word> {
    let n = pp.ngens() as i32;
    let Some(o) = (1..=n).find(|&i| pp.parity[i as usize - 1] == 1) else {
        return (1..=n).map(|i| vec![i]).collect();
    };
    let mut out = Vec::new();
    for x in 1..=n {
        if pp.parity[x as usize - 1] == 0 {
            out.push(vec![x]);
            out.push(vec![o, x, -o]);
        } else {
            if x != o {
                out.push(vec![x, -o]);
            }
            out.push(vec![o, x]);
        }
    }
    out
}

/// The covering G_Γ → G for the subgroup Γ generated by `words`: vertices
/// are pairs (u, Γg) of a vertex and a right coset.
pub fn subgroup_cover(
    g: &BasedGraph,
    r: usize,
    words: &[Word],
    max_cosets: usize,
) -> Result<(Graph, GraphMap)> {
    let pp = cw_presentation(g, r)?;
    let table = coset_enumerate(&pp.presentation, words, max_cosets).ok_or_else(|| {
        Error::Budget(format!(
            "subgroup index not found within {max_cosets} cosets"
        ))
    })?;
    cover_from_coset_table(&pp, &table)
}

pub fn cover_from_coset_table(pp: &Pi1Presentation, t: &CosetTable) -> Result<(Graph, GraphMap)> {
    let g = &pp.graph;
    let comp = g.component(pp.base);
    let n = t.index();
    let key = |u: Vertex, c: usize| format!("({},{})", g.id(u), c);
    let mut ids = Vec::new();
    let mut proj_of: HashMap<String, Vertex> = HashMap::new();
    for &u in &comp {
        for c in 0..n {
            ids.push(key(u, c));
            proj_of.insert(key(u, c), u);
        }
    }
    let pos: HashMap<String, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let mut edges = Vec::new();
    for &u in &comp {
        for &x in g.neighbors(u) {
            for c in 0..n {
                let d = match pp.step_letter(u, x) {
                    0 => c,
                    l => t.act(c, l),
                };
                let (a, b) = (pos[&key(u, c)], pos[&key(x, d)]);
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let cover = Graph::from_edges(&format!("{}_sub", g.name()), ids, &edges);
    let proj = (0..cover.n()).map(|i| proj_of[cover.id(i)]).collect();
    let map = GraphMap::new(cover.clone(), g.clone(), proj)?;
    // Off the base component the projection is not onto; check only when whole.
    if comp.len() == g.n() && !verify_r_covering(&map, pp.r).pass {
        return Err(Error::Internal("subgroup cover failed verification".into()));
    }
    Ok((cover, map))
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Lift(GraphMap),
    /// A loop of the domain whose image does not lift to a loop.
    NoLift {
        witness: Vec<String>,
    },
}

/// Lifts f: (T, t) → (G, p(x)) through the covering to a map sending t
/// to x, or reports a loop obstructing the lift.
pub fn lift_map(cov: &Covering, x: Vertex, f: &GraphMap, t: Vertex) -> Result<LiftOutcome> {
    let p = cov.map();
    let tg = f.domain();
    if f.codomain() != p.codomain() {
        return Err(Error::Precondition(
            "map does not land in the base graph".into(),
        ));
    }
    if f.apply(t) != p.apply(x) {
        return Err(Error::Precondition("base points do not match".into()));
    }
    if !tg.is_connected() {
        return Err(Error::Precondition("domain is not connected".into()));
    }
    let (parent, order) = tg.bfs_tree(t);
    let mut lift = vec![usize::MAX; tg.n()];
    lift[t] = x;
    for &v in order.iter().skip(1) {
        lift[v] = cov
            .lift_step(lift[parent[v]], f.apply(v))
            .ok_or_else(|| Error::Internal("covering lost surjectivity".into()))?;
    }
    let tree_path = |v: Vertex| -> Vec<Vertex> {
        let mut p = vec![v];
        let mut y = v;
        while y != t {
            y = parent[y];
            p.push(y);
        }
        p.reverse();
        p
    };
    for (a, b) in tg.edges() {
        for (u, w) in [(a, b), (b, a)] {
            if !p.domain().has_edge(lift[u], lift[w]) {
                let mut lp = tree_path(u);
                let mut back = tree_path(w);
                back.reverse();
                lp.extend(back);
                return Ok(LiftOutcome::NoLift {
                    witness: lp.iter().map(|&v| tg.id(v).to_string()).collect(),
                });
            }
        }
    }
    Ok(LiftOutcome::Lift(GraphMap::new(
        tg.clone(),
        p.domain().clone(),
        lift,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{are_isomorphic, make_family};

    fn c(n: i64) -> Graph {
        make_family("cycle", &[n]).unwrap()
    }

    fn winding(m: i64, n: i64) -> GraphMap {
        GraphMap::by_rule(c(m), c(n), |s| (s.parse::<i64>().unwrap() % n).to_string()).unwrap()
    }

    #[test]
    fn cycle_coverings() {
        for r in 1..=8 {
            assert!(verify_r_covering(&winding(10, 5), r).pass);
        }
        assert!(verify_r_covering(&winding(15, 5), 4).pass);
        let cert = verify_r_covering(&winding(15, 5), 5);
        assert!(!cert.pass);
        let w = cert.witness.unwrap();
        assert_eq!((w.vertex.as_str(), w.radius), ("0", 5));
        assert!(replay_witness(&winding(15, 5), &w).unwrap());
        assert!(verify_r_covering(&GraphMap::identity(&c(7)), 3).pass);
    }

    #[test]
    fn shift_action() {
        let g = c(15);
        let shift: Vec<Vertex> = (0..15)
            .map(|i| {
                g.vertex(&((g.id(i).parse::<usize>().unwrap() + 5) % 15).to_string())
                    .unwrap()
            })
            .collect();
        let a = VertexAction::new(g.clone(), vec![shift]).unwrap();
        assert!(verify_covering_action(&a, 4).pass);
        let cert = verify_covering_action(&a, 5);
        let w = cert.witness.unwrap();
        assert_eq!(
            (w.vertex.as_str(), w.translate.as_str(), w.common.as_str()),
            ("0", "5", "10")
        );
        assert!(verify_covering_action(&VertexAction::trivial(g), 9).pass);
    }

    #[test]
    fn lifting() {
        let cov = Covering::certify(winding(10, 5), 2).unwrap();
        let c5 = c(5);
        let wind = Walk::from_ids(&c5, &["0", "1", "2", "3", "4", "0"]).unwrap();
        let l = cov.lift_path(&wind, 0).unwrap();
        assert_eq!(l.ids(cov.map().domain()), ["0", "1", "2", "3", "4", "5"]);
        assert!(!cov.loop_in_image(&wind, 0).unwrap());
        assert!(cov.loop_in_image(&wind.power(2).unwrap(), 0).unwrap());
        match lift_map(&cov, 0, &winding(10, 5), 0).unwrap() {
            LiftOutcome::Lift(f) => assert!(f.is_surjective()),
            LiftOutcome::NoLift { .. } => panic!("lift expected"),
        }
        match lift_map(&cov, 0, &GraphMap::identity(&c5), 0).unwrap() {
            LiftOutcome::NoLift { witness } => assert_eq!(witness.len(), 6),
            LiftOutcome::Lift(_) => panic!("no lift expected"),
        }
    }

    #[test]
    fn universal_covers() {
        let one = BasedGraph::new(make_family("one", &[]).unwrap(), "*").unwrap();
        let u = universal_cover(&one, 1, 4).unwrap();
        assert!(are_isomorphic(
            &u.graph,
            &make_family("complete", &[2]).unwrap()
        ));
        let c5 = BasedGraph::new(c(5), "0").unwrap();
        let u = universal_cover(&c5, 2, 12).unwrap();
        assert_eq!(u.graph.n(), 25);
        assert!(are_isomorphic(
            &u.graph,
            &make_family("path", &[24]).unwrap()
        ));
        let k2 = BasedGraph::new(make_family("complete", &[2]).unwrap(), "1").unwrap();
        assert!(are_isomorphic(
            &universal_cover(&k2, 1, 3).unwrap().graph,
            &k2.graph
        ));
    }

    #[test]
    fn enumerated_universal_cover_matches() {
        let c5 = BasedGraph::new(c(5), "0").unwrap();
        let u = universal_cover_enumerated(&c5, 2, 8).unwrap();
        assert!(are_isomorphic(
            &u.graph,
            &make_family("path", &[16]).unwrap()
        ));
    }

    #[test]
    fn fibers_and_subgroups() {
        let rep =
            fiber_coset_check(&Covering::certify(winding(15, 5), 4).unwrap(), 0, 1000).unwrap();
        assert_eq!((rep.fiber, rep.index), (3, Some(3)));
        let c5 = BasedGraph::new(c(5), "0").unwrap();
        let (g, p) = subgroup_cover(&c5, 2, &[vec![1, 1]], 100).unwrap();
        assert!(are_isomorphic(&g, &c(10)));
        assert!(verify_r_covering(&p, 2).pass);
        let (g, _) = subgroup_cover(&c5, 2, &[vec![1]], 100).unwrap();
        assert!(are_isomorphic(&g, &c(5)));
        let k4 = BasedGraph::new(make_family("complete", &[4]).unwrap(), "1").unwrap();
        let pp = cw_presentation(&k4, 2).unwrap();
        let (g, _) = subgroup_cover(&k4, 2, &parity_kernel_words(&pp), 100).unwrap();
        let k2 = make_family("complete", &[2]).unwrap();
        assert!(are_isomorphic(&g, &k2.product(&k4.graph)));
    }
}
