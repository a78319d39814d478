//! Homomorphism search and the obstructions to maps into odd cycles and
//! other targets coming from r-fundamental groups and neighborhood complexes.

use crate::error::{Error, Result};
use crate::fpgroup::{abelianize, coset_enumerate, identify, AbelianInvariants, GroupId, Word};
use crate::fundamental::{cw_presentation, Pi1Presentation};
use crate::graph::{make_family, BasedGraph, Graph, GraphMap, Vertex};
use crate::homotopy::{stable_length_upper, StableLength, Walk};
use crate::ncomplex::{homology, neighborhood_complex};
use serde::Serialize;
use std::collections::VecDeque;

pub const DEFAULT_SEARCH_CAP: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub enum HomSearch {
    Found(GraphMap),
    /// Exhaustive: no graph map exists.
    None,
    Inconclusive {
        nodes: u64,
    },
}

impl HomSearch {
    pub fn found(&self) -> Option<&GraphMap> {
        match self {
            HomSearch::Found(f) => Some(f),
            _ => None,
        }
    }

    /// Some(true) for a map, Some(false) for a refutation.
    pub fn exists(&self) -> Option<bool> {
        match self {
            HomSearch::Found(_) => Some(true),
            HomSearch::None => Some(false),
            HomSearch::Inconclusive { .. } => None,
        }
    }
}

type Bits = Vec<u64>;

fn bit(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn is_empty(b: &Bits) -> bool {
    b.iter().all(|&w| w == 0)
}

struct Search<'a> {
    g: &'a Graph,
    nbr: Vec<Bits>,
    words: usize,
    hn: usize,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    /// Shrinks domains until every edge constraint is arc consistent.
    fn propagate(&self, dom: &mut [Bits], start: &[Vertex]) -> bool {
        let mut queue: VecDeque<Vertex> = start.iter().copied().collect();
        let mut queued = vec![false; dom.len()];
        for &v in start {
            queued[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            queued[v] = false;
            let mut support = vec![0u64; self.words];
            for y in (0..self.hn).filter(|&y| bit(&dom[v], y)) {
                for (s, n) in support.iter_mut().zip(&self.nbr[y]) {
                    *s |= n;
                }
            }
            for &w in self.g.neighbors(v) {
                let mut changed = false;
                for (d, s) in dom[w].iter_mut().zip(&support) {
                    let nd = *d & s;
                    changed |= nd != *d;
                    *d = nd;
                }
                if changed {
                    if is_empty(&dom[w]) {
                        return false;
                    }
                    if !queued[w] {
                        queued[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        true
    }

    fn solve(&mut self, dom: Vec<Bits>, v: usize) -> Option<Option<Vec<Vertex>>> {
        if v == dom.len() {
            return Some(Some(
                dom.iter()
                    .map(|d| (0..self.hn).find(|&y| bit(d, y)).unwrap())
                    .collect(),
            ));
        }
        for y in (0..self.hn).filter(|&y| bit(&dom[v], y)) {
            self.nodes += 1;
            if self.nodes > self.cap {
                return None;
            }
            let mut d = dom.clone();
            d[v] = vec![0; self.words];
            d[v][y / 64] |= 1 << (y % 64);
            if self.propagate(&mut d, &[v]) {
                match self.solve(d, v + 1)? {
                    Some(sol) => return Some(Some(sol)),
                    None => {}
                }
            }
        }
        Some(None)
    }
}

/// Backtracking over domain vertices in order, candidates ascending, with
/// arc consistency after each choice. The first map found is the least in
/// lexicographic order of the image vector.
pub fn find_hom(g: &Graph, h: &Graph, cap: u64) -> HomSearch {
    let hn = h.n();
    let words = hn.div_ceil(64).max(1);
    let nbr: Vec<Bits> = (0..hn)
        .map(|y| {
            let mut b = vec![0u64; words];
            for &z in h.neighbors(y) {
                b[z / 64] |= 1 << (z % 64);
            }
            b
        })
        .collect();
    let mut full = vec![0u64; words];
    for y in 0..hn {
        full[y / 64] |= 1 << (y % 64);
    }
    let looped: Bits = {
        let mut b = vec![0u64; words];
        for y in (0..hn).filter(|&y| h.has_loop(y)) {
            b[y / 64] |= 1 << (y % 64);
        }
        b
    };
    let mut dom: Vec<Bits> = (0..g.n())
        .map(|v| {
            if g.has_loop(v) {
                looped.clone()
            } else {
                full.clone()
            }
        })
        .collect();
    if g.n() == 0 {
        return HomSearch::Found(GraphMap::new(g.clone(), h.clone(), vec![]).expect("empty map"));
    }
    if dom.iter().any(is_empty) {
        return HomSearch::None;
    }
    let mut s = Search {
        g,
        nbr,
        words,
        hn,
        nodes: 0,
        cap,
    };
    let all: Vec<Vertex> = (0..g.n()).collect();
    if !s.propagate(&mut dom, &all) {
        return HomSearch::None;
    }
    match s.solve(dom, 0) {
        None => HomSearch::Inconclusive { nodes: s.nodes },
        Some(None) => HomSearch::None,
        Some(Some(map)) => HomSearch::Found(
            GraphMap::new(g.clone(), h.clone(), map).expect("search returns graph maps"),
        ),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Chromatic {
    Exact(usize),
    /// No coloring with at most this many colors.
    Above(usize),
    Inconclusive(usize),
}

/// Least k ≤ max_k with a map into K_k.
pub fn chromatic_number(g: &Graph, max_k: usize, cap: u64) -> Chromatic {
    if g.n() == 0 {
        return Chromatic::Exact(0);
    }
    for k in 1..=max_k {
        let kk = make_family("complete", &[k as i64]).expect("complete graph");
        match find_hom(g, &kk, cap).exists() {
            Some(true) => return Chromatic::Exact(k),
            Some(false) => {}
            None => return Chromatic::Inconclusive(k),
        }
    }
    Chromatic::Above(max_k)
}

/// Length of the shortest odd closed walk, by search in K₂ × G.
pub fn odd_girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in 0..g.n() {
        let mut dist = vec![[usize::MAX; 2]; g.n()];
        dist[s][0] = 0;
        let mut q = VecDeque::from([(s, 0usize)]);
        while let Some((u, p)) = q.pop_front() {
            let d = dist[u][p];
            if best.is_some_and(|b| d + 1 >= b) {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w][1 - p] == usize::MAX {
                    dist[w][1 - p] = d + 1;
                    q.push_back((w, 1 - p));
                }
            }
        }
        if dist[s][1] != usize::MAX {
            best = Some(best.map_or(dist[s][1], |b| b.min(dist[s][1])));
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Obstructed,
    NotObstructed,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct OddLoopCertificate {
    pub generator: usize,
    pub walk: Vec<String>,
    pub stable: StableLength,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleReport {
    pub n: usize,
    pub r: usize,
    pub group: GroupId,
    pub chromatic: Chromatic,
    pub verdict: Verdict,
    /// An odd class of finite order in a finite group has stable length 0.
    pub finite_group: bool,
    pub certificates: Vec<OddLoopCertificate>,
    /// Exhaustive search result: Some(true) map found, Some(false) none.
    pub map_exists: Option<bool>,
    pub consistent: bool,
    pub notes: Vec<String>,
}

/// Looks for an odd class of π₁^r(G) with stable length below n, which
/// rules out maps G → C_n.
pub fn cycle_obstruction_report(
    g: &BasedGraph,
    n: usize,
    r: usize,
    max_power: usize,
    walk_cap: usize,
    max_cosets: usize,
    search_cap: u64,
) -> Result<CycleReport> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Param(
            "target cycle length must be odd and at least 3".into(),
        ));
    }
    if r == 0 || r >= n {
        return Err(Error::Param("radius must satisfy 1 <= r < n".into()));
    }
    let pp = cw_presentation(g, r)?;
    let group = identify(&pp.presentation, max_cosets);
    let chromatic = chromatic_number(&g.graph, 3, search_cap);
    let finite_group =
        group.order().is_some() && matches!(chromatic, Chromatic::Above(2) | Chromatic::Exact(3));
    let mut certificates = Vec::new();
    let mut notes = Vec::new();
    let mut obstructed = finite_group && pp.has_odd_generator();
    for i in 0..pp.ngens() {
        if pp.parity[i] == 0 {
            continue;
        }
        let lp = Walk::new(&g.graph, pp.generator_loop(i + 1))?;
        match stable_length_upper(&g.graph, &lp, r, max_power, walk_cap) {
            Ok(stable) => {
                let below = stable.numerator < n as u64 * stable.denominator;
                obstructed |= below;
                certificates.push(OddLoopCertificate {
                    generator: i + 1,
                    walk: lp.ids(&g.graph),
                    stable,
                });
                if below {
                    break;
                }
            }
            Err(Error::Budget(m)) => notes.push(format!("generator {}: {m}", i + 1)),
            Err(e) => return Err(e),
        }
    }
    let target = make_family("cycle", &[n as i64])?;
    let map_exists = find_hom(&g.graph, &target, search_cap).exists();
    let verdict = if obstructed {
        Verdict::Obstructed
    } else if certificates.is_empty() && pp.has_odd_generator() {
        Verdict::Inconclusive
    } else {
        Verdict::NotObstructed
    };
    if verdict == Verdict::NotObstructed && map_exists == Some(false) {
        notes.push(
            "no odd class is short, yet no map exists: the criterion only rules maps out".into(),
        );
    }
    let consistent = !(verdict == Verdict::Obstructed && map_exists == Some(true));
    Ok(CycleReport {
        n,
        r,
        group,
        chromatic,
        verdict,
        finite_group,
        certificates,
        map_exists,
        consistent,
        notes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct H1Report {
    pub n: usize,
    pub r: usize,
    pub h1: AbelianInvariants,
    pub verdict: Verdict,
    pub map_exists: Option<bool>,
    pub consistent: bool,
}

/// With 2r < n and χ(G) ≥ 3, a map G → C_n forces a ℤ summand in
/// H₁(N_r(G)); its absence on every non-bipartite component rules maps out.
pub fn h1_obstruction_report(g: &Graph, n: usize, r: usize, search_cap: u64) -> Result<H1Report> {
    if n < 3 || n % 2 == 0 || r == 0 || 2 * r >= n {
        return Err(Error::Param("need n odd and 1 <= r with 2r < n".into()));
    }
    match chromatic_number(g, 2, search_cap) {
        Chromatic::Above(_) => {}
        Chromatic::Exact(k) => {
            return Err(Error::Precondition(format!(
                "chromatic number is {k}, below 3"
            )))
        }
        Chromatic::Inconclusive(_) => {
            return Err(Error::Budget("chromatic number undecided".into()))
        }
    }
    let c = neighborhood_complex(g, r)?;
    let mut h1 = AbelianInvariants {
        rank: 0,
        torsion: vec![],
    };
    let mut obstructed = false;
    let mut done = vec![false; c.n()];
    for v in 0..c.n() {
        if done[v] {
            continue;
        }
        let (sub, comp) = c.component_complex(v);
        for &x in &comp {
            done[x] = true;
        }
        let ids: Vec<Vertex> = sub.ids().iter().map(|s| g.vertex(s).unwrap()).collect();
        if g.induced(&ids).is_bipartite() {
            continue;
        }
        let h = homology(&sub).h1;
        if h.rank == 0 {
            obstructed = true;
        }
        h1.rank += h.rank;
        h1.torsion.extend(h.torsion);
    }
    h1.torsion.sort_unstable();
    let map_exists = find_hom(g, &make_family("cycle", &[n as i64])?, search_cap).exists();
    let verdict = if obstructed {
        Verdict::Obstructed
    } else {
        Verdict::NotObstructed
    };
    let consistent = !(obstructed && map_exists == Some(true));
    Ok(H1Report {
        n,
        r,
        h1,
        verdict,
        map_exists,
        consistent,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentGroup {
    pub base: String,
    pub group: GroupId,
    /// Orders of odd elements, when the group is finite; empty for free groups.
    pub odd_orders: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub r: usize,
    pub source: Vec<ComponentGroup>,
    pub target: Vec<ComponentGroup>,
    pub verdict: Verdict,
    /// (source base, order m) of an odd element with no odd m-torsion to map to.
    pub witness: Option<(String, usize)>,
    pub map_exists: Option<bool>,
    pub consistent: bool,
}

/// Odd element orders of a finite π₁^r via its regular representation.
fn odd_orders(pp: &Pi1Presentation, group: &GroupId, max_cosets: usize) -> Option<Vec<usize>> {
    if !pp.has_odd_generator() {
        return Some(vec![]);
    }
    if matches!(group, GroupId::Free { .. }) {
        return Some(vec![]);
    }
    group.order()?;
    let t = coset_enumerate(&pp.presentation, &[], max_cosets)?;
    let k = pp.ngens() as i32;
    let mut word: Vec<Option<Word>> = vec![None; t.index()];
    word[0] = Some(vec![]);
    let mut q = VecDeque::from([0usize]);
    while let Some(c) = q.pop_front() {
        for x in (1..=k).flat_map(|g| [g, -g]) {
            let d = t.act(c, x);
            if word[d].is_none() {
                let mut w = word[c].clone().unwrap();
                w.push(x);
                word[d] = Some(w);
                q.push_back(d);
            }
        }
    }
    let mut orders: Vec<usize> = word
        .iter()
        .flatten()
        .filter(|w| pp.parity_of(w) == 1)
        .map(|w| {
            let (mut c, mut m) = (t.trace(0, w), 1);
            while c != 0 {
                c = t.trace(c, w);
                m += 1;
            }
            m
        })
        .collect();
    orders.sort_unstable();
    orders.dedup();
    Some(orders)
}

fn component_groups(g: &Graph, r: usize, max_cosets: usize) -> Result<Vec<ComponentGroup>> {
    let mut out = Vec::new();
    for comp in g.components() {
        let base = comp[0];
        if g.is_isolated(base) {
            continue;
        }
        let pp = cw_presentation(
            &BasedGraph {
                graph: g.clone(),
                base,
            },
            r,
        )?;
        let group = identify(&pp.presentation, max_cosets);
        let odd = odd_orders(&pp, &group, max_cosets);
        out.push(ComponentGroup {
            base: g.id(base).to_string(),
            group,
            odd_orders: odd,
        });
    }
    Ok(out)
}

/// A map sends odd classes to odd classes and cannot raise element
/// orders: an odd element of order m in π₁^r(G) needs an odd element of
/// order dividing m in π₁^r(H).
pub fn torsion_obstruction_report(
    g: &Graph,
    h: &Graph,
    r: usize,
    max_cosets: usize,
    search_cap: u64,
) -> Result<TorsionReport> {
    if r == 0 {
        return Err(Error::Param("radius must be at least 1".into()));
    }
    let source = component_groups(g, r, max_cosets)?;
    let target = component_groups(h, r, max_cosets)?;
    let mut witness = None;
    let mut undecided = false;
    'outer: for s in &source {
        let Some(orders) = &s.odd_orders else {
            continue;
        };
        for &m in orders {
            let mut blocked = true;
            for t in &target {
                match &t.odd_orders {
                    Some(o) => blocked &= !o.iter().any(|&x| m % x == 0),
                    None => {
                        blocked = false;
                        undecided = true;
                    }
                }
            }
            if blocked {
                witness = Some((s.base.clone(), m));
                break 'outer;
            }
        }
    }
    if source.iter().any(|s| s.odd_orders.is_none()) {
        undecided = true;
    }
    let verdict = match (&witness, undecided) {
        (Some(_), _) => Verdict::Obstructed,
        (None, true) => Verdict::Inconclusive,
        (None, false) => Verdict::NotObstructed,
    };
    let map_exists = find_hom(g, h, search_cap).exists();
    let consistent = !(verdict == Verdict::Obstructed && map_exists == Some(true));
    Ok(TorsionReport {
        r,
        source,
        target,
        verdict,
        witness,
        map_exists,
        consistent,
    })
}

/// Abelian invariants of π₁^r, on the component of the base.
pub fn pi1_abelianization(g: &BasedGraph, r: usize) -> Result<AbelianInvariants> {
    Ok(abelianize(&cw_presentation(g, r)?.presentation))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(name: &str, p: &[i64]) -> Graph {
        make_family(name, p).unwrap()
    }

    fn based(g: Graph) -> BasedGraph {
        let b = g.ids()[0].clone();
        BasedGraph::new(g, &b).unwrap()
    }

    #[test]
    fn homomorphism_search() {
        let pet = fam("petersen", &[]);
        assert!(matches!(
            find_hom(&pet, &fam("cycle", &[5]), 1 << 20),
            HomSearch::None
        ));
        let f = find_hom(&pet, &fam("complete", &[3]), 1 << 20);
        assert!(f.found().is_some());
        assert!(matches!(
            find_hom(&fam("cycle", &[3]), &fam("cycle", &[5]), 1 << 20),
            HomSearch::None
        ));
        let f = find_hom(&fam("cycle", &[5]), &fam("cycle", &[5]), 1 << 20);
        assert_eq!(f.found().unwrap().as_slice(), &[0, 1, 2, 3, 4]);
        let f = find_hom(&fam("cycle", &[6]), &fam("complete", &[2]), 1 << 20);
        assert_eq!(f.found().unwrap().as_slice(), &[0, 1, 0, 1, 0, 1]);
        assert!(matches!(
            find_hom(&fam("one", &[]), &fam("complete", &[3]), 100),
            HomSearch::None
        ));
        assert!(matches!(
            find_hom(&pet, &fam("cycle", &[5]), 3),
            HomSearch::Inconclusive { .. }
        ));
    }

    #[test]
    fn colorings_and_girth() {
        assert_eq!(
            chromatic_number(&fam("petersen", &[]), 5, 1 << 20),
            Chromatic::Exact(3)
        );
        assert_eq!(
            chromatic_number(&fam("complete", &[4]), 5, 1 << 20),
            Chromatic::Exact(4)
        );
        assert_eq!(
            chromatic_number(&fam("x", &[5]), 5, 1 << 22),
            Chromatic::Exact(4)
        );
        assert_eq!(
            chromatic_number(&fam("complete", &[4]), 3, 1 << 20),
            Chromatic::Above(3)
        );
        assert_eq!(odd_girth(&fam("petersen", &[])), Some(5));
        assert_eq!(odd_girth(&fam("cycle", &[6])), None);
        assert_eq!(odd_girth(&fam("one", &[])), Some(1));
        assert_eq!(odd_girth(&fam("complete", &[4])), Some(3));
    }

    #[test]
    fn cycle_reports() {
        let rep =
            cycle_obstruction_report(&based(fam("petersen", &[])), 5, 3, 4, 20, 1 << 20, 1 << 20)
                .unwrap();
        assert_eq!(rep.verdict, Verdict::Obstructed);
        assert!(rep.finite_group && rep.consistent);
        let rep =
            cycle_obstruction_report(&based(fam("cycle", &[5])), 5, 2, 4, 20, 1 << 20, 1 << 20)
                .unwrap();
        assert_eq!(rep.verdict, Verdict::NotObstructed);
        assert_eq!(rep.map_exists, Some(true));
        let rep =
            cycle_obstruction_report(&based(fam("complete", &[4])), 3, 1, 3, 20, 1 << 20, 1 << 20)
                .unwrap();
        assert_eq!(rep.verdict, Verdict::NotObstructed);
        assert_eq!(rep.map_exists, Some(false));
        assert!(!rep.notes.is_empty());
    }

    #[test]
    fn h1_reports() {
        let rep = h1_obstruction_report(&fam("cycle", &[5]), 5, 1, 1 << 20).unwrap();
        assert_eq!(
            (rep.h1.to_string(), rep.verdict),
            ("Z".to_string(), Verdict::NotObstructed)
        );
        assert!(matches!(
            h1_obstruction_report(&fam("cycle", &[6]), 5, 1, 1 << 20),
            Err(Error::Precondition(_))
        ));
        let rep = h1_obstruction_report(&fam("petersen", &[]), 5, 2, 1 << 20).unwrap();
        assert_eq!(rep.verdict, Verdict::Obstructed);
        assert!(rep.consistent);
    }

    #[test]
    fn torsion_reports() {
        let k4 = fam("complete", &[4]);
        let x5 = fam("x", &[5]);
        let rep = torsion_obstruction_report(&k4, &x5, 2, 1 << 20, 1 << 22).unwrap();
        assert_eq!(rep.verdict, Verdict::Obstructed);
        assert_eq!(rep.witness.as_ref().unwrap().1, 2);
        assert_eq!(rep.map_exists, Some(false));
        let rep = torsion_obstruction_report(&x5, &x5, 2, 1 << 20, 1 << 22).unwrap();
        assert_eq!(rep.verdict, Verdict::NotObstructed);
        assert_eq!(rep.target[0].odd_orders, Some(vec![4]));
    }
}
