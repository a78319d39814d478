//! Presentations of the r-fundamental group from the 2-complex whose
//! 2-cells are the closed walks of length at most 2r.

use crate::error::{Error, Result};
use crate::fpgroup::{
    canonical_cyclic, subgroup_presentation, word_is_trivial, CosetTable, Decision, ElementOracle,
    Presentation, Word,
};
use crate::graph::{BasedGraph, Graph, GraphMap, Vertex};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

/// Default coset cap for word problems on these presentations.
pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct Pi1Presentation {
    pub graph: Graph,
    pub base: Vertex,
    pub r: usize,
    /// BFS tree parent; `usize::MAX` outside the base's component.
    pub parent: Vec<Vertex>,
    /// Non-tree edges `(a, b)` with `a <= b`; generator i+1 is chord i.
    pub chords: Vec<(Vertex, Vertex)>,
    pub presentation: Presentation,
    /// Parity of each generator's fundamental cycle.
    pub parity: Vec<u8>,
    depth: Vec<usize>,
    chord_index: HashMap<(Vertex, Vertex), i32>,
}

impl Pi1Presentation {
    pub fn in_component(&self, v: Vertex) -> bool {
        self.parent[v] != usize::MAX
    }

    pub fn ngens(&self) -> usize {
        self.chords.len()
    }

    /// Generator letter of the step u → w, or 0 for a tree edge.
    pub fn step_letter(&self, u: Vertex, w: Vertex) -> i32 {
        if u == w {
            return self.chord_index[&(u, u)];
        }
        if self.parent[w] == u || self.parent[u] == w {
            return 0;
        }
        let g = self.chord_index[&(u.min(w), u.max(w))];
        if u < w {
            g
        } else {
            -g
        }
    }

    /// Tree path from the base to `v`.
    pub fn tree_path(&self, v: Vertex) -> Vec<Vertex> {
        let mut p = vec![v];
        let mut x = v;
        while x != self.base {
            x = self.parent[x];
            p.push(x);
        }
        p.reverse();
        p
    }

    /// The based loop that generator `i` (1-based) stands for.
    pub fn generator_loop(&self, i: usize) -> Vec<Vertex> {
        let (a, b) = self.chords[i - 1];
        let mut w = self.tree_path(a);
        let mut back = self.tree_path(b);
        back.reverse();
        w.extend(back);
        w
    }

    pub fn depth(&self, v: Vertex) -> usize {
        self.depth[v]
    }

    pub fn parity_of(&self, w: &[i32]) -> u8 {
        w.iter().fold(0, |acc, &x| {
            acc ^ self.parity[x.unsigned_abs() as usize - 1]
        })
    }

    pub fn has_odd_generator(&self) -> bool {
        self.parity.iter().any(|&p| p == 1)
    }

    /// Word of a walk (not necessarily closed) in the base's component.
    pub fn walk_to_word(&self, walk: &[Vertex]) -> Result<Word> {
        let mut out = Vec::new();
        for (i, &v) in walk.iter().enumerate() {
            if v >= self.graph.n() || !self.in_component(v) {
                return Err(Error::Validation(format!(
                    "walk leaves the base component at step {i}"
                )));
            }
            if i > 0 {
                let u = walk[i - 1];
                if !self.graph.has_edge(u, v) {
                    return Err(Error::Validation(format!("walk step {i} is not an edge")));
                }
                let x = self.step_letter(u, v);
                if x != 0 {
                    if out.last() == Some(&-x) {
                        out.pop();
                    } else {
                        out.push(x);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Calls `f` on every closed walk of length `len` from `start` with no
/// cyclic backtrack `a,b,a` (a ≠ b); such walks add no new relators.
fn closed_walks_without_backtracks(
    g: &Graph,
    start: Vertex,
    len: usize,
    f: &mut impl FnMut(&[Vertex]),
) {
    fn go(g: &Graph, w: &mut Vec<Vertex>, len: usize, f: &mut impl FnMut(&[Vertex])) {
        let last = *w.last().unwrap();
        if w.len() == len {
            if !g.has_edge(last, w[0]) {
                return;
            }
            let n = w.len();
            let bt = |a: Vertex, b: Vertex, c: Vertex| a == c && a != b;
            if n >= 2 && (bt(w[n - 2], w[n - 1], w[0]) || bt(w[n - 1], w[0], w[1])) {
                return;
            }
            f(w);
            return;
        }
        for &y in g.neighbors(last) {
            let n = w.len();
            if n >= 2 && w[n - 2] == y && y != last {
                continue;
            }
            w.push(y);
            go(g, w, len, f);
            w.pop();
        }
    }
    let mut w = vec![start];
    go(g, &mut w, len, f);
}

/// Calls `f` on every closed walk of length `len` from `start`.
fn all_closed_walks(g: &Graph, start: Vertex, len: usize, f: &mut impl FnMut(&[Vertex])) {
    fn go(g: &Graph, w: &mut Vec<Vertex>, len: usize, f: &mut impl FnMut(&[Vertex])) {
        let last = *w.last().unwrap();
        if w.len() == len {
            if g.has_edge(last, w[0]) {
                f(w);
            }
            return;
        }
        for &y in g.neighbors(last) {
            w.push(y);
            go(g, w, len, f);
            w.pop();
        }
    }
    if len == 0 {
        return;
    }
    let mut w = vec![start];
    go(g, &mut w, len, f);
}

/// A closed walk v_0..v_{2n-1} (cyclic) is decomposable when it revisits a
/// vertex at a nonzero even offset.
pub fn is_decomposable(cycle: &[Vertex]) -> bool {
    let m = cycle.len();
    let n = m / 2;
    (0..m).any(|x| (1..n).any(|i| cycle[(x + 2 * i) % m] == cycle[x]))
}

fn cyclic_closure(cycle: &[Vertex]) -> Vec<Vertex> {
    let mut w = cycle.to_vec();
    w.push(cycle[0]);
    w
}

pub fn cw_presentation(g: &BasedGraph, r: usize) -> Result<Pi1Presentation> {
    cw_presentation_with(g, r, false)
}

/// Builds the presentation; with `filter_decomposable`, cells attached
/// along decomposable closed walks are skipped.
pub fn cw_presentation_with(
    g: &BasedGraph,
    r: usize,
    filter_decomposable: bool,
) -> Result<Pi1Presentation> {
    if r == 0 {
        return Err(Error::Param("radius must be at least 1".into()));
    }
    let graph = g.graph.clone();
    let (parent, order) = graph.bfs_tree(g.base);
    let mut depth = vec![0usize; graph.n()];
    for &v in order.iter().skip(1) {
        depth[v] = depth[parent[v]] + 1;
    }
    let mut chords = Vec::new();
    let mut comp = order.clone();
    comp.sort_unstable();
    for &a in &comp {
        for &b in graph.neighbors(a) {
            if b >= a && (a == b || (parent[b] != a && parent[a] != b)) {
                chords.push((a, b));
            }
        }
    }
    let chord_index: HashMap<(Vertex, Vertex), i32> = chords
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i as i32 + 1))
        .collect();
    let parity = chords
        .iter()
        .map(|&(a, b)| ((depth[a] + depth[b] + 1) % 2) as u8)
        .collect();
    let mut pp = Pi1Presentation {
        graph,
        base: g.base,
        r,
        parent,
        chords,
        presentation: Presentation::numbered(0, vec![]),
        parity,
        depth,
        chord_index,
    };
    let mut rels: BTreeSet<Word> = BTreeSet::new();
    for &v in &comp {
        for n in 1..=r {
            closed_walks_without_backtracks(&pp.graph, v, 2 * n, &mut |cycle| {
                if filter_decomposable && is_decomposable(cycle) {
                    return;
                }
                let w = pp
                    .walk_to_word(&cyclic_closure(cycle))
                    .expect("closed walk in component");
                let c = canonical_cyclic(&w);
                if !c.is_empty() {
                    rels.insert(c);
                }
            });
        }
    }
    let mut rels: Vec<Word> = rels.into_iter().collect();
    rels.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    pp.presentation = Presentation::numbered(pp.chords.len(), rels);
    Ok(pp)
}

/// The index-≤2 subgroup of even-length classes.
pub fn even_part(pp: &Pi1Presentation) -> Result<Presentation> {
    if !pp.has_odd_generator() {
        return Ok(pp.presentation.clone());
    }
    let perms: Vec<Vec<usize>> = pp
        .parity
        .iter()
        .map(|&p| if p == 1 { vec![1, 0] } else { vec![0, 1] })
        .collect();
    let table = CosetTable::from_permutations(&perms).expect("parity permutations");
    if !table.is_consistent(&pp.presentation, &[]) {
        return Err(Error::Internal("a relator has odd parity".into()));
    }
    subgroup_presentation(&pp.presentation, &table)
}

/// Images of the domain generators under a based graph map, as words in
/// the codomain presentation. Relator images are checked for triviality.
pub fn induced_hom(
    f: &GraphMap,
    dom: &Pi1Presentation,
    cod: &Pi1Presentation,
) -> Result<Vec<Word>> {
    if f.apply(dom.base) != cod.base {
        return Err(Error::Precondition("map is not based".into()));
    }
    if f.domain() != &dom.graph || f.codomain() != &cod.graph {
        return Err(Error::Precondition(
            "map does not match the presentations".into(),
        ));
    }
    let images: Vec<Word> = (1..=dom.ngens())
        .map(|i| {
            let w: Vec<Vertex> = dom.generator_loop(i).iter().map(|&v| f.apply(v)).collect();
            cod.walk_to_word(&w)
        })
        .collect::<Result<_>>()?;
    let oracle = ElementOracle::new(&cod.presentation, DEFAULT_MAX_COSETS);
    for r in &dom.presentation.relators {
        let img: Word = r
            .iter()
            .flat_map(|&x| {
                let w = &images[x.unsigned_abs() as usize - 1];
                if x > 0 {
                    w.clone()
                } else {
                    crate::fpgroup::inverse(w)
                }
            })
            .collect();
        let verdict = match &oracle {
            Some(o) => {
                if o.is_trivial(&img) {
                    Decision::Yes
                } else {
                    Decision::No
                }
            }
            None => word_is_trivial(&cod.presentation, &img, 10_000),
        };
        if verdict == Decision::No {
            return Err(Error::Internal("relator image is nontrivial".into()));
        }
    }
    Ok(images)
}

/// Closed walks of length exactly 2r, split by decomposability. Walks
/// are listed up to rotation and reflection.
#[derive(Clone, Debug, Serialize)]
pub struct DecomposabilityReport {
    pub r: usize,
    pub total: usize,
    pub decomposable: usize,
    pub nondecomposable: Vec<Vec<String>>,
}

pub fn nondecomposable_filter(g: &Graph, r: usize) -> DecomposabilityReport {
    let mut total = 0;
    let mut decomposable = 0;
    let mut reps: BTreeSet<Vec<Vertex>> = BTreeSet::new();
    for v in 0..g.n() {
        all_closed_walks(g, v, 2 * r, &mut |c| {
            total += 1;
            if is_decomposable(c) {
                decomposable += 1;
            } else {
                reps.insert(canonical_cycle(c));
            }
        });
    }
    DecomposabilityReport {
        r,
        total,
        decomposable,
        nondecomposable: reps
            .into_iter()
            .map(|c| c.into_iter().map(|v| g.id(v).to_string()).collect())
            .collect(),
    }
}

/// Least rotation of the cycle or its reversal.
fn canonical_cycle(c: &[Vertex]) -> Vec<Vertex> {
    let m = c.len();
    let mut rev = c.to_vec();
    rev.reverse();
    let mut best: Option<Vec<Vertex>> = None;
    for cand in [c.to_vec(), rev] {
        for s in 0..m {
            let rot: Vec<Vertex> = cand[s..].iter().chain(&cand[..s]).copied().collect();
            if best.as_ref().map_or(true, |b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::identify;
    use crate::graph::make_family;

    fn based(name: &str, p: &[i64], base: &str) -> BasedGraph {
        BasedGraph::new(make_family(name, p).unwrap(), base).unwrap()
    }

    fn ident(g: &BasedGraph, r: usize) -> String {
        identify(&cw_presentation(g, r).unwrap().presentation, 100_000).to_string()
    }

    #[test]
    fn small_groups() {
        let one = based("one", &[], "*");
        let pp = cw_presentation(&one, 1).unwrap();
        assert_eq!(pp.presentation.to_string(), "<g1 | g1^2>");
        assert_eq!(ident(&one, 1), "Z/2");
        assert_eq!(ident(&based("cycle", &[5], "0"), 2), "Z");
        assert_eq!(ident(&based("cycle", &[5], "0"), 5), "Z/2");
        assert_eq!(ident(&based("cycle", &[4], "0"), 1), "Z");
        assert_eq!(ident(&based("cycle", &[4], "0"), 2), "1");
        assert_eq!(ident(&based("complete", &[4], "1"), 2), "Z/2");
        assert_eq!(ident(&based("complete", &[2], "1"), 1), "1");
    }

    #[test]
    fn filter_does_not_change_groups() {
        for (name, p, r) in [
            ("cycle", vec![5], 2),
            ("complete", vec![4], 2),
            ("petersen", vec![], 3),
        ] {
            let g = BasedGraph {
                graph: make_family(name, &p).unwrap(),
                base: 0,
            };
            let a = identify(
                &cw_presentation_with(&g, r, false).unwrap().presentation,
                100_000,
            );
            let b = identify(
                &cw_presentation_with(&g, r, true).unwrap().presentation,
                100_000,
            );
            assert_eq!(a, b, "{name}");
        }
    }

    #[test]
    fn words_and_parity() {
        let c5 = based("cycle", &[5], "0");
        let pp = cw_presentation(&c5, 2).unwrap();
        assert_eq!(pp.ngens(), 1);
        assert_eq!(pp.walk_to_word(&[0, 1, 2, 3, 4, 0]).unwrap(), vec![1]);
        assert_eq!(
            pp.walk_to_word(&[0, 1, 2, 3, 4, 0, 4, 3, 2, 1, 0]).unwrap(),
            Vec::<i32>::new()
        );
        assert_eq!(pp.walk_to_word(&[0, 1, 0]).unwrap(), Vec::<i32>::new());
        assert_eq!(pp.parity_of(&[1]), 1);
        assert_eq!(pp.parity_of(&[]), 0);
        let k4 = based("complete", &[4], "1");
        let pk = cw_presentation(&k4, 2).unwrap();
        let odd = (1..=pk.ngens() as i32)
            .find(|&i| pk.parity[i as usize - 1] == 1)
            .unwrap();
        assert_eq!(pk.parity_of(&[odd, odd]), 0);
        assert!(pk
            .presentation
            .relators
            .iter()
            .all(|r| pk.parity_of(r) == 0));
    }

    #[test]
    fn even_parts() {
        let e = |g: &BasedGraph, r| {
            identify(
                &even_part(&cw_presentation(g, r).unwrap()).unwrap(),
                100_000,
            )
            .to_string()
        };
        assert_eq!(e(&based("one", &[], "*"), 1), "1");
        assert_eq!(e(&based("cycle", &[5], "0"), 2), "Z");
        assert_eq!(e(&based("complete", &[4], "1"), 2), "1");
    }

    #[test]
    fn induced_homomorphisms() {
        let c10 = make_family("cycle", &[10]).unwrap();
        let c5 = make_family("cycle", &[5]).unwrap();
        let f = GraphMap::by_rule(c10.clone(), c5.clone(), |s| {
            (s.parse::<u32>().unwrap() % 5).to_string()
        })
        .unwrap();
        let d = cw_presentation(&BasedGraph::new(c10, "0").unwrap(), 2).unwrap();
        let c = cw_presentation(&BasedGraph::new(c5, "0").unwrap(), 2).unwrap();
        let img = induced_hom(&f, &d, &c).unwrap();
        assert_eq!(img.len(), 1);
        assert_eq!(img[0].len(), 2);
        assert!(img[0][0] == img[0][1]);
    }

    #[test]
    fn decomposability() {
        let rep = nondecomposable_filter(&make_family("cycle", &[5]).unwrap(), 2);
        assert!(rep.nondecomposable.is_empty());
        let rep = nondecomposable_filter(&make_family("cycle", &[4]).unwrap(), 2);
        assert_eq!(rep.nondecomposable, vec![vec!["0", "1", "2", "3"]]);
        let rep = nondecomposable_filter(&make_family("complete", &[2]).unwrap(), 2);
        assert_eq!(rep.decomposable, rep.total);
    }
}
