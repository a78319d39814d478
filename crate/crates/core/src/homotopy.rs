//! Walks, elementary r-homotopy moves, class enumeration by union-find,
//! and lengths of r-homotopy classes.

use crate::error::{Error, Result};
use crate::fpgroup::{Decision, Element, ElementOracle};
use crate::fundamental::{cw_presentation, Pi1Presentation, DEFAULT_MAX_COSETS};
use crate::graph::{BasedGraph, Graph, GraphRef, Vertex};
use num_integer::Integer;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};

/// Default limit on the number of walks a class table may hold.
pub const DEFAULT_WALK_BUDGET: usize = 4_000_000;

/// A walk (v₀,…,v_n); its length is n. Composition is left to right:
/// `a.compose(b)` traverses a first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    pub vertices: Vec<Vertex>,
}

impl Walk {
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Walk> {
        if vertices.is_empty() {
            return Err(Error::Validation("a walk has at least one vertex".into()));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= g.n()) {
            return Err(Error::Lookup(format!("vertex index {v}")));
        }
        for (i, p) in vertices.windows(2).enumerate() {
            if !g.has_edge(p[0], p[1]) {
                return Err(Error::Validation(format!(
                    "step {} ({} to {}) is not an edge",
                    i + 1,
                    g.id(p[0]),
                    g.id(p[1])
                )));
            }
        }
        Ok(Walk { vertices })
    }

    pub fn from_ids<S: AsRef<str>>(g: &Graph, ids: &[S]) -> Result<Walk> {
        let vs = ids
            .iter()
            .map(|s| g.vertex(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Walk::new(g, vs)
    }

    pub fn trivial(v: Vertex) -> Walk {
        Walk { vertices: vec![v] }
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn initial(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn terminal(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn is_loop(&self) -> bool {
        self.initial() == self.terminal()
    }

    pub fn compose(&self, other: &Walk) -> Result<Walk> {
        if self.terminal() != other.initial() {
            return Err(Error::Validation("walks do not meet".into()));
        }
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[1..]);
        Ok(Walk { vertices: v })
    }

    pub fn reverse(&self) -> Walk {
        let mut v = self.vertices.clone();
        v.reverse();
        Walk { vertices: v }
    }

    /// k-fold composition of a loop with itself (k = 0 gives the trivial walk).
    pub fn power(&self, k: usize) -> Result<Walk> {
        if !self.is_loop() {
            return Err(Error::Validation("only loops have powers".into()));
        }
        let mut w = Walk::trivial(self.initial());
        for _ in 0..k {
            w = w.compose(self)?;
        }
        Ok(w)
    }

    pub fn ids(&self, g: &Graph) -> Vec<String> {
        self.vertices.iter().map(|&v| g.id(v).to_string()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkJson {
    pub graph: GraphRef,
    pub vertices: Vec<String>,
}

/// Every walk one elementary move away: backtrack insertions, backtrack
/// deletions and rewrites of a window of at most r−1 interior vertices.
pub fn move_neighbors(g: &Graph, w: &Walk, r: usize) -> Vec<Walk> {
    let v = &w.vertices;
    let mut out: HashSet<Vec<Vertex>> = HashSet::new();
    for i in 0..v.len() {
        for &u in g.neighbors(v[i]) {
            let mut x = v[..=i].to_vec();
            x.push(u);
            x.extend_from_slice(&v[i..]);
            out.insert(x);
        }
    }
    for x in deletions(v) {
        out.insert(x);
    }
    for x in window_rewrites(g, v, r) {
        out.insert(x);
    }
    let mut out: Vec<Walk> = out.into_iter().map(|vertices| Walk { vertices }).collect();
    out.sort();
    out
}

fn deletions(v: &[Vertex]) -> Vec<Vec<Vertex>> {
    (0..v.len().saturating_sub(2))
        .filter(|&i| v[i] == v[i + 2])
        .map(|i| v[..=i].iter().chain(&v[i + 3..]).copied().collect())
        .collect()
}

/// Same-length walks differing from `v` only on some window of
/// min(r−1, n−1) consecutive interior positions.
fn window_rewrites(g: &Graph, v: &[Vertex], r: usize) -> Vec<Vec<Vertex>> {
    let n = v.len() - 1;
    let mut out = Vec::new();
    if r < 2 || n < 2 {
        return out;
    }
    let k = (r - 1).min(n - 1);
    for x in 1..=n - k {
        let mut cur = v.to_vec();
        fill(g, &mut cur, x, x + k, v, &mut out);
    }
    out
}

fn fill(
    g: &Graph,
    cur: &mut Vec<Vertex>,
    pos: usize,
    end: usize,
    orig: &[Vertex],
    out: &mut Vec<Vec<Vertex>>,
) {
    if pos == end {
        if g.has_edge(cur[end - 1], cur[end]) && cur[..] != orig[..] {
            out.push(cur.clone());
        }
        return;
    }
    let prev = cur[pos - 1];
    for &u in g.neighbors(prev) {
        cur[pos] = u;
        fill(g, cur, pos + 1, end, orig, out);
    }
    cur[pos] = orig[pos];
}

/// All walks v→w of length ≤ cap, in (length, lexicographic) order.
fn walks_between(
    g: &Graph,
    v: Vertex,
    w: Vertex,
    cap: usize,
    budget: usize,
) -> Result<Vec<Vec<Vertex>>> {
    let dist = g.distances(w);
    let mut out = Vec::new();
    fn go(
        g: &Graph,
        cur: &mut Vec<Vertex>,
        w: Vertex,
        left: usize,
        dist: &[usize],
        out: &mut Vec<Vec<Vertex>>,
        budget: usize,
    ) -> bool {
        let last = *cur.last().unwrap();
        if last == w {
            out.push(cur.clone());
            if out.len() > budget {
                return false;
            }
        }
        if left == 0 {
            return true;
        }
        for &u in g.neighbors(last) {
            if dist[u] <= left - 1 {
                cur.push(u);
                let ok = go(g, cur, w, left - 1, dist, out, budget);
                cur.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    if dist[v] != usize::MAX && !go(g, &mut vec![v], w, cap, &dist, &mut out, budget) {
        return Err(Error::Budget(format!(
            "more than {budget} walks of length <= {cap}"
        )));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Partition of the walks v→w of length ≤ cap into classes under the
/// moves that stay within length ≤ cap.
#[derive(Clone, Debug)]
pub struct ClassTable {
    pub v: Vertex,
    pub w: Vertex,
    pub r: usize,
    pub cap: usize,
    walks: Vec<Vec<Vertex>>,
    index: HashMap<Vec<Vertex>, usize>,
    block: Vec<usize>,
    nblocks: usize,
}

impl ClassTable {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.nblocks
    }

    pub fn class_of(&self, w: &Walk) -> Option<usize> {
        self.index.get(&w.vertices).map(|&i| self.block[i])
    }

    pub fn same_class(&self, a: &Walk, b: &Walk) -> Option<bool> {
        Some(self.class_of(a)? == self.class_of(b)?)
    }

    /// Blocks in order of their first (shortest, least) walk.
    pub fn blocks(&self) -> Vec<Vec<Walk>> {
        let mut out = vec![Vec::new(); self.nblocks];
        for (i, w) in self.walks.iter().enumerate() {
            out[self.block[i]].push(Walk {
                vertices: w.clone(),
            });
        }
        out
    }

    /// Shortest length in a block.
    pub fn min_length(&self, block: usize) -> Option<usize> {
        self.walks
            .iter()
            .zip(&self.block)
            .find(|(_, &b)| b == block)
            .map(|(w, _)| w.len() - 1)
    }
}

pub fn enumerate_classes(
    g: &Graph,
    v: Vertex,
    w: Vertex,
    r: usize,
    cap: usize,
) -> Result<ClassTable> {
    enumerate_classes_budgeted(g, v, w, r, cap, DEFAULT_WALK_BUDGET)
}

pub fn enumerate_classes_budgeted(
    g: &Graph,
    v: Vertex,
    w: Vertex,
    r: usize,
    cap: usize,
    budget: usize,
) -> Result<ClassTable> {
    if r == 0 {
        return Err(Error::Param("radius must be at least 1".into()));
    }
    let walks = walks_between(g, v, w, cap, budget)?;
    let index: HashMap<Vec<Vertex>, usize> = walks
        .iter()
        .enumerate()
        .map(|(i, x)| (x.clone(), i))
        .collect();
    let mut uf = UnionFind::<usize>::new(walks.len());
    for (i, x) in walks.iter().enumerate() {
        for y in deletions(x) {
            uf.union(i, index[&y]);
        }
        for y in window_rewrites(g, x, r) {
            uf.union(i, index[&y]);
        }
    }
    let mut label: HashMap<usize, usize> = HashMap::new();
    let block: Vec<usize> = (0..walks.len())
        .map(|i| {
            let root = uf.find(i);
            let l = label.len();
            *label.entry(root).or_insert(l)
        })
        .collect();
    let nblocks = label.len();
    Ok(ClassTable {
        v,
        w,
        r,
        cap,
        walks,
        index,
        block,
        nblocks,
    })
}

/// Word-problem view of r-homotopy at a base point: a walk from the base
/// maps to the group element of its word (closed up along the tree).
#[derive(Clone, Debug)]
pub struct HomotopyOracle {
    pub pi1: Pi1Presentation,
    oracle: ElementOracle,
}

impl HomotopyOracle {
    pub fn new(g: &Graph, base: Vertex, r: usize, max_cosets: usize) -> Result<HomotopyOracle> {
        let pi1 = cw_presentation(
            &BasedGraph {
                graph: g.clone(),
                base,
            },
            r,
        )?;
        let oracle = ElementOracle::new(&pi1.presentation, max_cosets)
            .ok_or_else(|| Error::Budget("word problem not solved within the coset cap".into()))?;
        Ok(HomotopyOracle { pi1, oracle })
    }

    pub fn graph(&self) -> &Graph {
        &self.pi1.graph
    }

    pub fn base(&self) -> Vertex {
        self.pi1.base
    }

    pub fn identity(&self) -> Element {
        self.oracle.identity()
    }

    pub fn group_order(&self) -> Option<usize> {
        self.oracle.order()
    }

    /// Element reached by one step u → w from element e.
    pub fn step(&self, e: &Element, u: Vertex, w: Vertex) -> Element {
        match self.pi1.step_letter(u, w) {
            0 => e.clone(),
            x => self.oracle.mul_letter(e, x),
        }
    }

    pub fn element(&self, w: &Walk) -> Result<Element> {
        if w.initial() != self.base() {
            return Err(Error::Validation("walk does not start at the base".into()));
        }
        let word = self.pi1.walk_to_word(&w.vertices)?;
        Ok(self.oracle.eval(&word))
    }

    pub fn same_class(&self, a: &Walk, b: &Walk) -> Result<bool> {
        if a.initial() != b.initial() || a.terminal() != b.terminal() {
            return Err(Error::Validation("walks have different endpoints".into()));
        }
        Ok(self.element(a)? == self.element(b)?)
    }

    /// Shortest walk length in the class of `w`, by breadth-first search
    /// over (vertex, element) pairs, i.e. in the universal cover.
    pub fn geodesic(&self, w: &Walk) -> Result<usize> {
        let target = (w.terminal(), self.element(w)?);
        let start = (self.base(), self.identity());
        if start == target {
            return Ok(0);
        }
        let mut seen: HashSet<(Vertex, Element)> = HashSet::from([start.clone()]);
        let mut frontier = vec![start];
        for d in 1..=w.len() {
            let mut next = Vec::new();
            for (u, e) in &frontier {
                for &x in self.graph().neighbors(*u) {
                    let s = (x, self.step(e, *u, x));
                    if s == target {
                        return Ok(d);
                    }
                    if seen.insert(s.clone()) {
                        next.push(s);
                    }
                }
            }
            frontier = next;
        }
        Err(Error::Internal("walk not found in its own class".into()))
    }

    /// Breadth-first ball of radius `depth` in the universal cover:
    /// states in discovery order with their depth and discovering parent.
    pub fn ball(&self, depth: usize, max_states: usize) -> Result<Vec<CoverState>> {
        let mut index: HashMap<(Vertex, Element), usize> = HashMap::new();
        let root = (self.base(), self.identity());
        index.insert(root.clone(), 0);
        let mut states = vec![CoverState {
            vertex: self.base(),
            element: self.identity(),
            depth: 0,
            parent: None,
        }];
        let mut q = VecDeque::from([0usize]);
        while let Some(i) = q.pop_front() {
            if states[i].depth == depth {
                continue;
            }
            let (u, e) = (states[i].vertex, states[i].element.clone());
            for &x in self.graph().neighbors(u) {
                let s = (x, self.step(&e, u, x));
                if !index.contains_key(&s) {
                    if states.len() >= max_states {
                        return Err(Error::Budget(format!(
                            "universal cover ball exceeds {max_states} vertices"
                        )));
                    }
                    index.insert(s.clone(), states.len());
                    q.push_back(states.len());
                    states.push(CoverState {
                        vertex: x,
                        element: s.1,
                        depth: states[i].depth + 1,
                        parent: Some(i),
                    });
                }
            }
        }
        Ok(states)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverState {
    pub vertex: Vertex,
    pub element: Element,
    pub depth: usize,
    pub parent: Option<usize>,
}

/// Decides r-homotopy of two walks with common endpoints: the word
/// problem first, then union-find enumeration up to `cap`.
pub fn are_r_homotopic(g: &Graph, a: &Walk, b: &Walk, r: usize, cap: usize) -> Result<Decision> {
    if a.initial() != b.initial() || a.terminal() != b.terminal() {
        return Err(Error::Validation("walks have different endpoints".into()));
    }
    if a == b {
        return Ok(Decision::Yes);
    }
    if a.len() % 2 != b.len() % 2 {
        return Ok(Decision::No);
    }
    match HomotopyOracle::new(g, a.initial(), r, DEFAULT_MAX_COSETS) {
        Ok(o) => {
            return Ok(if o.same_class(a, b)? {
                Decision::Yes
            } else {
                Decision::No
            })
        }
        Err(Error::Budget(_)) => {}
        Err(e) => return Err(e),
    }
    let cap = cap.max(a.len()).max(b.len());
    let t = enumerate_classes(g, a.initial(), a.terminal(), r, cap)?;
    Ok(if t.same_class(a, b) == Some(true) {
        Decision::Yes
    } else {
        Decision::Unknown
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Geodesic {
    pub length: usize,
    /// Certified minimum (always, for the word-problem method; for
    /// enumeration, when caps L and L+2 agree).
    pub exact: bool,
}

pub fn geodesic_length(g: &Graph, w: &Walk, r: usize, cap: usize) -> Result<Geodesic> {
    match HomotopyOracle::new(g, w.initial(), r, DEFAULT_MAX_COSETS) {
        Ok(o) => {
            return Ok(Geodesic {
                length: o.geodesic(w)?,
                exact: true,
            })
        }
        Err(Error::Budget(_)) => {}
        Err(e) => return Err(e),
    }
    let cap = cap.max(w.len());
    let at = |c: usize| -> Result<usize> {
        let t = enumerate_classes(g, w.initial(), w.terminal(), r, c)?;
        let b = t
            .class_of(w)
            .ok_or_else(|| Error::Internal("walk missing from table".into()))?;
        Ok(t.min_length(b).unwrap())
    };
    let l0 = at(cap)?;
    let l1 = at(cap + 2)?;
    Ok(Geodesic {
        length: l1,
        exact: l0 == l1,
    })
}

/// d_r(a, b): the class length of a followed by b reversed.
pub fn metric_d(g: &Graph, a: &Walk, b: &Walk, r: usize, cap: usize) -> Result<Geodesic> {
    if !a.is_loop() || !b.is_loop() || a.initial() != b.initial() {
        return Err(Error::Validation(
            "metric needs loops at a common base".into(),
        ));
    }
    geodesic_length(g, &a.compose(&b.reverse())?, r, cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableLength {
    pub numerator: u64,
    pub denominator: u64,
    /// (n, class length of the n-th power).
    pub powers: Vec<(usize, Geodesic)>,
}

impl StableLength {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

/// min over 1 ≤ n ≤ max_power of l(αⁿ)/n, an upper bound on the stable length.
pub fn stable_length_upper(
    g: &Graph,
    lp: &Walk,
    r: usize,
    max_power: usize,
    cap: usize,
) -> Result<StableLength> {
    if max_power == 0 {
        return Err(Error::Param("max power must be at least 1".into()));
    }
    let oracle = HomotopyOracle::new(g, lp.initial(), r, DEFAULT_MAX_COSETS).ok();
    let mut powers = Vec::new();
    let mut best = (u64::MAX, 1u64);
    for n in 1..=max_power {
        let w = lp.power(n)?;
        let geo = match &oracle {
            Some(o) => Geodesic {
                length: o.geodesic(&w)?,
                exact: true,
            },
            None => geodesic_length(g, &w, r, cap.max(w.len()))?,
        };
        let (a, b) = (geo.length as u64, n as u64);
        if best.0 == u64::MAX || a * best.1 < best.0 * b {
            best = (a, b);
        }
        powers.push((n, geo));
    }
    let d = best.0.gcd(&best.1).max(1);
    Ok(StableLength {
        numerator: best.0 / d,
        denominator: best.1 / d,
        powers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_family;

    fn walk(g: &Graph, ids: &[&str]) -> Walk {
        Walk::from_ids(g, ids).unwrap()
    }

    #[test]
    fn composition() {
        let c5 = make_family("cycle", &[5]).unwrap();
        let a = walk(&c5, &["0", "1", "2"]);
        let b = walk(&c5, &["2", "3", "4", "0"]);
        assert_eq!(
            a.compose(&b).unwrap().ids(&c5),
            ["0", "1", "2", "3", "4", "0"]
        );
        assert_eq!(a.compose(&a.reverse()).unwrap().len(), 4);
        assert!(b.compose(&b).is_err());
    }

    #[test]
    fn moves() {
        let k4 = make_family("complete", &[4]).unwrap();
        let m = move_neighbors(&k4, &walk(&k4, &["1", "2", "1"]), 2);
        assert!(m.contains(&walk(&k4, &["1", "3", "1"])));
        assert!(m.contains(&walk(&k4, &["1", "4", "1"])));
        assert!(m.contains(&walk(&k4, &["1"])));
        let c5 = make_family("cycle", &[5]).unwrap();
        let m = move_neighbors(&c5, &walk(&c5, &["0"]), 1);
        assert_eq!(
            m,
            vec![walk(&c5, &["0", "1", "0"]), walk(&c5, &["0", "4", "0"])]
        );
        assert!(move_neighbors(&c5, &walk(&c5, &["0", "1", "0"]), 1).contains(&walk(&c5, &["0"])));
    }

    #[test]
    fn class_tables() {
        let c5 = make_family("cycle", &[5]).unwrap();
        let t = enumerate_classes(&c5, 0, 0, 2, 5).unwrap();
        let fwd = walk(&c5, &["0", "1", "2", "3", "4", "0"]);
        let bwd = fwd.reverse();
        assert_ne!(t.class_of(&fwd), t.class_of(&bwd));
        assert_eq!(
            t.class_of(&Walk::trivial(0)),
            t.class_of(&walk(&c5, &["0", "1", "2", "1", "0"]))
        );
        let k2 = make_family("complete", &[2]).unwrap();
        assert_eq!(enumerate_classes(&k2, 0, 0, 1, 4).unwrap().block_count(), 1);
        let one = make_family("one", &[]).unwrap();
        assert_eq!(
            enumerate_classes(&one, 0, 0, 1, 3).unwrap().block_count(),
            2
        );
    }

    #[test]
    fn verdicts_and_lengths() {
        let k4 = make_family("complete", &[4]).unwrap();
        let d = are_r_homotopic(
            &k4,
            &walk(&k4, &["1", "2", "1"]),
            &walk(&k4, &["1", "3", "1"]),
            2,
            4,
        )
        .unwrap();
        assert_eq!(d, Decision::Yes);
        let c5 = make_family("cycle", &[5]).unwrap();
        let wind = walk(&c5, &["0", "1", "2", "3", "4", "0"]);
        let triv = Walk::trivial(0);
        let five = walk(&c5, &["0", "1", "2", "3", "4", "0", "1", "0", "4", "0"]);
        assert_eq!(
            are_r_homotopic(&c5, &wind, &five, 2, 12).unwrap(),
            Decision::Yes
        );
        assert_eq!(
            are_r_homotopic(&c5, &wind, &wind.reverse(), 2, 12).unwrap(),
            Decision::No
        );
        assert_eq!(
            geodesic_length(&c5, &wind, 2, 9).unwrap(),
            Geodesic {
                length: 5,
                exact: true
            }
        );
        assert_eq!(metric_d(&c5, &triv, &wind, 2, 9).unwrap().length, 5);
        assert_eq!(
            metric_d(&c5, &wind, &wind.power(2).unwrap(), 2, 9)
                .unwrap()
                .length,
            5
        );
        let s = stable_length_upper(&c5, &wind, 2, 3, 9).unwrap();
        assert_eq!((s.numerator, s.denominator), (5, 1));
        let one = make_family("one", &[]).unwrap();
        let g = walk(&one, &["*", "*"]);
        assert_eq!(
            geodesic_length(&one, &g.power(2).unwrap(), 1, 4)
                .unwrap()
                .length,
            0
        );
        assert_eq!(stable_length_upper(&one, &g, 1, 2, 4).unwrap().numerator, 0);
    }
}
