//! Multi-homomorphisms, ×-homotopy of graph maps, pullback coverings and
//! the comparison of coverings over the two ends of a homotopy.

use crate::covering::{verify_r_covering, Covering};
use crate::error::{Error, Result};
use crate::fpgroup::{inverse, word_is_trivial, Decision, ElementOracle, Word};
use crate::fundamental::{cw_presentation, induced_hom, DEFAULT_MAX_COSETS};
use crate::graph::{make_family, BasedGraph, Graph, GraphMap, Vertex};
use crate::homotopy::{HomotopyOracle, Walk};
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

pub const DEFAULT_ENUM_CAP: usize = 1_000_000;

/// v ↦ a nonempty vertex set, with η(v) × η(w) inside E(H) on every edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiHom {
    pub sets: Vec<Vec<Vertex>>,
}

impl MultiHom {
    pub fn new(g: &Graph, h: &Graph, mut sets: Vec<Vec<Vertex>>) -> Result<MultiHom> {
        if sets.len() != g.n() {
            return Err(Error::Validation("one set per domain vertex".into()));
        }
        for s in sets.iter_mut() {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || s.iter().any(|&x| x >= h.n()) {
                return Err(Error::Validation(
                    "sets must be nonempty subsets of the codomain".into(),
                ));
            }
        }
        for (v, w) in g.edges() {
            for &a in &sets[v] {
                for &b in &sets[w] {
                    if !h.has_edge(a, b) {
                        return Err(Error::Validation(format!(
                            "{} x {} leaves the edge set",
                            g.id(v),
                            g.id(w)
                        )));
                    }
                }
            }
        }
        Ok(MultiHom { sets })
    }

    pub fn from_map(f: &GraphMap) -> MultiHom {
        MultiHom {
            sets: f.as_slice().iter().map(|&x| vec![x]).collect(),
        }
    }

    /// η ≤ ξ: pointwise inclusion.
    pub fn le(&self, other: &MultiHom) -> bool {
        self.sets
            .iter()
            .zip(&other.sets)
            .all(|(a, b)| a.iter().all(|x| b.binary_search(x).is_ok()))
    }

    /// p ∘ η.
    pub fn push(&self, p: &GraphMap) -> MultiHom {
        MultiHom {
            sets: self
                .sets
                .iter()
                .map(|s| {
                    let mut t: Vec<Vertex> = s.iter().map(|&x| p.apply(x)).collect();
                    t.sort_unstable();
                    t.dedup();
                    t
                })
                .collect(),
        }
    }
}

/// All multi-homomorphisms G → H, backtracking over G in vertex order.
pub fn enumerate_multihoms(g: &Graph, h: &Graph, cap: usize) -> Result<Vec<MultiHom>> {
    fn rec(
        g: &Graph,
        h: &Graph,
        v: usize,
        cur: &mut Vec<Vec<Vertex>>,
        out: &mut Vec<MultiHom>,
        work: &mut usize,
        cap: usize,
    ) -> Result<()> {
        if v == g.n() {
            out.push(MultiHom { sets: cur.clone() });
            return Ok(());
        }
        let pool: Vec<Vertex> = (0..h.n())
            .filter(|&x| !g.has_loop(v) || h.has_loop(x))
            .filter(|&x| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&w| w < v)
                    .all(|&w| cur[w].iter().all(|&y| h.has_edge(x, y)))
            })
            .collect();
        if pool.len() > 24 {
            return Err(Error::Budget(format!(
                "{} candidate images for one vertex",
                pool.len()
            )));
        }
        for mask in 1u32..(1 << pool.len()) {
            *work += 1;
            if *work > cap {
                return Err(Error::Budget(format!(
                    "multi-homomorphism enumeration exceeds {cap} steps"
                )));
            }
            let s: Vec<Vertex> = (0..pool.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pool[i])
                .collect();
            if g.has_loop(v) && !s.iter().all(|&a| s.iter().all(|&b| h.has_edge(a, b))) {
                continue;
            }
            cur.push(s);
            rec(g, h, v + 1, cur, out, work, cap)?;
            cur.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    let mut work = 0;
    rec(g, h, 0, &mut Vec::new(), &mut out, &mut work, cap)?;
    Ok(out)
}

/// Graph maps G → H whose value at v lies in `dom[v]`, in lexicographic order.
fn maps_within(
    g: &Graph,
    h: &Graph,
    dom: &[Vec<bool>],
    cap: usize,
    work: &mut usize,
    out: &mut Vec<Vec<Vertex>>,
) -> Result<()> {
    fn rec(
        g: &Graph,
        h: &Graph,
        dom: &[Vec<bool>],
        cur: &mut Vec<Vertex>,
        cap: usize,
        work: &mut usize,
        out: &mut Vec<Vec<Vertex>>,
    ) -> Result<()> {
        let v = cur.len();
        if v == g.n() {
            out.push(cur.clone());
            return Ok(());
        }
        for x in (0..h.n()).filter(|&x| dom[v][x]) {
            *work += 1;
            if *work > cap {
                return Err(Error::Budget(format!(
                    "map enumeration exceeds {cap} nodes"
                )));
            }
            if g.has_loop(v) && !h.has_loop(x) {
                continue;
            }
            if g.neighbors(v)
                .iter()
                .filter(|&&w| w < v)
                .all(|&w| h.has_edge(cur[w], x))
            {
                cur.push(x);
                rec(g, h, dom, cur, cap, work, out)?;
                cur.pop();
            }
        }
        Ok(())
    }
    rec(g, h, dom, &mut Vec::new(), cap, work, out)
}

/// Every graph map G → H, with optional pinned values.
pub fn enumerate_maps(
    g: &Graph,
    h: &Graph,
    pins: &[(Vertex, Vertex)],
    cap: usize,
) -> Result<Vec<GraphMap>> {
    let mut dom = vec![vec![true; h.n()]; g.n()];
    for &(v, x) in pins {
        dom[v] = (0..h.n()).map(|y| y == x).collect();
    }
    let mut out = Vec::new();
    maps_within(g, h, &dom, cap, &mut 0, &mut out)?;
    Ok(out
        .into_iter()
        .map(|m| GraphMap::new(g.clone(), h.clone(), m).unwrap())
        .collect())
}

/// (f × g)(E(G)) ⊆ E(H).
pub fn one_step(f: &GraphMap, g: &GraphMap) -> bool {
    let (d, c) = (f.domain(), f.codomain());
    d.edges()
        .iter()
        .all(|&(v, w)| c.has_edge(f.apply(v), g.apply(w)) && c.has_edge(f.apply(w), g.apply(v)))
}

#[derive(Clone, Debug)]
pub struct HomotopyChain {
    pub homotopic: bool,
    /// f = chain[0], ..., chain[last] = g, consecutive maps one step apart.
    pub chain: Vec<GraphMap>,
    pub explored: usize,
}

fn step_neighbors(
    d: &Graph,
    c: &Graph,
    cur: &[Vertex],
    based: Option<Vertex>,
    cap: usize,
    work: &mut usize,
) -> Result<Vec<Vec<Vertex>>> {
    let mut dom: Vec<Vec<bool>> = (0..d.n())
        .map(|w| {
            (0..c.n())
                .map(|x| d.neighbors(w).iter().all(|&v| c.has_edge(cur[v], x)))
                .collect()
        })
        .collect();
    if let Some(b) = based {
        dom[b] = (0..c.n()).map(|x| x == cur[b]).collect();
    }
    let mut next = Vec::new();
    maps_within(d, c, &dom, cap, work, &mut next)?;
    Ok(next)
}

/// Maps one step away from f, optionally fixing the value at a base vertex.
pub fn one_step_neighbors(
    f: &GraphMap,
    based: Option<Vertex>,
    cap: usize,
) -> Result<Vec<GraphMap>> {
    let (d, c) = (f.domain(), f.codomain());
    let next = step_neighbors(d, c, f.as_slice(), based, cap, &mut 0)?;
    Ok(next
        .into_iter()
        .map(|m| GraphMap::new(d.clone(), c.clone(), m).unwrap())
        .collect())
}

/// Breadth-first search through one-step homotopies. With `based`, every
/// map in the chain agrees with f at the given domain vertex.
pub fn times_homotopic(
    f: &GraphMap,
    g: &GraphMap,
    based: Option<Vertex>,
    cap: usize,
) -> Result<HomotopyChain> {
    if f.domain() != g.domain() || f.codomain() != g.codomain() {
        return Err(Error::Precondition(
            "maps have different domain or codomain".into(),
        ));
    }
    let (d, c) = (f.domain(), f.codomain());
    if let Some(b) = based {
        if f.apply(b) != g.apply(b) {
            return Err(Error::Precondition("maps disagree at the base".into()));
        }
    }
    let target = g.as_slice().to_vec();
    let mut parent: HashMap<Vec<Vertex>, Option<Vec<Vertex>>> =
        HashMap::from([(f.as_slice().to_vec(), None)]);
    let mut queue = VecDeque::from([f.as_slice().to_vec()]);
    let mut work = 0;
    let mut found = f.as_slice() == g.as_slice();
    while !found {
        let Some(cur) = queue.pop_front() else { break };
        let next = step_neighbors(d, c, &cur, based, cap, &mut work)?;
        for m in next {
            if parent.contains_key(&m) {
                continue;
            }
            if parent.len() >= cap {
                return Err(Error::Budget(format!(
                    "more than {cap} maps in the component"
                )));
            }
            parent.insert(m.clone(), Some(cur.clone()));
            if m == target {
                found = true;
                break;
            }
            queue.push_back(m);
        }
    }
    let explored = parent.len();
    if !found {
        return Ok(HomotopyChain {
            homotopic: false,
            chain: vec![],
            explored,
        });
    }
    let mut chain = vec![target];
    while let Some(Some(p)) = parent.get(chain.last().unwrap()) {
        chain.push(p.clone());
    }
    chain.reverse();
    let chain = chain
        .into_iter()
        .map(|m| GraphMap::new(d.clone(), c.clone(), m).unwrap())
        .collect();
    Ok(HomotopyChain {
        homotopic: true,
        chain,
        explored,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeWay {
    pub one_step: bool,
    pub interpolation: bool,
    pub multihom: bool,
}

impl ThreeWay {
    pub fn agree(&self) -> bool {
        self.one_step == self.interpolation && self.one_step == self.multihom
    }
}

/// The one-step condition, the interpolation G × I₁ → H, and the multi-
/// homomorphism v ↦ {f(v), g(v)}, each evaluated on its own.
pub fn three_way(f: &GraphMap, g: &GraphMap) -> Result<ThreeWay> {
    let (d, c) = (f.domain(), f.codomain());
    let i1 = make_family("interval", &[1])?;
    let (p, coords) = d.product_parts(&i1);
    let interp: Vec<Vertex> = coords
        .iter()
        .map(|&(v, t)| if t == 0 { f.apply(v) } else { g.apply(v) })
        .collect();
    let interpolation = GraphMap::new(p, c.clone(), interp).is_ok();
    let sets = (0..d.n()).map(|v| vec![f.apply(v), g.apply(v)]).collect();
    let multihom = MultiHom::new(d, c, sets).is_ok();
    Ok(ThreeWay {
        one_step: one_step(f, g),
        interpolation,
        multihom,
    })
}

/// The homotopy G × I_n → H of a chain of one-step homotopies.
pub fn homotopy_map(chain: &[GraphMap]) -> Result<GraphMap> {
    let first = chain
        .first()
        .ok_or_else(|| Error::Param("empty chain".into()))?;
    let n = chain.len() - 1;
    let (p, coords) = first
        .domain()
        .product_parts(&make_family("interval", &[n as i64])?);
    let m = coords.iter().map(|&(v, t)| chain[t].apply(v)).collect();
    GraphMap::new(p, first.codomain().clone(), m)
}

/// (φ × ψ)(E(L_n)) ⊆ E(G) for two walks with the same ends and length.
pub fn simeq2_prime_check(g: &Graph, phi: &Walk, psi: &Walk) -> Result<bool> {
    if phi.len() != psi.len() || phi.initial() != psi.initial() || phi.terminal() != psi.terminal()
    {
        return Err(Error::Precondition(
            "walks need equal lengths and endpoints".into(),
        ));
    }
    let (a, b) = (&phi.vertices, &psi.vertices);
    Ok((0..phi.len()).all(|i| g.has_edge(a[i], b[i + 1]) && g.has_edge(a[i + 1], b[i])))
}

/// f*E: the pairs (v, x) with f(v) = p(x), with its first projection,
/// re-verified as an r-covering.
pub fn pullback_cover(f: &GraphMap, p: &Covering) -> Result<(Graph, GraphMap)> {
    let (g, e) = (f.domain(), p.map().domain());
    if f.codomain() != p.map().codomain() {
        return Err(Error::Precondition(
            "map and covering have different targets".into(),
        ));
    }
    let pairs: Vec<(Vertex, Vertex)> = (0..g.n())
        .flat_map(|v| p.map().fiber(f.apply(v)).into_iter().map(move |x| (v, x)))
        .collect();
    let name = |&(v, x): &(Vertex, Vertex)| format!("({},{})", g.id(v), e.id(x));
    let ids: Vec<String> = pairs.iter().map(name).collect();
    let mut edges = Vec::new();
    for (i, &(v, x)) in pairs.iter().enumerate() {
        for (j, &(w, y)) in pairs.iter().enumerate().skip(i) {
            if g.has_edge(v, w) && e.has_edge(x, y) {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let pb = Graph::new(&format!("pullback({})", e.name()), &ids, &edges)?;
    let proj = GraphMap::by_rule(pb.clone(), g.clone(), |s| {
        let k = ids.iter().position(|t| t == s).unwrap();
        g.id(pairs[k].0).to_string()
    })?;
    if !verify_r_covering(&proj, p.r()).pass {
        return Err(Error::Internal("pullback is not a covering".into()));
    }
    Ok((pb, proj))
}

#[derive(Clone, Debug)]
pub struct EndpointIso {
    pub source: Graph,
    pub target: Graph,
    pub forward: GraphMap,
    pub backward: GraphMap,
}

/// For a 2-covering E → G × I_n, transports each vertex over (v, k) to
/// the unique vertex of its 2-neighborhood over (v, k ± 1), giving an
/// isomorphism between the restrictions to the two ends.
pub fn endpoint_pullback_iso(p: &Covering, g: &Graph, n: usize) -> Result<EndpointIso> {
    if p.r() < 2 {
        return Err(Error::Precondition("needs a 2-covering".into()));
    }
    if (0..g.n()).any(|v| g.is_isolated(v)) {
        return Err(Error::Precondition(
            "base graph has isolated vertices".into(),
        ));
    }
    let (base, coords) = g.product_parts(&make_family("interval", &[n as i64])?);
    if &base != p.map().codomain() {
        return Err(Error::Precondition("covering is not over G x I_n".into()));
    }
    let at: HashMap<(Vertex, usize), Vertex> =
        coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let e = p.map().domain();
    let end = |k: usize| -> Result<(Graph, GraphMap)> {
        let ik = GraphMap::new(
            g.clone(),
            base.clone(),
            (0..g.n()).map(|v| at[&(v, k)]).collect(),
        )?;
        pullback_cover(&ik, p)
    };
    let (src, _) = end(0)?;
    let (dst, _) = end(n)?;
    let shift = |x: Vertex, up: bool| -> Result<Vertex> {
        let (v, k) = coords[p.map().apply(x)];
        let goal = at[&(v, if up { k + 1 } else { k - 1 })];
        let c: Vec<Vertex> = e
            .neighborhood(x, 2)
            .into_iter()
            .filter(|&y| p.map().apply(y) == goal)
            .collect();
        match c.as_slice() {
            [y] => Ok(*y),
            _ => Err(Error::Internal(format!(
                "{} lifts over the next level",
                c.len()
            ))),
        }
    };
    let transport = |from: &Graph, to: &Graph, up: bool| -> Result<GraphMap> {
        let mut m = Vec::with_capacity(from.n());
        for s in from.ids() {
            let (vid, xid) = split_pair(s);
            let mut x = e.vertex(xid)?;
            for _ in 0..n {
                x = shift(x, up)?;
            }
            m.push(to.vertex(&format!("({},{})", vid, e.id(x)))?);
        }
        GraphMap::new(from.clone(), to.clone(), m)
    };
    let forward = transport(&src, &dst, true)?;
    let backward = transport(&dst, &src, false)?;
    let id_src = forward.then(&backward)?;
    let id_dst = backward.then(&forward)?;
    if id_src != GraphMap::identity(&src) || id_dst != GraphMap::identity(&dst) {
        return Err(Error::Internal("transport maps are not inverse".into()));
    }
    Ok(EndpointIso {
        source: src,
        target: dst,
        forward,
        backward,
    })
}

/// Splits "(v,x)" at the comma that balances the parentheses.
fn split_pair(s: &str) -> (&str, &str) {
    let inner = &s[1..s.len() - 1];
    let mut depth = 0i32;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return (&inner[..i], &inner[i + 1..]),
            _ => {}
        }
    }
    (inner, "")
}

#[derive(Clone, Debug, Serialize)]
pub struct PosetReport {
    pub source_size: usize,
    pub target_size: usize,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Hom(T, E) → Hom(T, H) along a 2-covering: every element has exactly
/// one lift of each element above and below its image.
pub fn poset_cover_check(t: &Graph, p: &Covering, cap: usize) -> Result<PosetReport> {
    if p.r() < 2 {
        return Err(Error::Precondition("needs a 2-covering".into()));
    }
    if (0..t.n()).any(|v| t.is_isolated(v)) {
        return Err(Error::Precondition("T has isolated vertices".into()));
    }
    let (e, h) = (p.map().domain(), p.map().codomain());
    let src = enumerate_multihoms(t, e, cap)?;
    let dst = enumerate_multihoms(t, h, cap)?;
    let pushed: Vec<MultiHom> = src.iter().map(|x| x.push(p.map())).collect();
    let mut failures = Vec::new();
    for (i, x) in src.iter().enumerate() {
        let img = &pushed[i];
        if !dst.contains(img) {
            failures.push(format!("image of element {i} is not a multi-homomorphism"));
            continue;
        }
        for y in &dst {
            let up = img.le(y);
            let down = y.le(img);
            if !up && !down {
                continue;
            }
            let count = |pred: &dyn Fn(&MultiHom) -> bool| {
                src.iter()
                    .zip(&pushed)
                    .filter(|(z, pz)| *pz == y && pred(z))
                    .count()
            };
            if up {
                let c = count(&|z| x.le(z));
                if c != 1 {
                    failures.push(format!("element {i}: {c} lifts above"));
                }
            }
            if down {
                let c = count(&|z| z.le(x));
                if c != 1 {
                    failures.push(format!("element {i}: {c} lifts below"));
                }
            }
        }
    }
    Ok(PosetReport {
        source_size: src.len(),
        target_size: dst.len(),
        pass: failures.is_empty(),
        failures,
    })
}

fn compare_images(
    a: &[Word],
    b: &[Word],
    cod: &crate::fpgroup::Presentation,
    max_cosets: usize,
) -> Decision {
    let oracle = ElementOracle::new(cod, max_cosets);
    let mut all = Decision::Yes;
    for (x, y) in a.iter().zip(b) {
        let mut w = x.clone();
        w.extend(inverse(y));
        let d = match &oracle {
            Some(o) => {
                if o.is_trivial(&w) {
                    Decision::Yes
                } else {
                    Decision::No
                }
            }
            None => word_is_trivial(cod, &w, max_cosets),
        };
        match d {
            Decision::No => return Decision::No,
            Decision::Unknown => all = Decision::Unknown,
            Decision::Yes => {}
        }
    }
    all
}

/// Whether f and g induce the same homomorphism on π₁^r at `base`.
pub fn induced_images_agree(
    f: &GraphMap,
    g: &GraphMap,
    base: Vertex,
    r: usize,
    max_cosets: usize,
) -> Result<Decision> {
    if f.apply(base) != g.apply(base) {
        return Err(Error::Precondition("maps disagree at the base".into()));
    }
    let dom = cw_presentation(
        &BasedGraph {
            graph: f.domain().clone(),
            base,
        },
        r,
    )?;
    let cod = cw_presentation(
        &BasedGraph {
            graph: f.codomain().clone(),
            base: f.apply(base),
        },
        r,
    )?;
    let a = induced_hom(f, &dom, &cod)?;
    let b = induced_hom(g, &dom, &cod)?;
    Ok(compare_images(&a, &b, &cod.presentation, max_cosets))
}

/// The zig-zag path f₀(v) → f₁(w) → f₁(v) → ... → f_n(v) along a chain.
pub fn chain_path(chain: &[GraphMap], v: Vertex) -> Result<Walk> {
    let d = chain[0].domain();
    let w = *d
        .neighbors(v)
        .first()
        .ok_or_else(|| Error::Precondition("base is isolated".into()))?;
    let mut path = vec![chain[0].apply(v)];
    for m in &chain[1..] {
        path.push(m.apply(w));
        path.push(m.apply(v));
    }
    Walk::new(chain[0].codomain(), path)
}

/// For an unbased chain from f to g: γ⁻¹ · f(α) · γ is r-homotopic to
/// g(α) for every generator α of π₁^r(G, v).
pub fn adjoint_check(chain: &[GraphMap], v: Vertex, r: usize) -> Result<Decision> {
    let (f, g) = (&chain[0], chain.last().unwrap());
    let (d, c) = (f.domain(), f.codomain());
    let gamma = chain_path(chain, v)?;
    let pp = cw_presentation(
        &BasedGraph {
            graph: d.clone(),
            base: v,
        },
        r,
    )?;
    let oracle = HomotopyOracle::new(c, g.apply(v), r, DEFAULT_MAX_COSETS)?;
    for i in 1..=pp.ngens() {
        let lp = pp.generator_loop(i);
        let fa = Walk::new(c, lp.iter().map(|&x| f.apply(x)).collect())?;
        let ga = Walk::new(c, lp.iter().map(|&x| g.apply(x)).collect())?;
        let conj = gamma.reverse().compose(&fa)?.compose(&gamma)?;
        if !oracle.same_class(&conj, &ga)? {
            return Ok(Decision::No);
        }
    }
    Ok(Decision::Yes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(name: &str, p: &[i64]) -> Graph {
        make_family(name, p).unwrap()
    }

    fn map(d: &Graph, c: &Graph, m: &[usize]) -> GraphMap {
        GraphMap::new(d.clone(), c.clone(), m.to_vec()).unwrap()
    }

    fn winding(m: usize, n: usize) -> GraphMap {
        GraphMap::by_rule(fam("cycle", &[m as i64]), fam("cycle", &[n as i64]), |s| {
            (s.parse::<usize>().unwrap() % n).to_string()
        })
        .unwrap()
    }

    #[test]
    fn times_homotopy_search() {
        let c6 = fam("cycle", &[6]);
        let k3 = fam("complete", &[3]);
        // Vertex 1 has both neighbors colored 0, so it can switch 1 -> 2.
        let f = map(&c6, &k3, &[0, 1, 0, 1, 0, 2]);
        let g = map(&c6, &k3, &[0, 2, 0, 1, 0, 2]);
        let h = times_homotopic(&f, &g, None, 10_000).unwrap();
        assert!(h.homotopic);
        assert_eq!(h.chain.len(), 2);
        assert!(times_homotopic(&f, &f, None, 10).unwrap().homotopic);
        let c5 = fam("cycle", &[5]);
        let id = GraphMap::identity(&c5);
        let flip = GraphMap::by_rule(c5.clone(), c5.clone(), |s| {
            ((5 - s.parse::<usize>().unwrap()) % 5).to_string()
        })
        .unwrap();
        let h = times_homotopic(&id, &flip, Some(0), 10_000).unwrap();
        assert!(!h.homotopic);
        assert!(!times_homotopic(&id, &flip, None, 10_000).unwrap().homotopic);
    }

    #[test]
    fn three_way_agreement() {
        let c6 = fam("cycle", &[6]);
        let k3 = fam("complete", &[3]);
        let maps = enumerate_maps(&c6, &k3, &[], 100_000).unwrap();
        assert_eq!(maps.len(), 66);
        for f in &maps[..10] {
            for g in &maps {
                let t = three_way(f, g).unwrap();
                assert!(t.agree(), "{t:?}");
            }
        }
    }

    #[test]
    fn simeq2_prime() {
        let k4 = fam("complete", &[4]);
        let w = |g: &Graph, ids: &[&str]| Walk::from_ids(g, ids).unwrap();
        assert!(
            simeq2_prime_check(&k4, &w(&k4, &["1", "2", "1"]), &w(&k4, &["1", "3", "1"])).unwrap()
        );
        let c5 = fam("cycle", &[5]);
        assert!(
            simeq2_prime_check(&c5, &w(&c5, &["0", "1", "0"]), &w(&c5, &["0", "4", "0"])).unwrap()
        );
        let c6 = fam("cycle", &[6]);
        assert!(
            !simeq2_prime_check(&c6, &w(&c6, &["0", "1", "2"]), &w(&c6, &["0", "5", "4"]))
                .is_ok_and(|b| b)
        );
        assert!(simeq2_prime_check(&c5, &w(&c5, &["0", "1"]), &w(&c5, &["0", "4"])).is_err());
    }

    #[test]
    fn pullbacks() {
        let p = Covering::certify(winding(10, 5), 2).unwrap();
        let (pb, _) = pullback_cover(&GraphMap::identity(&fam("cycle", &[5])), &p).unwrap();
        assert!(crate::graph::are_isomorphic(&pb, &fam("cycle", &[10])));
        let p = Covering::certify(winding(6, 3), 1).unwrap();
        let (pb, _) = pullback_cover(&winding(9, 3), &p).unwrap();
        assert!(crate::graph::are_isomorphic(&pb, &fam("cycle", &[18])));
        let k2 = fam("complete", &[2]);
        let c6 = fam("cycle", &[6]);
        let (_, q) = k2.product_projections(&c6).unwrap();
        let p = Covering::certify(q, 3).unwrap();
        let f = map(&k2, &c6, &[0, 1]);
        let (pb, _) = pullback_cover(&f, &p).unwrap();
        assert_eq!((pb.n(), pb.edge_count(), pb.components().len()), (4, 2, 2));
    }

    #[test]
    fn endpoint_isomorphisms() {
        let c5 = fam("cycle", &[5]);
        let base = c5.product(&fam("interval", &[1]));
        let (_, q) = fam("complete", &[2]).product_projections(&base).unwrap();
        let iso = endpoint_pullback_iso(&Covering::certify(q, 2).unwrap(), &c5, 1).unwrap();
        assert!(crate::graph::are_isomorphic(
            &iso.source,
            &fam("complete", &[2]).product(&c5)
        ));
        let base0 = c5.product(&fam("interval", &[0]));
        let (_, q) = fam("complete", &[2]).product_projections(&base0).unwrap();
        let iso = endpoint_pullback_iso(&Covering::certify(q, 2).unwrap(), &c5, 0).unwrap();
        assert_eq!(iso.forward, GraphMap::identity(&iso.source));
        // Homotopic folds of C₆ pull back isomorphic covers.
        let c6 = fam("cycle", &[6]);
        let f = map(&c6, &c6, &[0, 1, 0, 1, 0, 1]);
        let g = map(&c6, &c6, &[2, 1, 2, 1, 2, 1]);
        let chain = times_homotopic(&f, &g, None, 10_000).unwrap().chain;
        let hmap = homotopy_map(&chain).unwrap();
        let e = Covering::certify(winding(12, 6), 2).unwrap();
        let (_, proj) = pullback_cover(&hmap, &e).unwrap();
        let iso = endpoint_pullback_iso(&Covering::certify(proj, 2).unwrap(), &c6, chain.len() - 1)
            .unwrap();
        let (fe, _) = pullback_cover(&f, &e).unwrap();
        let (ge, _) = pullback_cover(&g, &e).unwrap();
        assert!(crate::graph::are_isomorphic(&iso.source, &fe));
        assert!(crate::graph::are_isomorphic(&iso.target, &ge));
    }

    #[test]
    fn poset_covers() {
        let k2 = fam("complete", &[2]);
        let (_, q) = k2.product_projections(&fam("complete", &[4])).unwrap();
        let rep = poset_cover_check(&k2, &Covering::certify(q, 2).unwrap(), 1_000_000).unwrap();
        assert!(rep.pass, "{:?}", rep.failures);
        let rep = poset_cover_check(
            &k2,
            &Covering::certify(winding(10, 5), 2).unwrap(),
            1_000_000,
        )
        .unwrap();
        assert!(rep.pass);
        assert!(rep.source_size > 0);
        let one = fam("one", &[]);
        let rep =
            poset_cover_check(&one, &Covering::certify(winding(10, 5), 2).unwrap(), 1000).unwrap();
        assert!(rep.pass && rep.source_size == 0);
    }

    #[test]
    fn induced_maps_of_homotopic_pairs() {
        let c6 = fam("cycle", &[6]);
        let k3 = fam("complete", &[3]);
        let f = map(&c6, &k3, &[0, 1, 0, 1, 0, 2]);
        let g = map(&c6, &k3, &[0, 2, 0, 1, 0, 2]);
        assert_eq!(
            induced_images_agree(&f, &g, 0, 2, 1000).unwrap(),
            Decision::Yes
        );
        let c5 = fam("cycle", &[5]);
        let flip = GraphMap::by_rule(c5.clone(), c5.clone(), |s| {
            ((5 - s.parse::<usize>().unwrap()) % 5).to_string()
        })
        .unwrap();
        assert_eq!(
            induced_images_agree(&GraphMap::identity(&c5), &flip, 0, 2, 1000).unwrap(),
            Decision::No
        );
        let chain = times_homotopic(
            &map(&c6, &k3, &[0, 1, 0, 1, 0, 1]),
            &map(&c6, &k3, &[2, 1, 2, 1, 2, 1]),
            None,
            10_000,
        )
        .unwrap()
        .chain;
        assert_eq!(adjoint_check(&chain, 0, 2).unwrap(), Decision::Yes);
    }
}
