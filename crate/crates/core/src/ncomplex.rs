//! Neighborhood complexes, edge-loop groups and integral homology of
//! simplicial complexes given by their maximal faces.

use crate::covering::verify_r_covering;
use crate::error::{Error, Result};
use crate::fpgroup::{
    abelianize, identify, smith_normal_form, AbelianInvariants, GroupId, Presentation, Word,
};
use crate::fundamental::{cw_presentation, even_part};
use crate::graph::{BasedGraph, Graph, GraphMap, Vertex};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};

/// A simplicial complex stored as its maximal faces (sorted vertex
/// index lists, sorted, no face inside another).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    ids: Vec<String>,
    maximal: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Keeps the inclusion-maximal faces. Every vertex must lie in a face.
    pub fn new(ids: Vec<String>, faces: Vec<Vec<usize>>) -> Result<SimplicialComplex> {
        let mut fs: Vec<Vec<usize>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        if fs.iter().flatten().any(|&v| v >= ids.len()) {
            return Err(Error::Validation("face vertex out of range".into()));
        }
        fs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        fs.dedup();
        let mut maximal: Vec<Vec<usize>> = Vec::new();
        for f in fs {
            if !maximal.iter().any(|m| is_subset(&f, m)) {
                maximal.push(f);
            }
        }
        maximal.sort();
        let mut covered = vec![false; ids.len()];
        for &v in maximal.iter().flatten() {
            covered[v] = true;
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(Error::Validation(format!(
                "vertex {} lies in no face",
                ids[v]
            )));
        }
        Ok(SimplicialComplex { ids, maximal })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|s| s == id)
            .ok_or_else(|| Error::Lookup(id.to_string()))
    }

    pub fn maximal_faces(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    pub fn dimension(&self) -> isize {
        self.maximal
            .iter()
            .map(|f| f.len() as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    /// Face membership: the sorted set lies in some maximal face.
    pub fn contains_face(&self, f: &[usize]) -> bool {
        self.maximal.iter().any(|m| is_subset(f, m))
    }

    /// All faces with `k + 1` vertices, sorted.
    pub fn faces(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        for m in &self.maximal {
            for c in combinations(m, k + 1) {
                out.insert(c);
            }
        }
        out.into_iter().collect()
    }

    /// Vertices joined to v by a path of edges, sorted.
    pub fn component(&self, v: usize) -> Vec<usize> {
        let mut adj = vec![BTreeSet::new(); self.n()];
        for m in &self.maximal {
            for &a in m {
                for &b in m {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
        let mut seen = vec![false; self.n()];
        seen[v] = true;
        let mut q = VecDeque::from([v]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    q.push_back(y);
                }
            }
        }
        (0..self.n()).filter(|&x| seen[x]).collect()
    }

    /// The full subcomplex on the component of v.
    pub fn component_complex(&self, v: usize) -> (SimplicialComplex, Vec<usize>) {
        let comp = self.component(v);
        let pos: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let faces = self
            .maximal
            .iter()
            .filter(|m| pos.contains_key(&m[0]))
            .map(|m| m.iter().map(|x| pos[x]).collect())
            .collect();
        let ids = comp.iter().map(|&x| self.ids[x].clone()).collect();
        (
            SimplicialComplex::new(ids, faces).expect("component is a complex"),
            comp,
        )
    }

    /// Vertices of the closed star of v.
    pub fn star_vertices(&self, v: usize) -> Vec<usize> {
        let mut s = BTreeSet::new();
        for m in self.maximal.iter().filter(|m| m.binary_search(&v).is_ok()) {
            s.extend(m.iter().copied());
        }
        s.into_iter().collect()
    }

    /// Whether σ ∪ {v} is a face.
    pub fn in_star(&self, v: usize, sigma: &[usize]) -> bool {
        let mut f = sigma.to_vec();
        f.push(v);
        f.sort_unstable();
        f.dedup();
        self.contains_face(&f)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

fn combinations(s: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(s: &[usize], start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..s.len() {
            if s.len() - i < k - cur.len() {
                break;
            }
            cur.push(s[i]);
            rec(s, i + 1, k, cur, out);
            cur.pop();
        }
    }
    rec(s, 0, k, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub maximal_faces: Vec<Vec<String>>,
}

impl ComplexJson {
    pub fn from_complex(c: &SimplicialComplex) -> ComplexJson {
        ComplexJson {
            vertices: c.ids.clone(),
            maximal_faces: c
                .maximal
                .iter()
                .map(|f| f.iter().map(|&v| c.ids[v].clone()).collect())
                .collect(),
        }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        let pos: HashMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let faces = self
            .maximal_faces
            .iter()
            .map(|f| {
                f.iter()
                    .map(|s| {
                        pos.get(s.as_str())
                            .copied()
                            .ok_or_else(|| Error::Lookup(s.clone()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialComplex::new(self.vertices.clone(), faces)
    }
}

/// N_r(G): faces are the vertex sets inside some N_r(v); its vertices are
/// the non-isolated vertices of G, in the same order.
pub fn neighborhood_complex(g: &Graph, r: usize) -> Result<SimplicialComplex> {
    if r == 0 {
        return Err(Error::Param("radius must be at least 1".into()));
    }
    let keep: Vec<Vertex> = (0..g.n()).filter(|&v| !g.is_isolated(v)).collect();
    let pos: HashMap<Vertex, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let faces = keep
        .iter()
        .map(|&v| g.neighborhood(v, r).iter().map(|x| pos[x]).collect())
        .collect();
    SimplicialComplex::new(keep.iter().map(|&v| g.id(v).to_string()).collect(), faces)
}

#[derive(Clone, Debug)]
pub struct EdgeLoopPresentation {
    pub base: usize,
    /// Non-tree edges (a, b), a < b, of the base's component.
    pub chords: Vec<(usize, usize)>,
    pub presentation: Presentation,
}

/// Chords of the 1-skeleton spanning tree generate; each 2-face
/// {a, b, c} contributes the word of a → b → c → a.
pub fn edge_loop_presentation(c: &SimplicialComplex, base: usize) -> EdgeLoopPresentation {
    let edges = c.faces(1);
    let mut adj = vec![Vec::new(); c.n()];
    for e in &edges {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    let mut parent = vec![usize::MAX; c.n()];
    parent[base] = base;
    let mut q = VecDeque::from([base]);
    while let Some(x) = q.pop_front() {
        adj[x].sort_unstable();
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                q.push_back(y);
            }
        }
    }
    let chords: Vec<(usize, usize)> = edges
        .iter()
        .filter(|e| parent[e[0]] != usize::MAX && parent[e[0]] != e[1] && parent[e[1]] != e[0])
        .map(|e| (e[0], e[1]))
        .collect();
    let index: HashMap<(usize, usize), i32> = chords
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i as i32 + 1))
        .collect();
    let letter = |a: usize, b: usize| -> Option<i32> {
        index
            .get(&(a.min(b), a.max(b)))
            .map(|&g| if a < b { g } else { -g })
    };
    let mut rels: Vec<Word> = Vec::new();
    for t in c.faces(2) {
        if parent[t[0]] == usize::MAX {
            continue;
        }
        let w: Word = [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
            .iter()
            .filter_map(|&(a, b)| letter(a, b))
            .collect();
        rels.push(w);
    }
    EdgeLoopPresentation {
        base,
        chords: chords.clone(),
        presentation: Presentation::numbered(chords.len(), rels),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub h0_rank: usize,
    pub h1: AbelianInvariants,
    /// H₂ of the 2-skeleton.
    pub h2_truncated: AbelianInvariants,
}

/// Integral homology through degree 2 with lexicographic orientations.
pub fn homology(c: &SimplicialComplex) -> Homology {
    let verts = c.n();
    let edges = c.faces(1);
    let tris = c.faces(2);
    let eidx: HashMap<&[usize], usize> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    let one = BigInt::one();
    let d1: Vec<Vec<BigInt>> = edges
        .iter()
        .map(|e| {
            let mut row = vec![BigInt::from(0); verts];
            row[e[1]] += &one;
            row[e[0]] -= &one;
            row
        })
        .collect();
    let d2: Vec<Vec<BigInt>> = tris
        .iter()
        .map(|t| {
            let mut row = vec![BigInt::from(0); edges.len()];
            row[eidx[&[t[1], t[2]][..]]] += &one;
            row[eidx[&[t[0], t[2]][..]]] -= &one;
            row[eidx[&[t[0], t[1]][..]]] += &one;
            row
        })
        .collect();
    let s1 = smith_normal_form(&d1, verts, false);
    let s2 = smith_normal_form(&d2, edges.len(), false);
    let torsion = s2
        .diag
        .iter()
        .filter(|d| **d > one)
        .map(|d| d.to_u64().expect("torsion fits in u64"))
        .collect();
    Homology {
        h0_rank: verts - s1.rank,
        h1: AbelianInvariants {
            rank: edges.len() - s1.rank - s2.rank,
            torsion,
        },
        h2_truncated: AbelianInvariants {
            rank: tris.len() - s2.rank,
            torsion: vec![],
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexCoverReport {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Checks, for every vertex v of N_r(H), that the stars of the fiber
/// over v are disjoint, each maps isomorphically onto st(v), and together
/// they exhaust the preimage of st(v). Requires a 2r-covering.
pub fn complex_covering_check(p: &GraphMap, r: usize) -> Result<ComplexCoverReport> {
    if !verify_r_covering(p, 2 * r).pass {
        return Err(Error::Precondition(format!(
            "map is not a {}-covering",
            2 * r
        )));
    }
    let (g, h) = (p.domain(), p.codomain());
    let a = neighborhood_complex(g, r)?;
    let b = neighborhood_complex(h, r)?;
    let b_of: HashMap<&str, usize> = b
        .ids()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    // p on complex vertices.
    let pa: Vec<usize> = a
        .ids()
        .iter()
        .map(|s| b_of[h.id(p.apply(g.vertex(s).unwrap()))])
        .collect();
    let mut failures = Vec::new();
    for v in 0..b.n() {
        let sv = b.star_vertices(v);
        let fiber: Vec<usize> = (0..a.n()).filter(|&x| pa[x] == v).collect();
        let stars: Vec<Vec<usize>> = fiber.iter().map(|&w| a.star_vertices(w)).collect();
        for i in 0..stars.len() {
            for j in i + 1..stars.len() {
                if stars[i].iter().any(|x| stars[j].binary_search(x).is_ok()) {
                    failures.push(format!(
                        "stars of {} and {} meet",
                        a.ids()[fiber[i]],
                        a.ids()[fiber[j]]
                    ));
                }
            }
        }
        for (k, &w) in fiber.iter().enumerate() {
            let img: BTreeSet<usize> = stars[k].iter().map(|&x| pa[x]).collect();
            if img.len() != stars[k].len() || img.into_iter().collect::<Vec<_>>() != sv {
                failures.push(format!(
                    "star of {} is not mapped bijectively onto the star of {}",
                    a.ids()[w],
                    b.ids()[v]
                ));
                continue;
            }
            let back: HashMap<usize, usize> = stars[k].iter().map(|&x| (pa[x], x)).collect();
            for m in b
                .maximal_faces()
                .iter()
                .filter(|m| m.binary_search(&v).is_ok())
            {
                let mut pre: Vec<usize> = m.iter().map(|y| back[y]).collect();
                pre.sort_unstable();
                if !a.in_star(w, &pre) {
                    failures.push(format!("face over {:?} missing at {}", m, a.ids()[w]));
                }
            }
            for m in a
                .maximal_faces()
                .iter()
                .filter(|m| m.binary_search(&w).is_ok())
            {
                let mut im: Vec<usize> = m.iter().map(|&x| pa[x]).collect();
                im.sort_unstable();
                im.dedup();
                if im.len() != m.len() || !b.in_star(v, &im) {
                    failures.push(format!(
                        "face {:?} at {} does not map into the star",
                        m,
                        a.ids()[w]
                    ));
                }
            }
        }
        let union: BTreeSet<usize> = stars.iter().flatten().copied().collect();
        let pre: BTreeSet<usize> = (0..a.n())
            .filter(|&x| sv.binary_search(&pa[x]).is_ok())
            .collect();
        if union != pre {
            failures.push(format!(
                "stars over {} do not exhaust the preimage",
                b.ids()[v]
            ));
        }
    }
    Ok(ComplexCoverReport {
        pass: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeighborhoodGroupReport {
    pub complex_group: GroupId,
    pub complex_abelianization: AbelianInvariants,
    pub even_group: GroupId,
    pub even_abelianization: AbelianInvariants,
    pub pass: bool,
}

/// Compares π₁ of N_r(G) at v with the even part of π₁^{2r}(G, v).
pub fn neighborhood_group_check(
    g: &BasedGraph,
    r: usize,
    max_cosets: usize,
) -> Result<NeighborhoodGroupReport> {
    if g.graph.is_isolated(g.base) {
        return Err(Error::Precondition("base vertex is isolated".into()));
    }
    let c = neighborhood_complex(&g.graph, r)?;
    let v = c.vertex(g.graph.id(g.base))?;
    let el = edge_loop_presentation(&c, v);
    let pp = cw_presentation(g, 2 * r)?;
    let ev = even_part(&pp)?;
    let complex_group = identify(&el.presentation, max_cosets);
    let even_group = identify(&ev, max_cosets);
    let complex_abelianization = abelianize(&el.presentation);
    let even_abelianization = abelianize(&ev);
    let pass = complex_group == even_group && complex_abelianization == even_abelianization;
    Ok(NeighborhoodGroupReport {
        complex_group,
        complex_abelianization,
        even_group,
        even_abelianization,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_family;

    fn fam(name: &str, p: &[i64]) -> Graph {
        make_family(name, p).unwrap()
    }

    fn faces_by_id(c: &SimplicialComplex) -> Vec<Vec<String>> {
        ComplexJson::from_complex(c).maximal_faces
    }

    #[test]
    fn neighborhood_complexes() {
        let c = neighborhood_complex(&fam("cycle", &[5]), 1).unwrap();
        let mut f = faces_by_id(&c);
        f.sort();
        assert_eq!(
            f,
            [["0", "2"], ["0", "3"], ["1", "3"], ["1", "4"], ["2", "4"]]
        );
        let k4 = neighborhood_complex(&fam("complete", &[4]), 1).unwrap();
        assert_eq!(k4.maximal_faces().len(), 4);
        assert_eq!(k4.dimension(), 2);
        let k2 = neighborhood_complex(&fam("complete", &[2]), 1).unwrap();
        assert_eq!(
            faces_by_id(&k2),
            [vec!["1".to_string()], vec!["2".to_string()]]
        );
        let big = neighborhood_complex(&fam("cycle", &[5]), 5).unwrap();
        assert_eq!(big.maximal_faces(), &[vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn homology_of_small_complexes() {
        let h = homology(&neighborhood_complex(&fam("cycle", &[5]), 1).unwrap());
        assert_eq!((h.h0_rank, h.h1.to_string()), (1, "Z".to_string()));
        let h = homology(&neighborhood_complex(&fam("complete", &[4]), 1).unwrap());
        assert_eq!(
            (h.h1.to_string(), h.h2_truncated.to_string()),
            ("1".to_string(), "Z".to_string())
        );
        let pt = SimplicialComplex::new(vec!["x".into()], vec![vec![0]]).unwrap();
        let h = homology(&pt);
        assert_eq!(
            (h.h0_rank, h.h1.is_trivial(), h.h2_truncated.is_trivial()),
            (1, true, true)
        );
        // Six-vertex projective plane: H₁ = Z/2.
        let rp2 = SimplicialComplex::new(
            (0..6).map(|i| i.to_string()).collect(),
            vec![
                vec![0, 1, 2],
                vec![0, 2, 3],
                vec![0, 3, 4],
                vec![0, 4, 5],
                vec![0, 5, 1],
                vec![1, 2, 4],
                vec![2, 3, 5],
                vec![3, 4, 1],
                vec![4, 5, 2],
                vec![5, 1, 3],
            ],
        )
        .unwrap();
        let h = homology(&rp2);
        assert_eq!(
            (h.h1.to_string(), h.h2_truncated.to_string()),
            ("Z/2".to_string(), "1".to_string())
        );
        assert_eq!(
            abelianize(&edge_loop_presentation(&rp2, 0).presentation),
            h.h1
        );
    }

    #[test]
    fn edge_loop_groups() {
        let id = |c: &SimplicialComplex| {
            identify(&edge_loop_presentation(c, 0).presentation, 1000).to_string()
        };
        assert_eq!(
            id(&neighborhood_complex(&fam("cycle", &[5]), 1).unwrap()),
            "Z"
        );
        assert_eq!(
            id(&neighborhood_complex(&fam("complete", &[4]), 1).unwrap()),
            "1"
        );
        let tri = SimplicialComplex::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert_eq!(id(&tri), "1");
    }

    #[test]
    fn covering_of_complexes() {
        let k2 = fam("complete", &[2]);
        let k4 = fam("complete", &[4]);
        let (_, q) = k2.product_projections(&k4).unwrap();
        assert!(complex_covering_check(&q, 1).unwrap().pass);
        let c10 = fam("cycle", &[10]);
        let c5 = fam("cycle", &[5]);
        let w = GraphMap::by_rule(c10, c5.clone(), |s| {
            (s.parse::<u32>().unwrap() % 5).to_string()
        })
        .unwrap();
        assert!(complex_covering_check(&w, 1).unwrap().pass);
        let c15 = fam("cycle", &[15]);
        let w =
            GraphMap::by_rule(c15, c5, |s| (s.parse::<u32>().unwrap() % 5).to_string()).unwrap();
        assert!(complex_covering_check(&w, 3).is_err());
    }

    #[test]
    fn neighborhood_groups_match_even_parts() {
        for (name, p, base) in [
            ("cycle", vec![5], "0"),
            ("complete", vec![4], "1"),
            ("cycle", vec![6], "0"),
        ] {
            let g = BasedGraph::new(fam(name, &p), base).unwrap();
            let rep = neighborhood_group_check(&g, 1, 10_000).unwrap();
            assert!(rep.pass, "{name}{p:?}: {rep:?}");
        }
    }
}
