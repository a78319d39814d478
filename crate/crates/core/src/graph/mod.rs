//! Finite symmetric graphs with loops, maps between them, and group actions.
//!
//! Vertices carry string ids. Internally every vertex is a dense index into
//! the lexicographically sorted id list, so index order and id order agree.

mod family;
mod io;
mod iso;
mod map;

pub use family::{
    four, grid, kneser, make_family, one, plus, stable_kneser, torus67, x_tilde, x_tilde_action,
    xn, y69, y69_loop, GridKind,
};
pub use io::{parse_family, GraphJson, GraphMapJson, GraphRef};
pub use iso::{are_isomorphic, find_isomorphism};
pub use map::{GraphMap, VertexAction};

use crate::error::{Error, Result};
use std::collections::{HashMap, VecDeque};

/// Dense vertex index.
pub type Vertex = usize;

#[derive(Clone, Debug)]
pub struct Graph {
    name: String,
    ids: Vec<String>,
    index: HashMap<String, Vertex>,
    adj: Vec<Vec<Vertex>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.adj == other.adj
    }
}
impl Eq for Graph {}

impl Graph {
    /// Builds a graph from ids and unordered edges given by id.
    pub fn new<S: AsRef<str>>(name: &str, vertices: &[S], edges: &[(S, S)]) -> Result<Graph> {
        let ids: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut pos = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if pos.insert(id.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate vertex {id}")));
            }
        }
        let mut es = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let a = *pos
                .get(a.as_ref())
                .ok_or_else(|| Error::Lookup(a.as_ref().into()))?;
            let b = *pos
                .get(b.as_ref())
                .ok_or_else(|| Error::Lookup(b.as_ref().into()))?;
            es.push((a, b));
        }
        Ok(Graph::from_edges(name, ids, &es))
    }

    /// Builds a graph from ids (any order, distinct) and edges between
    /// positions in that list. Ids are re-sorted.
    pub fn from_edges(name: &str, ids: Vec<String>, edges: &[(usize, usize)]) -> Graph {
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        let mut newpos = vec![0; ids.len()];
        for (new, &old) in order.iter().enumerate() {
            newpos[old] = new;
        }
        let sorted: Vec<String> = order.iter().map(|&o| ids[o].clone()).collect();
        let mut adj = vec![Vec::new(); sorted.len()];
        for &(a, b) in edges {
            let (a, b) = (newpos[a], newpos[b]);
            adj[a].push(b);
            if a != b {
                adj[b].push(a);
            }
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
            l.dedup();
        }
        let index = sorted
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Graph {
            name: name.to_string(),
            ids: sorted,
            index,
            adj,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Graph {
        self.name = name.to_string();
        self
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: Vertex) -> &str {
        &self.ids[v]
    }

    pub fn vertex(&self, id: &str) -> Result<Vertex> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Lookup(id.to_string()))
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn has_loop(&self, v: Vertex) -> bool {
        self.has_edge(v, v)
    }

    /// Unordered edges `(a, b)` with `a <= b`, loops included.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for &b in &self.adj[a] {
                if a <= b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn is_isolated(&self, v: Vertex) -> bool {
        self.adj[v].is_empty()
    }

    /// N_s(v): endpoints of walks of length exactly s starting at v.
    pub fn neighborhood(&self, v: Vertex, s: usize) -> Vec<Vertex> {
        let mut cur = vec![false; self.n()];
        cur[v] = true;
        for _ in 0..s {
            let mut next = vec![false; self.n()];
            for (x, &on) in cur.iter().enumerate() {
                if on {
                    for &y in &self.adj[x] {
                        next[y] = true;
                    }
                }
            }
            cur = next;
        }
        (0..self.n()).filter(|&x| cur[x]).collect()
    }

    /// Hop distances from `v` (usize::MAX when unreachable).
    pub fn distances(&self, v: Vertex) -> Vec<usize> {
        let mut d = vec![usize::MAX; self.n()];
        d[v] = 0;
        let mut q = VecDeque::from([v]);
        while let Some(x) = q.pop_front() {
            for &y in &self.adj[x] {
                if d[y] == usize::MAX {
                    d[y] = d[x] + 1;
                    q.push_back(y);
                }
            }
        }
        d
    }

    /// Vertices in the connected component of `v`, sorted.
    pub fn component(&self, v: Vertex) -> Vec<Vertex> {
        let d = self.distances(v);
        (0..self.n()).filter(|&x| d[x] != usize::MAX).collect()
    }

    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for v in 0..self.n() {
            if !seen[v] {
                let c = self.component(v);
                for &x in &c {
                    seen[x] = true;
                }
                out.push(c);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.component(0).len() == self.n()
    }

    /// True when the graph admits a 2-colouring (no odd closed walk).
    pub fn is_bipartite(&self) -> bool {
        let mut col = vec![u8::MAX; self.n()];
        for s in 0..self.n() {
            if col[s] != u8::MAX {
                continue;
            }
            col[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &self.adj[x] {
                    if col[y] == u8::MAX {
                        col[y] = 1 - col[x];
                        q.push_back(y);
                    } else if col[y] == col[x] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Induced subgraph on `keep`, ids preserved.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let ids = keep.iter().map(|&v| self.ids[v].clone()).collect();
        let mut es = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                if pos[w] != usize::MAX && i <= pos[w] {
                    es.push((i, pos[w]));
                }
            }
        }
        Graph::from_edges(&self.name, ids, &es)
    }

    /// Direct (categorical) product; vertex `(a,b)` per pair.
    pub fn product(&self, h: &Graph) -> Graph {
        let m = h.n();
        let ids = (0..self.n() * m)
            .map(|k| format!("({},{})", self.ids[k / m], h.ids[k % m]))
            .collect();
        let mut es = Vec::new();
        for x in 0..self.n() {
            for &x2 in &self.adj[x] {
                for y in 0..m {
                    for &y2 in &h.adj[y] {
                        let (a, b) = (x * m + y, x2 * m + y2);
                        if a <= b {
                            es.push((a, b));
                        }
                    }
                }
            }
        }
        Graph::from_edges(&format!("{}x{}", self.name, h.name), ids, &es)
    }

    /// Product together with the factor coordinates of each product vertex.
    pub fn product_parts(&self, h: &Graph) -> (Graph, Vec<(Vertex, Vertex)>) {
        let p = self.product(h);
        let mut coords = vec![(0, 0); p.n()];
        for x in 0..self.n() {
            for y in 0..h.n() {
                let v = p
                    .vertex(&format!("({},{})", self.ids[x], h.ids[y]))
                    .unwrap();
                coords[v] = (x, y);
            }
        }
        (p, coords)
    }

    /// First and second projections out of `self.product(h)`.
    pub fn product_projections(&self, h: &Graph) -> Result<(GraphMap, GraphMap)> {
        let (p, coords) = self.product_parts(h);
        let f = GraphMap::new(
            p.clone(),
            self.clone(),
            coords.iter().map(|c| c.0).collect(),
        )?;
        let g = GraphMap::new(p, h.clone(), coords.iter().map(|c| c.1).collect())?;
        Ok((f, g))
    }

    /// Quotient G/R for a partition of the vertex set. The class takes the
    /// id of its least member.
    pub fn quotient(&self, classes: &[Vec<Vertex>]) -> Result<(Graph, GraphMap)> {
        let mut cls = vec![usize::MAX; self.n()];
        for (c, members) in classes.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::Validation("empty class".into()));
            }
            for &v in members {
                if v >= self.n() || cls[v] != usize::MAX {
                    return Err(Error::Validation(format!(
                        "vertex {v} not covered exactly once"
                    )));
                }
                cls[v] = c;
            }
        }
        if cls.iter().any(|&c| c == usize::MAX) {
            return Err(Error::Validation(
                "partition does not cover every vertex".into(),
            ));
        }
        let ids = classes
            .iter()
            .map(|m| {
                m.iter()
                    .map(|&v| self.ids[v].as_str())
                    .min()
                    .unwrap()
                    .to_string()
            })
            .collect::<Vec<_>>();
        let mut es = Vec::new();
        for (a, b) in self.edges() {
            es.push((cls[a], cls[b]));
        }
        let q = Graph::from_edges(&format!("{}/~", self.name), ids.clone(), &es);
        let map = (0..self.n())
            .map(|v| q.vertex(&ids[cls[v]]).unwrap())
            .collect();
        let p = GraphMap::new(self.clone(), q.clone(), map)?;
        Ok((q, p))
    }

    /// Quotient by the orbit partition of a right action.
    pub fn quotient_by_action(&self, a: &VertexAction) -> Result<(Graph, GraphMap)> {
        self.quotient(&a.orbits())
    }

    /// Removes vertices with empty neighborhood.
    pub fn delete_isolated(&self) -> Graph {
        let keep: Vec<Vertex> = (0..self.n()).filter(|&v| !self.is_isolated(v)).collect();
        self.induced(&keep)
    }

    /// Disjoint union; ids are prefixed with `0:` and `1:`.
    pub fn disjoint_union(&self, h: &Graph) -> Graph {
        let n = self.n();
        let mut ids: Vec<String> = self.ids.iter().map(|s| format!("0:{s}")).collect();
        ids.extend(h.ids.iter().map(|s| format!("1:{s}")));
        let mut es = self.edges();
        es.extend(h.edges().into_iter().map(|(a, b)| (a + n, b + n)));
        Graph::from_edges(&format!("{}+{}", self.name, h.name), ids, &es)
    }

    /// BFS spanning forest parent map rooted at `root`, visiting neighbors
    /// in vertex order. `parent[root] = root`; unreachable = usize::MAX.
    pub fn bfs_tree(&self, root: Vertex) -> (Vec<Vertex>, Vec<Vertex>) {
        let mut parent = vec![usize::MAX; self.n()];
        parent[root] = root;
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    order.push(y);
                }
            }
        }
        (parent, order)
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut s = format!("graph \"{}\" {{\n", self.name.replace('"', "'"));
        for id in &self.ids {
            s.push_str(&format!("  \"{id}\";\n"));
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("  \"{}\" -- \"{}\";\n", self.ids[a], self.ids[b]));
        }
        s.push_str("}\n");
        s
    }
}

/// A graph with a chosen base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedGraph {
    pub graph: Graph,
    pub base: Vertex,
}

impl BasedGraph {
    pub fn new(graph: Graph, base: &str) -> Result<BasedGraph> {
        let base = graph.vertex(base)?;
        Ok(BasedGraph { graph, base })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Graph {
        make_family("cycle", &[n]).unwrap()
    }

    #[test]
    fn neighborhoods_of_c5() {
        let g = c(5);
        let v = g.vertex("0").unwrap();
        let ids = |s: Vec<Vertex>| {
            s.into_iter()
                .map(|x| g.id(x).to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(ids(g.neighborhood(v, 1)), ["1", "4"]);
        assert_eq!(ids(g.neighborhood(v, 2)), ["0", "2", "3"]);
        let one = one();
        assert_eq!(one.neighborhood(0, 3), vec![0]);
    }

    #[test]
    fn products() {
        let k2 = make_family("complete", &[2]).unwrap();
        assert!(are_isomorphic(&k2.product(&c(5)), &c(10)));
        let p6 = k2.product(&c(6));
        assert_eq!(p6.components().len(), 2);
        assert!(p6
            .components()
            .iter()
            .all(|comp| are_isomorphic(&p6.induced(comp), &c(6))));
        assert!(are_isomorphic(&one().product(&c(7)), &c(7)));
    }

    #[test]
    fn quotients() {
        let g = c(6);
        let cl: Vec<Vec<Vertex>> = (0..3)
            .map(|i| {
                vec![
                    g.vertex(&i.to_string()).unwrap(),
                    g.vertex(&(i + 3).to_string()).unwrap(),
                ]
            })
            .collect();
        let (q, p) = g.quotient(&cl).unwrap();
        assert!(are_isomorphic(&q, &c(3)));
        assert_eq!(p.apply(g.vertex("4").unwrap()), q.vertex("1").unwrap());
        let k2 = make_family("complete", &[2]).unwrap();
        let (q, _) = k2.quotient(&[vec![0, 1]]).unwrap();
        assert!(are_isomorphic(&q, &one()));
        let disc: Vec<Vec<Vertex>> = (0..g.n()).map(|v| vec![v]).collect();
        let (q, p) = g.quotient(&disc).unwrap();
        assert_eq!(q, g);
        assert!((0..g.n()).all(|v| p.apply(v) == v));
        assert!(g.quotient(&[vec![0, 1]]).is_err());
    }

    #[test]
    fn isolated_vertices() {
        let g = Graph::new("t", &["a", "b", "c"], &[("b", "c")]).unwrap();
        assert_eq!(g.delete_isolated().n(), 2);
        assert_eq!(one().delete_isolated().n(), 1);
        let e = Graph::new::<&str>("e", &["a", "b", "c"], &[]).unwrap();
        assert_eq!(e.delete_isolated().n(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Graph::new("t", &["a", "a"], &[]).is_err());
        assert!(Graph::new("t", &["a"], &[("a", "b")]).is_err());
    }
}
