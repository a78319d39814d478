use super::{Graph, Vertex};
use crate::error::{Error, Result};
use std::collections::{HashMap, VecDeque};

/// Edge-preserving vertex function, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    domain: Graph,
    codomain: Graph,
    map: Vec<Vertex>,
}

impl GraphMap {
    pub fn new(domain: Graph, codomain: Graph, map: Vec<Vertex>) -> Result<GraphMap> {
        if map.len() != domain.n() {
            return Err(Error::Validation("map is not total".into()));
        }
        if let Some(&bad) = map.iter().find(|&&w| w >= codomain.n()) {
            return Err(Error::Validation(format!("image index {bad} out of range")));
        }
        for (a, b) in domain.edges() {
            if !codomain.has_edge(map[a], map[b]) {
                return Err(Error::Validation(format!(
                    "edge {}~{} maps to non-edge {}~{}",
                    domain.id(a),
                    domain.id(b),
                    codomain.id(map[a]),
                    codomain.id(map[b])
                )));
            }
        }
        Ok(GraphMap {
            domain,
            codomain,
            map,
        })
    }

    /// Builds from an id-to-id assignment.
    pub fn from_ids(
        domain: Graph,
        codomain: Graph,
        assign: &HashMap<String, String>,
    ) -> Result<GraphMap> {
        let mut map = Vec::with_capacity(domain.n());
        for v in 0..domain.n() {
            let w = assign
                .get(domain.id(v))
                .ok_or_else(|| Error::Validation(format!("no image for {}", domain.id(v))))?;
            map.push(codomain.vertex(w)?);
        }
        GraphMap::new(domain, codomain, map)
    }

    pub fn identity(g: &Graph) -> GraphMap {
        GraphMap {
            domain: g.clone(),
            codomain: g.clone(),
            map: (0..g.n()).collect(),
        }
    }

    /// Builds a map `f` with `f(v) = rule(id(v))` looked up by id.
    pub fn by_rule(
        domain: Graph,
        codomain: Graph,
        rule: impl Fn(&str) -> String,
    ) -> Result<GraphMap> {
        let mut map = Vec::with_capacity(domain.n());
        for v in 0..domain.n() {
            map.push(codomain.vertex(&rule(domain.id(v)))?);
        }
        GraphMap::new(domain, codomain, map)
    }

    pub fn domain(&self) -> &Graph {
        &self.domain
    }

    pub fn codomain(&self) -> &Graph {
        &self.codomain
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.map[v]
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GraphMap) -> Result<GraphMap> {
        if self.codomain != other.domain {
            return Err(Error::Validation("composition of incompatible maps".into()));
        }
        let map = self.map.iter().map(|&v| other.map[v]).collect();
        GraphMap::new(self.domain.clone(), other.codomain.clone(), map)
    }

    pub fn fiber(&self, w: Vertex) -> Vec<Vertex> {
        (0..self.domain.n()).filter(|&v| self.map[v] == w).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.n()];
        for &w in &self.map {
            hit[w] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn assignment_ids(&self) -> Vec<(String, String)> {
        (0..self.domain.n())
            .map(|v| {
                (
                    self.domain.id(v).to_string(),
                    self.codomain.id(self.map[v]).to_string(),
                )
            })
            .collect()
    }
}

/// Right action of a permutation group on a graph by automorphisms,
/// stored as its generators. `v·γ = γ[v]`.
#[derive(Clone, Debug)]
pub struct VertexAction {
    graph: Graph,
    generators: Vec<Vec<Vertex>>,
}

impl VertexAction {
    pub fn new(graph: Graph, generators: Vec<Vec<Vertex>>) -> Result<VertexAction> {
        for (i, p) in generators.iter().enumerate() {
            if p.len() != graph.n() {
                return Err(Error::Validation(format!("generator {i} has wrong length")));
            }
            let mut seen = vec![false; graph.n()];
            for &x in p {
                if x >= graph.n() || seen[x] {
                    return Err(Error::Validation(format!(
                        "generator {i} is not a permutation"
                    )));
                }
                seen[x] = true;
            }
            for (a, b) in graph.edges() {
                if !graph.has_edge(p[a], p[b]) {
                    return Err(Error::Validation(format!(
                        "generator {i} is not an automorphism"
                    )));
                }
            }
        }
        Ok(VertexAction { graph, generators })
    }

    pub fn trivial(graph: Graph) -> VertexAction {
        VertexAction {
            graph,
            generators: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn generators(&self) -> &[Vec<Vertex>] {
        &self.generators
    }

    /// Every group element, identity first, in BFS order over right
    /// multiplication by generators.
    pub fn elements(&self) -> Vec<Vec<Vertex>> {
        let id: Vec<Vertex> = (0..self.graph.n()).collect();
        let mut seen = std::collections::HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut q = VecDeque::from([id]);
        while let Some(g) = q.pop_front() {
            for s in &self.generators {
                let h: Vec<Vertex> = g.iter().map(|&x| s[x]).collect();
                if seen.insert(h.clone()) {
                    out.push(h.clone());
                    q.push_back(h);
                }
            }
        }
        out
    }

    /// Orbit partition, each orbit sorted, orbits ordered by least member.
    pub fn orbits(&self) -> Vec<Vec<Vertex>> {
        let n = self.graph.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for v in 0..n {
            if seen[v] {
                continue;
            }
            let mut orb = vec![v];
            seen[v] = true;
            let mut i = 0;
            while i < orb.len() {
                let x = orb[i];
                i += 1;
                for s in &self.generators {
                    if !seen[s[x]] {
                        seen[s[x]] = true;
                        orb.push(s[x]);
                    }
                }
            }
            orb.sort_unstable();
            out.push(orb);
        }
        out
    }

    /// True when no non-identity element fixes a non-isolated vertex.
    pub fn is_free_on_nonisolated(&self) -> bool {
        self.elements()
            .iter()
            .skip(1)
            .all(|g| (0..self.graph.n()).all(|v| self.graph.is_isolated(v) || g[v] != v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{are_isomorphic, make_family};

    #[test]
    fn rejects_non_maps() {
        let c5 = make_family("cycle", &[5]).unwrap();
        let k2 = make_family("complete", &[2]).unwrap();
        assert!(GraphMap::new(c5.clone(), k2.clone(), vec![0, 1, 0, 1, 0]).is_err());
        assert!(GraphMap::new(k2, c5, vec![0, 1]).is_ok());
    }

    #[test]
    fn shift_action_on_c15() {
        let c15 = make_family("cycle", &[15]).unwrap();
        let shift: Vec<Vertex> = (0..15)
            .map(|v| {
                let x: usize = c15.id(v).parse().unwrap();
                c15.vertex(&((x + 5) % 15).to_string()).unwrap()
            })
            .collect();
        let a = VertexAction::new(c15.clone(), vec![shift]).unwrap();
        assert_eq!(a.elements().len(), 3);
        let (q, p) = c15.quotient_by_action(&a).unwrap();
        assert!(are_isomorphic(&q, &make_family("cycle", &[5]).unwrap()));
        assert!(p.is_surjective());
        let (q, _) = c15
            .quotient_by_action(&VertexAction::trivial(c15.clone()))
            .unwrap();
        assert_eq!(q, c15);
    }

    #[test]
    fn rejects_non_automorphism() {
        let c5 = make_family("cycle", &[5]).unwrap();
        assert!(VertexAction::new(c5, vec![vec![1, 0, 2, 3, 4]]).is_err());
    }
}
