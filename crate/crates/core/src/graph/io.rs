use super::{make_family, BasedGraph, Graph, GraphMap};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub name: String,
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph, base: Option<usize>) -> GraphJson {
        GraphJson {
            name: g.name().to_string(),
            vertices: g.ids().to_vec(),
            edges: g
                .edges()
                .into_iter()
                .map(|(a, b)| [g.id(a).into(), g.id(b).into()])
                .collect(),
            base: base.map(|b| g.id(b).to_string()),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let es: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|[a, b]| (a.clone(), b.clone()))
            .collect();
        Graph::new(&self.name, &self.vertices, &es)
    }

    pub fn to_based(&self) -> Result<BasedGraph> {
        let g = self.to_graph()?;
        let base = self
            .base
            .as_deref()
            .ok_or_else(|| Error::Validation("graph has no base".into()))?;
        BasedGraph::new(g, base)
    }
}

/// A graph given inline, as a file path, or as `family:name,p1,p2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Inline(GraphJson),
    Named(String),
}

impl GraphRef {
    pub fn resolve(&self, dir: &Path) -> Result<Graph> {
        match self {
            GraphRef::Inline(j) => j.to_graph(),
            GraphRef::Named(s) => {
                if let Some(spec) = s.strip_prefix("family:") {
                    parse_family(spec)
                } else {
                    let text = std::fs::read_to_string(dir.join(s))?;
                    serde_json::from_str::<GraphJson>(&text)?.to_graph()
                }
            }
        }
    }
}

/// Parses `cycle,5` style family specs.
pub fn parse_family(spec: &str) -> Result<Graph> {
    let mut parts = spec.split(',');
    let name = parts.next().unwrap_or("").trim();
    let params = parts
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad parameter {p}")))
        })
        .collect::<Result<Vec<_>>>()?;
    make_family(name, &params)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMapJson {
    pub domain: GraphRef,
    pub codomain: GraphRef,
    pub map: BTreeMap<String, String>,
}

impl GraphMapJson {
    pub fn from_map(f: &GraphMap) -> GraphMapJson {
        GraphMapJson {
            domain: GraphRef::Inline(GraphJson::from_graph(f.domain(), None)),
            codomain: GraphRef::Inline(GraphJson::from_graph(f.codomain(), None)),
            map: f.assignment_ids().into_iter().collect(),
        }
    }

    pub fn to_map(&self, dir: &Path) -> Result<GraphMap> {
        let d = self.domain.resolve(dir)?;
        let c = self.codomain.resolve(dir)?;
        let assign = self
            .map
            .iter()
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        GraphMap::from_ids(d, c, &assign)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = make_family("one", &[]).unwrap();
        let j = GraphJson::from_graph(&g, Some(0));
        let text = serde_json::to_string(&j).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.to_graph().unwrap(), g);
        assert_eq!(back.to_based().unwrap().base, 0);
    }

    #[test]
    fn map_round_trip() {
        let c10 = make_family("cycle", &[10]).unwrap();
        let c5 = make_family("cycle", &[5]).unwrap();
        let f =
            GraphMap::by_rule(c10, c5, |s| (s.parse::<u32>().unwrap() % 5).to_string()).unwrap();
        let j = GraphMapJson::from_map(&f);
        let text = serde_json::to_string(&j).unwrap();
        let back: GraphMapJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_map(Path::new(".")).unwrap(), f);
        let named = GraphMapJson {
            domain: GraphRef::Named("family:cycle,10".into()),
            ..back
        };
        assert_eq!(named.to_map(Path::new(".")).unwrap(), f);
    }

    #[test]
    fn dot_lists_edges() {
        let g = make_family("cycle", &[3]).unwrap();
        assert_eq!(g.to_dot().matches("--").count(), 3);
    }
}
