//! Graph families.
//!
//! Naming: integer vertices are decimal strings; subsets are `{1,3}` with
//! sorted elements; grid points are `(x,y)`; products are `(a,b)`;
//! quotient classes keep the id of their least member.

use super::{Graph, GraphMap, Vertex, VertexAction};
use crate::error::{Error, Result};
use petgraph::unionfind::UnionFind;

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Param(msg.to_string()))
    }
}

fn arity(name: &str, p: &[i64], k: usize) -> Result<()> {
    need(p.len() == k, &format!("{name} takes {k} parameter(s)"))
}

/// Builds a named family. Parameters:
///
/// | name | params | graph |
/// |---|---|---|
/// | `cycle` | n ≥ 1 | C_n on Z/n |
/// | `complete` | n ≥ 1 | K_n on 1..n |
/// | `path` | n ≥ 0 | L_n on 0..n |
/// | `interval` | n ≥ 0 | I_n on 0..n, looped |
/// | `kneser` | n, k with n ≥ 2k ≥ 2 | K_{n,k} |
/// | `stable-kneser` | n, k with n ≥ 2k ≥ 2 | SK_{n,k} |
/// | `petersen` | | K_{5,2} |
/// | `one` | | single looped vertex `*` |
/// | `four` | | four looped vertices 0..3 |
/// | `grid` | n ≥ 0 | G_n |
/// | `rect` | m, k ≥ 0 | X(m,k) |
/// | `x` | n ≥ 1 | X_n |
/// | `x-tilde` | n ≥ 1 | four copies of G_n glued along the boundary |
/// | `torus67` | m, n, k | odd-girth/co-odd-girth example |
/// | `y69` | n, m, r | stable-length example, already divided by its Z action |
/// | `triangle-pendant` | | triangle a,b,t with a pendant v at t |
pub fn make_family(name: &str, p: &[i64]) -> Result<Graph> {
    match name {
        "cycle" => {
            arity(name, p, 1)?;
            need(p[0] >= 1, "cycle needs n >= 1")?;
            let n = p[0] as usize;
            let es: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Ok(Graph::from_edges(&format!("C{n}"), decimal(0, n), &es))
        }
        "complete" => {
            arity(name, p, 1)?;
            need(p[0] >= 1, "complete needs n >= 1")?;
            let n = p[0] as usize;
            let mut es = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    es.push((i, j));
                }
            }
            Ok(Graph::from_edges(&format!("K{n}"), decimal(1, n), &es))
        }
        "path" | "interval" => {
            arity(name, p, 1)?;
            need(p[0] >= 0, "path needs n >= 0")?;
            let n = p[0] as usize;
            let mut es: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
            let label = if name == "interval" {
                es.extend((0..=n).map(|i| (i, i)));
                "I"
            } else {
                "L"
            };
            Ok(Graph::from_edges(
                &format!("{label}{n}"),
                decimal(0, n + 1),
                &es,
            ))
        }
        "kneser" | "stable-kneser" => {
            arity(name, p, 2)?;
            need(p[1] >= 1 && p[0] >= 2 * p[1], "kneser needs n >= 2k >= 2")?;
            let (n, k) = (p[0] as usize, p[1] as usize);
            Ok(if name == "kneser" {
                kneser(n, k)
            } else {
                stable_kneser(n, k)
            })
        }
        "petersen" => {
            arity(name, p, 0)?;
            Ok(kneser(5, 2).with_name("Petersen"))
        }
        "one" => {
            arity(name, p, 0)?;
            Ok(one())
        }
        "four" => {
            arity(name, p, 0)?;
            Ok(four())
        }
        "grid" => {
            arity(name, p, 1)?;
            need(p[0] >= 0, "grid needs n >= 0")?;
            Ok(grid(p[0] as usize, p[0] as usize, GridKind::Square))
        }
        "rect" => {
            arity(name, p, 2)?;
            need(p[0] >= 0 && p[1] >= 0, "rect needs m, k >= 0")?;
            Ok(grid(p[0] as usize, p[1] as usize, GridKind::Rect))
        }
        "x" => {
            arity(name, p, 1)?;
            need(p[0] >= 1, "X_n needs n >= 1")?;
            xn(p[0] as usize)
        }
        "x-tilde" => {
            arity(name, p, 1)?;
            need(p[0] >= 1, "X~_n needs n >= 1")?;
            Ok(x_tilde(p[0] as usize)?.0)
        }
        "torus67" => {
            arity(name, p, 3)?;
            need(
                p[0] >= 2 && p[1] >= 1 && p[2] >= 2,
                "torus67 needs m >= 2, n >= 1, k >= 2",
            )?;
            need(p[2] % 2 == 0, "torus67 needs k even")?;
            need(p[2] * (p[0] - 1) > p[1], "torus67 needs k(m-1) > n")?;
            torus67(p[0] as usize, p[1] as usize, p[2] as usize)
        }
        "y69" => {
            arity(name, p, 3)?;
            need(
                p[0] >= 1 && p[1] >= 1 && p[2] >= 1,
                "y69 needs n, m, r >= 1",
            )?;
            need((p[0] - p[1]) % 2 == 0, "y69 needs n and m of equal parity")?;
            y69(p[0] as usize, p[1] as usize, p[2] as usize)
        }
        "triangle-pendant" => {
            arity(name, p, 0)?;
            Graph::new(
                "triangle-pendant",
                &["a", "b", "t", "v"],
                &[("a", "b"), ("a", "t"), ("b", "t"), ("t", "v")],
            )
        }
        _ => Err(Error::Param(format!("unknown family {name}"))),
    }
}

fn decimal(from: usize, count: usize) -> Vec<String> {
    (from..from + count).map(|i| i.to_string()).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

fn set_id(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn disjointness_graph(name: &str, sets: Vec<Vec<usize>>) -> Graph {
    let mut es = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].iter().all(|x| !sets[j].contains(x)) {
                es.push((i, j));
            }
        }
    }
    let ids = sets.iter().map(|s| set_id(s)).collect();
    Graph::from_edges(name, ids, &es)
}

pub fn kneser(n: usize, k: usize) -> Graph {
    disjointness_graph(&format!("K{n},{k}"), subsets(n, k))
}

/// Stable k-subsets of Z/n (no two cyclically consecutive elements).
pub fn stable_kneser(n: usize, k: usize) -> Graph {
    let sets = subsets(n, k)
        .into_iter()
        .filter(|s| {
            s.windows(2).all(|w| w[1] - w[0] >= 2)
                && !(s.len() >= 2 && s[0] == 1 && s[s.len() - 1] == n)
        })
        .collect();
    disjointness_graph(&format!("SK{n},{k}"), sets)
}

pub fn one() -> Graph {
    Graph::from_edges("1", vec!["*".into()], &[(0, 0)])
}

pub fn four() -> Graph {
    Graph::from_edges("4", decimal(0, 4), &[(0, 0), (1, 1), (2, 2), (3, 3)])
}

/// G plus a vertex `*` adjacent to every old vertex (and not to itself).
pub fn plus(g: &Graph) -> Graph {
    let mut ids = g.ids().to_vec();
    ids.push("*".into());
    let star = g.n();
    let mut es = g.edges();
    es.extend((0..g.n()).map(|v| (v, star)));
    Graph::from_edges(&format!("{}+", g.name()), ids, &es)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GridKind {
    Square,
    Rect,
}

fn pt(x: usize, y: usize) -> String {
    format!("({x},{y})")
}

/// Grid on [0,m]×[0,k] with |x−x′|+|y−y′| = 1.
pub fn grid(m: usize, k: usize, kind: GridKind) -> Graph {
    let idx = |x: usize, y: usize| x * (k + 1) + y;
    let mut ids = Vec::new();
    for x in 0..=m {
        for y in 0..=k {
            ids.push(pt(x, y));
        }
    }
    let mut es = Vec::new();
    for x in 0..=m {
        for y in 0..=k {
            if x < m {
                es.push((idx(x, y), idx(x + 1, y)));
            }
            if y < k {
                es.push((idx(x, y), idx(x, y + 1)));
            }
        }
    }
    let name = match kind {
        GridKind::Square => format!("G{m}"),
        GridKind::Rect => format!("X({m},{k})"),
    };
    Graph::from_edges(&name, ids, &es)
}

fn classes_of(uf: &UnionFind<usize>, n: usize) -> Vec<Vec<Vertex>> {
    let labels = uf.clone().into_labeling();
    let mut by: std::collections::BTreeMap<usize, Vec<Vertex>> = Default::default();
    for v in 0..n {
        by.entry(labels[v]).or_default().push(v);
    }
    let mut out: Vec<Vec<Vertex>> = by.into_values().collect();
    out.sort();
    out
}

/// X_n: G_n with boundary point (x,y) identified with (n−y,x).
pub fn xn(n: usize) -> Result<Graph> {
    let g = grid(n, n, GridKind::Square);
    let mut uf = UnionFind::new(g.n());
    for x in 0..=n {
        for y in 0..=n {
            if x == 0 || y == 0 || x == n || y == n {
                uf.union(g.vertex(&pt(x, y))?, g.vertex(&pt(n - y, x))?);
            }
        }
    }
    let (q, _) = g.quotient(&classes_of(&uf, g.n()))?;
    Ok(q.with_name(&format!("X{n}")))
}

/// X̃_n: the quotient of G_n × **4** gluing the four copies of every
/// boundary point, with its projection from G_n × **4**.
pub fn x_tilde(n: usize) -> Result<(Graph, GraphMap, Vec<((usize, usize), usize)>)> {
    let gn = grid(n, n, GridKind::Square);
    let (prod, coords) = gn.product_parts(&four());
    let xy = |v: Vertex| -> (usize, usize) {
        let id = gn.id(v);
        let inner = &id[1..id.len() - 1];
        let (a, b) = inner.split_once(',').unwrap();
        (a.parse().unwrap(), b.parse().unwrap())
    };
    let mut uf = UnionFind::new(prod.n());
    let mut first: std::collections::HashMap<Vertex, Vertex> = Default::default();
    let mut labels = Vec::with_capacity(prod.n());
    for (v, &(g, k)) in coords.iter().enumerate() {
        let (x, y) = xy(g);
        labels.push(((x, y), k));
        if x == 0 || y == 0 || x == n || y == n {
            let f = *first.entry(g).or_insert(v);
            uf.union(f, v);
        }
    }
    let (q, p) = prod.quotient(&classes_of(&uf, prod.n()))?;
    Ok((q.with_name(&format!("X~{n}")), p, labels))
}

/// The Z/4 rotation (x,y,k) ↦ (n−y,x,k+1) on X̃_n.
pub fn x_tilde_action(n: usize) -> Result<VertexAction> {
    let (q, p, labels) = x_tilde(n)?;
    let prod = p.domain();
    let mut pos = std::collections::HashMap::new();
    for (v, l) in labels.iter().enumerate() {
        pos.insert(*l, v);
    }
    let mut perm = vec![usize::MAX; q.n()];
    for v in 0..prod.n() {
        let ((x, y), k) = labels[v];
        let w = pos[&((n - y, x), (k + 1) % 4)];
        perm[p.apply(v)] = p.apply(w);
    }
    VertexAction::new(q, vec![perm])
}

/// Example graph with odd girth n and largest odd target cycle C_m.
pub fn torus67(m: usize, n: usize, k: usize) -> Result<Graph> {
    let w = (m - 1) * k;
    let idx = |x: usize, y: usize| x * (n + 1) + y;
    let mut ids = Vec::new();
    for x in 0..=w {
        for y in 0..=n {
            ids.push(pt(x, y));
        }
    }
    let mut es = Vec::new();
    for x in 0..=w {
        for y in 0..=n {
            if x < w {
                es.push((idx(x, y), idx(x + 1, y)));
            }
            if y < n && x % (m - 1) == 0 {
                es.push((idx(x, y), idx(x, y + 1)));
            }
        }
    }
    let h = Graph::from_edges("H", ids.clone(), &es);
    let hv = |x: usize, y: usize| h.vertex(&pt(x, y)).unwrap();
    let mut uf = UnionFind::new(h.n());
    for x in 0..=w {
        uf.union(hv(x, 0), hv(w - x, n));
    }
    for y in 0..=n {
        uf.union(hv(0, y), hv(w, n - y));
    }
    let (q, _) = h.quotient(&classes_of(&uf, h.n()))?;
    Ok(q.with_name(&format!("torus67({m},{n},{k})")))
}

fn y69_params(n: usize, m: usize, r: usize) -> (usize, usize) {
    let mut a = 2 * r + 1;
    while a * m < n {
        a += 2;
    }
    (a, r.max(n) + 1)
}

/// The stable-length example divided by its free Z action: X(a²m,k) with
/// (x+a,0)~(x,0), (a²m,i)~(0,i) and (a²m−x,k)~(x,k) for x ≤ (a²m−an)/2.
/// a is the least odd number > 2r with am ≥ n, k = max(r,n)+1.
pub fn y69(n: usize, m: usize, r: usize) -> Result<Graph> {
    let (a, k) = y69_params(n, m, r);
    let w = a * a * m;
    let g = grid(w, k, GridKind::Rect);
    let v = |x: usize, y: usize| g.vertex(&pt(x, y)).unwrap();
    let mut uf = UnionFind::new(g.n());
    for x in 0..=w - a {
        uf.union(v(x + a, 0), v(x, 0));
    }
    for i in 0..=k {
        uf.union(v(w, i), v(0, i));
    }
    for x in 0..=(w - a * n) / 2 {
        uf.union(v(w - x, k), v(x, k));
    }
    let (q, _) = g.quotient(&classes_of(&uf, g.n()))?;
    Ok(q.with_name(&format!("Y({n},{m},{r})")))
}

/// The closed walk of length an along the top row of `y69(n,m,r)`, as
/// ids of that graph. It represents the am-th power of a generator.
pub fn y69_loop(n: usize, m: usize, r: usize) -> Result<(Graph, Vec<String>)> {
    let (a, k) = y69_params(n, m, r);
    let g = y69(n, m, r)?;
    let w = a * a * m;
    let c = (w - a * n) / 2;
    // Ids in the quotient are least class members; find them through the
    // unquotiented grid.
    let grid_g = grid(w, k, GridKind::Rect);
    let mut uf = UnionFind::new(grid_g.n());
    let v = |x: usize, y: usize| grid_g.vertex(&pt(x, y)).unwrap();
    for x in 0..=w - a {
        uf.union(v(x + a, 0), v(x, 0));
    }
    for i in 0..=k {
        uf.union(v(w, i), v(0, i));
    }
    for x in 0..=c {
        uf.union(v(w - x, k), v(x, k));
    }
    let classes = classes_of(&uf, grid_g.n());
    let mut rep = vec![String::new(); grid_g.n()];
    for cl in &classes {
        let least = cl.iter().map(|&u| grid_g.id(u)).min().unwrap().to_string();
        for &u in cl {
            rep[u] = least.clone();
        }
    }
    let walk = (c..=w - c).map(|x| rep[v(x, k)].clone()).collect();
    Ok((g, walk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::are_isomorphic;

    #[test]
    fn petersen_shape() {
        let p = make_family("kneser", &[5, 2]).unwrap();
        assert_eq!(p.n(), 10);
        assert_eq!(p.edge_count(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
        assert!(p.vertex("{1,3}").is_ok());
    }

    #[test]
    fn small_families() {
        let c3 = make_family("cycle", &[3]).unwrap();
        assert!(are_isomorphic(&c3, &make_family("complete", &[3]).unwrap()));
        let o = make_family("one", &[]).unwrap();
        assert_eq!((o.n(), o.edge_count()), (1, 1));
        let i2 = make_family("interval", &[2]).unwrap();
        assert_eq!(i2.edge_count(), 5);
        assert!(make_family("kneser", &[3, 2]).is_err());
        assert!(make_family("torus67", &[3, 5, 3]).is_err());
        assert!(make_family("nope", &[]).is_err());
    }

    #[test]
    fn stable_kneser_sizes() {
        // SK_{5,2} is C_5; SK_{2k+2,k} is known to have chromatic number 4.
        let sk = stable_kneser(5, 2);
        assert!(are_isomorphic(&sk, &make_family("cycle", &[5]).unwrap()));
        assert_eq!(stable_kneser(6, 2).n(), 9);
    }

    #[test]
    fn g_plus_star_unlooped() {
        let g = plus(&make_family("cycle", &[5]).unwrap());
        let s = g.vertex("*").unwrap();
        assert_eq!(g.degree(s), 5);
        assert!(!g.has_loop(s));
    }

    #[test]
    fn x_n_shapes() {
        let x5 = xn(5).unwrap();
        assert_eq!(x5.n(), 16 + 5);
        assert!((0..x5.n()).all(|v| !x5.has_loop(v)));
        assert!(are_isomorphic(&xn(1).unwrap(), &one()));
        let a = x_tilde_action(5).unwrap();
        assert_eq!(a.elements().len(), 4);
        let (q, _) = a.graph().quotient_by_action(&a).unwrap();
        assert!(are_isomorphic(&q, &x5));
    }

    #[test]
    fn torus67_counts() {
        let g = make_family("torus67", &[3, 5, 4]).unwrap();
        assert_eq!(g.n(), 41);
        assert!(g.is_connected());
    }

    #[test]
    fn y69_loop_closes() {
        let (g, w) = y69_loop(3, 1, 2).unwrap();
        assert_eq!(w.len(), 16);
        assert_eq!(w.first(), w.last());
        for p in w.windows(2) {
            assert!(g.has_edge(g.vertex(&p[0]).unwrap(), g.vertex(&p[1]).unwrap()));
        }
    }
}
