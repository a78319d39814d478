use super::{Graph, Vertex};
use std::collections::HashMap;

/// Colour refinement run on both graphs with a shared palette.
fn refine(g: &Graph, h: &Graph) -> (Vec<usize>, Vec<usize>) {
    let init = |x: &Graph| -> Vec<(usize, bool)> {
        (0..x.n()).map(|v| (x.degree(v), x.has_loop(v))).collect()
    };
    let mut palette: HashMap<(usize, bool), usize> = HashMap::new();
    let mut relabel = |a: Vec<(usize, bool)>| -> Vec<usize> {
        a.into_iter()
            .map(|k| {
                let l = palette.len();
                *palette.entry(k).or_insert(l)
            })
            .collect()
    };
    let mut cg = relabel(init(g));
    let mut ch = relabel(init(h));
    loop {
        let mut pal: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut step = |x: &Graph, c: &[usize]| -> Vec<usize> {
            (0..x.n())
                .map(|v| {
                    let mut ns: Vec<usize> = x.neighbors(v).iter().map(|&w| c[w]).collect();
                    ns.sort_unstable();
                    let l = pal.len();
                    *pal.entry((c[v], ns)).or_insert(l)
                })
                .collect()
        };
        let ng = step(g, &cg);
        let nh = step(h, &ch);
        let before = distinct(&cg, &ch);
        let after = distinct(&ng, &nh);
        cg = ng;
        ch = nh;
        if after == before {
            return (cg, ch);
        }
    }
}

fn distinct(a: &[usize], b: &[usize]) -> usize {
    let mut s: Vec<usize> = a.iter().chain(b).copied().collect();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// An isomorphism g → h as a vertex map, if one exists.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<Vertex>> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return None;
    }
    let (cg, ch) = refine(g, h);
    let hist = |c: &[usize]| {
        let mut s = c.to_vec();
        s.sort_unstable();
        s
    };
    if hist(&cg) != hist(&ch) {
        return None;
    }
    // Assign vertices of g in BFS order so each has assigned neighbours.
    let mut order = Vec::new();
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        let (_, comp) = g.bfs_tree(s);
        for v in comp {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
    }
    let mut f = vec![usize::MAX; g.n()];
    let mut used = vec![false; h.n()];
    fn go(
        i: usize,
        order: &[Vertex],
        g: &Graph,
        h: &Graph,
        cg: &[usize],
        ch: &[usize],
        f: &mut [Vertex],
        used: &mut [bool],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for w in 0..h.n() {
            if used[w] || ch[w] != cg[v] {
                continue;
            }
            let ok = order[..i]
                .iter()
                .all(|&u| g.has_edge(v, u) == h.has_edge(w, f[u]));
            if ok {
                f[v] = w;
                used[w] = true;
                if go(i + 1, order, g, h, cg, ch, f, used) {
                    return true;
                }
                used[w] = false;
                f[v] = usize::MAX;
            }
        }
        false
    }
    if go(0, &order, g, h, &cg, &ch, &mut f, &mut used) {
        Some(f)
    } else {
        None
    }
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_family;

    #[test]
    fn distinguishes_and_matches() {
        let c6 = make_family("cycle", &[6]).unwrap();
        let k2 = make_family("complete", &[2]).unwrap();
        let two_c3 = make_family("cycle", &[3])
            .unwrap()
            .disjoint_union(&make_family("cycle", &[3]).unwrap());
        assert!(!are_isomorphic(&c6, &two_c3));
        let f = find_isomorphism(
            &k2.product(&make_family("cycle", &[7]).unwrap()),
            &make_family("cycle", &[14]).unwrap(),
        );
        assert!(f.is_some());
        let p = make_family("petersen", &[]).unwrap();
        let sk = crate::graph::stable_kneser(5, 2);
        assert!(!are_isomorphic(&p, &sk));
        assert!(are_isomorphic(&p, &p.clone().with_name("q")));
    }
}
