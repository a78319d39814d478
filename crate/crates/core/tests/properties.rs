use discrete_homotopy::covering::{replay_witness, verify_r_covering};
use discrete_homotopy::fpgroup::{
    abelianize, concat, identify, inverse, reduce, smith_normal_form, tietze_simplify, verify_snf,
    Presentation, Word,
};
use discrete_homotopy::fundamental::cw_presentation;
use discrete_homotopy::graph::{make_family, BasedGraph, Graph, GraphJson, GraphMap};
use discrete_homotopy::homotopy::{enumerate_classes, HomotopyOracle, Walk};
use discrete_homotopy::ncomplex::{edge_loop_presentation, homology, neighborhood_complex};
use discrete_homotopy::obstruct::{find_hom, HomSearch};
use num_bigint::BigInt;
use proptest::prelude::*;

fn graph_from(n: usize, bits: &[bool]) -> Graph {
    let mut es = Vec::new();
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if bits[k] {
                es.push((a, b));
            }
            k += 1;
        }
    }
    Graph::from_edges("G", (0..n).map(|i| format!("v{i}")).collect(), &es)
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)
            .prop_map(move |bits| graph_from(n, &bits))
    })
}

/// A walk of the given length from v, steering by `choices`.
fn walk_from(g: &Graph, v: usize, choices: &[usize]) -> Option<Walk> {
    let mut vs = vec![v];
    for &c in choices {
        let nb = g.neighbors(*vs.last().unwrap());
        if nb.is_empty() {
            return None;
        }
        vs.push(nb[c % nb.len()]);
    }
    Walk::new(g, vs).ok()
}

fn brute_force_homs(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    let (n, m) = (g.n(), h.n());
    if m == 0 {
        return if n == 0 { Some(vec![]) } else { None };
    }
    let edges = g.edges();
    let mut f = vec![0usize; n];
    loop {
        if edges.iter().all(|&(a, b)| h.has_edge(f[a], f[b])) {
            return Some(f);
        }
        // Odometer with the last vertex fastest, i.e. lexicographic order.
        let mut i = n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < m {
                break;
            }
            f[i] = 0;
        }
    }
}

fn arb_word(ngens: i32, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec((1..=ngens, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(g, s)| if s { g } else { -g }).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(g in arb_graph(7)) {
        let j = GraphJson::from_graph(&g, Some(0));
        let text = serde_json::to_string(&j).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn find_hom_agrees_with_brute_force(g in arb_graph(5), h in arb_graph(4)) {
        let oracle = brute_force_homs(&g, &h);
        match find_hom(&g, &h, 1_000_000) {
            HomSearch::Found(f) => {
                prop_assert!(g.edges().iter().all(|&(a, b)| h.has_edge(f.apply(a), f.apply(b))));
                prop_assert_eq!(Some(f.as_slice().to_vec()), oracle);
            }
            HomSearch::None => prop_assert!(oracle.is_none()),
            HomSearch::Inconclusive { .. } => prop_assert!(false, "budget hit on a tiny instance"),
        }
    }

    #[test]
    fn found_maps_compose(g in arb_graph(5), h in arb_graph(4), k in arb_graph(4)) {
        if let (HomSearch::Found(f), HomSearch::Found(e)) = (find_hom(&g, &h, 1_000_000), find_hom(&h, &k, 1_000_000)) {
            let c = f.then(&e).unwrap();
            prop_assert!(g.edges().iter().all(|&(a, b)| k.has_edge(c.apply(a), c.apply(b))));
        }
    }

    #[test]
    fn identity_is_a_covering_and_failures_replay(g in arb_graph(6), r in 1usize..5) {
        prop_assert!(verify_r_covering(&GraphMap::identity(&g), r).pass);
        // Fold onto K2 by distance parity: replay whatever goes wrong.
        if let Some(&(a, _)) = g.edges().first() {
            let k2 = make_family("complete", &[2]).unwrap();
            let side: Vec<usize> = g.distances(a).iter().map(|d| d % 2).collect();
            if let Ok(f) = GraphMap::new(g.clone(), k2, side) {
                let cert = verify_r_covering(&f, r);
                if let Some(w) = &cert.witness {
                    prop_assert!(replay_witness(&f, w).unwrap());
                }
            }
        }
    }

    #[test]
    fn snf_certificate_holds(rows in 1usize..5, cols in 1usize..5, vals in proptest::collection::vec(-6i64..7, 25)) {
        let a: Vec<Vec<BigInt>> = (0..rows).map(|i| (0..cols).map(|j| BigInt::from(vals[i * 5 + j])).collect()).collect();
        let s = smith_normal_form(&a, cols, true);
        prop_assert!(verify_snf(&a, cols, &s));
    }

    #[test]
    fn tietze_preserves_abelianization(ws in proptest::collection::vec(arb_word(3, 6), 0..4)) {
        let p = Presentation::numbered(3, ws);
        prop_assert_eq!(abelianize(&tietze_simplify(&p)), abelianize(&p));
    }

    #[test]
    fn free_reduction_cancels_inverses(w in arb_word(4, 12)) {
        prop_assert!(reduce(&concat(&w, &inverse(&w))).is_empty());
    }

    #[test]
    fn edge_loop_group_abelianizes_to_h1(g in arb_graph(7), r in 1usize..3) {
        let c = neighborhood_complex(&g, r).unwrap();
        if c.n() > 0 {
            let (comp, _) = c.component_complex(0);
            let h = homology(&comp);
            prop_assert_eq!(h.h0_rank, 1);
            prop_assert_eq!(abelianize(&edge_loop_presentation(&comp, 0).presentation), h.h1);
        }
    }

    #[test]
    fn oracle_agrees_with_class_enumeration(g in arb_graph(5), r in 1usize..3, a in proptest::collection::vec(0usize..4, 0..6), b in proptest::collection::vec(0usize..4, 0..6)) {
        let (Some(wa), Some(wb)) = (walk_from(&g, 0, &a), walk_from(&g, 0, &b)) else { return Ok(()) };
        if wa.terminal() != wb.terminal() {
            return Ok(());
        }
        let o = HomotopyOracle::new(&g, 0, r, 10_000).unwrap();
        let table = enumerate_classes(&g, 0, wa.terminal(), r, 7).unwrap();
        if table.same_class(&wa, &wb) == Some(true) {
            prop_assert!(o.same_class(&wa, &wb).unwrap());
        }
        let back = wa.compose(&wa.reverse()).unwrap();
        prop_assert!(o.same_class(&back, &Walk::trivial(0)).unwrap());
    }

    #[test]
    fn cycle_groups_stabilize(n in 3usize..10, r in 1usize..12) {
        let g = BasedGraph::new(make_family("cycle", &[n as i64]).unwrap(), "0").unwrap();
        let id = identify(&cw_presentation(&g, r).unwrap().presentation, 10_000).to_string();
        let want = match (n % 2 == 1, r) {
            (true, r) if r < n => "Z",
            (true, _) => "Z/2",
            (false, r) if 2 * r < n => "Z",
            (false, _) => "1",
        };
        prop_assert_eq!(id, want);
        if n % 2 == 1 && r >= n {
            let c = neighborhood_complex(&g.graph, r).unwrap();
            prop_assert_eq!(c.maximal_faces().len(), 1);
        }
    }
}
