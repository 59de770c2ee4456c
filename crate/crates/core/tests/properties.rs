mod common;

use proptest::prelude::*;
use trifan::scheme::relation_of;
use trifan::solver::{dot, FanSystem, WeightFile, WeightKind};
use trifan::{Edge, EdgeIndexer, PartialLatinSquare, PartiteGraph, SchemeParams, Vertex};

fn graph_strategy() -> impl Strategy<Value = PartiteGraph> {
    (3usize..=4, 1usize..=4).prop_flat_map(|(k, n)| {
        let m = EdgeIndexer::new(k, n).count();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |bits| {
            let ix = EdgeIndexer::new(k, n);
            let edges = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| ix.edge(i));
            PartiteGraph::from_edges(k, n, edges).unwrap()
        })
    })
}

fn edge_strategy(k: usize, n: usize) -> impl Strategy<Value = Edge> {
    (0..k, 0..n, 0..k - 1, 0..n).prop_map(move |(ca, ia, off, ib)| {
        let cb = (ca + 1 + off) % k;
        Edge::new(Vertex::new(ca, ia), Vertex::new(cb, ib)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_is_an_involution(g in graph_strategy()) {
        let c = g.complement();
        prop_assert_eq!(c.edge_count() + g.edge_count(), g.indexer().count());
        prop_assert_eq!(c.complement(), g);
    }

    #[test]
    fn graph_text_round_trip(g in graph_strategy()) {
        prop_assert_eq!(PartiteGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn indexer_is_a_bijection(k in 3usize..=6, n in 1usize..=5, seed in any::<u64>()) {
        let ix = EdgeIndexer::new(k, n);
        let i = (seed as usize) % ix.count();
        prop_assert_eq!(ix.index(&ix.edge(i)), i);
        if i + 1 < ix.count() {
            let (a, b) = (ix.edge(i), ix.edge(i + 1));
            let key = |e: Edge| (e.a.class, e.a.index, e.b.class, e.b.index);
            prop_assert!(key(a) < key(b));
        }
    }

    #[test]
    fn relations_are_symmetric(e in edge_strategy(5, 3), f in edge_strategy(5, 3)) {
        let p = SchemeParams::graph(5, 3).unwrap();
        prop_assert_eq!(relation_of(&p, &e, &f).unwrap(), relation_of(&p, &f, &e).unwrap());
        prop_assert_eq!(relation_of(&p, &e, &f).unwrap().index() == 0, e == f);
    }

    #[test]
    fn pls_round_trips(n in 1usize..=9, cells in 0usize..=81, seed in any::<u64>()) {
        let p = PartialLatinSquare::random_with_cells(n, cells, &mut common::rng(seed)).unwrap();
        prop_assert_eq!(PartialLatinSquare::parse(&p.to_grid()).unwrap(), p.clone());
        prop_assert_eq!(PartialLatinSquare::parse(&p.to_triples()).unwrap(), p.clone());
        prop_assert!(p.build_gp().is_locally_balanced());
    }

    #[test]
    fn weight_files_round_trip(values in proptest::collection::vec(-1e6f64..1e6, 0..40)) {
        let w = WeightFile { kind: WeightKind::Triangle, k: 3, n: 2, values };
        let back = WeightFile::parse(&w.to_text()).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn operators_symmetric_and_psd(
        n in 3usize..=6,
        cells in 0usize..=6,
        seed in any::<u64>(),
        ys in proptest::collection::vec(-1.0f64..1.0, 108 * 2),
    ) {
        let g = common::random_balanced(n, cells, seed);
        let sys = FanSystem::new(&g).unwrap();
        let m = sys.edge_count();
        let (y, w) = (&ys[..m], &ys[108..108 + m]);
        let my = sys.mg_matvec(y).unwrap();
        let ky = sys.kg_matvec(y).unwrap();
        let tol = 1e-12 * m as f64;
        prop_assert!((dot(&my, w) - dot(y, &sys.mg_matvec(w).unwrap())).abs() < tol);
        prop_assert!((dot(&ky, w) - dot(y, &sys.kg_matvec(w).unwrap())).abs() < tol);
        prop_assert!(dot(y, &my) >= -1e-12);
        prop_assert!(dot(y, &ky) >= -1e-12);
        let mut full = vec![0.0; sys.projector().len()];
        for (&gid, &v) in sys.edge_ids().iter().zip(y) {
            full[gid] = v;
        }
        let ky_full = sys.projector().apply(&full).unwrap();
        let kky = sys.projector().apply(&ky_full).unwrap();
        prop_assert!(kky.iter().zip(&ky_full).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}
