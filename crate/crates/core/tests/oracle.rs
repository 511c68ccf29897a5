use chainlevel::catalog;
use chainlevel::oracle::{
    comparability_graph, count_lattice_points, hilbert_compare, interior_points, lattice_points,
    odd_cycle_chord_check, stable_sets, Graph, Polytope,
};
use chainlevel::{Budget, Error, Poset};

#[test]
fn lattice_counts() {
    let b = Budget::unlimited();
    let c = catalog::chain2();
    assert_eq!(count_lattice_points(&c, Polytope::Order, 2, &b).unwrap(), 6);
    assert_eq!(count_lattice_points(&c, Polytope::Chain, 2, &b).unwrap(), 6);
    for p in [c.clone(), catalog::p1(), catalog::grid6()] {
        for k in [Polytope::Order, Polytope::Chain] {
            assert_eq!(lattice_points(&p, k, 0, &b).unwrap(), vec![vec![0; p.len()]]);
        }
    }
}

#[test]
fn hilbert_sequences() {
    let b = Budget::unlimited();
    let r = hilbert_compare(&catalog::chain2(), 3, &b).unwrap();
    assert_eq!((r.order.clone(), r.chain.clone()), (vec![1, 3, 6, 10], vec![1, 3, 6, 10]));
    assert!(r.equal);
    let r = hilbert_compare(&catalog::p1(), 1, &b).unwrap();
    assert_eq!(r.order[1], 6);
    assert!(r.equal);
    let one = Poset::new(&["x"], &[] as &[(&str, &str)]).unwrap();
    assert_eq!(hilbert_compare(&one, 2, &b).unwrap().chain, vec![1, 2, 3]);
    let r = hilbert_compare(&catalog::level(4, 2, 2).unwrap(), 3, &b).unwrap();
    assert!(r.equal);
}

#[test]
fn interior() {
    let b = Budget::unlimited();
    let c = catalog::chain2();
    assert_eq!(interior_points(&c, 3, &b).unwrap(), vec![vec![1, 1]]);
    assert!(interior_points(&c, 2, &b).unwrap().is_empty());
    assert!(matches!(interior_points(&c, 0, &b), Err(Error::ParamOutOfRange(_))));
}

#[test]
fn graphs() {
    let p1 = catalog::p1();
    let g = comparability_graph(&p1);
    assert_eq!(g.edges(), vec![(0, 1)]);
    assert_eq!(stable_sets(&g).len(), 6);
    assert!(!odd_cycle_chord_check(&Graph::cycle(5)).unwrap());
    assert!(odd_cycle_chord_check(&Graph::cycle(6)).unwrap());
    let k33 = Graph::new(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
    assert!(odd_cycle_chord_check(&k33).unwrap());
    assert!(odd_cycle_chord_check(&comparability_graph(&catalog::level(4, 2, 2).unwrap())).unwrap());
    assert!(matches!(odd_cycle_chord_check(&Graph::cycle(13)), Err(Error::GraphTooLarge(13, _))));
}

#[test]
fn comparability_graphs_pass_chord_check() {
    for p in catalog::all_posets_up_to(6) {
        assert!(odd_cycle_chord_check(&comparability_graph(&p)).unwrap());
    }
}

#[test]
fn budget() {
    let p = catalog::grid6();
    let r = count_lattice_points(&p, Polytope::Order, 6, &Budget::new(50));
    assert!(matches!(r, Err(Error::BoxTooLarge { .. })));
}
