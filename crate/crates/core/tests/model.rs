use pcor::model::*;
use pcor::syntax::{parse, Name, Signature, parse_term};
use proptest::prelude::*;

fn n(s: &str) -> Name {
    Name::new(s)
}

fn cycle_bags() -> Vec<Structure> {
    // Bags {1,2}, {2,3}, {3,1}: `a` forward, `b` backward.
    [("1", "2"), ("2", "3"), ("3", "1")]
        .iter()
        .map(|&(x, y)| {
            let mut s = Structure::new(&[x, y]).unwrap();
            s.add_edge("a", x, y).unwrap();
            s.add_edge("b", y, x).unwrap();
            s
        })
        .collect()
}

#[test]
fn enumerate_two_vertices_one_name_gives_eighteen() {
    assert_eq!(enumerate_structures(2, &[n("a")], &[]).count(), 18);
}

#[test]
fn tests_class_excludes_non_diagonal() {
    let classes = [Class::Tests(vec![n("b")])];
    for s in enumerate_structures(2, &[n("b")], &classes) {
        assert!(s.rel(n("b")).unwrap().is_subset(&Rel::identity(s.len())));
    }
    // 2 (one vertex) + 4 (two vertices) subsets of the identity.
    assert_eq!(enumerate_structures(2, &[n("b")], &classes).count(), 6);
}

#[test]
fn glue_of_three_bags_is_a_four_chain() {
    let bags = cycle_bags();
    let g = glue(&bags);
    let s = &g.structure;
    let names: Vec<String> = s.universe().iter().map(|v| v.to_string()).collect();
    assert_eq!(names, ["1.1", "1.2", "2.3", "3.1"]);
    let a: Vec<(String, String)> = s
        .edges(n("a"))
        .into_iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
    assert_eq!(a.len(), 3);
    assert!(a.contains(&("1.1".into(), "1.2".into())));
    assert!(a.contains(&("1.2".into(), "2.3".into())));
    assert!(a.contains(&("2.3".into(), "3.1".into())));
    assert_eq!(s.edges(n("b")).len(), 3);
    assert_eq!(is_path_decomposition(&g.bag_images(&bags), s), Some(1));
}

#[test]
fn path_decomposition_rejects_broken_interval() {
    let bags = cycle_bags();
    let g = glue(&bags);
    let mut images = g.bag_images(&bags);
    images.swap(1, 2);
    assert_eq!(is_path_decomposition(&images, &g.structure), None);
}

#[test]
fn json_round_trip() {
    let text = r#"{"universe":["x","y"],"rel":{"a":[["x","y"]]}}"#;
    let s = Structure::from_json(text).unwrap();
    assert_eq!(s.to_json(), text);
    assert!(Structure::from_json(r#"{"universe":[],"rel":{}}"#).is_err());
    assert!(Structure::from_json(r#"{"universe":["x"],"rel":{"a":[["x","z"]]}}"#).is_err());
}

#[test]
fn eval_basic_operators() {
    let s = Structure::from_json(r#"{"universe":["x","y","z"],"rel":{"a":[["x","y"],["y","z"]],"b":[["y","x"]]}}"#).unwrap();
    let r = eval(&s, parse("a;a").unwrap()).unwrap();
    assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(0, 2)]);
    let r = eval(&s, parse("a*").unwrap()).unwrap();
    assert_eq!(r.len(), 6);
    let r = eval(&s, parse("a & b~").unwrap()).unwrap();
    assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(0, 1)]);
    let r = eval(&s, parse("T").unwrap()).unwrap();
    assert_eq!(r.len(), 9);
    assert!(matches!(eval(&s, parse("c").unwrap()), Err(EvalError::UnknownName(_))));
    let sig = Signature::new().with_tests(["p"]);
    let mut s2 = s.clone();
    s2.add_edge("p", "x", "x").unwrap();
    let r = eval(&s2, parse_term("p^-", &sig).unwrap()).unwrap();
    assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(1, 1), (2, 2)]);
}

#[test]
fn check_leq_reports_witness() {
    let s = Structure::from_json(r#"{"universe":["x","y"],"rel":{"a":[["x","y"]],"b":[]}}"#).unwrap();
    let w = check_leq_on(&s, parse("a").unwrap(), parse("b").unwrap()).unwrap();
    assert_eq!(w, Some((n("x"), n("y"))));
    assert_eq!(check_leq_on(&s, parse("b").unwrap(), parse("a").unwrap()).unwrap(), None);
}

#[test]
fn nominal_class() {
    let classes = [Class::Noms(vec![n("l")])];
    let all: Vec<_> = enumerate_structures(3, &[n("l")], &classes).collect();
    assert_eq!(all.len(), 1 + 2 + 3);
    let space = ModelSpace {
        noms: vec![n("l")],
        ..Default::default()
    };
    assert_eq!(space.iter(3).count(), 6);
}

fn arb_structure() -> impl Strategy<Value = Structure> {
    (1usize..=3, any::<u64>()).prop_map(|(size, bits)| {
        let space = ModelSpace::free(&[n("a"), n("b")]);
        let total = space.count(size).unwrap();
        space.structure(size, bits as u128 % total)
    })
}

proptest! {
    #[test]
    fn star_is_reflexive_transitive(s in arb_structure()) {
        let a = s.rel(n("a")).unwrap();
        let st = a.star();
        prop_assert!(Rel::identity(s.len()).is_subset(&st));
        prop_assert!(st.compose(&st).is_subset(&st));
        prop_assert!(a.is_subset(&st));
    }

    #[test]
    fn converse_laws(s in arb_structure()) {
        let l = eval(&s, parse("(a;b)~").unwrap()).unwrap();
        let r = eval(&s, parse("b~;a~").unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn json_round_trips(s in arb_structure()) {
        prop_assert_eq!(Structure::from_json(&s.to_json()).unwrap(), s);
    }
}
