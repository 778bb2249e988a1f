use std::collections::{BTreeSet, HashSet};

use pcor::derive::*;
use pcor::model::{eval, ModelSpace, Structure};
use pcor::syntax::{parse, Name, Term, TermGen};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn x() -> Label {
    Label::v("x")
}
fn y() -> Label {
    Label::v("y")
}
fn t(s: &str) -> Term {
    parse(s).unwrap()
}

fn two_cycle() -> Structure {
    Structure::from_json(r#"{"universe":["x","y"],"rel":{"a":[["x","y"]],"b":[["y","x"]]}}"#)
        .unwrap()
}

#[test]
fn label_vector_example() {
    let inner = LTerm::meet(LTerm::at(x(), t("b")), LTerm::at(y(), t("c")));
    let l = LTerm::seq(LTerm::meet(LTerm::at(x(), t("a")), LTerm::seq(inner, t("d"))), t("e"));
    assert_eq!(label_vector(l), vec![x(), x(), y()]);
    assert_eq!(label_vector(LTerm::at(x(), t("a"))), vec![x()]);
    assert_eq!(
        label_vector(LTerm::meet(LTerm::at(x(), t("a")), LTerm::at(y(), t("b")))),
        vec![x(), y()]
    );
}

#[test]
fn substitution_replaces_one_occurrence() {
    let l = LTerm::meet(LTerm::at(x(), t("a")), LTerm::at(x(), t("b")));
    let m = l.substitute(2, Label::Bullet);
    assert_eq!(label_vector(m), vec![x(), Label::Bullet]);
}

#[test]
fn eps_clauses() {
    assert!(eps(x(), LTerm::at(x(), t("1"))));
    assert!(!eps(y(), LTerm::at(x(), t("1"))));
    assert!(!eps(x(), LTerm::at(x(), t("a"))));
    assert!(eps(x(), LTerm::at(x(), t("a*"))));
    let m = LTerm::meet(LTerm::at(x(), t("1")), LTerm::at(x(), t("1")));
    assert!(!eps(x(), m));
    assert!(!eps(x(), LTerm::at(x(), t("1 & 1"))));
    assert!(eps(x(), LTerm::seq(LTerm::at(x(), t("1")), t("a*;1"))));
}

#[test]
fn closure_examples() {
    let cl = closure_term(t("a"), &[x(), y()]);
    let want: BTreeSet<LTerm> = [
        LTerm::at(x(), t("a")),
        LTerm::at(y(), t("a")),
        LTerm::at(x(), t("1")),
        LTerm::at(y(), t("1")),
    ]
    .into();
    assert_eq!(cl, want);
    assert_eq!(closure_term(t("0"), &[x()]), BTreeSet::from([LTerm::zero()]));
    let labels = [Label::v("1"), Label::v("2"), Label::Bullet];
    assert_eq!(closure_term(t("a"), &labels).len(), 6);
}

#[test]
fn step_clauses() {
    let s = Pointed::new(&two_cycle());
    let st = step(&s, LTerm::at(x(), t("a & b")));
    assert_eq!(st.len(), 1);
    assert_eq!(st[0].0.kind, StepKind::Fork);
    assert_eq!(st[0].1, LTerm::meet(LTerm::at(x(), t("a")), LTerm::at(x(), t("b"))));
    let st = step(&s, LTerm::at(x(), t("a")));
    assert_eq!(st.len(), 1);
    assert_eq!(st[0].1, LTerm::at(y(), t("1")));
    assert!(step(&s, LTerm::at(x(), t("1"))).is_empty());
    assert!(step(&s, LTerm::at(Label::Bullet, t("a"))).is_empty());
}

#[test]
fn example_trace_first_two_steps() {
    let s = two_cycle();
    let p = Pointed::plain(&s);
    let start = LTerm::at(x(), t("(a;((b;a) & 1);b) & 1"));
    let s1 = step(&p, start);
    assert_eq!(s1.len(), 1);
    let forked = s1[0].1;
    assert_eq!(
        forked,
        LTerm::meet(LTerm::at(x(), t("a;((b;a) & 1);b")), LTerm::at(x(), t("1")))
    );
    let want = LTerm::meet(LTerm::at(y(), t("((b;a) & 1);b")), LTerm::at(x(), t("1")));
    let s2: Vec<LTerm> = step(&p, forked)
        .into_iter()
        .map(|(_, l)| display_simplify(l))
        .collect();
    assert!(s2.contains(&want), "{s2:?}");
    let reached: HashSet<LTerm> = reach(&p, start).into_iter().map(display_simplify).collect();
    assert!(reached.contains(&want));
    let r = semantics_via_derivatives(&s, t("(a;((b;a) & 1);b) & 1"));
    assert!(r.contains(0, 0));
    let path = trace(&s, t("(a;((b;a) & 1);b) & 1"), Name::new("x"), Some(Name::new("x"))).unwrap();
    assert_eq!(path[0].0.kind, StepKind::Fork);
    assert_eq!(display_simplify(path[1].1), want);
}

#[test]
fn trace_on_edgeless_structure_is_empty() {
    let s = Structure::new(&["x"]).unwrap();
    assert!(trace(&s, t("a"), Name::new("x"), None).is_none());
    let p = Pointed::plain(&s);
    assert_eq!(reach(&p, LTerm::at(x(), t("a"))).len(), 1);
}

fn arb_structure() -> impl Strategy<Value = Structure> {
    (1usize..=3, any::<u64>()).prop_map(|(size, bits)| {
        let space = ModelSpace::free(&[Name::new("a"), Name::new("b")]);
        let total = space.count(size).unwrap();
        space.structure(size, bits as u128 % total)
    })
}

fn arb_term(max: usize) -> impl Strategy<Value = Term> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        TermGen::kl(&["a", "b"]).up_to(&mut rng, max)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn derivatives_agree_with_eval(s in arb_structure(), term in arb_term(7)) {
        prop_assert_eq!(semantics_via_derivatives(&s, term), eval(&s, term).unwrap());
    }

    #[test]
    fn reach_stays_in_closure(s in arb_structure(), term in arb_term(7)) {
        let p = Pointed::new(&s);
        let cl = closure_term(term, p.labels());
        for &v in p.labels() {
            let start = LTerm::at(v, term);
            for m in reach(&p, start) {
                prop_assert!(m == start || cl.contains(&m), "{} escapes", m);
            }
        }
    }

    #[test]
    fn closure_size_bound(term in arb_term(9), nl in 1usize..=3) {
        let labels: Vec<Label> = (0..nl).map(|i| Label::v(&i.to_string())).collect();
        let n = closure_term(term, &labels).len() as f64;
        let bound = ((2 * nl * term.size()) as f64).powi(term.iw() as i32);
        prop_assert!(n <= bound);
    }

    #[test]
    fn closure_is_closed(term in arb_term(6)) {
        let labels = [Label::v("1"), Label::v("2")];
        let cl = closure_term(term, &labels);
        for &m in &cl {
            prop_assert!(closure(m, &labels).is_subset(&cl));
        }
    }

    #[test]
    fn renaming_invariance(s in arb_structure(), term in arb_term(6)) {
        let renamed = s.rename(|v| Name::new(&format!("v{}", v)));
        prop_assert_eq!(semantics_via_derivatives(&s, term), semantics_via_derivatives(&renamed, term));
    }
}
