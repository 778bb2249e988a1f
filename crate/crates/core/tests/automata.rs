mod common;

use common::*;
use pcor::automata::*;
use pcor::model::Structure;
use pcor::syntax::{parse, parse_term, Name, Signature, Term, TermGen};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn t(s: &str) -> Term {
    parse(s).unwrap()
}

fn n(s: &str) -> Name {
    Name::new(s)
}

fn letter(universe: &[&str], edges: &[(&str, &str, &str)]) -> Structure {
    let mut s = Structure::new(universe).unwrap();
    for a in ["a", "b"] {
        s.declare(n(a));
    }
    for &(a, x, y) in edges {
        s.add_edge(a, x, y).unwrap();
    }
    s
}

fn example_word() -> Vec<Structure> {
    vec![
        letter(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]),
        letter(&["2", "3"], &[("a", "2", "3"), ("b", "3", "2")]),
    ]
}

const EXAMPLE_TERM: &str = "(a;((b;a) & 1);b) & 1";

#[test]
fn letter_counts() {
    assert_eq!(letter_count(1, 1), Some(2));
    assert_eq!(letters(1, &[n("a")]).len(), 2);
    assert_eq!(letter_count(2, 1), Some(20));
    assert_eq!(letters(2, &[n("a")]).len(), 20);
    assert_eq!(letters(2, &[n("a"), n("b")]).len(), 2 * 4 + 256);
}

#[test]
fn sparse_alphabet_count_matches() {
    let spec = AlphabetSpec {
        k: 2,
        edges: vec![n("a"), n("b")],
        conv: vec![n("a")],
        tests: vec![n("p")],
        noms: vec![n("l")],
        top: Some(n("c_top")),
    };
    let ls = spec.sparse_letters();
    assert_eq!(ls.len() as u128, spec.sparse_count());
    for l in &ls {
        assert_eq!(l.rel(n("conv_a")).unwrap(), &l.rel(n("a")).unwrap().transpose());
    }
}

#[test]
fn state_count_and_end_marker() {
    let a = build_2afa(2, t("a;b"));
    assert_eq!(a.states().len(), 1 + 2 * a.closure_len() * a.closure_len());
    for q in a.states() {
        assert!(a.delta(&q, Sym::End).is_false());
    }
    let init = a.delta(&KState::Init, Sym::Begin);
    assert!(!init.is_false());
    for c in init.clauses() {
        assert_eq!(c.len(), 1);
        assert!(c.iter().all(|(q, d)| matches!(q, KState::Ask(..)) && *d == 1));
    }
}

#[test]
fn empty_word_is_rejected() {
    let a = build_2afa(2, t("a*"));
    assert!(!membership(&a, &[]));
    assert!(!a.accepts(&[]));
}

#[test]
fn example_word_is_accepted() {
    let a = build_2afa(3, t(EXAMPLE_TERM));
    let w = example_word();
    assert!(membership(&a, &w));
    assert!(a.accepts(&w));
    assert!(glued_witness(t(EXAMPLE_TERM), &w));
    // Without the `b` edges no loop closes.
    let no_b = letter(&["1", "2"], &[("a", "1", "2")]);
    assert!(!a.accepts(&[no_b]));
    // Width 2 suffices after renaming vertex 3 to 1 in the second bag.
    let w2 = vec![
        w[0].clone(),
        letter(&["1", "2"], &[("a", "2", "1"), ("b", "1", "2")]),
    ];
    assert!(build_2afa(2, t(EXAMPLE_TERM)).accepts(&w2));
}

#[test]
fn derived_facts_match_single_letter_reach() {
    let a = build_2afa(2, t("a;a"));
    let w = [letter(&["1", "2"], &[("a", "1", "2"), ("a", "2", "2")])];
    let facts = a.derived(&w);
    let info = a.letter_info(&w[0]);
    for i in info.fit.ones() {
        assert!(info.reach[i].is_subset(&facts[0][i]));
    }
}

#[test]
fn membership_matches_glued_semantics_exhaustive() {
    let alphabet = letters(2, &[n("a")]);
    let corpus = kl_corpus(&["a"], 3);
    for &u in &corpus {
        let a = build_2afa(2, u);
        for w in words(alphabet.len(), 2) {
            let word: Vec<Structure> = w.iter().map(|&i| alphabet[i].clone()).collect();
            let want = glued_witness(u, &word);
            assert_eq!(a.accepts(&word), want, "{} on {:?}", u.render(), w);
        }
    }
}

#[test]
fn membership_matches_glued_semantics_random() {
    let alphabet = letters(2, &[n("a"), n("b")]);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = TermGen::kl(&["a", "b"]);
    for _ in 0..60 {
        let u = g.up_to(&mut rng, 7);
        let len = rng.gen_range(1..=4);
        let word: Vec<Structure> = (0..len).map(|_| alphabet.choose(&mut rng).unwrap().clone()).collect();
        let a = build_2afa(2, u);
        let want = glued_witness(u, &word);
        assert_eq!(a.accepts(&word), want, "{}", u.render());
        assert_eq!(membership(&a, &word), want, "{}", u.render());
    }
}

fn sub_alphabet(seed: u64) -> Vec<Structure> {
    let mut all = letters(2, &[n("a"), n("b")]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    all.shuffle(&mut rng);
    all.truncate(64);
    all
}

fn nfa_agrees<A: TwoAfa>(a: &A, alphabet: &[Structure], max_len: usize, random: usize, seed: u64) {
    let nfa = twoafa_to_nfa(a, alphabet, 1_000_000).expect("small automaton");
    let check = |w: &[usize]| {
        let word: Vec<Structure> = w.iter().map(|&i| alphabet[i].clone()).collect();
        assert_eq!(nfa.accepts(w), membership(a, &word), "{w:?}");
    };
    for w in words(alphabet.len(), max_len) {
        check(&w);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let len = rng.gen_range(1..=6);
        let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..alphabet.len())).collect();
        check(&w);
    }
}

#[test]
fn nfa_conversion_agrees_with_membership() {
    let alphabet = sub_alphabet(5);
    nfa_agrees(&LookBack, &alphabet, 2, 100, 1);
    nfa_agrees(&AllAndSome, &alphabet, 2, 100, 2);
    nfa_agrees(&build_2afa(2, t("a*")), &alphabet, 2, 100, 3);
}

#[test]
fn empty_language_converts_to_empty_nfa() {
    let alphabet = sub_alphabet(6);
    let nfa = twoafa_to_nfa(&build_2afa(2, t("0")), &alphabet, 10_000).unwrap();
    assert!(nfa.emptiness_witness().is_none());
}

#[test]
fn nfa_operations() {
    let alphabet = sub_alphabet(7);
    let x = twoafa_to_nfa(&LookBack, &alphabet, 10_000).unwrap();
    let y = twoafa_to_nfa(&AllAndSome, &alphabet, 10_000).unwrap();
    let cx = nfa_complement(&x);
    assert!(nfa_intersect(&x, &cx).emptiness_witness().is_none());
    let ccx = nfa_complement(&cx);
    let u = nfa_union(&x, &y);
    let i = nfa_intersect(&x, &y);
    let w = i.emptiness_witness().expect("both conditions can hold");
    assert!(x.accepts(&w) && y.accepts(&w));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let len = rng.gen_range(0..=5);
        let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..alphabet.len())).collect();
        assert_eq!(ccx.accepts(&w), x.accepts(&w));
        assert_eq!(cx.accepts(&w), !x.accepts(&w));
        assert_eq!(u.accepts(&w), x.accepts(&w) || y.accepts(&w));
        assert_eq!(i.accepts(&w), x.accepts(&w) && y.accepts(&w));
    }
}

#[test]
fn lazy_engines_agree_with_membership() {
    let alphabet = sub_alphabet(9);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for src in ["a*;b", "(a + b)*;a", "a & b", "(a;b) & 1", "(a + 1) & (b;a)"] {
        let kl = build_2afa(2, t(src));
        let horn = HornDfa::new(&kl, alphabet.clone());
        let fast = FastDfa::new(&kl, alphabet.clone());
        assert_eq!(fast.is_some(), t(src).iw() == 1, "{src}");
        for _ in 0..100 {
            let len = rng.gen_range(1..=4);
            let idx: Vec<usize> = (0..len).map(|_| rng.gen_range(0..alphabet.len())).collect();
            let word: Vec<Structure> = idx.iter().map(|&i| alphabet[i].clone()).collect();
            let want = kl.accepts(&word);
            assert_eq!(horn.accepts(&idx), want, "{src} {idx:?}");
            if let Some(f) = &fast {
                assert_eq!(f.accepts(&idx), want, "{src} {idx:?}");
            }
        }
    }
}

fn idx_of(alphabet: &[Structure], s: &Structure) -> usize {
    alphabet.iter().position(|l| l.key() == s.key()).expect("letter in alphabet")
}

#[test]
fn constraint_languages() {
    let names = [n("a")];
    let alphabet = letters(2, &names);
    let only1 = idx_of(&alphabet, &letter_with(&["1"], &[]));
    let only2 = idx_of(&alphabet, &letter_with(&["2"], &[]));
    let loop1 = idx_of(&alphabet, &letter_with(&["1"], &[("1", "1")]));
    let inac = nfa_inac(&alphabet);
    assert!(inac.accepts(&[only1, only2]));
    assert!(!inac.accepts(&[only1]));
    assert!(!inac.accepts(&[only1, loop1]));
    let incon = nfa_incon(&alphabet, &names);
    assert!(incon.accepts(&[only1, loop1]));
    assert!(!incon.accepts(&[loop1, loop1]));
    assert!(!incon.accepts(&[only1, only2]));

    let spec = AlphabetSpec {
        k: 2,
        edges: vec![n("a")],
        top: Some(n("c_top")),
        ..AlphabetSpec::default()
    };
    let sparse = spec.sparse_letters();
    let top = nfa_top(&sparse, n("c_top"));
    assert!(!top.accepts(&[0, 1, 2]));
    let mut broken = sparse[0].clone();
    broken.set_rel(n("c_top"), pcor::model::Rel::empty(broken.len()));
    let mut with_broken = sparse.clone();
    with_broken.push(broken);
    let top = nfa_top(&with_broken, n("c_top"));
    assert!(top.accepts(&[with_broken.len() - 1]));
}

fn letter_with(universe: &[&str], a_edges: &[(&str, &str)]) -> Structure {
    let mut s = Structure::new(universe).unwrap();
    s.declare(n("a"));
    for &(x, y) in a_edges {
        s.add_edge("a", x, y).unwrap();
    }
    s
}

#[test]
fn test_and_nominal_constraints() {
    let spec = AlphabetSpec {
        k: 2,
        edges: vec![n("a")],
        tests: vec![n("p")],
        noms: vec![n("l")],
        top: Some(n("c_top")),
        ..AlphabetSpec::default()
    };
    let alphabet = spec.sparse_letters();
    let tests = nfa_tests(&alphabet, &[n("p")]);
    let noms = nfa_noms(&alphabet, &[n("l")]);
    // Sparse letters always decide every test.
    for i in 0..alphabet.len() {
        assert!(!tests.accepts(&[i]));
    }
    let l_at = |v: &str| {
        alphabet
            .iter()
            .position(|s| s.len() == 1 && s.contains_vertex(n(v)) && !s.edges(n("l")).is_empty())
            .unwrap()
    };
    let plain = alphabet
        .iter()
        .position(|s| s.len() == 1 && s.contains_vertex(n("1")) && s.edges(n("l")).is_empty())
        .unwrap();
    // No loop at all, one loop, and loops on two different glued vertices.
    assert!(noms.accepts(&[plain]));
    assert!(!noms.accepts(&[l_at("1")]));
    assert!(noms.accepts(&[l_at("1"), l_at("2")]));
}

#[test]
fn quotient_is_behaviour_safe() {
    let sig = Signature::new();
    let w1 = decision_term(t("(a*;b*)*"), &sig).unwrap();
    let w2 = decision_term(t("(a + b)*"), &sig).unwrap();
    let a1 = build_2afa(2, w1);
    let a2 = build_2afa(2, w2);
    let spec = AlphabetSpec {
        k: 2,
        edges: vec![n("a"), n("b"), n("__l"), n("__r")],
        top: Some(n("c_top")),
        ..AlphabetSpec::default()
    };
    let alphabet = spec.sparse_letters();
    let inspected = [n("c_top")];
    let classes = quotient_letters(&alphabet, &[&a1, &a2], &inspected);
    assert!(classes.len() < alphabet.len());
    let sigs: Vec<String> = alphabet.iter().map(|l| letter_signature(l, &[&a1, &a2], &inspected)).collect();
    let f1 = FastDfa::new(&a1, alphabet.clone()).unwrap();
    let f2 = FastDfa::new(&a2, alphabet.clone()).unwrap();
    let c = ConstraintDfa::new(vec![Constraint::Inac, Constraint::Top(n("c_top"))], alphabet.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut pairs = 0;
    while pairs < 50 {
        let i = rng.gen_range(0..alphabet.len());
        let j = rng.gen_range(0..alphabet.len());
        if i == j || sigs[i] != sigs[j] {
            continue;
        }
        pairs += 1;
        for _ in 0..5 {
            let len = rng.gen_range(0..4);
            let pre: Vec<usize> = (0..len).map(|_| rng.gen_range(0..alphabet.len())).collect();
            let run = |d: &dyn Dfa| pre.iter().fold(d.start(), |q, &l| d.next(q, l));
            for (k, d) in [&f1 as &dyn Dfa, &f2, &c].into_iter().enumerate() {
                let q = run(d);
                assert_eq!(d.next(q, i), d.next(q, j), "dfa {k} letters {} {}", alphabet[i], alphabet[j]);
            }
        }
    }
}

fn options(mode: Mode) -> DecideOptions {
    DecideOptions {
        mode,
        ..DecideOptions::default()
    }
}

#[test]
fn decide_small_cases() {
    let sig = Signature::new();
    let v = decide(t("a"), t("a"), &sig, &options(Mode::Auto)).unwrap();
    assert_eq!(v.outcome, Outcome::Valid);
    let v = decide(t("a"), t("b"), &sig, &options(Mode::Auto)).unwrap();
    assert_eq!(v.outcome, Outcome::Invalid);
    let v = decide(t("a & b"), t("0"), &sig, &options(Mode::Oracle)).unwrap();
    assert_eq!(v.outcome, Outcome::Invalid);
    assert_eq!(v.counterexample.unwrap().structure.len(), 2);
    let v = decide(t("a;b"), t("b;a"), &sig, &options(Mode::Refute)).unwrap();
    assert_eq!(v.outcome, Outcome::Invalid);
    assert!(v.counterexample.unwrap().structure.len() <= 3);
}

#[test]
fn automata_counterexamples_certify() {
    let sig = Signature::new();
    for (l, r) in [("a", "b"), ("a~", "a"), ("a*", "a;a*"), ("a;b*", "a")] {
        let v = decide(t(l), t(r), &sig, &options(Mode::Automata)).unwrap();
        assert_eq!(v.outcome, Outcome::Invalid, "{l} <= {r}");
        let c = v.counterexample.unwrap();
        let bad = pcor::model::check_leq_on(&c.structure, t(l), t(r)).unwrap();
        assert!(bad.is_some());
    }
}

#[test]
fn automata_and_oracle_agree() {
    let sig = Signature::new();
    for (l, r) in [("a;a~;a", "a"), ("a~", "a"), ("a;b", "a"), ("a", "b~"), ("a", "a*")] {
        let o = decide(t(l), t(r), &sig, &options(Mode::Oracle)).unwrap();
        let a = decide(t(l), t(r), &sig, &options(Mode::Automata)).unwrap();
        assert_eq!(o.outcome, a.outcome, "{l} <= {r}");
    }
}

#[test]
fn refutation_respects_classes() {
    let sig = Signature::new().with_tests(["p"]).with_nominals(["l"]);
    let kat = |s: &str| parse_term(s, &sig).unwrap();
    let v = refute(kat("p;a + p^-;a"), kat("a"), &sig, 3, 1 << 20).unwrap();
    assert!(v.found.is_none());
    assert_eq!(v.up_to, 3);
    let v = refute(kat("l;T;l"), kat("l"), &sig, 3, 1 << 20).unwrap();
    assert!(v.found.is_none());
    // Without the nominal class the law fails.
    let free = Signature::new().with_tests(["p"]);
    let v = refute(parse_term("l;T;l", &free).unwrap(), t("l"), &free, 3, 1 << 20).unwrap();
    assert!(v.found.is_some());
    let v = refute(kat("p"), kat("1"), &sig, 2, 1 << 20).unwrap();
    assert!(v.found.is_none());
    let v = refute(kat("1"), kat("p"), &sig, 2, 1 << 20).unwrap();
    assert!(v.found.is_some());
    let v = refute(kat("a"), kat("p"), &sig, 2, 1 << 20).unwrap();
    assert!(v.found.is_some());
}

#[test]
fn verdict_json_shape() {
    let sig = Signature::new();
    let v = decide(t("a"), t("b"), &sig, &options(Mode::Auto)).unwrap();
    let j = v.to_json();
    assert_eq!(j["verdict"], "invalid");
    assert!(j["counterexample"]["structure"].is_object());
    assert!(j["counterexample"]["pair"].is_array());
    assert!(j["bounds"].is_object());
    assert_eq!(j["metadata"]["prng"], "ChaCha8");
    assert_eq!(v.outcome.exit_code(), 1);
}
