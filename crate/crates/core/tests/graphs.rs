mod common;

use pcor::derive::{LTerm, Label};
use pcor::graphs::*;
use pcor::model::{eval, ModelSpace, Structure};
use pcor::syntax::{parse, Name, Term, TermGen};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn t(s: &str) -> Term {
    parse(s).unwrap()
}

fn n(s: &str) -> Name {
    Name::new(s)
}

/// Membership in the semantics through graph homomorphisms.
fn hom_semantics(t: Term, s: &Structure, x: Name, y: Name, d: usize) -> bool {
    let h = BiGraph::of_structure(s, &[x], &[y]);
    glang(t, d).iter().any(|g| hom_exists(g, &h).unwrap())
}

/// All star-free, complement-free terms up to `size` nodes over `a`, `b`.
fn star_free_terms(size: usize) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![vec![]];
    by_size.push(["a", "b", "1", "0", "T"].iter().map(|s| t(s)).collect());
    for k in 2..=size {
        let mut out: Vec<Term> = by_size[k - 1].iter().map(|&u| Term::conv(u)).collect();
        for i in 1..k - 1 {
            let j = k - 1 - i;
            for &l in &by_size[i] {
                for &r in &by_size[j] {
                    out.push(Term::seq(l, r));
                    out.push(Term::sum(l, r));
                    out.push(Term::meet(l, r));
                }
            }
        }
        by_size.push(out);
    }
    by_size.concat()
}

#[test]
fn star_language_at_depth_two() {
    let l = glang(t("a*"), 2);
    assert_eq!(l.len(), 3);
    let sizes: Vec<usize> = {
        let mut v: Vec<usize> = l.iter().map(|g| g.edges().len()).collect();
        v.sort();
        v
    };
    assert_eq!(sizes, [0, 1, 2]);
}

#[test]
fn zero_and_top_languages() {
    assert!(glang(t("0"), 3).is_empty());
    let top = glang(t("T"), 3);
    assert_eq!(top.len(), 1);
    assert_eq!(top[0].len(), 2);
    assert!(top[0].edges().is_empty());
    assert_ne!(top[0].sources, top[0].targets);
}

#[test]
fn identity_is_unit_for_series() {
    let g = BiGraph::edge(n("a"));
    let one = BiGraph::identity(1);
    assert!(isomorphic(&series(&one, &g).unwrap(), &g));
    assert!(isomorphic(&series(&g, &one).unwrap(), &g));
    assert!(series(&BiGraph::identity(2), &g).is_err());
}

#[test]
fn series_is_associative_on_edges() {
    let (a, b, c) = (BiGraph::edge(n("a")), BiGraph::edge(n("b")), BiGraph::edge(n("c")));
    let l = series(&series(&a, &b).unwrap(), &c).unwrap();
    let r = series(&a, &series(&b, &c).unwrap()).unwrap();
    assert!(isomorphic(&l, &r));
    assert_eq!(l.len(), 4);
}

#[test]
fn four_factor_composition() {
    // a: 0→2, b: 0→1, c: 2→1, as (1 ∥ fork-free) pieces in ⟨1,1⟩ form.
    let g = meet(&BiGraph::edge(n("b")), &series(&BiGraph::edge(n("a")), &BiGraph::edge(n("c"))).unwrap());
    assert_eq!(g.len(), 3);
    assert_eq!(g.edges().len(), 3);
    let (s, x, y) = g.to_structure();
    assert!(eval(&s, t("b & a;c")).unwrap().contains(s.index_of(x).unwrap(), s.index_of(y).unwrap()));
}

#[test]
fn meet_merges_interfaces() {
    let g = meet(&BiGraph::edge(n("a")), &BiGraph::edge(n("b")));
    assert_eq!(g.len(), 2);
    assert_eq!(g.edges().len(), 2);
    let loops = meet(&BiGraph::edge(n("a")), &BiGraph::identity(1));
    assert_eq!(loops.len(), 1);
}

#[test]
fn converse_swaps_interfaces() {
    let g = BiGraph::edge(n("a")).converse();
    assert_eq!(g.sources.len(), 1);
    let h = BiGraph::edge(n("a"));
    assert_eq!(g.sources, h.targets);
    assert_eq!(g.targets, h.sources);
}

#[test]
fn homomorphism_examples() {
    let a = BiGraph::edge(n("a"));
    let aa = series(&a, &a).unwrap();
    let loop_a = meet(&a, &BiGraph::identity(1));
    // aa maps onto a loop, not the other way around.
    assert!(hom_exists(&aa, &loop_a).unwrap());
    assert!(!hom_exists(&loop_a, &aa).unwrap());
    assert!(hom_exists(&a, &a).unwrap());
    assert!(!hom_exists(&a, &BiGraph::edge(n("b"))).unwrap());
}

#[test]
fn oracle_basic_verdicts() {
    assert!(oracle_leq(t("a"), t("a"), 3).is_valid());
    match oracle_leq(t("a & b"), t("0"), 3) {
        OracleResult::Invalid(g) => {
            assert_eq!(g.len(), 2);
            assert_eq!(g.edges().len(), 2);
        }
        other => panic!("expected a counterexample, got {other:?}"),
    }
    assert!(oracle_leq(t("a"), t("b"), 3).is_invalid());
    assert!(matches!(oracle_leq(t("a*"), t("(a;a)*"), 1), OracleResult::Invalid(_)));
    assert!(matches!(oracle_leq(t("(a;a)*"), t("a*"), 3), OracleResult::ValidUpToDepth(3)));
}

#[test]
fn meet_distribution_laws_hold() {
    let eq3 = oracle_leq(t("a;(b & c)"), t("(a;b) & (a;c)"), 3);
    assert!(eq3.is_valid());
    let eq4 = oracle_leq(t("(a;b) & c"), t("a;(b & (a~;c))"), 3);
    assert!(eq4.is_valid());
    assert!(oracle_leq(t("(a;b) & (a;c)"), t("a;(b & c)"), 3).is_invalid());
}

#[test]
fn graph_semantics_matches_eval_on_small_terms() {
    let terms = star_free_terms(4);
    assert_eq!(terms.len(), 320);
    let space = ModelSpace::free(&[n("a"), n("b")]);
    let structures: Vec<Structure> = space.iter(2).collect();
    for &u in &terms {
        for s in structures.iter().step_by(3) {
            let r = eval(s, u).unwrap();
            for i in 0..s.len() {
                for j in 0..s.len() {
                    let via_graphs = hom_semantics(u, s, s.vertex(i), s.vertex(j), 0);
                    assert_eq!(r.contains(i, j), via_graphs, "{} on {}", u.render(), s.to_json());
                }
            }
        }
    }
}

#[test]
fn bounded_star_semantics_on_small_structures() {
    // Depth 2 suffices for reachability on two vertices.
    let space = ModelSpace::free(&[n("a"), n("b")]);
    for u in [t("a*"), t("(a;b)*"), t("(a & b~)*"), t("(a + b)*;a")] {
        for s in space.iter(2) {
            let r = eval(&s, u).unwrap();
            for i in 0..s.len() {
                for j in 0..s.len() {
                    assert_eq!(r.contains(i, j), hom_semantics(u, &s, s.vertex(i), s.vertex(j), 2));
                }
            }
        }
    }
}

#[test]
fn fork_join_decomposition_renders() {
    let runs = run_lang(t("a & (b;c)"), 2).unwrap();
    assert_eq!(runs.len(), 1);
    let r = &runs[0];
    assert!(r.is_run());
    let atoms = decompose_atomic(r).unwrap();
    assert_eq!(render_atomic(&atoms), "f¹₁◇a²₁◇b²₂◇c²₂◇j¹₁");
    assert!(isomorphic(&compose_atomic(1, &atoms).unwrap(), r));
}

#[test]
fn run_language_of_star() {
    let runs = run_lang(t("a*"), 3).unwrap();
    assert_eq!(runs.len(), 4);
    assert!(runs.iter().all(|r| r.is_run()));
    assert!(run_lang(t("a~"), 3).is_err());
    assert!(run_lang(t("T"), 3).is_err());
}

#[test]
fn atomic_runs_have_expected_types() {
    let f = AtomicRun { label: ELabel::Fork, n: 2, i: 2 };
    assert_eq!(f.graph().ty(), (2, 3));
    let j = AtomicRun { label: ELabel::Join, n: 1, i: 1 };
    assert_eq!(j.graph().ty(), (2, 1));
    let a = AtomicRun { label: ELabel::Sym(n("a")), n: 3, i: 2 };
    assert_eq!(a.graph().ty(), (3, 3));
    assert_eq!(a.to_string(), "a^3_2");
}

#[test]
fn left_quotient_examples() {
    let a = BiGraph::edge(n("a"));
    let b = BiGraph::edge(n("b"));
    let ab = series(&a, &b).unwrap();
    let q = left_quotient(&ab, &a);
    assert_eq!(q.len(), 1);
    assert!(isomorphic(&q[0], &b));
    assert!(left_quotient(&ab, &b).is_empty());
    let r = &run_lang(t("a & b"), 1).unwrap()[0];
    let fork = AtomicRun { label: ELabel::Fork, n: 1, i: 1 }.graph();
    let rest = left_quotient(r, &fork);
    assert_eq!(rest.len(), 1);
    assert_eq!(rest[0].ty(), (2, 1));
    assert!(isomorphic(&series(&fork, &rest[0]).unwrap(), r));
}

#[test]
fn word_language_examples() {
    let w = word_lang(t("a;(b + 1)"), 2).unwrap();
    assert_eq!(w.len(), 2);
    assert!(w.contains(&vec![n("a")]));
    assert!(w.contains(&vec![n("a"), n("b")]));
    assert_eq!(word_lang(t("a* & (a;a)"), 3).unwrap().len(), 1);
}

#[test]
fn sampled_sruns_are_valid() {
    let s = Structure::from_json(r#"{"universe":["x","y"],"rel":{"a":[["x","y"],["y","x"]],"b":[["x","x"],["x","y"],["y","x"]]}}"#)
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for u in [t("a;b"), t("a & b"), t("(a;a)* & b"), t("a*;(b & a)")] {
        let r = sample_srun(u, &s, n("x"), 2, &mut rng).unwrap();
        let r = r.unwrap_or_else(|| panic!("no run for {}", u.render()));
        assert!(r.is_valid(&s));
        let steps = r.decompose().unwrap();
        assert_eq!(steps.len(), r.run.edges().len());
    }
}

#[test]
fn sampled_runs_are_followed_by_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let space = ModelSpace::free(&[n("a"), n("b")]);
    let g = TermGen::kl(&["a", "b"]);
    let mut done = 0;
    while done < 50 {
        let s = space.structure(2, rand::Rng::gen_range(&mut rng, 0..space.count(2).unwrap()));
        let u = g.up_to(&mut rng, 6);
        let Some(run) = sample_srun(u, &s, n("1"), 2, &mut rng).unwrap() else {
            continue;
        };
        assert!(common::derivatives_follow_run(&s, LTerm::at(Label::V(n("1")), u), &run), "{}", u.render());
        done += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompositions_recompose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = TermGen::kl(&["a", "b"]).up_to(&mut rng, 7);
        for r in run_lang(u, 1).unwrap() {
            if r.edges().is_empty() {
                continue;
            }
            let atoms = decompose_atomic(&r).unwrap();
            prop_assert_eq!(atoms.len(), r.edges().len());
            prop_assert!(isomorphic(&compose_atomic(1, &atoms).unwrap(), &r));
        }
    }

    #[test]
    fn converse_is_an_involution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = TermGen::kl(&["a", "b"]).up_to(&mut rng, 6);
        for g in glang(u, 1) {
            prop_assert!(isomorphic(&g.converse().converse(), &g));
        }
    }
}
