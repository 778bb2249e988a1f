use pcor::model::{eval, ModelSpace};
use pcor::syntax::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn t(s: &str) -> Term {
    parse(s).unwrap()
}

fn kat() -> Signature {
    Signature::new().with_tests(["p", "q"])
}

#[test]
fn precedence_and_associativity() {
    assert_eq!(t("a;b + c"), Term::sum(Term::seq(t("a"), t("b")), t("c")));
    assert_eq!(t("a & b;c"), Term::meet(t("a"), Term::seq(t("b"), t("c"))));
    assert_eq!(t("a + b & c"), Term::sum(t("a"), Term::meet(t("b"), t("c"))));
    assert_eq!(t("a;b*"), Term::seq(t("a"), Term::star(t("b"))));
    assert_eq!(t("a b"), t("a;b"));
    assert_eq!(t("a;b;c"), Term::seq(Term::seq(t("a"), t("b")), t("c")));
    assert_eq!(t("a~*"), Term::star(Term::conv(t("a"))));
}

#[test]
fn render_round_trips() {
    for s in ["(a*;b*)*", "a;(b & c~)", "a + b & c", "(a + b);c", "T;a + 0", "((a;b) & 1)*"] {
        let u = t(s);
        assert_eq!(t(&u.render()), u, "{s}");
    }
}

#[test]
fn parse_errors() {
    assert!(parse("a;").is_err());
    assert!(parse("(a").is_err());
    assert!(parse("a)").is_err());
    assert!(parse("p^-").is_err());
    assert!(parse_term("c_top", &Signature::new()).is_err());
    assert!(parse_term("conv_a", &Signature::new()).is_err());
    assert!(parse_term("(p;q)^- + p", &kat()).is_ok());
    assert!(parse_term("(p;a)^-", &kat()).is_err());
}

#[test]
fn measures() {
    assert_eq!(t("a").iw(), 1);
    assert_eq!(t("a & b").iw(), 2);
    assert_eq!(t("(a & b) & c").iw(), 3);
    assert_eq!(t("(a & b);(c & d)").iw(), 2);
    assert_eq!(t("(a & b)*").iw(), 2);
    assert_eq!(t("a;b*").size(), 4);
    assert!(t("a & b~").is_star_free());
    assert!(!t("a*").is_star_free());
    assert!(t("a;b* & 1").is_kl());
    assert!(!t("a~").is_kl());
    assert!(!t("T").is_kl());
}

#[test]
fn duals_and_complements_are_involutions() {
    let a = Name::new("a");
    assert_eq!(dual(a).as_str(), "conv_a");
    assert_eq!(dual(dual(a)), a);
    assert_eq!(dual(Name::new(C_TOP)), Name::new(C_TOP));
    assert_eq!(complement(complement(a)), a);
    assert_eq!(complement(a).as_str(), "not_a");
}

#[test]
fn to_kl_examples() {
    assert_eq!(to_kl(t("a~~")), t("a"));
    assert_eq!(to_kl(t("(a;b)~")), parse_term("conv_b;conv_a", &Signature::internal()).unwrap());
    assert_eq!(to_kl(t("T")), parse_term("c_top*", &Signature::internal()).unwrap());
    let u = parse_term("(p;q)^-", &kat()).unwrap();
    assert_eq!(to_kl(u), parse_term("not_p + not_q", &Signature::internal()).unwrap());
    assert!(to_kl(t("(a & b~)*;T")).is_kl());
}

#[test]
fn wrapping() {
    let w = wrap_for_decision(t("a")).unwrap();
    assert_eq!(w.render(), "c_top*;__l;a;__r;c_top*");
    assert!(wrap_for_decision(t("a~")).is_err());
    assert!(wrap_for_decision(to_kl(t("a;T"))).is_ok());
    let bad = parse_term("c_top;a", &Signature::internal()).unwrap();
    assert!(wrap_for_decision(bad).is_err());
}

#[test]
fn while_and_if_encodings() {
    // while p do t = (p;t)*;p^-, if p then t1 else t2 = p;t1 + p^-;t2.
    let sig = kat();
    let w = parse_term("(p;a)*;p^-", &sig).unwrap();
    let k = to_kl(w);
    assert!(k.is_kl());
    assert_eq!(k, parse_term("(p;a)*;not_p", &Signature::internal()).unwrap());
    let i = parse_term("p;a + p^-;b", &sig).unwrap();
    assert_eq!(to_kl(i), parse_term("p;a + not_p;b", &Signature::internal()).unwrap());
    let nested = parse_term("((p;q)^-;a)*;(p;q)", &sig).unwrap();
    assert!(to_kl(nested).is_kl());
}

/// Adds every dual and complement name the KL form can mention.
fn with_derived(s: &pcor::model::Structure) -> pcor::model::Structure {
    let mut out = s.clone();
    let names: Vec<Name> = s.names().collect();
    for a in names {
        out.set_rel(dual(a), s.rel(a).unwrap().transpose());
        let id = pcor::model::Rel::identity(s.len());
        out.set_rel(complement(a), id.difference(s.rel(a).unwrap()));
    }
    out.set_rel(Name::new(C_TOP), pcor::model::Rel::full(s.len()));
    out
}

#[test]
fn to_kl_preserves_semantics() {
    let sig = Signature::new().with_tests(["p"]);
    let space = ModelSpace {
        free: vec![Name::new("a")],
        tests: vec![Name::new("p")],
        ..ModelSpace::default()
    };
    let terms = ["(a;p)~", "(a & a~)*;T", "(p;a)*;p^-", "((p^-;a)~ + T) & a", "(p + p^-);a~"];
    for s in space.iter(2) {
        let full = with_derived(&s);
        for src in terms {
            let u = parse_term(src, &sig).unwrap();
            assert_eq!(eval(&s, u).unwrap(), eval(&full, to_kl(u)).unwrap(), "{src}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_terms_round_trip(seed in any::<u64>(), size in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = TermGen::kl(&["a", "b", "c"]);
        g.allow_converse = true;
        g.allow_top = true;
        let u = g.sized(&mut rng, size);
        prop_assert_eq!(u.size(), size);
        prop_assert_eq!(parse(&u.render()).unwrap(), u);
        let k = to_kl(u);
        prop_assert!(k.is_kl());
        prop_assert_eq!(to_kl(k), k);
        prop_assert!(k.iw() == u.iw());
    }
}
