use hydra_core::axioms::{random_hset, GenConfig};
use hydra_core::lang::{parse, print_canonical, Item, Output, Session};
use hydra_core::Universe;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printing_then_evaluating_returns_the_same_set(seed: u64, max_nodes in 1usize..8) {
        let mut session = Session::new();
        let cfg = GenConfig { seed, max_nodes, ..GenConfig::default() };
        let x = random_hset(session.universe(), &cfg).unwrap();
        let text = print_canonical(&x, None);
        let back = session.eval_str(&text).unwrap();
        prop_assert_eq!(&back, &x, "{}", text);
        prop_assert_eq!(print_canonical(&back, None), text);
    }

    #[test]
    fn parser_never_panics_on_text(src in "\\PC{0,40}") {
        let _ = parse(&src);
    }

    #[test]
    fn parser_never_panics_on_set_like_text(src in "[{}(),;=.:μ a-z0-9#\n]{0,60}") {
        let _ = parse(&src);
        let _ = Session::new().run(&src);
    }

    #[test]
    fn parser_never_panics_on_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
        let _ = parse(&String::from_utf8_lossy(&bytes));
    }
}

#[test]
fn desugaring_introduces_fresh_variables_for_nested_sets() {
    let p = parse("x = {y, {}}; y = {x};").unwrap();
    assert_eq!(p.items.len(), 2);
    assert!(p.items.iter().all(|i| matches!(i, Item::Def(_))));
    let mut s = Session::new();
    s.run("x = {y, {}}; y = {x};").unwrap();
    let x = s.get("x").unwrap();
    assert!(x.contains(&s.universe().empty()));
}

#[test]
fn printed_binders_are_lexically_scoped() {
    let mut s = Session::new();
    let out = s.run("x = {y, {}}; y = {x}; :print x").unwrap();
    let Output::Printed(text) = &out[1] else {
        panic!()
    };
    assert_eq!(text, "μx0.{{}, {x0}}");
    assert_eq!(s.eval_str(text).unwrap(), *s.get("x").unwrap());
}

#[test]
fn print_examples() {
    let u = Universe::new();
    assert_eq!(print_canonical(&u.empty(), None), "{}");
    assert_eq!(print_canonical(&u.omega(), None), "μx0.{x0}");
}
