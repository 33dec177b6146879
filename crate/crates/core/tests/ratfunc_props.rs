use pform::expr::{parse, print};
use pform::RatFunc;
use proptest::prelude::*;

mod common;

fn small_ctx() -> impl Strategy<Value = (u64, usize)> {
    prop_oneof![Just((2u64, 2usize)), Just((3, 2)), Just((4, 3)), Just((2, 3)), Just((5, 1))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn content_reduce_preserves_value((q, n) in small_ctx(), seed in any::<u64>()) {
        let c = common::ctx(q, n);
        let mut r = common::rng(seed);
        let f = common::rand_ratfunc(&c, &mut r, 4, 3);
        prop_assert!(f.content_reduce().rat_eq(&f));
    }

    #[test]
    fn exact_division_recovers_the_factor((q, n) in small_ctx(), seed in any::<u64>()) {
        let c = common::ctx(q, n);
        let mut r = common::rng(seed);
        let a = common::rand_poly(&c, &mut r, 4, 3);
        let b = common::rand_nonzero_poly(&c, &mut r, 4, 3);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.div_exact(&b), Some(a.clone()));
        // a nonconstant b never divides a product with a unit bumped in
        if !b.is_constant() {
            let bumped = ab.add(&pform::MPoly::one(&c)).unwrap();
            prop_assert!(bumped.div_exact(&b).is_none());
        }
    }

    #[test]
    fn substitute_identity((q, n) in small_ctx(), seed in any::<u64>()) {
        let c = common::ctx(q, n);
        let mut r = common::rng(seed);
        let f = common::rand_ratfunc(&c, &mut r, 4, 3);
        let vars: Vec<RatFunc> = (0..n).map(|i| RatFunc::var(&c, i)).collect();
        prop_assert!(f.substitute(&vars).unwrap().rat_eq(&f));
    }

    #[test]
    fn substitute_distributes_over_arithmetic((q, n) in small_ctx(), seed in any::<u64>()) {
        let c = common::ctx(q, n);
        let mut r = common::rng(seed);
        let a = common::rand_ratfunc(&c, &mut r, 3, 2);
        let b = common::rand_ratfunc(&c, &mut r, 3, 2);
        let gs: Vec<RatFunc> = (0..n).map(|_| common::rand_nonconstant(&c, &mut r, 2, 2)).collect();
        // arbitrary gs may be algebraically dependent and kill a denominator
        let sub = |f: &RatFunc| f.substitute(&gs);
        let (Ok(sa), Ok(sb), Ok(ssum), Ok(sprod)) = (sub(&a), sub(&b), sub(&a.add(&b).unwrap()), sub(&a.mul(&b).unwrap())) else {
            return Err(TestCaseError::reject("denominator vanished"));
        };
        prop_assert!(ssum.rat_eq(&sa.add(&sb).unwrap()));
        prop_assert!(sprod.rat_eq(&sa.mul(&sb).unwrap()));
    }

    #[test]
    fn parse_print_round_trip(qi in 0usize..3, n in 1usize..4, seed in any::<u64>()) {
        let q = [2u64, 3, 4][qi];
        prop_assume!(!(q == 4 && n % 2 == 0));
        let c = common::ctx(q, n);
        let mut r = common::rng(seed);
        let f = common::rand_ratfunc(&c, &mut r, 4, 3);
        let text = print(&f);
        let back = parse(&c, &text).unwrap();
        prop_assert!(back.rat_eq(&f), "{}", text);
        prop_assert_eq!(print(&back), text);
    }

    #[test]
    fn parse_is_deterministic((q, n) in small_ctx(), seed in any::<u64>()) {
        let c = common::ctx(q, n);
        let mut r = common::rng(seed);
        let text = print(&common::rand_ratfunc(&c, &mut r, 4, 3));
        let a = parse(&c, &text).unwrap();
        let b = parse(&c, &text).unwrap();
        prop_assert_eq!(a.num().terms(), b.num().terms());
        prop_assert_eq!(a.den().terms(), b.den().terms());
    }
}
