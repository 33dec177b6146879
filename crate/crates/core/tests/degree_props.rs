use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use pform::{DegElem, DegreeRing};
use proptest::prelude::*;
use std::cmp::Ordering;

mod common;

fn ring_params() -> impl Strategy<Value = (usize, u64)> {
    prop_oneof![Just((2usize, 2u64)), Just((3, 2)), Just((2, 3)), Just((4, 2)), Just((6, 3)), Just((5, 2)), Just((3, 5))]
}

fn elem(n: usize, bound: i64) -> impl Strategy<Value = DegElem> {
    proptest::collection::vec(-bound..=bound, n).prop_map(|v| DegElem::from_i64s(&v))
}

fn with_elems(k: usize, bound: i64) -> impl Strategy<Value = ((usize, u64), Vec<DegElem>)> {
    ring_params().prop_flat_map(move |(n, u)| (Just((n, u)), proptest::collection::vec(elem(n, bound), k)))
}

/// `sum e_i u^(i/n)` scaled by `2^bits`, from integer n-th roots; the error is
/// below `sum |e_i|`.
fn fixed_point(e: &[i64], n: usize, u: u64, bits: u32) -> (BigInt, BigInt) {
    let mut v = BigInt::zero();
    let mut err = BigInt::zero();
    for (i, &c) in e.iter().enumerate() {
        let scaled = BigInt::from(u).pow(i as u32) << (bits as usize * n);
        let r = scaled.nth_root(n as u32);
        v += r * c;
        err += BigInt::from(c.abs());
    }
    (v, err)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(((n, u), es) in with_elems(3, 6)) {
        let ring = DegreeRing::new(n, u).unwrap();
        let (a, b, c) = (&es[0], &es[1], &es[2]);
        let add = |x: &DegElem, y: &DegElem| ring.add(x, y).unwrap();
        let mul = |x: &DegElem, y: &DegElem| ring.mul(x, y).unwrap();
        prop_assert_eq!(add(&add(a, b), c), add(a, &add(b, c)));
        prop_assert_eq!(mul(&mul(a, b), c), mul(a, &mul(b, c)));
        prop_assert_eq!(mul(a, b), mul(b, a));
        prop_assert_eq!(mul(a, &add(b, c)), add(&mul(a, b), &mul(a, c)));
        prop_assert_eq!(mul(a, &ring.one()), a.clone());
        prop_assert_eq!(add(a, &ring.neg(a)), ring.zero());
    }

    #[test]
    fn norm_is_multiplicative(((n, u), es) in with_elems(2, 5)) {
        let ring = DegreeRing::new(n, u).unwrap();
        let ab = ring.mul(&es[0], &es[1]).unwrap();
        prop_assert_eq!(ring.norm(&ab).unwrap(), ring.norm(&es[0]).unwrap() * ring.norm(&es[1]).unwrap());
    }

    #[test]
    fn sign_matches_high_precision_evaluation(((n, u), es) in with_elems(1, 10)) {
        let ring = DegreeRing::new(n, u).unwrap();
        let e = es[0].to_i64s().unwrap();
        let (v, err) = fixed_point(&e, n, u, 256);
        let expect = if e.iter().all(|&c| c == 0) {
            Ordering::Equal
        } else {
            prop_assert!(v.abs() > err, "evaluation not separated from zero");
            if v.is_positive() { Ordering::Greater } else { Ordering::Less }
        };
        prop_assert_eq!(ring.sign(&es[0]), expect);
        prop_assert_eq!(ring.sign_by_interval(&es[0]), expect);
    }

    #[test]
    fn comparison_is_sign_of_difference(((n, u), es) in with_elems(2, 10)) {
        let ring = DegreeRing::new(n, u).unwrap();
        let d = ring.sub(&es[0], &es[1]).unwrap();
        prop_assert_eq!(ring.cmp(&es[0], &es[1]), ring.sign(&d));
    }

    #[test]
    fn unit_inverse(qn in prop_oneof![Just((2u64, 2usize)), Just((2, 3)), Just((2, 4)), Just((3, 2)), Just((3, 6))], seed in any::<u64>()) {
        let (q, n) = qn;
        let c = common::ctx(q, n);
        let mut r = common::rng(seed);
        let e = common::rand_unit(&c, &mut r, 3);
        let ring = c.ring();
        prop_assert!(ring.is_unit(&e));
        let inv = ring.unit_inv(&e).unwrap();
        prop_assert_eq!(ring.mul(&e, &inv).unwrap(), ring.one());
        prop_assert_eq!(ring.norm(&e).unwrap().abs(), BigInt::from(1));
    }
}

#[test]
fn thousand_random_signs() {
    use rand::Rng;
    let mut r = common::rng(7);
    for _ in 0..1000 {
        let (n, u) = [(2usize, 2u64), (3, 2), (2, 3), (4, 2), (6, 3), (5, 2)][r.gen_range(0..6)];
        let ring = DegreeRing::new(n, u).unwrap();
        let e: Vec<i64> = (0..n).map(|_| r.gen_range(-10..=10)).collect();
        let (v, err) = fixed_point(&e, n, u, 256);
        let got = ring.sign(&DegElem::from_i64s(&e));
        if e.iter().all(|&c| c == 0) {
            assert_eq!(got, Ordering::Equal);
        } else {
            assert!(v.abs() > err);
            assert_eq!(got, if v.is_positive() { Ordering::Greater } else { Ordering::Less }, "{e:?} in Z[{u}^(1/{n})]");
        }
    }
}
