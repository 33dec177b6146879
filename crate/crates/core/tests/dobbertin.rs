use pform::dobbertin::{derive_perm_poly, qn, qn_delta_closed_form, qn_inverse, sign_sequences, uniform_rep};
use pform::pform::{delta, delta_of_iterate, iterate, verify_inverse};
use pform::{DegElem, DeltaPair, Error, RatFunc};
use proptest::prelude::*;

mod common;

#[test]
fn inverse_formula_for_small_n() {
    for n in 2..=4 {
        assert!(verify_inverse(&qn(n).unwrap(), &qn_inverse(n).unwrap()).unwrap(), "n = {n}");
    }
}

/// Sign sequences counted by brute force over all of {-1, 1}^i.
#[test]
fn sign_sequence_count() {
    for n in 2..=10usize {
        let mut count = 0;
        for i in 1..=n {
            for bits in 0u32..(1 << i) {
                let e: Vec<i32> = (0..i).map(|j| if bits >> j & 1 == 1 { 1 } else { -1 }).collect();
                let ok = e[i - 1] == -1 && (i == n || e[0] == -1) && e.windows(2).all(|w| w != [1, 1]);
                count += ok as usize;
            }
        }
        assert_eq!(sign_sequences(n).len(), count, "n = {n}");
    }
}

/// `1 - r` and `-1` (odd n) or `-1 - r` (even n), with `r = 2^(1/n)`.
fn expected_delta_q(n: usize) -> DeltaPair {
    let mut dmax = vec![0i64; n];
    dmax[0] = 1;
    dmax[1] = -1;
    let mut dmin = vec![0i64; n];
    dmin[0] = -1;
    if n % 2 == 0 {
        dmin[1] = -1;
    }
    DeltaPair::finite(DegElem::from_i64s(&dmax), DegElem::from_i64s(&dmin))
}

#[test]
fn degree_of_qn() {
    for n in 2..=8 {
        assert_eq!(delta(&qn(n).unwrap()), expected_delta_q(n), "n = {n}");
    }
}

#[test]
fn closed_forms_against_expansion() {
    for n in [2usize, 3] {
        let f = qn(n).unwrap();
        for m in 0..=3u64 {
            assert_eq!(delta(&iterate(&f, m).unwrap()), qn_delta_closed_form(n, m).unwrap(), "n = {n}, m = {m}");
        }
    }
}

#[test]
fn closed_forms_against_composition_law() {
    for n in 2..=5 {
        let f = qn(n).unwrap();
        for m in 0..=6u64 {
            assert_eq!(delta_of_iterate(&f, m).unwrap(), qn_delta_closed_form(n, m).unwrap(), "n = {n}, m = {m}");
        }
    }
}

#[test]
fn bad_n() {
    assert_eq!(qn(1).unwrap_err(), Error::BadN(1));
    assert_eq!(qn_inverse(0).unwrap_err(), Error::BadN(0));
    assert_eq!(qn_delta_closed_form(1, 2).unwrap_err(), Error::BadN(1));
}

/// F_8 as bit vectors modulo y^3 + y + 1.
fn gf8_mul(a: u8, b: u8) -> u8 {
    let mut r = 0u8;
    for i in 0..3 {
        if b >> i & 1 == 1 {
            r ^= a << i;
        }
    }
    for i in (3..5).rev() {
        if r >> i & 1 == 1 {
            r ^= 0b1011 << (i - 3);
        }
    }
    r
}

fn gf8_eval(p: &pform::upoly::UPoly, x: u8) -> u8 {
    p.terms().fold(0, |acc, (k, _)| acc ^ (0..k).fold(1, |y, _| gf8_mul(y, x)))
}

fn gf8_inv(a: u8) -> u8 {
    (1..8).find(|&b| gf8_mul(a, b) == 1).unwrap()
}

#[test]
fn perm_poly_of_q2_over_f8() {
    let r = derive_perm_poly(&qn(2).unwrap(), Some(&qn_inverse(2).unwrap()), 2, 3).unwrap();
    assert!(r.injective_on_d);
    assert_eq!(uniform_rep(&qn(2).unwrap(), 2, 3).unwrap().to_string(), "(x^4+x^2+1)/x^5");
    let (ft, ht) = (&r.f_tilde, &r.inverse_tilde);
    let domain: Vec<u8> = (0..8u8)
        .filter(|&x| {
            let d = gf8_eval(&ft.den, x);
            d != 0 && gf8_eval(&ht.den, gf8_mul(gf8_eval(&ft.num, x), gf8_inv(d))) != 0
        })
        .collect();
    assert_eq!(domain.len(), r.domain.len());
    let mut images: Vec<u8> = domain.iter().map(|&x| gf8_eval(&r.g, x)).collect();
    images.sort();
    images.dedup();
    assert_eq!(images.len(), domain.len());
}

#[test]
fn x0x1_gives_x5_over_f8() {
    let c = common::ctx(2, 2);
    let f = pform::expr::parse(&c, "x0x1").unwrap();
    let r = derive_perm_poly(&f, None, 2, 3).unwrap();
    assert_eq!(r.g.to_string(), "x^5");
    let mut images: Vec<u8> = (0..8).map(|x| gf8_eval(&r.g, x)).collect();
    images.sort();
    assert_eq!(images, (0..8).collect::<Vec<u8>>());
    assert!(r.permutation);
}

fn params() -> impl Strategy<Value = (u64, usize, u64, u64)> {
    // (q, n, n', m) with n n' = 1 mod m
    prop_oneof![
        Just((2u64, 2usize, 2u64, 3u64)),
        Just((2, 2, 1, 1)),
        Just((2, 3, 1, 2)),
        Just((2, 2, 3, 5)),
        Just((3, 2, 2, 3)),
        Just((3, 1, 1, 2)),
        Just((5, 1, 1, 2)),
        Just((2, 3, 3, 4)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn injectivity_on_d_always_holds((q, n, np, m) in params(), seed in any::<u64>()) {
        let c = common::ctx(q, n);
        let mut r = common::rng(seed);
        let (f, fi) = common::rand_invertible(&c, &mut r);
        match derive_perm_poly(&f, Some(&fi), np, m) {
            Ok(rep) => {
                // recovery of x can fail where f itself is 0/0 at (x, x^(q^n'), ...)
                prop_assert!(rep.injective_on_d);
                prop_assert!(rep.domain.len() as u64 <= rep.field_size);
            }
            Err(Error::DenominatorVanishesModField(_)) => {}
            Err(e) => prop_assert!(false, "{e} for {f}"),
        }
    }
}

#[test]
fn identity_gives_the_identity_permutation() {
    let c = common::ctx(3, 2);
    let r = derive_perm_poly(&RatFunc::identity(&c), None, 2, 3).unwrap();
    assert_eq!(r.g.to_string(), "x");
    assert_eq!(r.cycle_type, Some(vec![(1, 27)]));
}
