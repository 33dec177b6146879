#![allow(dead_code)]

use pform::group::moebius::MoebiusElem;
use pform::group::phi;
use pform::{DegElem, FFElem, MPoly, Monomial, PFormCtx, RatFunc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ctx(q: u64, n: usize) -> PFormCtx {
    PFormCtx::with_q(q, n).unwrap()
}

pub fn rand_elem(c: &PFormCtx, r: &mut impl Rng) -> FFElem {
    let all: Vec<FFElem> = c.field().elements().collect();
    *all.choose(r).unwrap()
}

pub fn rand_nonzero(c: &PFormCtx, r: &mut impl Rng) -> FFElem {
    loop {
        let a = rand_elem(c, r);
        if !a.is_zero() {
            return a;
        }
    }
}

/// Up to `terms` terms with exponents at most `max_exp`; may be zero.
pub fn rand_poly(c: &PFormCtx, r: &mut impl Rng, terms: usize, max_exp: u32) -> MPoly {
    let t = r.gen_range(1..=terms);
    MPoly::from_terms(
        c,
        (0..t).map(|_| {
            let m: Monomial = (0..c.n()).map(|_| r.gen_range(0..=max_exp)).collect();
            (m, rand_nonzero(c, r))
        }),
    )
}

pub fn rand_nonzero_poly(c: &PFormCtx, r: &mut impl Rng, terms: usize, max_exp: u32) -> MPoly {
    loop {
        let p = rand_poly(c, r, terms, max_exp);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn rand_ratfunc(c: &PFormCtx, r: &mut impl Rng, terms: usize, max_exp: u32) -> RatFunc {
    let num = rand_poly(c, r, terms, max_exp);
    let den = if r.gen_bool(0.5) { MPoly::one(c) } else { rand_nonzero_poly(c, r, terms, max_exp) };
    RatFunc::new(num, den).unwrap()
}

pub fn rand_nonconstant(c: &PFormCtx, r: &mut impl Rng, terms: usize, max_exp: u32) -> RatFunc {
    loop {
        let f = rand_ratfunc(c, r, terms, max_exp);
        if !f.is_constant() {
            return f;
        }
    }
}

/// Fundamental units used to generate unit groups, independent of the
/// library: `r - 1` has norm `+-(1 - u)` from the minimal polynomial
/// `x^n - u`, which is a unit for `u = 2`; `2 + sqrt 3` has norm 1.
pub fn fundamental_units(q: u64, n: usize) -> Vec<DegElem> {
    let mut units = vec![];
    match (q, n) {
        (_, 1) => {}
        (2, n) => {
            let mut e = vec![0i64; n];
            e[0] = -1;
            e[1] = 1;
            units.push(DegElem::from_i64s(&e));
        }
        (3, 2) => units.push(DegElem::from_i64s(&[2, 1])),
        (3, 6) => {
            units.push(DegElem::from_i64s(&[-2, 0, 0, 1, 0, 0]));
            units.push(DegElem::from_i64s(&[-1, -1, 1, -1, 0, 1]));
            units.push(DegElem::from_i64s(&[1, -1, -1, -1, 0, 1]));
        }
        _ => {}
    }
    units
}

/// A random product of +-1 and small powers of the fundamental units.
pub fn rand_unit(c: &PFormCtx, r: &mut impl Rng, max_pow: i64) -> DegElem {
    let ring = c.ring();
    let mut e = if r.gen_bool(0.5) { ring.one() } else { ring.from_int(-1) };
    for u in fundamental_units(c.q(), c.n()) {
        let k = r.gen_range(-max_pow..=max_pow);
        e = ring.mul(&e, &ring.pow(&u, k).unwrap()).unwrap();
    }
    e
}

pub fn unit_monomial(c: &PFormCtx, e: &DegElem) -> RatFunc {
    phi(c.ring(), e).unwrap().to_ratfunc(c).unwrap()
}

pub fn rand_moebius(c: &PFormCtx, r: &mut impl Rng) -> MoebiusElem {
    loop {
        let [a, b, cc, d] = [0; 4].map(|_| rand_elem(c, r));
        if let Ok(m) = MoebiusElem::new(c.field(), a, b, cc, d) {
            return m;
        }
    }
}

/// A composition of one or two invertible atoms together with the
/// inverse assembled in reverse order.
pub fn rand_invertible(c: &PFormCtx, r: &mut impl Rng) -> (RatFunc, RatFunc) {
    let ring = c.ring();
    let mut f = RatFunc::identity(c);
    let mut inv = RatFunc::identity(c);
    for _ in 0..r.gen_range(1..=2) {
        let (a, ai) = match r.gen_range(0..3) {
            0 => {
                let m = rand_moebius(c, r);
                (m.to_ratfunc(c).unwrap(), m.inverse().to_ratfunc(c).unwrap())
            }
            1 => {
                let e = rand_unit(c, r, 1);
                (unit_monomial(c, &e), unit_monomial(c, &ring.unit_inv(&e).unwrap()))
            }
            _ if c.q() == 2 && c.n() == 2 => {
                let q2 = pform::dobbertin::qn(2).unwrap();
                (q2.clone(), q2)
            }
            _ => {
                let a = rand_elem(c, r);
                let s = MoebiusElem::translation(c.field(), a).to_ratfunc(c).unwrap();
                let si = MoebiusElem::translation(c.field(), c.field().neg(a)).to_ratfunc(c).unwrap();
                (s, si)
            }
        };
        f = pform::pform::compose(&f, &a).unwrap();
        inv = pform::pform::compose(&ai, &inv).unwrap();
    }
    (f, inv)
}
