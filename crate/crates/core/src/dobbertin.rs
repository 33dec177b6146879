//! The forms `Q_n = (x0^2 + x1 + ... + x_{n-1} + n + 1) / (x0 x1)` over F_2,
//! their explicit inverses and the closed forms for the degrees of their
//! iterates.

use crate::context::PFormCtx;
use crate::degree::{DegElem, DegreeRing, DeltaPair};
use crate::error::{Error, Result};
use crate::field::FFElem;
use crate::mpoly::{Monomial, MPoly};
use crate::ratfunc::RatFunc;

pub use crate::uniform::{derive_perm_poly, uniform_rep, PermPolyReport, UniRat};

fn binary_ctx(n: usize) -> Result<PFormCtx> {
    if n < 2 {
        return Err(Error::BadN(n));
    }
    PFormCtx::with_q(2, n)
}

pub fn qn(n: usize) -> Result<RatFunc> {
    let ctx = binary_ctx(n)?;
    let mut num = MPoly::var(&ctx, 0).pow_u(2);
    for i in 1..n {
        num = num.add(&MPoly::var(&ctx, i))?;
    }
    if n % 2 == 0 {
        num = num.add(&MPoly::one(&ctx))?;
    }
    let den = MPoly::var(&ctx, 0).mul(&MPoly::var(&ctx, 1))?;
    RatFunc::new(num, den)
}

/// Exponent pattern `(e_0, ..., e_{i-1})` of one term of the inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSeq {
    pub e: Vec<i8>,
}

impl SignSeq {
    pub fn is_valid(&self, n: usize) -> bool {
        let i = self.e.len();
        (1..=n).contains(&i)
            && self.e.iter().all(|&x| x == 1 || x == -1)
            && self.e[i - 1] == -1
            && (i == n || self.e[0] == -1)
            && !self.e.windows(2).any(|w| w == [1, 1])
    }
}

/// All valid sign sequences, by length and then lexicographically with
/// `-1 < +1`.
pub fn sign_sequences(n: usize) -> Vec<SignSeq> {
    let mut out = Vec::new();
    for i in 1..=n {
        for bits in 0u64..(1u64 << i) {
            // bit j (from the most significant end) set means e_j = +1
            let e: Vec<i8> = (0..i).map(|j| if bits >> (i - 1 - j) & 1 == 1 { 1 } else { -1 }).collect();
            let s = SignSeq { e };
            if s.is_valid(n) {
                out.push(s);
            }
        }
    }
    out
}

/// Sum of `x_0^(e_0) ... x_{i-1}^(e_{i-1})` over all sign sequences, over the
/// common denominator `x_0 ... x_{n-1}`.
pub fn qn_inverse(n: usize) -> Result<RatFunc> {
    let ctx = binary_ctx(n)?;
    let terms = sign_sequences(n).into_iter().map(|s| {
        let m: Monomial = (0..n).map(|j| (s.e.get(j).copied().unwrap_or(0) + 1) as u32).collect();
        (m, FFElem::ONE)
    });
    let num = MPoly::from_terms(&ctx, terms);
    let den = MPoly::term(&ctx, Monomial::from_slice(&vec![1; n]), FFElem::ONE);
    RatFunc::new(num, den)
}

/// `(d_max, d_min)` of the m-th iterate of `Q_n` from the closed forms.
pub fn qn_delta_closed_form(n: usize, m: u64) -> Result<DeltaPair> {
    if n < 2 {
        return Err(Error::BadN(n));
    }
    let ring = DegreeRing::new(n, 2)?;
    let r = ring.root_power(1);
    let one = ring.one();
    let sign = if m % 2 == 0 { 1 } else { -1 };
    let r_minus_1 = ring.sub(&r, &one)?;
    let pw = |x: &DegElem, k: u64| ring.pow(x, k as i64);
    let (dmax, dmin) = if n % 2 == 1 {
        (pw(&r_minus_1, m.div_ceil(2))?, pw(&r_minus_1, m / 2)?)
    } else {
        let r2_minus_1 = ring.sub(&ring.mul(&r, &r)?, &one)?;
        let base = pw(&r2_minus_1, m / 2)?;
        let odd = m % 2;
        let r_plus_1 = ring.add(&r, &one)?;
        (ring.mul(&base, &pw(&r_minus_1, odd)?)?, ring.mul(&base, &pw(&r_plus_1, odd)?)?)
    };
    Ok(DeltaPair::finite(ring.scale(&dmax, sign), ring.scale(&dmin, sign)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, print};
    use crate::pform::{delta, verify_inverse};

    #[test]
    fn qn_examples() {
        assert_eq!(print(&qn(2).unwrap()), "(x0^2+x1+1)/(x0*x1)");
        assert_eq!(print(&qn(3).unwrap()), "(x0^2+x1+x2)/(x0*x1)");
        assert_eq!(print(&qn(4).unwrap()), "(x0^2+x1+x2+x3+1)/(x0*x1)");
        assert_eq!(qn(1), Err(Error::BadN(1)));
    }

    #[test]
    fn sign_sequence_examples() {
        let s2: Vec<Vec<i8>> = sign_sequences(2).into_iter().map(|s| s.e).collect();
        assert_eq!(s2, vec![vec![-1], vec![-1, -1], vec![1, -1]]);
        let s3: Vec<Vec<i8>> = sign_sequences(3).into_iter().map(|s| s.e).collect();
        assert_eq!(s3, vec![vec![-1], vec![-1, -1], vec![-1, -1, -1], vec![-1, 1, -1], vec![1, -1, -1]]);
        for n in 2..=8 {
            assert!(sign_sequences(n).iter().all(|s| *s.e.last().unwrap() == -1));
        }
    }

    #[test]
    fn inverse_examples() {
        let inv2 = qn_inverse(2).unwrap();
        assert!(inv2.rat_eq(&qn(2).unwrap()));
        let c3 = PFormCtx::with_q(2, 3).unwrap();
        let expect = parse(&c3, "x0^-1 + x0^-1x1^-1 + x0^-1x1^-1x2^-1 + x0^-1x1x2^-1 + x0x1^-1x2^-1").unwrap();
        assert!(qn_inverse(3).unwrap().rat_eq(&expect));
        for n in 2..=3 {
            assert!(verify_inverse(&qn(n).unwrap(), &qn_inverse(n).unwrap()).unwrap());
        }
    }

    #[test]
    fn closed_form_examples() {
        let d = qn_delta_closed_form(3, 1).unwrap();
        assert_eq!(d, DeltaPair::finite(DegElem::from_i64s(&[1, -1, 0]), DegElem::from_i64s(&[-1, 0, 0])));
        let d = qn_delta_closed_form(2, 2).unwrap();
        assert_eq!(d, DeltaPair::finite(DegElem::from_i64s(&[1, 0]), DegElem::from_i64s(&[1, 0])));
        let d = qn_delta_closed_form(4, 2).unwrap();
        assert_eq!(d, DeltaPair::finite(DegElem::from_i64s(&[-1, 0, 1, 0]), DegElem::from_i64s(&[-1, 0, 1, 0])));
        for n in 2..=8 {
            assert_eq!(qn_delta_closed_form(n, 1).unwrap(), delta(&qn(n).unwrap()), "n = {n}");
            assert_eq!(qn_delta_closed_form(n, 0).unwrap(), delta(&RatFunc::identity(qn(n).unwrap().ctx())));
        }
    }
}
