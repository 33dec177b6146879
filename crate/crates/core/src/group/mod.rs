//! Group-structure tools: monomial units, embeddings between variable
//! counts, commutation tests and the abelian-subgroup data.

pub mod coset;
pub mod delta_group;
pub mod moebius;
pub mod words;

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::context::PFormCtx;
use crate::degree::{DegElem, DegreeRing, UnitSystem};
use crate::error::{Error, Result};
use crate::field::FFElem;
use crate::pform::compose;
use crate::ratfunc::RatFunc;

/// `x_0^(e_0) ... x_{n-1}^(e_{n-1})` with integer exponents and coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMonomial {
    pub exps: Vec<i64>,
}

impl RationalMonomial {
    pub fn new(exps: Vec<i64>) -> Self {
        RationalMonomial { exps }
    }

    pub fn to_ratfunc(&self, ctx: &PFormCtx) -> Result<RatFunc> {
        if self.exps.len() != ctx.n() {
            return Err(Error::ContextMismatch);
        }
        Ok(RatFunc::laurent_monomial(ctx, &self.exps))
    }

    /// Reads a rational function that is a monomial quotient with
    /// coefficient 1.
    pub fn from_ratfunc(f: &RatFunc) -> Option<Self> {
        let r = f.content_reduce();
        let (mn, cn) = r.num().as_term()?;
        let (md, cd) = r.den().as_term()?;
        if cn != cd {
            return None;
        }
        Some(RationalMonomial { exps: mn.iter().zip(md.iter()).map(|(&a, &b)| a as i64 - b as i64).collect() })
    }
}

impl fmt::Display for RationalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// The unit `e` of Z[q^(1/n)] as the monomial with the same exponents.
pub fn phi(ring: &DegreeRing, e: &DegElem) -> Result<RationalMonomial> {
    if e.len() != ring.n() {
        return Err(Error::ContextMismatch);
    }
    if !ring.is_unit(e) {
        return Err(Error::NotAUnit(e.to_string()));
    }
    let exps = e.to_i64s().ok_or_else(|| Error::NotAUnit(format!("{e} has coordinates beyond 64 bits")))?;
    Ok(RationalMonomial { exps })
}

pub fn phi_inv(m: &RationalMonomial) -> DegElem {
    DegElem::from_i64s(&m.exps)
}

pub fn is_monomial_pform(ring: &DegreeRing, m: &RationalMonomial) -> bool {
    m.exps.len() == ring.n() && ring.is_unit(&phi_inv(m))
}

/// `f(x_0, ..., x_{m-1}) -> f(x_0, x_k, ..., x_{(m-1)k})` with `k = n / m`.
pub fn embed(f: &RatFunc, n: usize) -> Result<RatFunc> {
    let m = f.ctx().n();
    if n == 0 || n % m != 0 {
        return Err(Error::NotADivisor(m, n));
    }
    let target = f.ctx().with_n(n)?;
    let k = n / m;
    let map: Vec<usize> = (0..m).map(|i| i * k).collect();
    RatFunc::new(f.num().relabel(&target, &map), f.den().relabel(&target, &map))
}

pub fn commutes(f: &RatFunc, g: &RatFunc) -> Result<bool> {
    if f.is_constant() || g.is_constant() {
        return Err(Error::ConstantRightOperand);
    }
    Ok(compose(f, g)?.rat_eq(&compose(g, f)?))
}

/// For `f` commuting with the monomial of a positive unit `e != 1`: true iff
/// `f = c x^a` with `c^(e_0 + ... + e_{n-1} - 1) = 1`.
pub fn centralizer_form_check(f: &RatFunc, e: &DegElem) -> Result<bool> {
    let ctx = f.ctx();
    let ring = ctx.ring();
    if !ring.is_unit(e) || ring.sign(e) != Ordering::Greater || *e == ring.one() {
        return Err(Error::PreconditionUnmet(format!("{e} must be a positive unit other than 1")));
    }
    let mono = phi(ring, e)?.to_ratfunc(ctx)?;
    if !commutes(f, &mono)? {
        return Err(Error::PreconditionUnmet("f does not commute with the monomial".into()));
    }
    let r = f.content_reduce();
    let (Some((_, cn)), Some((_, cd))) = (r.num().as_term(), r.den().as_term()) else {
        return Ok(false);
    };
    let field = ctx.field();
    let c = field.div(cn, cd)?;
    let sum: i64 = e.to_i64s().expect("unit coordinates fit").iter().sum();
    Ok(field.pow(c, sum - 1)? == FFElem::ONE)
}

/// `d = gcd({sum_j e_(i,j) - 1} u {q - 1})` and `mu_d = {c != 0 : c^d = 1}`.
pub fn cor412_data(us: &UnitSystem, ctx: &PFormCtx) -> Result<(u64, Vec<FFElem>)> {
    let ring = ctx.ring();
    let mut d: i128 = ctx.q() as i128 - 1;
    for u in us.units() {
        if u.len() != ring.n() {
            return Err(Error::InvalidUnitSystem(format!("{u} has {} coordinates, expected {}", u.len(), ring.n())));
        }
        if !ring.is_unit(u) {
            return Err(Error::InvalidUnitSystem(format!("{u} is not a unit")));
        }
        let s: i128 = u
            .coords()
            .iter()
            .map(|c| c.to_i128().ok_or_else(|| Error::InvalidUnitSystem(format!("{u} is too large"))))
            .sum::<Result<i128>>()?;
        d = d.gcd(&(s - 1));
    }
    let d = d.unsigned_abs() as u64;
    let field = ctx.field();
    let mut mu: Vec<FFElem> =
        field.elements().filter(|c| !c.is_zero() && field.pow(*c, d as i64).ok() == Some(FFElem::ONE)).collect();
    mu.sort_by(|a, b| field.cmp_elems(*a, *b));
    Ok((d, mu))
}
