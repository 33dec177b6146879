//! Formal quotients of polynomials and the substitution engine behind
//! twisted composition.

use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::context::PFormCtx;
use crate::error::{Error, Result};
use crate::field::FFElem;
use crate::mpoly::{Monomial, MPoly};

/// `num / den` with `den != 0`. No common factors are cancelled
/// automatically; equality is by cross-multiplication (see [`RatFunc::rat_eq`]).
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print(self))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print(self))
    }
}

type Laurent = SmallVec<[i64; 8]>;

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if num.ctx() != den.ctx() {
            return Err(Error::ContextMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivideByZeroFunction);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(num: MPoly) -> Self {
        let den = MPoly::one(num.ctx());
        RatFunc { num, den }
    }

    pub fn var(ctx: &PFormCtx, i: usize) -> Self {
        Self::from_poly(MPoly::var(ctx, i))
    }

    /// The identity `x_0` of the composition monoid.
    pub fn identity(ctx: &PFormCtx) -> Self {
        Self::var(ctx, 0)
    }

    pub fn constant(ctx: &PFormCtx, c: FFElem) -> Self {
        Self::from_poly(MPoly::constant(ctx, c))
    }

    pub fn zero(ctx: &PFormCtx) -> Self {
        Self::from_poly(MPoly::zero(ctx))
    }

    pub fn one(ctx: &PFormCtx) -> Self {
        Self::from_poly(MPoly::one(ctx))
    }

    /// The rational monomial `x^e` for an integer exponent vector.
    pub fn laurent_monomial(ctx: &PFormCtx, exps: &[i64]) -> Self {
        let pos: Monomial = exps.iter().map(|&e| e.max(0) as u32).collect();
        let neg: Monomial = exps.iter().map(|&e| (-e).max(0) as u32).collect();
        RatFunc { num: MPoly::term(ctx, pos, FFElem::ONE), den: MPoly::term(ctx, neg, FFElem::ONE) }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn ctx(&self) -> &PFormCtx {
        self.num.ctx()
    }

    pub fn into_parts(self) -> (MPoly, MPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value if `num = c * den` for some `c` in F_q.
    pub fn as_constant(&self) -> Option<FFElem> {
        if self.num.is_zero() {
            return Some(FFElem::ZERO);
        }
        let field = self.ctx().field();
        let (_, ln) = self.num.leading()?;
        let (_, ld) = self.den.leading()?;
        let c = field.div(*ln, *ld).ok()?;
        (self.den.scale(c) == self.num).then_some(c)
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    fn check(&self, other: &RatFunc) -> Result<()> {
        if self.ctx() == other.ctx() {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &RatFunc) -> Result<RatFunc> {
        self.check(other)?;
        if self.den == other.den {
            return Ok(RatFunc { num: self.num.add(&other.num)?, den: self.den.clone() });
        }
        let num = self.num.mul_unchecked(&other.den).add(&other.num.mul_unchecked(&self.den))?;
        Ok(RatFunc { num, den: self.den.mul_unchecked(&other.den) })
    }

    pub fn sub(&self, other: &RatFunc) -> Result<RatFunc> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> Result<RatFunc> {
        self.check(other)?;
        Ok(RatFunc { num: self.num.mul_unchecked(&other.num), den: self.den.mul_unchecked(&other.den) })
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.num.is_zero() {
            return Err(Error::DivideByZeroFunction);
        }
        Ok(RatFunc { num: self.den.clone(), den: self.num.clone() })
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        self.check(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RatFunc { num: base.num.pow_u(e), den: base.den.pow_u(e) })
    }

    pub fn scale(&self, c: FFElem) -> RatFunc {
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Semantic equality: `a.num * b.den == b.num * a.den`.
    pub fn rat_eq(&self, other: &RatFunc) -> bool {
        if self.ctx() != other.ctx() {
            return false;
        }
        if self == other {
            return true;
        }
        self.num.mul_unchecked(&other.den) == other.num.mul_unchecked(&self.den)
    }

    /// Cancels the common monomial factor and makes the leading coefficient
    /// of the denominator 1.
    /// The polynomial equal to `self`, if the denominator divides the numerator.
    pub fn exact_quotient(&self) -> Option<MPoly> {
        self.num.div_exact(&self.den)
    }

    pub fn content_reduce(&self) -> RatFunc {
        let ctx = self.ctx();
        if self.num.is_zero() {
            return RatFunc::zero(ctx);
        }
        let g = self.num.monomial_content().gcd(&self.den.monomial_content());
        let mut num = self.num.div_monomial(&g);
        let mut den = self.den.div_monomial(&g);
        let lc = den.leading().map(|t| t.1).unwrap_or(FFElem::ONE);
        if lc != FFElem::ONE {
            let inv = ctx.field().inv(lc).expect("nonzero leading coefficient");
            num = num.scale(inv);
            den = den.scale(inv);
        }
        RatFunc { num, den }
    }

    pub fn star(&self, k: usize) -> RatFunc {
        RatFunc { num: self.num.star(k), den: self.den.star(k) }
    }

    pub fn shift(&self, a: FFElem) -> RatFunc {
        RatFunc { num: self.num.shift(a), den: self.den.shift(a) }
    }

    /// `f(g_0, ..., g_{n-1})`. The `g_i` may live in a different context over
    /// the same field; the result lives in theirs.
    pub fn substitute(&self, gs: &[RatFunc]) -> Result<RatFunc> {
        let nf = self.ctx().n();
        if gs.len() != nf {
            return Err(Error::InvalidContext(format!("substitution needs {nf} functions, got {}", gs.len())));
        }
        let target = gs[0].ctx().clone();
        if gs.iter().any(|g| g.ctx() != &target) || target.field() != self.ctx().field() {
            return Err(Error::ContextMismatch);
        }
        let nt = target.n();

        // g_i = a_i / r_i * x^(shift_i) with a_i, r_i free of monomial content
        let mut a_parts = Vec::with_capacity(nf);
        let mut r_parts = Vec::with_capacity(nf);
        let mut shifts: Vec<Laurent> = Vec::with_capacity(nf);
        for g in gs {
            let ma = g.num.monomial_content();
            let md = g.den.monomial_content();
            a_parts.push(g.num.div_monomial(&ma));
            r_parts.push(g.den.div_monomial(&md));
            shifts.push(ma.iter().zip(md.iter()).map(|(&x, &y)| x as i64 - y as i64).collect());
        }
        let mut emax = self.num.max_exponents();
        for (e, d) in emax.iter_mut().zip(self.den.max_exponents()) {
            *e = (*e).max(d);
        }

        let mut a_cache: Vec<HashMap<u32, MPoly>> = vec![HashMap::new(); nf];
        let mut r_cache: Vec<HashMap<u32, MPoly>> = vec![HashMap::new(); nf];
        let mut eval = |poly: &MPoly| -> HashMap<Laurent, FFElem> {
            let field = target.field();
            let mut out: HashMap<Laurent, FFElem> = HashMap::new();
            for (m, c) in poly.terms() {
                let mut lshift: Laurent = SmallVec::from_elem(0, nt);
                for i in 0..nf {
                    let e = m[i];
                    if e > 0 {
                        for (s, d) in lshift.iter_mut().zip(&shifts[i]) {
                            *s += e as i64 * d;
                        }
                        if !a_parts[i].is_one() {
                            a_cache[i].entry(e).or_insert_with(|| a_parts[i].pow_u(e as u64));
                        }
                    }
                    let re = emax[i] - e;
                    if re > 0 && !r_parts[i].is_one() {
                        r_cache[i].entry(re).or_insert_with(|| r_parts[i].pow_u(re as u64));
                    }
                }
                let mut factors: Vec<&MPoly> = Vec::with_capacity(2 * nf);
                for i in 0..nf {
                    if let Some(f) = a_cache[i].get(&m[i]).filter(|_| m[i] > 0 && !a_parts[i].is_one()) {
                        factors.push(f);
                    }
                    let re = emax[i] - m[i];
                    if let Some(f) = r_cache[i].get(&re).filter(|_| re > 0 && !r_parts[i].is_one()) {
                        factors.push(f);
                    }
                }
                factors.sort_by_key(|f| f.len());
                let mut prod = MPoly::constant(&target, *c);
                for f in factors {
                    prod = prod.mul_unchecked(f);
                }
                for (pm, pc) in prod.terms() {
                    let key: Laurent = pm.iter().zip(&lshift).map(|(&a, &b)| a as i64 + b).collect();
                    let slot = out.entry(key).or_insert(FFElem::ZERO);
                    *slot = field.add(*slot, *pc);
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        };
        let num_map = eval(&self.num);
        let den_map = eval(&self.den);
        if den_map.is_empty() {
            return Err(Error::DenominatorVanishes);
        }
        let mut base: Laurent = SmallVec::from_elem(i64::MAX, nt);
        for key in num_map.keys().chain(den_map.keys()) {
            for (b, &k) in base.iter_mut().zip(key) {
                *b = (*b).min(k);
            }
        }
        let clear = |map: HashMap<Laurent, FFElem>| -> Result<MPoly> {
            let mut terms = Vec::with_capacity(map.len());
            for (k, c) in map {
                let m = k
                    .iter()
                    .zip(&base)
                    .map(|(&a, &b)| u32::try_from(a - b).map_err(|_| Error::ExponentOverflow))
                    .collect::<Result<Monomial>>()?;
                terms.push((m, c));
            }
            Ok(MPoly::from_terms(&target, terms))
        };
        Ok(RatFunc { num: clear(num_map)?, den: clear(den_map)? })
    }
}
