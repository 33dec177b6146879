//! Sparse multivariate polynomials over F_q in `x_0, ..., x_{n-1}`.
//!
//! Terms are kept sorted in graded lexicographic order with
//! `x_0 > x_1 > ... > x_{n-1}`, largest first, with no zero coefficients.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use smallvec::SmallVec;

use crate::context::PFormCtx;
use crate::error::{Error, Result};
use crate::field::FFElem;

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.0[i] = 1;
        m
    }

    pub fn from_slice(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// Exact quotient; `None` if `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.checked_sub(*b)).collect::<Option<_>>().map(Monomial)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn scale(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    pub fn as_mut_slice(&mut self) -> &mut [u32] {
        &mut self.0
    }
}

impl Deref for Monomial {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl FromIterator<u32> for Monomial {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Monomial(iter.into_iter().collect())
    }
}

/// Graded lexicographic comparison.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone)]
pub struct MPoly {
    ctx: PFormCtx,
    terms: Vec<(Monomial, FFElem)>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.ctx == other.ctx
    }
}

impl Eq for MPoly {}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format_poly(self))
    }
}

impl MPoly {
    pub fn zero(ctx: &PFormCtx) -> Self {
        MPoly { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn constant(ctx: &PFormCtx, c: FFElem) -> Self {
        Self::term(ctx, Monomial::one(ctx.n()), c)
    }

    pub fn one(ctx: &PFormCtx) -> Self {
        Self::constant(ctx, FFElem::ONE)
    }

    pub fn var(ctx: &PFormCtx, i: usize) -> Self {
        Self::term(ctx, Monomial::var(ctx.n(), i), FFElem::ONE)
    }

    pub fn term(ctx: &PFormCtx, m: Monomial, c: FFElem) -> Self {
        assert_eq!(m.len(), ctx.n(), "monomial length must match n");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        MPoly { ctx: ctx.clone(), terms }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ctx: &PFormCtx, terms: impl IntoIterator<Item = (Monomial, FFElem)>) -> Self {
        let field = ctx.field();
        let mut map: HashMap<Monomial, FFElem> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), ctx.n(), "monomial length must match n");
            let slot = map.entry(m).or_insert(FFElem::ZERO);
            *slot = field.add(*slot, c);
        }
        Self::from_map(ctx, map)
    }

    fn from_map(ctx: &PFormCtx, map: HashMap<Monomial, FFElem>) -> Self {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| grlex(&b.0, &a.0));
        MPoly { ctx: ctx.clone(), terms }
    }

    /// Terms already sorted and free of duplicates and zeros.
    fn from_sorted(ctx: &PFormCtx, terms: Vec<(Monomial, FFElem)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| grlex(&w[0].0, &w[1].0) == Ordering::Greater));
        MPoly { ctx: ctx.clone(), terms }
    }

    pub fn ctx(&self) -> &PFormCtx {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, FFElem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<FFElem> {
        match self.terms.as_slice() {
            [] => Some(FFElem::ZERO),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant() == Some(FFElem::ONE)
    }

    /// The single term, if there is exactly one.
    pub fn as_term(&self) -> Option<(&Monomial, FFElem)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, *c)),
            _ => None,
        }
    }

    /// Leading term in the printing order.
    pub fn leading(&self) -> Option<&(Monomial, FFElem)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.first().map(|(m, _)| m.total_degree())
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.ctx.n()];
        for (m, _) in &self.terms {
            for (o, &e) in out.iter_mut().zip(m.iter()) {
                *o = (*o).max(e);
            }
        }
        out
    }

    /// Largest monomial dividing every term; `1` for the zero polynomial.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(self.ctx.n()),
            Some((first, _)) => it.fold(first.clone(), |acc, (m, _)| acc.gcd(m)),
        }
    }

    /// Term of largest degree `e_0 + e_1 q^(1/n) + ...`.
    pub fn top_term(&self) -> Option<&(Monomial, FFElem)> {
        let ring = self.ctx.ring();
        self.terms.iter().max_by(|a, b| ring.cmp_exps(&a.0, &b.0))
    }

    /// Term of smallest degree.
    pub fn bottom_term(&self) -> Option<&(Monomial, FFElem)> {
        let ring = self.ctx.ring();
        self.terms.iter().min_by(|a, b| ring.cmp_exps(&a.0, &b.0))
    }

    fn check(&self, other: &MPoly) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn neg(&self) -> MPoly {
        let field = self.ctx.field();
        MPoly::from_sorted(&self.ctx, self.terms.iter().map(|(m, c)| (m.clone(), field.neg(*c))).collect())
    }

    pub fn scale(&self, c: FFElem) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        if c == FFElem::ONE {
            return self.clone();
        }
        let field = self.ctx.field();
        MPoly::from_sorted(&self.ctx, self.terms.iter().map(|(m, a)| (m.clone(), field.mul(*a, c))).collect())
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &MPoly, negate: bool) -> MPoly {
        let field = self.ctx.field();
        let conv = |c: FFElem| if negate { field.neg(c) } else { c };
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match grlex(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), conv(b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(a[i].1, conv(b[j].1));
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), conv(*c))));
        MPoly::from_sorted(&self.ctx, out)
    }

    /// Multiplication by a single term; order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: FFElem) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        let field = self.ctx.field();
        MPoly::from_sorted(&self.ctx, self.terms.iter().map(|(a, x)| (a.mul(m), field.mul(*x, c))).collect())
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        self.mul_term(m, FFElem::ONE)
    }

    /// Exact division by a monomial that divides every term.
    pub fn div_monomial(&self, m: &Monomial) -> MPoly {
        if m.is_one() {
            return self.clone();
        }
        MPoly::from_sorted(
            &self.ctx,
            self.terms.iter().map(|(a, c)| (a.div(m).expect("monomial divides every term"), *c)).collect(),
        )
    }

    /// `self / d` when `d` divides `self` exactly, by leading-term reduction.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (dm, dc) = d.leading()?;
        if self.ctx != d.ctx {
            return None;
        }
        let field = self.ctx.field();
        let inv = field.inv(*dc).ok()?;
        let mut rest = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rest.leading().cloned() {
            let m = rm.div(dm)?;
            let c = field.mul(rc, inv);
            rest = rest.sub(&d.mul_term(&m, c)).ok()?;
            quot.push((m, c));
        }
        Some(MPoly::from_sorted(&self.ctx, quot))
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        if let Some((m, c)) = other.as_term() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_term() {
            return other.mul_term(m, c);
        }
        let field = self.ctx.field();
        let mut map: HashMap<Monomial, FFElem> = HashMap::with_capacity((self.len() * other.len()).min(1 << 16));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let slot = map.entry(ma.mul(mb)).or_insert(FFElem::ZERO);
                *slot = field.add(*slot, field.mul(*ca, *cb));
            }
        }
        MPoly::from_map(&self.ctx, map)
    }

    /// `f^p`, computed as `sum c^p x^(p e)`.
    pub fn frobenius(&self) -> MPoly {
        let field = self.ctx.field();
        let p = field.p() as u32;
        MPoly::from_sorted(&self.ctx, self.terms.iter().map(|(m, c)| (m.scale(p), field.frobenius_p(*c, 1))).collect())
    }

    pub fn pow(&self, k: i64) -> Result<MPoly> {
        if k < 0 {
            return Err(Error::NegativePolyPower(k));
        }
        Ok(self.pow_u(k as u64))
    }

    /// Base-p expansion of the exponent so that every p-th power is a Frobenius.
    pub fn pow_u(&self, mut k: u64) -> MPoly {
        if k == 0 {
            return MPoly::one(&self.ctx);
        }
        if let Some((m, c)) = self.as_term() {
            let field = self.ctx.field();
            let mono = m.iter().map(|&e| u32::try_from(e as u64 * k).expect("exponent overflow")).collect();
            return MPoly::term(&self.ctx, mono, field.pow(c, k as i64).expect("nonzero"));
        }
        let p = self.ctx.field().p();
        let mut acc = MPoly::one(&self.ctx);
        let mut base = self.clone();
        loop {
            let digit = k % p;
            for _ in 0..digit {
                acc = acc.mul_unchecked(&base);
            }
            k /= p;
            if k == 0 {
                break;
            }
            base = base.frobenius();
        }
        acc
    }

    /// Image under `x_i -> x_{i+1}`, `x_{n-1} -> x_0^q`, applied `k` times.
    pub fn star(&self, k: usize) -> MPoly {
        if k == 0 || self.is_constant() {
            return self.clone();
        }
        let n = self.ctx.n();
        let q = self.ctx.q();
        let terms = self.terms.iter().map(|(m, c)| (star_monomial(m, n, q, k), *c));
        let mut v: Vec<_> = terms.collect();
        v.sort_unstable_by(|a, b| grlex(&b.0, &a.0));
        MPoly::from_sorted(&self.ctx, v)
    }

    /// `f(x_0 + a, ..., x_{n-1} + a)`.
    pub fn shift(&self, a: FFElem) -> MPoly {
        if a.is_zero() || self.is_constant() {
            return self.clone();
        }
        let ctx = &self.ctx;
        let field = ctx.field();
        // rows[e][k] = coefficient of x^k in (x + a)^e
        let emax = self.max_exponents().into_iter().max().unwrap_or(0) as usize;
        let mut rows: Vec<Vec<FFElem>> = vec![vec![FFElem::ONE]];
        for e in 1..=emax {
            let prev = &rows[e - 1];
            let mut row = vec![FFElem::ZERO; e + 1];
            for (k, &c) in prev.iter().enumerate() {
                row[k + 1] = field.add(row[k + 1], c);
                row[k] = field.add(row[k], field.mul(c, a));
            }
            rows.push(row);
        }
        let mut cur: HashMap<Monomial, FFElem> = self.terms.iter().cloned().collect();
        for i in 0..ctx.n() {
            let mut next: HashMap<Monomial, FFElem> = HashMap::with_capacity(cur.len());
            for (m, c) in cur {
                let row = &rows[m[i] as usize];
                for (k, &b) in row.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    let mut mm = m.clone();
                    mm.0[i] = k as u32;
                    let slot = next.entry(mm).or_insert(FFElem::ZERO);
                    *slot = field.add(*slot, field.mul(c, b));
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
        MPoly::from_map(ctx, cur)
    }

    pub fn eval(&self, point: &[FFElem]) -> FFElem {
        let field = self.ctx.field();
        let mut acc = FFElem::ZERO;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (&e, &x) in m.iter().zip(point) {
                if e > 0 {
                    t = field.mul(t, field.pow(x, e as i64).unwrap_or(FFElem::ZERO));
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Moves the polynomial to another context over the same field by
    /// relabelling `x_i -> x_{map[i]}`.
    pub fn relabel(&self, target: &PFormCtx, map: &[usize]) -> MPoly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut out = Monomial::one(target.n());
            for (i, &e) in m.iter().enumerate() {
                out.0[map[i]] += e;
            }
            (out, *c)
        });
        MPoly::from_terms(target, terms)
    }
}

pub(crate) fn star_monomial(m: &Monomial, n: usize, q: u64, k: usize) -> Monomial {
    let mut e: SmallVec<[u32; 8]> = m.0.clone();
    for _ in 0..k {
        let last = e[n - 1];
        e.copy_within(0..n - 1, 1);
        e[0] = u32::try_from(last as u64 * q).expect("exponent overflow");
    }
    Monomial(e)
}
