//! Dense univariate polynomials over F_q and the extension F_{q^m} built on
//! them, sized for exhaustive scans.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{prime_factors, FFElem, FieldCtx};

/// Coefficients from the constant term up, with no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    field: FieldCtx,
    c: Vec<FFElem>,
}

impl UPoly {
    pub fn zero(field: &FieldCtx) -> Self {
        UPoly { field: field.clone(), c: Vec::new() }
    }

    pub fn one(field: &FieldCtx) -> Self {
        UPoly::monomial(field, 0, FFElem::ONE)
    }

    pub fn monomial(field: &FieldCtx, k: usize, a: FFElem) -> Self {
        let mut c = vec![FFElem::ZERO; k + 1];
        c[k] = a;
        UPoly::from_coeffs(field, c)
    }

    pub fn from_coeffs(field: &FieldCtx, mut c: Vec<FFElem>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { field: field.clone(), c }
    }

    /// Sums repeated exponents.
    pub fn from_terms(field: &FieldCtx, terms: impl IntoIterator<Item = (usize, FFElem)>) -> Self {
        let mut c = Vec::new();
        for (k, a) in terms {
            if c.len() <= k {
                c.resize(k + 1, FFElem::ZERO);
            }
            c[k] = field.add(c[k], a);
        }
        UPoly::from_coeffs(field, c)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> FFElem {
        self.c.last().copied().unwrap_or(FFElem::ZERO)
    }

    /// Nonzero `(exponent, coefficient)` pairs, highest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (usize, FFElem)> + '_ {
        self.c.iter().enumerate().rev().filter(|(_, a)| !a.is_zero()).map(|(k, a)| (k, *a))
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let f = &self.field;
        let len = self.c.len().max(other.c.len());
        let c = (0..len)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(FFElem::ZERO);
                let b = other.c.get(i).copied().unwrap_or(FFElem::ZERO);
                f.add(a, b)
            })
            .collect();
        UPoly::from_coeffs(f, c)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.scale(self.field.neg(FFElem::ONE)))
    }

    pub fn scale(&self, a: FFElem) -> UPoly {
        let f = &self.field;
        UPoly::from_coeffs(f, self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(&self.field);
        }
        let f = &self.field;
        let mut c = vec![FFElem::ZERO; self.c.len() + other.c.len() - 1];
        let bs: Vec<(usize, FFElem)> = other.terms().collect();
        for (i, a) in self.terms() {
            for &(j, b) in &bs {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        UPoly::from_coeffs(f, c)
    }

    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let f = &self.field;
        let dd = d.degree().ok_or(Error::DivideByZero)?;
        let li = f.inv(d.lead())?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((UPoly::zero(f), self.clone()));
        }
        let mut quo = vec![FFElem::ZERO; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let a = f.mul(r[k], li);
            if a.is_zero() {
                continue;
            }
            quo[k - dd] = a;
            for (j, &b) in d.c.iter().enumerate() {
                r[k - dd + j] = f.sub(r[k - dd + j], f.mul(a, b));
            }
        }
        r.truncate(dd);
        Ok((UPoly::from_coeffs(f, quo), UPoly::from_coeffs(f, r)))
    }

    pub fn rem(&self, d: &UPoly) -> Result<UPoly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> UPoly {
        match self.field.inv(self.lead()) {
            Ok(li) => self.scale(li),
            Err(_) => self.clone(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn powmod(&self, mut k: u64, modulus: &UPoly) -> Result<UPoly> {
        let mut base = self.rem(modulus)?;
        let mut acc = UPoly::one(&self.field).rem(modulus)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Remainder modulo `x^size - x`: exponents `k >= 1` fold to
    /// `((k - 1) mod (size - 1)) + 1`.
    pub fn fold(&self, size: u64) -> UPoly {
        let terms = self.terms().map(|(k, a)| (fold_exponent(k as u64, size) as usize, a));
        UPoly::from_terms(&self.field, terms)
    }

    /// `self * other` modulo `x^size - x`.
    pub fn mul_folded(&self, other: &UPoly, size: u64) -> UPoly {
        let f = &self.field;
        let mut c = vec![FFElem::ZERO; size as usize];
        let bs: Vec<(usize, FFElem)> = other.terms().collect();
        for (i, a) in self.terms() {
            for &(j, b) in &bs {
                let k = fold_exponent((i + j) as u64, size) as usize;
                c[k] = f.add(c[k], f.mul(a, b));
            }
        }
        UPoly::from_coeffs(f, c)
    }

    pub fn pow_folded(&self, mut k: u64, size: u64) -> UPoly {
        let mut base = self.fold(size);
        let mut acc = UPoly::one(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_folded(&base, size);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_folded(&base, size);
            }
        }
        acc
    }

    /// `self^(q^j)` modulo `x^size - x`, which only permutes exponents since
    /// the coefficients lie in F_q.
    pub fn frobenius_folded(&self, j: u32, size: u64) -> UPoly {
        let qj = (self.field.q() as u128).pow(j);
        let terms = self.terms().map(|(k, a)| {
            let e = if k == 0 { 0 } else { ((k as u128 * qj - 1) % (size as u128 - 1)) as usize + 1 };
            (e, a)
        });
        UPoly::from_terms(&self.field, terms)
    }
}

pub fn fold_exponent(k: u64, size: u64) -> u64 {
    if k == 0 {
        0
    } else {
        (k - 1) % (size - 1) + 1
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(k, a)| {
                let c = self.field.format_elem(a);
                let x = match k {
                    0 => String::new(),
                    1 => "x".to_string(),
                    _ => format!("x^{k}"),
                };
                match (k, a == FFElem::ONE) {
                    (0, _) => c,
                    (_, true) => x,
                    _ if c.contains('+') => format!("({c})*{x}"),
                    _ => format!("{c}*{x}"),
                }
            })
            .collect();
        write!(out, "{}", parts.join("+"))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub const MAX_EXT_SIZE: u64 = 1 << 16;

/// F_{q^m} = F_q[y]/(P) with P the first monic irreducible of degree m in
/// coefficient order. Elements are indices `sum c_i q^i` over the
/// coefficients of their reduced representative.
#[derive(Clone, Debug)]
pub struct ExtField {
    base: FieldCtx,
    m: u32,
    size: u64,
    modulus: UPoly,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl ExtField {
    pub fn new(base: &FieldCtx, m: u32) -> Result<Self> {
        let q = base.q();
        let size = q.checked_pow(m).filter(|&s| m >= 1 && s <= MAX_EXT_SIZE).ok_or_else(|| {
            Error::PreconditionUnmet(format!("F_{q}^{m} is outside the supported scan range (at most {MAX_EXT_SIZE} elements)"))
        })?;
        let mut ext = ExtField {
            base: base.clone(),
            m,
            size,
            modulus: UPoly::zero(base),
            exp: Vec::new(),
            log: Vec::new(),
        };
        ext.modulus = (0..size)
            .map(|i| {
                let mut c = ext.digits(i as u32);
                c.push(FFElem::ONE);
                UPoly::from_coeffs(base, c)
            })
            .find(|p| is_irreducible(p))
            .expect("irreducible polynomials exist in every degree");
        ext.build_tables();
        Ok(ext)
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &UPoly {
        &self.modulus
    }

    fn digits(&self, mut i: u32) -> Vec<FFElem> {
        let q = self.base.q() as u32;
        (0..self.m)
            .map(|_| {
                let d = FFElem(i % q);
                i /= q;
                d
            })
            .collect()
    }

    fn to_poly(&self, i: u32) -> UPoly {
        UPoly::from_coeffs(&self.base, self.digits(i))
    }

    fn from_poly(&self, p: &UPoly) -> u32 {
        let q = self.base.q() as u32;
        p.coeffs().iter().rev().fold(0, |acc, c| acc * q + c.0)
    }

    fn build_tables(&mut self) {
        let order = self.size - 1;
        let factors = prime_factors(order);
        let is_primitive = |g: &UPoly| {
            factors.iter().all(|r| !g.powmod(order / r, &self.modulus).expect("monic").coeffs().eq(&[FFElem::ONE]))
        };
        let g = (1..self.size as u32).map(|i| self.to_poly(i)).find(|g| is_primitive(g)).expect("cyclic group");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; self.size as usize];
        let mut x = UPoly::one(&self.base);
        for k in 0..order as usize {
            let idx = self.from_poly(&x);
            exp[k] = idx;
            exp[k + order as usize] = idx;
            log[idx as usize] = k as u32;
            x = x.mul(&g).rem(&self.modulus).expect("monic");
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size as u32
    }

    pub fn embed(&self, a: FFElem) -> u32 {
        a.0
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let q = self.base.q() as u32;
        let (mut a, mut b, mut out, mut w) = (a, b, 0u32, 1u32);
        for _ in 0..self.m {
            let s = self.base.add(FFElem(a % q), FFElem(b % q));
            out += s.0 * w;
            a /= q;
            b /= q;
            w = w.wrapping_mul(q);
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivideByZero);
        }
        let order = (self.size - 1) as u32;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.size - 1;
        self.exp[((self.log[a as usize] as u64 * (k % order)) % order) as usize]
    }

    /// Value at `x` of a polynomial with coefficients in F_q.
    pub fn eval(&self, p: &UPoly, x: u32) -> u32 {
        p.terms().fold(0, |acc, (k, a)| self.add(acc, self.mul(self.embed(a), self.pow(x, k as u64))))
    }

    /// Representative polynomial in `y`.
    pub fn format(&self, a: u32) -> String {
        let s = self.to_poly(a).to_string();
        s.replace('x', "y")
    }
}

/// Rabin's test over F_q.
pub fn is_irreducible(p: &UPoly) -> bool {
    let Some(m) = p.degree() else { return false };
    if m == 0 {
        return false;
    }
    let field = p.field();
    let x = UPoly::monomial(field, 1, FFElem::ONE);
    let frob = |k: usize| -> UPoly {
        let mut h = x.rem(p).expect("nonzero");
        for _ in 0..k {
            h = h.powmod(field.q(), p).expect("nonzero");
        }
        h
    };
    if frob(m).sub(&x).rem(p).expect("nonzero").is_zero() {
        prime_factors(m as u64).into_iter().all(|r| {
            let h = frob(m / r as usize).sub(&x);
            h.gcd(p).degree() == Some(0)
        })
    } else {
        false
    }
}
