//! Finite fields F_q, q = p^s, as F_p[t]/(modulus).
//!
//! Elements are packed into a single integer `c_0 + c_1 p + ... + c_{s-1} p^{s-1}`
//! where `c_i` are the coordinates in the power basis of the modulus root `t`.
//! Fields with at most 2^16 elements get exp/log tables for multiplication.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 16;
const MAX_ORDER: u64 = 1 << 31;

/// An element of F_q, meaningful only together with its [`FieldCtx`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FFElem(pub(crate) u32);

impl FFElem {
    pub const ZERO: FFElem = FFElem(0);
    pub const ONE: FFElem = FFElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Packed index in `0..q`.
    pub fn index(self) -> u32 {
        self.0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct FieldInner {
    p: u64,
    s: usize,
    q: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// The finite field F_q.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())?;
        if self.s() > 1 {
            write!(f, "[t]/({})", format_modulus(&self.inner.modulus))?;
        }
        Ok(())
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldCtx {}

/// Built-in moduli (ascending coefficients, monic), the lexicographically
/// least irreducible polynomial of each degree.
pub fn builtin_modulus(p: u64, s: usize) -> Option<Vec<u64>> {
    match (p, s) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        _ => None,
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, s)`.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut s = 0;
    while rest % p == 0 {
        rest /= p;
        s += 1;
    }
    (rest == 1).then_some((p, s))
}

impl FieldCtx {
    /// Builds F_{p^s}. For `s > 1` the modulus must be monic of degree `s`
    /// and irreducible over F_p; when omitted a built-in one is used.
    pub fn new(p: u64, s: usize, modulus: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if s == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(s as u32).filter(|&q| q <= MAX_ORDER as u128);
        let Some(q) = q else {
            return Err(Error::InvalidField(format!("{p}^{s} exceeds 2^31")));
        };
        let q = q as u64;
        let modulus: Vec<u64> = match modulus {
            Some(m) => m.iter().map(|&c| c % p).collect(),
            None if s == 1 => vec![0, 1],
            None => builtin_modulus(p, s).ok_or(Error::MissingModulus(p, s))?,
        };
        if modulus.len() != s + 1 || modulus[s] != 1 {
            return Err(Error::InvalidField(format!(
                "modulus {} is not monic of degree {s}",
                format_modulus(&modulus)
            )));
        }
        if s > 1 && !modp::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(format_modulus(&modulus), p));
        }
        let mut inner = FieldInner { p, s, q, modulus, tables: None };
        if q <= TABLE_LIMIT && q > 2 {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldCtx { inner: Arc::new(inner) })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn s(&self) -> usize {
        self.inner.s
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    /// Ascending coefficients of the monic modulus (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FFElem {
        FFElem::ZERO
    }

    pub fn one(&self) -> FFElem {
        FFElem::ONE
    }

    /// The generator `t` of the power basis; equals `0` in a prime field
    /// only through reduction, so callers should check `s() > 1`.
    pub fn gen(&self) -> FFElem {
        if self.s() == 1 {
            // t is the root of the modulus t - 0
            FFElem::ZERO
        } else {
            FFElem(self.p() as u32)
        }
    }

    pub fn from_int(&self, v: i64) -> FFElem {
        FFElem(v.rem_euclid(self.p() as i64) as u32)
    }

    /// Element from power-basis coordinates (reduced mod p; extra coordinates
    /// are reduced by the modulus).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FFElem {
        let p = self.p();
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % p).collect();
        if c.len() > self.s() {
            c = modp::rem(&c, &self.inner.modulus, p);
        }
        self.pack(&c)
    }

    pub fn coeffs(&self, a: FFElem) -> Vec<u64> {
        let p = self.p();
        let mut v = a.0 as u64;
        (0..self.s())
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    fn pack(&self, c: &[u64]) -> FFElem {
        let p = self.p();
        let mut v = 0u64;
        for &x in c.iter().rev() {
            v = v * p + x;
        }
        FFElem(v as u32)
    }

    /// All elements in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = FFElem> {
        (0..self.q() as u32).map(FFElem)
    }

    pub fn add(&self, a: FFElem, b: FFElem) -> FFElem {
        let p = self.p();
        if self.s() == 1 {
            return FFElem(((a.0 as u64 + b.0 as u64) % p) as u32);
        }
        if p == 2 {
            return FFElem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let (mut out, mut place) = (0u64, 1u64);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FFElem(out as u32)
    }

    pub fn neg(&self, a: FFElem) -> FFElem {
        let p = self.p();
        if p == 2 {
            return a;
        }
        if self.s() == 1 {
            return FFElem(((p - a.0 as u64) % p) as u32);
        }
        let c: Vec<u64> = self.coeffs(a).into_iter().map(|x| (p - x) % p).collect();
        self.pack(&c)
    }

    pub fn sub(&self, a: FFElem, b: FFElem) -> FFElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FFElem, b: FFElem) -> FFElem {
        if a.is_zero() || b.is_zero() {
            return FFElem::ZERO;
        }
        if let Some(t) = &self.inner.tables {
            return FFElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]);
        }
        if self.s() == 1 {
            return FFElem(((a.0 as u64 * b.0 as u64) % self.p()) as u32);
        }
        self.slow_mul(a, b)
    }

    fn slow_mul(&self, a: FFElem, b: FFElem) -> FFElem {
        slow_mul(&self.inner, a, b)
    }

    pub fn inv(&self, a: FFElem) -> Result<FFElem> {
        if a.is_zero() {
            return Err(Error::DivideByZero);
        }
        if let Some(t) = &self.inner.tables {
            let order = self.q() as u32 - 1;
            let l = t.log[a.0 as usize];
            return Ok(FFElem(t.exp[((order - l) % order) as usize]));
        }
        Ok(self.pow_u(a, self.q() - 2))
    }

    pub fn div(&self, a: FFElem, b: FFElem) -> Result<FFElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn pow_u(&self, a: FFElem, mut k: u64) -> FFElem {
        let mut base = a;
        let mut acc = FFElem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `a^k` for any integer `k`; negative exponents go through the inverse.
    pub fn pow(&self, a: FFElem, k: i64) -> Result<FFElem> {
        if k >= 0 {
            Ok(self.pow_u(a, k as u64))
        } else {
            Ok(self.pow_u(self.inv(a)?, k.unsigned_abs()))
        }
    }

    /// `a^(p^j)`.
    pub fn frobenius_p(&self, a: FFElem, j: u32) -> FFElem {
        let mut x = a;
        for _ in 0..j {
            x = self.pow_u(x, self.p());
        }
        x
    }

    /// `a^(q^k)`. Each q-th power is computed explicitly; iteration stops once
    /// a fixed point is reached.
    pub fn frobenius(&self, a: FFElem, k: u64) -> FFElem {
        let mut x = a;
        for _ in 0..k {
            let y = self.pow_u(x, self.q());
            if y == x {
                break;
            }
            x = y;
        }
        x
    }

    /// Order on elements used for canonical choices: lexicographic on the
    /// coordinate vector with the constant coordinate most significant.
    pub fn cmp_elems(&self, a: FFElem, b: FFElem) -> Ordering {
        self.coeffs(a).cmp(&self.coeffs(b))
    }

    /// Renders an element as a polynomial in `t` with ascending powers, e.g. `1+t`.
    pub fn format_elem(&self, a: FFElem) -> String {
        if self.s() == 1 {
            return a.0.to_string();
        }
        let parts: Vec<String> = self
            .coeffs(a)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let pow = match i {
                    0 => return c.to_string(),
                    1 => "t".to_string(),
                    _ => format!("t^{i}"),
                };
                if c == 1 {
                    pow
                } else {
                    format!("{c}*{pow}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

fn slow_mul(inner: &FieldInner, a: FFElem, b: FFElem) -> FFElem {
    let p = inner.p;
    let unpack = |x: FFElem| {
        let mut v = x.0 as u64;
        (0..inner.s)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect::<Vec<u64>>()
    };
    let (ca, cb) = (unpack(a), unpack(b));
    let mut prod = vec![0u64; 2 * inner.s - 1];
    for (i, &x) in ca.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in cb.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let r = modp::rem(&prod, &inner.modulus, p);
    let mut v = 0u64;
    for i in (0..inner.s).rev() {
        v = v * p + r.get(i).copied().unwrap_or(0);
    }
    FFElem(v as u32)
}

fn build_tables(inner: &FieldInner) -> Tables {
    let q = inner.q;
    let order = q - 1;
    let factors = prime_factors(order);
    let pow = |a: FFElem, mut k: u64| {
        let (mut base, mut acc) = (a, FFElem::ONE);
        while k > 0 {
            if k & 1 == 1 {
                acc = slow_mul(inner, acc, base);
            }
            base = slow_mul(inner, base, base);
            k >>= 1;
        }
        acc
    };
    let generator = (2..q as u32)
        .map(FFElem)
        .find(|&g| factors.iter().all(|&r| pow(g, order / r) != FFElem::ONE))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = FFElem::ONE;
    for i in 0..order as usize {
        exp[i] = x.0;
        exp[i + order as usize] = x.0;
        log[x.0 as usize] = i as u32;
        x = slow_mul(inner, x, generator);
    }
    Tables { exp, log }
}

pub(crate) fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub(crate) fn format_modulus(m: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in m.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let pow = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => pow,
            _ => format!("{c}*{pow}"),
        });
    }
    parts.join("+")
}

/// Dense polynomial helpers over F_p on ascending coefficient vectors,
/// used to validate moduli before a field context exists.
pub(crate) mod modp {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn inv(a: u64, p: u64) -> u64 {
        let (mut base, mut k, mut acc) = (a % p, p - 2, 1u64);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            k >>= 1;
        }
        acc
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut r);
        trim(&mut b);
        let db = b.len() - 1;
        let lead_inv = inv(b[db], p);
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let factor = r[r.len() - 1] * lead_inv % p;
            for (i, &c) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - factor * c % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// x^(p^k) mod m.
    fn frobenius_power_of_x(m: &[u64], p: u64, k: usize) -> Vec<u64> {
        let mut x = rem(&[0, 1], m, p);
        for _ in 0..k {
            let (mut base, mut e, mut acc) = (x.clone(), p, vec![1u64]);
            while e > 0 {
                if e & 1 == 1 {
                    acc = rem(&mul(&acc, &base, p), m, p);
                }
                base = rem(&mul(&base, &base, p), m, p);
                e >>= 1;
            }
            x = acc;
        }
        x
    }

    fn sub_x(v: &[u64], p: u64) -> Vec<u64> {
        let mut out = v.to_vec();
        if out.len() < 2 {
            out.resize(2, 0);
        }
        out[1] = (out[1] + p - 1) % p;
        trim(&mut out);
        out
    }

    /// Trial division by every monic polynomial of degree `1..=s/2`.
    fn irreducible_by_trial_division(m: &[u64], p: u64) -> bool {
        let s = m.len() - 1;
        for d in 1..=s / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut cand = Vec::with_capacity(d + 1);
                let mut v = idx;
                for _ in 0..d {
                    cand.push(v % p);
                    v /= p;
                }
                cand.push(1);
                if rem(m, &cand, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Rabin's test: x^(p^s) = x mod m and gcd(x^(p^(s/r)) - x, m) = 1
    /// for every prime r dividing s.
    fn irreducible_by_rabin(m: &[u64], p: u64) -> bool {
        let s = m.len() - 1;
        for r in super::prime_factors(s as u64) {
            let h = sub_x(&frobenius_power_of_x(m, p, s / r as usize), p);
            if gcd(m, &h, p).len() != 1 {
                return false;
            }
        }
        sub_x(&frobenius_power_of_x(m, p, s), p).is_empty()
    }

    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let s = m.len() - 1;
        if s <= 1 {
            return s == 1;
        }
        let search = (p as f64).powi((s / 2) as i32);
        if s <= 4 || search <= (1u64 << 20) as f64 {
            irreducible_by_trial_division(m, p)
        } else {
            irreducible_by_rabin(m, p)
        }
    }

    #[cfg(test)]
    pub fn rabin(m: &[u64], p: u64) -> bool {
        irreducible_by_rabin(m, p)
    }
}
