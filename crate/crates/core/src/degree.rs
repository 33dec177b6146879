//! Exact arithmetic in the order Z[u^(1/n)], the value group of the degree
//! functions.
//!
//! An element `e_0 + e_1 r + ... + e_{n-1} r^(n-1)` with `r = u^(1/n)` is
//! stored as its integer coordinate vector. Signs are decided exactly: a
//! floating-point evaluation with a rigorous error bound settles the easy
//! cases and an exact dyadic interval enclosure of `r` settles the rest.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Coordinates of an element of Z[u^(1/n)].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegElem {
    coords: Vec<BigInt>,
}

impl DegElem {
    pub fn new(coords: Vec<BigInt>) -> Self {
        DegElem { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        DegElem { coords: coords.iter().map(|&c| BigInt::from(c)).collect() }
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Coordinates as machine integers, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| c.to_i64()).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coords.iter().map(bigint_json).collect())
    }
}

pub(crate) fn bigint_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => Value::from(v),
        None => Value::Number(c.to_string().parse().expect("integer literal")),
    }
}

impl fmt::Display for DegElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A degree value: an element of Z[u^(1/n)] or one of the two infinities
/// that arise only from the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtDeg {
    NegInf,
    Finite(DegElem),
    PosInf,
}

impl ExtDeg {
    pub fn finite(&self) -> Option<&DegElem> {
        match self {
            ExtDeg::Finite(d) => Some(d),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ExtDeg::NegInf => Value::from("-inf"),
            ExtDeg::PosInf => Value::from("+inf"),
            ExtDeg::Finite(d) => d.to_json(),
        }
    }
}

impl fmt::Display for ExtDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDeg::NegInf => f.write_str("-inf"),
            ExtDeg::PosInf => f.write_str("+inf"),
            ExtDeg::Finite(d) => d.fmt(f),
        }
    }
}

/// The pair `(d_max, d_min)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaPair {
    pub dmax: ExtDeg,
    pub dmin: ExtDeg,
}

impl DeltaPair {
    pub fn finite(dmax: DegElem, dmin: DegElem) -> Self {
        DeltaPair { dmax: ExtDeg::Finite(dmax), dmin: ExtDeg::Finite(dmin) }
    }

    pub fn of_zero() -> Self {
        DeltaPair { dmax: ExtDeg::NegInf, dmin: ExtDeg::PosInf }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "dmax": self.dmax.to_json(), "dmin": self.dmin.to_json() })
    }
}

impl fmt::Display for DeltaPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dmax, self.dmin)
    }
}

/// Dyadic bracket `lo / 2^bits <= u^(1/n) < (lo + 1) / 2^bits`.
#[derive(Clone, Debug)]
struct Bracket {
    lo: BigInt,
    bits: u32,
}

/// Z[u^(1/n)] together with everything needed to order its elements.
#[derive(Clone, Debug)]
pub struct DegreeRing {
    n: usize,
    u: BigInt,
    root_powers: Vec<f64>,
    cached: Bracket,
}

const FILTER_BITS: u32 = 64;

impl DegreeRing {
    /// Requires `x^n - u` irreducible over Q, i.e. `u` is not an r-th power
    /// for any prime `r | n`.
    pub fn new(n: usize, u: u64) -> Result<Self> {
        if n == 0 || u < 2 {
            return Err(Error::InvalidContext(format!("degree ring needs n >= 1 and u >= 2 (n={n}, u={u})")));
        }
        for r in crate::field::prime_factors(n as u64) {
            let root = (u as f64).powf(1.0 / r as f64).round() as u64;
            if (root.saturating_sub(1)..=root + 1).any(|c| (c as u128).checked_pow(r as u32) == Some(u as u128)) {
                return Err(Error::InvalidContext(format!("{u} is a perfect {r}-th power, so x^{n} - {u} is reducible")));
            }
        }
        let u_big = BigInt::from(u);
        let r = (u as f64).powf(1.0 / n as f64);
        let root_powers = (0..n).map(|i| r.powi(i as i32)).collect();
        let mut ring = DegreeRing { n, u: u_big, root_powers, cached: Bracket { lo: BigInt::zero(), bits: 0 } };
        ring.cached = ring.refine(ring.integer_bracket(), FILTER_BITS);
        Ok(ring)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    fn check(&self, a: &DegElem) -> Result<()> {
        if a.len() == self.n {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn zero(&self) -> DegElem {
        DegElem { coords: vec![BigInt::zero(); self.n] }
    }

    pub fn one(&self) -> DegElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> DegElem {
        let mut e = self.zero();
        e.coords[0] = BigInt::from(v);
        e
    }

    /// `u^(i/n)` as a ring element, for any `i >= 0`.
    pub fn root_power(&self, i: usize) -> DegElem {
        let mut e = self.zero();
        e.coords[i % self.n] = num_traits::pow(self.u.clone(), i / self.n);
        e
    }

    pub fn from_exps(&self, exps: &[u32]) -> DegElem {
        DegElem { coords: exps.iter().map(|&e| BigInt::from(e)).collect() }
    }

    pub fn from_laurent(&self, exps: &[i64]) -> DegElem {
        DegElem::from_i64s(exps)
    }

    pub fn add(&self, a: &DegElem, b: &DegElem) -> Result<DegElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(DegElem { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() })
    }

    pub fn sub(&self, a: &DegElem, b: &DegElem) -> Result<DegElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(DegElem { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() })
    }

    pub fn neg(&self, a: &DegElem) -> DegElem {
        DegElem { coords: a.coords.iter().map(|x| -x).collect() }
    }

    /// Convolution of coordinates; `r^k` for `k >= n` folds back as `u * r^(k-n)`.
    pub fn mul(&self, a: &DegElem, b: &DegElem) -> Result<DegElem> {
        self.check(a)?;
        self.check(b)?;
        let n = self.n;
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let prod = x * y;
                if i + j < n {
                    out[i + j] += prod;
                } else {
                    out[i + j - n] += prod * &self.u;
                }
            }
        }
        Ok(DegElem { coords: out })
    }

    pub fn scale(&self, a: &DegElem, k: i64) -> DegElem {
        DegElem { coords: a.coords.iter().map(|x| x * k).collect() }
    }

    /// Sign of the real number represented by `a`.
    pub fn sign(&self, a: &DegElem) -> Ordering {
        if a.is_zero() {
            return Ordering::Equal;
        }
        if let Some(s) = self.float_sign(a.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN))) {
            return s;
        }
        self.interval_sign_from(&a.coords, self.cached.clone())
    }

    pub fn sign_i32(&self, a: &DegElem) -> i32 {
        match self.sign(a) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Sign decided purely by dyadic interval refinement, starting from the
    /// integer bracket `floor(r) <= r < floor(r) + 1`.
    pub fn sign_by_interval(&self, a: &DegElem) -> Ordering {
        if a.is_zero() {
            return Ordering::Equal;
        }
        self.interval_sign_from(&a.coords, self.integer_bracket())
    }

    pub fn cmp(&self, a: &DegElem, b: &DegElem) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        match self.sub(a, b) {
            Ok(d) => self.sign(&d),
            Err(_) => panic!("comparing degree elements of different lengths"),
        }
    }

    /// Order on nonnegative exponent vectors by their degree
    /// `e_0 + e_1 r + ...`; the hot path of every `d_max`/`d_min` scan.
    pub fn cmp_exps(&self, a: &[u32], b: &[u32]) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let diff = a.iter().zip(b).map(|(&x, &y)| x as f64 - y as f64);
        if let Some(s) = self.float_sign(diff) {
            return s;
        }
        let coords: Vec<BigInt> = a.iter().zip(b).map(|(&x, &y)| BigInt::from(x as i64 - y as i64)).collect();
        self.interval_sign_from(&coords, self.cached.clone())
    }

    /// Same as [`cmp_exps`](Self::cmp_exps) for Laurent exponent vectors.
    pub fn cmp_laurent(&self, a: &[i64], b: &[i64]) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let diff = a.iter().zip(b).map(|(&x, &y)| x as f64 - y as f64);
        if let Some(s) = self.float_sign(diff) {
            return s;
        }
        let coords: Vec<BigInt> = a.iter().zip(b).map(|(&x, &y)| BigInt::from(x) - BigInt::from(y)).collect();
        self.interval_sign_from(&coords, self.cached.clone())
    }

    pub fn max<'a>(&self, a: &'a DegElem, b: &'a DegElem) -> &'a DegElem {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    pub fn min<'a>(&self, a: &'a DegElem, b: &'a DegElem) -> &'a DegElem {
        if self.cmp(a, b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    /// Float evaluation with a conservative rounding-error bound; `None`
    /// when the value is too close to zero to call.
    fn float_sign(&self, coords: impl Iterator<Item = f64>) -> Option<Ordering> {
        let mut value = 0.0f64;
        let mut magnitude = 0.0f64;
        for (c, r) in coords.zip(&self.root_powers) {
            let term = c * r;
            value += term;
            magnitude += term.abs();
        }
        if !value.is_finite() || !magnitude.is_finite() {
            return None;
        }
        let bound = magnitude * (self.n as f64 + 8.0) * 4.0 * f64::EPSILON;
        if value > bound {
            Some(Ordering::Greater)
        } else if value < -bound {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    fn integer_bracket(&self) -> Bracket {
        Bracket { lo: self.u.nth_root(self.n as u32), bits: 0 }
    }

    /// Bisects `br` until it has at least `bits` bits of precision.
    fn refine(&self, mut br: Bracket, bits: u32) -> Bracket {
        let n = self.n as u32;
        while br.bits < bits {
            let mid: BigInt = (&br.lo << 1u32) + 1;
            let next_bits = br.bits + 1;
            let target = &self.u << (n * next_bits) as usize;
            if num_traits::pow(mid.clone(), n as usize) <= target {
                br.lo = mid;
            } else {
                br.lo <<= 1u32;
            }
            br.bits = next_bits;
        }
        br
    }

    fn interval_sign_from(&self, coords: &[BigInt], mut br: Bracket) -> Ordering {
        if self.n == 1 {
            return coords[0].sign_ordering();
        }
        loop {
            let hi = &br.lo + 1;
            let (lower, upper) = self.enclose(coords, &br.lo, &hi, br.bits);
            if lower.is_positive() {
                return Ordering::Greater;
            }
            if upper.is_negative() {
                return Ordering::Less;
            }
            // a nonzero coordinate vector is a nonzero real, so this terminates
            let next = (br.bits * 2).max(br.bits + 8);
            br = self.refine(br, next);
        }
    }

    /// Bounds on `2^(bits (n-1)) * sum c_i r^i` for `r` in `[lo, hi] / 2^bits`.
    fn enclose(&self, coords: &[BigInt], lo: &BigInt, hi: &BigInt, bits: u32) -> (BigInt, BigInt) {
        let n = self.n;
        let mut lower = BigInt::zero();
        let mut upper = BigInt::zero();
        let mut lo_pow = BigInt::one();
        let mut hi_pow = BigInt::one();
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                let scale = (n - 1 - i) as u32 * bits;
                let l = (c * &lo_pow) << scale as usize;
                let h = (c * &hi_pow) << scale as usize;
                if c.is_positive() {
                    lower += l;
                    upper += h;
                } else {
                    lower += h;
                    upper += l;
                }
            }
            lo_pow *= lo;
            hi_pow *= hi;
        }
        (lower, upper)
    }

    /// Matrix of multiplication by `a` in the basis `1, r, ..., r^(n-1)`;
    /// column `j` holds the coordinates of `a * r^j`.
    pub fn mult_matrix(&self, a: &DegElem) -> Vec<Vec<BigInt>> {
        let n = self.n;
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for j in 0..n {
            let col = self.mul(a, &self.root_power(j)).expect("same ring");
            for i in 0..n {
                m[i][j] = col.coords[i].clone();
            }
        }
        m
    }

    /// Field norm, as the determinant of the multiplication matrix
    /// (fraction-free Gaussian elimination).
    pub fn norm(&self, a: &DegElem) -> Result<BigInt> {
        self.check(a)?;
        Ok(bareiss_det(self.mult_matrix(a)))
    }

    pub fn is_unit(&self, a: &DegElem) -> bool {
        self.norm(a).map(|nm| nm.abs().is_one()).unwrap_or(false)
    }

    /// Inverse of a unit from its characteristic polynomial
    /// `x^n + c_{n-1} x^{n-1} + ... + c_0`:
    /// `a^-1 = -(a^{n-1} + c_{n-1} a^{n-2} + ... + c_1) / c_0`.
    pub fn unit_inv(&self, a: &DegElem) -> Result<DegElem> {
        self.check(a)?;
        let cp = char_poly(&self.mult_matrix(a));
        let c0 = &cp[0];
        if !c0.abs().is_one() {
            return Err(Error::NotAUnit(a.to_string()));
        }
        // Horner: a^{n-1} + c_{n-1} a^{n-2} + ... + c_1
        let mut acc = self.one();
        for k in (1..self.n).rev() {
            acc = self.mul(&acc, a)?;
            acc.coords[0] += &cp[k];
        }
        Ok(self.scale(&acc, -c0.to_i64().expect("unit")))
    }

    pub fn pow(&self, a: &DegElem, k: i64) -> Result<DegElem> {
        self.check(a)?;
        let base = if k < 0 { self.unit_inv(a)? } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq)?;
            }
        }
        Ok(acc)
    }

    pub fn ext_cmp(&self, a: &ExtDeg, b: &ExtDeg) -> Ordering {
        match (a, b) {
            (ExtDeg::Finite(x), ExtDeg::Finite(y)) => self.cmp(x, y),
            (x, y) if x == y => Ordering::Equal,
            (ExtDeg::NegInf, _) | (_, ExtDeg::PosInf) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v.div_floor(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier; returns
/// ascending coefficients `[c_0, ..., c_{n-1}, 1]`. All divisions are exact.
fn char_poly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = matmul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = matmul(a, &mk);
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -(trace / BigInt::from(k));
    }
    coeffs
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// A claimed system of fundamental units, validated by norm only.
#[derive(Clone, Debug)]
pub struct UnitSystem {
    units: Vec<DegElem>,
    norms: Vec<BigInt>,
}

impl UnitSystem {
    pub fn new(ring: &DegreeRing, units: Vec<DegElem>) -> Result<Self> {
        let mut norms = Vec::with_capacity(units.len());
        for u in &units {
            if u.len() != ring.n() {
                return Err(Error::InvalidUnitSystem(format!("{u} has {} coordinates, expected {}", u.len(), ring.n())));
            }
            let nm = ring.norm(u)?;
            if !nm.abs().is_one() {
                return Err(Error::InvalidUnitSystem(format!("{u} has norm {nm}")));
            }
            norms.push(nm);
        }
        Ok(UnitSystem { units, norms })
    }

    pub fn units(&self) -> &[DegElem] {
        &self.units
    }

    pub fn norms(&self) -> &[BigInt] {
        &self.norms
    }
}
