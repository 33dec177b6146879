//! Univariate specialisation `f~ = f(x, x^(q^n'), ..., x^(q^((n-1)n')))` and
//! the candidate permutation polynomial `g = f1 f2^(q^m - 2)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::print;
use crate::field::{FFElem, FieldCtx};
use crate::group::words::known_inverse;
use crate::mpoly::MPoly;
use crate::pform::verify_inverse;
use crate::ratfunc::RatFunc;
use crate::upoly::{ExtField, UPoly};

/// Unreduced exponents above this are folded without cancelling the gcd.
const DENSE_LIMIT: u64 = 1 << 20;
const MAX_RETRIES: u64 = 64;

/// `num / den` over F_q, both reduced modulo `x^(q^m) - x`.
#[derive(Clone, Debug)]
pub struct UniRat {
    pub num: UPoly,
    pub den: UPoly,
    /// The n' actually used, which may exceed the requested one.
    pub nprime: u64,
    pub field_size: u64,
    /// Whether the common factor was removed before folding.
    pub gcd_removed: bool,
}

impl fmt::Display for UniRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |s: String, always: bool| if always && (s.contains('+') || s.contains('*')) { format!("({s})") } else { s };
        let num = self.num.to_string();
        if self.den.degree() == Some(0) && self.den.lead() == FFElem::ONE {
            return write!(f, "{num}");
        }
        let num = if num.contains('+') { format!("({num})") } else { num };
        write!(f, "{}/{}", num, wrap(self.den.to_string(), true))
    }
}

impl UniRat {
    pub fn to_json(&self) -> Value {
        json!({
            "num": self.num.to_string(),
            "den": self.den.to_string(),
            "text": self.to_string(),
            "nprime": self.nprime,
            "field_size": self.field_size,
            "gcd_removed": self.gcd_removed,
        })
    }
}

fn check_params(n: usize, nprime: u64, m: u64, q: u64) -> Result<u64> {
    if m == 0 || nprime == 0 || (n as u128 * nprime as u128) % m as u128 != 1 % m as u128 {
        return Err(Error::BadCongruence(n, nprime, m));
    }
    u32::try_from(m)
        .ok()
        .and_then(|m| q.checked_pow(m))
        .ok_or_else(|| Error::PreconditionUnmet(format!("q^m = {q}^{m} does not fit in 64 bits")))
}

/// Substitutes `x_i -> x^(q^(i n'))` without any reduction.
fn specialise(p: &MPoly, nprime: u64) -> BTreeMap<BigUint, FFElem> {
    let field = p.ctx().field();
    let q = BigUint::from(p.ctx().q());
    let weights: Vec<BigUint> = (0..p.ctx().n()).map(|i| q.pow((i as u64 * nprime) as u32)).collect();
    let mut out: BTreeMap<BigUint, FFElem> = BTreeMap::new();
    for (mono, c) in p.terms() {
        let e: BigUint = mono.iter().zip(&weights).map(|(&k, w)| w * k).sum();
        let slot = out.entry(e).or_insert(FFElem::ZERO);
        *slot = field.add(*slot, *c);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn fold_big(field: &FieldCtx, terms: &BTreeMap<BigUint, FFElem>, size: u64) -> UPoly {
    let period = BigUint::from(size - 1);
    UPoly::from_terms(
        field,
        terms.iter().map(|(e, &c)| {
            let k = if e.is_zero() { 0 } else { ((e - 1u32) % &period).to_u64().expect("small") + 1 };
            (k as usize, c)
        }),
    )
}

fn to_dense(field: &FieldCtx, terms: &BTreeMap<BigUint, FFElem>) -> UPoly {
    UPoly::from_terms(field, terms.iter().map(|(e, &c)| (e.to_usize().expect("below the dense limit"), c)))
}

/// `None` when the unreduced denominator cancels to zero for this n'.
fn uniform_rep_at(f: &RatFunc, nprime: u64, size: u64) -> Result<Option<UniRat>> {
    let field = f.ctx().field();
    let num = specialise(f.num(), nprime);
    let den = specialise(f.den(), nprime);
    if den.is_empty() {
        return Ok(None);
    }
    let top = num.keys().chain(den.keys()).max().cloned().unwrap_or_default();
    let (num, den, gcd_removed) = if top <= BigUint::from(DENSE_LIMIT) {
        let (a, b) = (to_dense(field, &num), to_dense(field, &den));
        let g = a.gcd(&b);
        let a = a.divrem(&g)?.0;
        let b = b.divrem(&g)?.0;
        let li = field.inv(b.lead())?;
        (a.scale(li).fold(size), b.scale(li).fold(size), true)
    } else {
        (fold_big(field, &num, size), fold_big(field, &den, size), false)
    };
    if den.is_zero() {
        return Err(Error::DenominatorVanishesModField(format!(
            "the denominator is divisible by x^{size} - x for n' = {nprime}; the residue of n' mod m fixes this reduction"
        )));
    }
    Ok(Some(UniRat { num, den, nprime, field_size: size, gcd_removed }))
}

/// Retries with `n' + m, n' + 2m, ...` while the unreduced denominator
/// cancels.
pub fn uniform_rep(f: &RatFunc, nprime: u64, m: u64) -> Result<UniRat> {
    let ctx = f.ctx();
    let size = check_params(ctx.n(), nprime, m, ctx.q())?;
    for k in 0..MAX_RETRIES {
        if let Some(r) = uniform_rep_at(f, nprime + k * m, size)? {
            return Ok(r);
        }
    }
    Err(Error::DenominatorVanishes)
}

#[derive(Clone, Debug)]
pub struct PermPolyReport {
    pub g: UPoly,
    pub f_tilde: UniRat,
    pub inverse_tilde: UniRat,
    pub field_size: u64,
    /// Elements of F_{q^m} by index, formatted through `ExtField::format`.
    pub domain: Vec<String>,
    pub injective_on_d: bool,
    /// Whether `inverse~(f~(x)) = x` for every x in D. This can fail at
    /// points where the unreduced f is 0/0 while `f~` is still defined.
    pub inverse_recovers_x: bool,
    pub permutation: bool,
    /// `(cycle length, count)`, ascending, when g permutes the field.
    pub cycle_type: Option<Vec<(u64, u64)>>,
}

impl PermPolyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "g": self.g.to_string(),
            "f_tilde": self.f_tilde.to_json(),
            "inverse_tilde": self.inverse_tilde.to_json(),
            "field_size": self.field_size,
            "D_size": self.domain.len(),
            "D": self.domain,
            "injective_on_D": self.injective_on_d,
            "inverse_recovers_x_on_D": self.inverse_recovers_x,
            "permutation": self.permutation,
            "cycle_type": self.cycle_type.as_ref().map(|c| c.iter().map(|(l, k)| json!([l, k])).collect::<Vec<_>>()),
        })
    }
}

/// `f1 * f2^(q^m - 2)` modulo `x^(q^m) - x`, using the base-q digits
/// `(q - 2, q - 1, ..., q - 1)` of the exponent.
fn perm_candidate(r: &UniRat, q: u64, m: u32) -> UPoly {
    let size = r.field_size;
    let mut g = r.num.mul_folded(&r.den.pow_folded(q - 2, size), size);
    if m > 1 {
        let a = r.den.pow_folded(q - 1, size);
        for j in 1..m {
            g = g.mul_folded(&a.frobenius_folded(j, size), size);
        }
    }
    g
}

fn cycle_type(perm: &[u32]) -> Vec<(u64, u64)> {
    let mut seen = vec![false; perm.len()];
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        *counts.entry(len).or_default() += 1;
    }
    counts.into_iter().collect()
}

/// Builds g from `f` and a verified inverse (looked up when not supplied),
/// then checks it by brute force over F_{q^m}.
pub fn derive_perm_poly(f: &RatFunc, inverse: Option<&RatFunc>, nprime: u64, m: u64) -> Result<PermPolyReport> {
    let ctx = f.ctx();
    let inv = match inverse {
        Some(h) => h.clone(),
        None => known_inverse(f)?.ok_or_else(|| Error::MissingInverse(print(f)))?,
    };
    if !verify_inverse(f, &inv)? {
        return Err(Error::VerificationFailed(format!("{} is not the inverse of {}", print(&inv), print(f))));
    }
    let size = check_params(ctx.n(), nprime, m, ctx.q())?;
    let ext = ExtField::new(ctx.field(), m as u32)?;
    let (ft, ht) = (0..MAX_RETRIES)
        .map(|k| nprime + k * m)
        .find_map(|np| match (uniform_rep_at(f, np, size), uniform_rep_at(&inv, np, size)) {
            (Ok(Some(a)), Ok(Some(b))) => Some(Ok((a, b))),
            (Err(e), _) | (_, Err(e)) => Some(Err(e)),
            _ => None,
        })
        .unwrap_or(Err(Error::DenominatorVanishes))?;
    let g = perm_candidate(&ft, ctx.q(), m as u32);

    let xs: Vec<u32> = ext.elements().collect();
    let rows: Vec<(u32, Option<bool>)> = xs
        .par_iter()
        .map(|&x| {
            let gx = ext.eval(&g, x);
            let d = ext.eval(&ft.den, x);
            if d == 0 {
                return (gx, None);
            }
            let y = ext.mul(ext.eval(&ft.num, x), ext.inv(d).expect("nonzero"));
            let hd = ext.eval(&ht.den, y);
            if hd == 0 {
                return (gx, None);
            }
            let back = ext.mul(ext.eval(&ht.num, y), ext.inv(hd).expect("nonzero"));
            (gx, Some(back == x))
        })
        .collect();

    let mut owner: Vec<Option<u32>> = vec![None; size as usize];
    for (x, (gx, in_d)) in rows.iter().enumerate() {
        if in_d.is_none() {
            continue;
        }
        if let Some(prev) = owner[*gx as usize] {
            return Err(Error::InjectivityOnDFailed(format!(
                "g({}) = g({}) = {}",
                ext.format(prev),
                ext.format(x as u32),
                ext.format(*gx)
            )));
        }
        owner[*gx as usize] = Some(x as u32);
    }
    let domain: Vec<String> = rows.iter().enumerate().filter(|(_, r)| r.1.is_some()).map(|(x, _)| ext.format(x as u32)).collect();
    let inverse_recovers_x = rows.iter().all(|r| r.1 != Some(false));
    let values: Vec<u32> = rows.iter().map(|r| r.0).collect();
    let mut hit = vec![false; size as usize];
    let permutation = values.iter().all(|&v| !std::mem::replace(&mut hit[v as usize], true));
    let cycle_type = permutation.then(|| cycle_type(&values));
    Ok(PermPolyReport {
        g,
        f_tilde: ft,
        inverse_tilde: ht,
        field_size: size,
        domain,
        injective_on_d: true,
        inverse_recovers_x,
        permutation,
        cycle_type,
    })
}
