//! Twisted composition, the degree functions and their composition laws.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::degree::{DegElem, DeltaPair, ExtDeg};
use crate::error::{Error, Result};
use crate::field::FFElem;
use crate::mpoly::{MPoly, Monomial};
use crate::ratfunc::RatFunc;

/// `k`-fold image of `f` under `x_i -> x_{i+1}`, `x_{n-1} -> x_0^q`.
pub fn star(f: &RatFunc, k: usize) -> RatFunc {
    f.star(k)
}

/// `g, g*, ..., g^((n-1)*)`.
pub fn star_orbit(g: &RatFunc) -> Vec<RatFunc> {
    let n = g.ctx().n();
    let mut out = Vec::with_capacity(n);
    out.push(g.clone());
    for i in 1..n {
        out.push(out[i - 1].star(1));
    }
    out
}

/// `f o g = f(g, g*, ..., g^((n-1)*))`, content-reduced.
pub fn compose(f: &RatFunc, g: &RatFunc) -> Result<RatFunc> {
    if f.ctx() != g.ctx() {
        return Err(Error::ContextMismatch);
    }
    if g.is_constant() {
        return Err(Error::ConstantRightOperand);
    }
    // each exponent of g is multiplied by q at most once across the star orbit
    let emax = g.num().max_exponents().into_iter().chain(g.den().max_exponents()).max().unwrap_or(0);
    if emax as u64 * g.ctx().q() > u32::MAX as u64 {
        return Err(Error::ExponentOverflow);
    }
    if let Some(a) = translation_constant(g) {
        return Ok(f.shift(a).content_reduce());
    }
    Ok(f.substitute(&star_orbit(g))?.content_reduce())
}

/// `Some(a)` when `g = x_0 + a`.
fn translation_constant(g: &RatFunc) -> Option<FFElem> {
    if !g.den().is_one() {
        return None;
    }
    let n = g.ctx().n();
    let mut e = vec![0u32; n];
    e[0] = 1;
    let x0 = Monomial::from_slice(&e);
    let mut a = FFElem::ZERO;
    let mut seen_x0 = false;
    for (m, c) in g.num().terms() {
        if m.iter().all(|&e| e == 0) {
            a = *c;
        } else {
            if *m != x0 || *c != FFElem::ONE {
                return None;
            }
            seen_x0 = true;
        }
    }
    seen_x0.then_some(a)
}

/// `f^(m)`, the m-fold composition; `x_0` for `m = 0`.
pub fn iterate(f: &RatFunc, m: u64) -> Result<RatFunc> {
    if m == 0 {
        return Ok(RatFunc::identity(f.ctx()));
    }
    if f.is_constant() {
        return Err(Error::ConstantRightOperand);
    }
    let mut h = f.content_reduce();
    for _ in 1..m {
        h = compose(&h, f)?;
    }
    Ok(h)
}

fn poly_dmax(p: &MPoly) -> Option<DegElem> {
    p.top_term().map(|(m, _)| p.ctx().ring().from_exps(m))
}

fn poly_dmin(p: &MPoly) -> Option<DegElem> {
    p.bottom_term().map(|(m, _)| p.ctx().ring().from_exps(m))
}

/// `(d_max(f), d_min(f))`; `(-inf, +inf)` for `f = 0`.
pub fn delta(f: &RatFunc) -> DeltaPair {
    let ring = f.ctx().ring();
    match (poly_dmax(f.num()), poly_dmin(f.num())) {
        (Some(nmax), Some(nmin)) => {
            let dmax = poly_dmax(f.den()).expect("nonzero denominator");
            let dmin = poly_dmin(f.den()).expect("nonzero denominator");
            DeltaPair::finite(ring.sub(&nmax, &dmax).expect("same ring"), ring.sub(&nmin, &dmin).expect("same ring"))
        }
        _ => DeltaPair::of_zero(),
    }
}

/// Ratio of the coefficients of the top-degree terms of `num` and `den`.
pub fn top_ratio(f: &RatFunc) -> Option<FFElem> {
    let (_, a) = f.num().top_term()?;
    let (_, b) = f.den().top_term()?;
    f.ctx().field().div(*a, *b).ok()
}

/// Ratio of the coefficients of the bottom-degree terms of `num` and `den`.
pub fn bottom_ratio(f: &RatFunc) -> Option<FFElem> {
    let (_, a) = f.num().bottom_term()?;
    let (_, b) = f.den().bottom_term()?;
    f.ctx().field().div(*a, *b).ok()
}

fn finite(d: &ExtDeg) -> &DegElem {
    d.finite().expect("finite degree of a nonzero function")
}

/// `delta(f o g)` from `delta(f)` and `delta(g)` alone; valid when both
/// components of `delta(g)` are nonzero.
pub fn delta_law(df: &DeltaPair, dg: &DeltaPair, ring: &crate::degree::DegreeRing) -> Result<DeltaPair> {
    if df.dmax == ExtDeg::NegInf {
        return Ok(DeltaPair::of_zero());
    }
    let (fmax, fmin) = (finite(&df.dmax), finite(&df.dmin));
    let (gmax, gmin) = match (&dg.dmax, &dg.dmin) {
        (ExtDeg::Finite(a), ExtDeg::Finite(b)) => (a, b),
        _ => return Err(Error::ConstantRightOperand),
    };
    let dmax = match ring.sign(gmax) {
        Ordering::Greater => ring.mul(fmax, gmax)?,
        Ordering::Less => ring.mul(fmin, gmax)?,
        Ordering::Equal => return Err(Error::PreconditionUnmet("d_max(g) = 0 needs the shifted function".into())),
    };
    let dmin = match ring.sign(gmin) {
        Ordering::Greater => ring.mul(fmin, gmin)?,
        Ordering::Less => ring.mul(fmax, gmin)?,
        Ordering::Equal => return Err(Error::PreconditionUnmet("d_min(g) = 0 needs the shifted function".into())),
    };
    Ok(DeltaPair::finite(dmax, dmin))
}

/// Predicts `delta(f o g)` without expanding the composition.
///
/// When `d_max(g) = 0`, `g = a + g_1` with `d_max(g_1) < 0` and
/// `d_max(f o g) = d_min(f(x + a)) d_max(g_1)`; the `d_min(g) = 0` side is
/// handled the same way with its own constant.
pub fn delta_of_composition(f: &RatFunc, g: &RatFunc) -> Result<DeltaPair> {
    if f.ctx() != g.ctx() {
        return Err(Error::ContextMismatch);
    }
    if g.is_constant() {
        return Err(Error::ConstantRightOperand);
    }
    if f.is_zero() {
        return Ok(DeltaPair::of_zero());
    }
    let ring = f.ctx().ring();
    let df = delta(f);
    let dg = delta(g);
    let gmax = finite(&dg.dmax);
    let gmin = finite(&dg.dmin);

    let dmax = match ring.sign(gmax) {
        Ordering::Greater => ring.mul(finite(&df.dmax), gmax)?,
        Ordering::Less => ring.mul(finite(&df.dmin), gmax)?,
        Ordering::Equal => {
            let a = top_ratio(g).expect("nonzero g");
            let g1 = g.sub(&RatFunc::constant(g.ctx(), a))?;
            let g1max = finite(&delta(&g1).dmax).clone();
            debug_assert_eq!(ring.sign(&g1max), Ordering::Less);
            let fa = delta(&f.shift(a));
            ring.mul(finite(&fa.dmin), &g1max)?
        }
    };
    let dmin = match ring.sign(gmin) {
        Ordering::Greater => ring.mul(finite(&df.dmin), gmin)?,
        Ordering::Less => ring.mul(finite(&df.dmax), gmin)?,
        Ordering::Equal => {
            let b = bottom_ratio(g).expect("nonzero g");
            let g2 = g.sub(&RatFunc::constant(g.ctx(), b))?;
            let g2min = finite(&delta(&g2).dmin).clone();
            debug_assert_eq!(ring.sign(&g2min), Ordering::Greater);
            let fb = delta(&f.shift(b));
            ring.mul(finite(&fb.dmin), &g2min)?
        }
    };
    Ok(DeltaPair::finite(dmax, dmin))
}

/// `delta(f^(m))` by repeated application of [`delta_law`] as
/// `f^(m) = f^(m-1) o f`; needs both components of `delta(f)` nonzero.
pub fn delta_of_iterate(f: &RatFunc, m: u64) -> Result<DeltaPair> {
    if f.is_constant() {
        return Err(Error::ConstantRightOperand);
    }
    let ring = f.ctx().ring();
    let df = delta(f);
    let mut acc = DeltaPair::finite(ring.one(), ring.one());
    for _ in 0..m {
        acc = delta_law(&acc, &df, ring)?;
    }
    Ok(acc)
}

/// True iff `g o f = x_0`, which makes `f` and `g` mutually inverse members
/// of the group.
pub fn verify_inverse(f: &RatFunc, g: &RatFunc) -> Result<bool> {
    if f.is_constant() || g.is_constant() {
        return Err(Error::ConstantRightOperand);
    }
    Ok(compose(g, f)?.rat_eq(&RatFunc::identity(f.ctx())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub clause: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the necessary conditions for group membership. A failure
/// proves non-membership; passing proves nothing.
#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub delta: DeltaPair,
    pub checks: Vec<CheckResult>,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "delta": self.delta.to_json(),
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({"clause": c.clause, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
        })
    }
}

pub fn membership_necessary_checks(f: &RatFunc) -> MembershipReport {
    let ctx = f.ctx();
    let ring = ctx.ring();
    let d = delta(f);
    let mut checks = Vec::new();
    let unit_or_zero = |e: &ExtDeg| match e {
        ExtDeg::Finite(x) => x.is_zero() || ring.is_unit(x),
        _ => false,
    };
    let describe = |e: &ExtDeg| match e {
        ExtDeg::Finite(x) => match ring.norm(x) {
            Ok(nm) => format!("{x} has norm {nm}"),
            Err(_) => x.to_string(),
        },
        other => other.to_string(),
    };
    let ok_i = unit_or_zero(&d.dmax) && unit_or_zero(&d.dmin);
    checks.push(CheckResult {
        clause: "i",
        passed: ok_i,
        detail: format!("d_max: {}; d_min: {}", describe(&d.dmax), describe(&d.dmin)),
    });
    let ok_ii = match (&d.dmax, &d.dmin) {
        (ExtDeg::Finite(a), ExtDeg::Finite(b)) => ring.sign_i32(a) * ring.sign_i32(b) >= 0,
        _ => false,
    };
    checks.push(CheckResult { clause: "ii", passed: ok_ii, detail: "d_max(f) d_min(f) >= 0".into() });
    if ctx.q() == 2 {
        let both_zero = matches!((&d.dmax, &d.dmin), (ExtDeg::Finite(a), ExtDeg::Finite(b)) if a.is_zero() && b.is_zero());
        checks.push(CheckResult { clause: "iii", passed: !both_zero, detail: "delta(f) != (0, 0) when q = 2".into() });
    }
    MembershipReport { delta: d, checks }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite(crate::group::delta_group::InfiniteOrderCertificate),
    Unknown,
}

impl Order {
    pub fn to_json(&self) -> Value {
        match self {
            Order::Finite(m) => json!({"kind": "finite", "order": m}),
            Order::Infinite(c) => json!({"kind": "infinite", "certificate": c.to_json()}),
            Order::Unknown => json!({"kind": "unknown"}),
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "Finite({m})"),
            Order::Infinite(_) => f.write_str("Infinite"),
            Order::Unknown => f.write_str("Unknown"),
        }
    }
}

pub const DEFAULT_ORDER_BOUND: u64 = 12;

/// Tries the degree certificate first, then iterates up to `bound`.
pub fn order(f: &RatFunc, bound: u64) -> Result<Order> {
    if f.is_constant() {
        return Err(Error::ConstantRightOperand);
    }
    if let crate::group::delta_group::InfiniteOrder::Infinite(cert) = crate::group::delta_group::certify_infinite_order(f)? {
        return Ok(Order::Infinite(cert));
    }
    let id = RatFunc::identity(f.ctx());
    let mut h = f.content_reduce();
    for m in 1..=bound {
        if h.rat_eq(&id) {
            return Ok(Order::Finite(m));
        }
        if m < bound {
            h = compose(&h, f)?;
        }
    }
    Ok(Order::Unknown)
}
