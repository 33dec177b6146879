//! Left cosets of the subgroup H (both degree components nonzero) in the
//! group of P-forms, represented by Moebius maps.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::context::PFormCtx;
use crate::degree::{DeltaPair, ExtDeg};
use crate::error::{Error, Result};
use crate::field::{FFElem, FieldCtx};
use crate::group::moebius::MoebiusElem;
use crate::pform::{bottom_ratio, compose, delta, top_ratio};
use crate::ratfunc::RatFunc;

/// One ordered pair `(a, b)`, `a < b`, per 2-element subset of `F_q \ {0}`.
#[derive(Clone, Debug)]
pub struct PairSystem {
    field: FieldCtx,
    pairs: Vec<(FFElem, FFElem)>,
}

impl PairSystem {
    pub fn new(field: &FieldCtx) -> Self {
        let mut nonzero: Vec<FFElem> = field.elements().filter(|x| !x.is_zero()).collect();
        nonzero.sort_by(|a, b| field.cmp_elems(*a, *b));
        let mut pairs = Vec::new();
        for (i, &a) in nonzero.iter().enumerate() {
            for &b in &nonzero[i + 1..] {
                pairs.push((a, b));
            }
        }
        PairSystem { field: field.clone(), pairs }
    }

    pub fn pairs(&self) -> &[(FFElem, FFElem)] {
        &self.pairs
    }

    /// The member representing `{a, b}`, in its canonical order.
    pub fn canonical(&self, a: FFElem, b: FFElem) -> (FFElem, FFElem) {
        if self.field.cmp_elems(a, b) == Ordering::Less {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// `{x_0 + a} u {1/(x_0 + b) : b != 0} u {(a x_0 + b)/(x_0 + 1) : (a, b) in A}`.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    reps: Vec<MoebiusElem>,
}

impl CosetSystem {
    pub fn new(field: &FieldCtx) -> Self {
        let mut elems: Vec<FFElem> = field.elements().collect();
        elems.sort_by(|a, b| field.cmp_elems(*a, *b));
        let mut reps: Vec<MoebiusElem> = elems.iter().map(|&a| MoebiusElem::translation(field, a)).collect();
        reps.extend(elems.iter().filter(|b| !b.is_zero()).map(|&b| MoebiusElem::reciprocal_shift(field, b)));
        for &(a, b) in PairSystem::new(field).pairs() {
            reps.push(MoebiusElem::new(field, a, b, FFElem::ONE, FFElem::ONE).expect("a != b"));
        }
        CosetSystem { reps }
    }

    pub fn reps(&self) -> &[MoebiusElem] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

pub fn coset_rep_system(ctx: &PFormCtx) -> CosetSystem {
    CosetSystem::new(ctx.field())
}

#[derive(Clone, Debug)]
pub struct CosetClass {
    pub rep: MoebiusElem,
    pub case: &'static str,
    pub verified: bool,
    pub delta: DeltaPair,
}

impl CosetClass {
    pub fn to_json(&self, ctx: &PFormCtx) -> Value {
        let rep = self.rep.to_ratfunc(ctx).map(|r| r.to_string()).unwrap_or_default();
        json!({ "rep": rep, "case": self.case, "verified": self.verified, "delta": self.delta.to_json() })
    }
}

fn both_nonzero(d: &DeltaPair) -> bool {
    matches!((&d.dmax, &d.dmin), (ExtDeg::Finite(a), ExtDeg::Finite(b)) if !a.is_zero() && !b.is_zero())
}

/// True iff `alpha^(-1) o f` lies in H as far as the degree test can tell.
pub fn in_coset_of(alpha: &MoebiusElem, f: &RatFunc) -> Result<bool> {
    let inv = alpha.inverse().to_ratfunc(f.ctx())?;
    Ok(both_nonzero(&delta(&compose(&inv, f)?)))
}

/// Picks the representative from the sign pattern of `delta(f)` and the
/// boundary coefficients of `f`, then checks it.
pub fn classify_coset(f: &RatFunc) -> Result<CosetClass> {
    let ctx = f.ctx();
    let field = ctx.field();
    if f.is_constant() {
        return Err(Error::ConstantRightOperand);
    }
    let d = delta(f);
    let (ExtDeg::Finite(dmax), ExtDeg::Finite(dmin)) = (&d.dmax, &d.dmin) else {
        return Err(Error::VerificationFailed("zero function".into()));
    };
    let ring = ctx.ring();
    let (smax, smin) = (ring.sign(dmax), ring.sign(dmin));
    let pick = |g: &RatFunc, smin: Ordering| -> Result<MoebiusElem> {
        let a = top_ratio(g).expect("nonzero");
        match smin {
            Ordering::Less => Ok(MoebiusElem::translation(field, a)),
            Ordering::Greater => Ok(MoebiusElem::reciprocal_shift(field, field.inv(a)?)),
            Ordering::Equal => unreachable!(),
        }
    };
    let (rep, case) = match (smax, smin) {
        (Ordering::Equal, Ordering::Equal) => {
            let a = top_ratio(f).expect("nonzero");
            let b = bottom_ratio(f).expect("nonzero");
            if a == b {
                return Err(Error::VerificationFailed("top and bottom coefficient ratios coincide".into()));
            }
            let pairs = PairSystem::new(field);
            let rep = if pairs.canonical(a, b) == (a, b) {
                MoebiusElem::new(field, a, b, FFElem::ONE, FFElem::ONE)?
            } else {
                MoebiusElem::new(field, b, a, FFElem::ONE, FFElem::ONE)?
            };
            (rep, "4")
        }
        (Ordering::Equal, s) => (pick(f, s)?, if s == Ordering::Less { "1" } else { "2" }),
        (s, Ordering::Equal) => {
            // right composition with 1/x0 lies in H and swaps the roles
            let g = compose(f, &RatFunc::identity(ctx).inv()?)?;
            let smin_g = s.reverse();
            (pick(&g, smin_g)?, "3")
        }
        _ => (MoebiusElem::identity(field), "H"),
    };
    let verified = in_coset_of(&rep, f)?;
    if !verified {
        return Err(Error::VerificationFailed(format!("representative {} does not reduce f into H", rep)));
    }
    Ok(CosetClass { rep, case, verified, delta: d })
}
