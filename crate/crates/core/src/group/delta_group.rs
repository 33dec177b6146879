//! The group of same-sign unit pairs with the swap-twisted product, and the
//! infinite-order certificate built on it.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::degree::{DegElem, DegreeRing, DeltaPair, ExtDeg};
use crate::error::{Error, Result};
use crate::pform::delta;
use crate::ratfunc::RatFunc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaGroupElem {
    pub a: DegElem,
    pub b: DegElem,
}

impl DeltaGroupElem {
    pub fn new(ring: &DegreeRing, a: DegElem, b: DegElem) -> Result<Self> {
        for x in [&a, &b] {
            if !ring.is_unit(x) {
                return Err(Error::NotAUnit(x.to_string()));
            }
        }
        if ring.sign_i32(&a) * ring.sign_i32(&b) != 1 {
            return Err(Error::PreconditionUnmet(format!("({a}, {b}) components differ in sign")));
        }
        Ok(DeltaGroupElem { a, b })
    }

    pub fn identity(ring: &DegreeRing) -> Self {
        DeltaGroupElem { a: ring.one(), b: ring.one() }
    }

    /// `delta(f)` as a group element, when it is one.
    pub fn from_delta(ring: &DegreeRing, d: &DeltaPair) -> Option<Self> {
        match (&d.dmax, &d.dmin) {
            (ExtDeg::Finite(a), ExtDeg::Finite(b)) => DeltaGroupElem::new(ring, a.clone(), b.clone()).ok(),
            _ => None,
        }
    }

    pub fn is_identity(&self, ring: &DegreeRing) -> bool {
        self.a == ring.one() && self.b == ring.one()
    }

    pub fn to_pair(&self) -> DeltaPair {
        DeltaPair::finite(self.a.clone(), self.b.clone())
    }

    pub fn to_json(&self) -> Value {
        json!([self.a.to_json(), self.b.to_json()])
    }
}

/// `(a1, b1)(a2, b2) = (a1 a2, b1 b2)` if `a2 > 0`, else `(b1 a2, a1 b2)`.
pub fn delta_group_mul(ring: &DegreeRing, u: &DeltaGroupElem, v: &DeltaGroupElem) -> DeltaGroupElem {
    let mul = |x: &DegElem, y: &DegElem| ring.mul(x, y).expect("same ring");
    if ring.sign(&v.a) == Ordering::Greater {
        DeltaGroupElem { a: mul(&u.a, &v.a), b: mul(&u.b, &v.b) }
    } else {
        DeltaGroupElem { a: mul(&u.b, &v.a), b: mul(&u.a, &v.b) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteOrderCertificate {
    pub delta: DeltaGroupElem,
    pub square: DeltaGroupElem,
}

impl InfiniteOrderCertificate {
    pub fn to_json(&self) -> Value {
        json!({ "delta": self.delta.to_json(), "delta_squared": self.square.to_json() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfiniteOrder {
    Infinite(InfiniteOrderCertificate),
    Inconclusive,
}

/// If `delta(f)` lies in the group and its square is not `(1, 1)`, the
/// square has two positive unit components not both 1, so no power of it is
/// the identity and `f` has infinite order.
pub fn certify_infinite_order(f: &RatFunc) -> Result<InfiniteOrder> {
    if f.is_constant() {
        return Err(Error::ConstantRightOperand);
    }
    let ring = f.ctx().ring();
    let Some(d) = DeltaGroupElem::from_delta(ring, &delta(f)) else {
        return Ok(InfiniteOrder::Inconclusive);
    };
    let square = delta_group_mul(ring, &d, &d);
    if square.is_identity(ring) {
        Ok(InfiniteOrder::Inconclusive)
    } else {
        Ok(InfiniteOrder::Infinite(InfiniteOrderCertificate { delta: d, square }))
    }
}
