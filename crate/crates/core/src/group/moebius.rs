//! Elements `(a x_0 + b) / (c x_0 + d)` of G(1, q), i.e. PGL(2, F_q).

use std::fmt;

use crate::context::PFormCtx;
use crate::error::{Error, Result};
use crate::field::{FFElem, FieldCtx};
use crate::mpoly::MPoly;
use crate::ratfunc::RatFunc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusElem {
    field: FieldCtx,
    m: [FFElem; 4],
}

impl MoebiusElem {
    /// Scaled so that the first nonzero entry of `(a, b, c, d)` is 1.
    pub fn new(field: &FieldCtx, a: FFElem, b: FFElem, c: FFElem, d: FFElem) -> Result<Self> {
        let det = field.sub(field.mul(a, d), field.mul(b, c));
        if det.is_zero() {
            return Err(Error::PreconditionUnmet("singular Moebius matrix".into()));
        }
        let lead = [a, b, c, d].into_iter().find(|x| !x.is_zero()).expect("nonzero determinant");
        let s = field.inv(lead)?;
        Ok(MoebiusElem { field: field.clone(), m: [a, b, c, d].map(|x| field.mul(x, s)) })
    }

    pub fn identity(field: &FieldCtx) -> Self {
        MoebiusElem { field: field.clone(), m: [FFElem::ONE, FFElem::ZERO, FFElem::ZERO, FFElem::ONE] }
    }

    /// `x_0 + a`.
    pub fn translation(field: &FieldCtx, a: FFElem) -> Self {
        MoebiusElem { field: field.clone(), m: [FFElem::ONE, a, FFElem::ZERO, FFElem::ONE] }
    }

    /// `1 / (x_0 + b)`.
    pub fn reciprocal_shift(field: &FieldCtx, b: FFElem) -> Self {
        MoebiusElem::new(field, FFElem::ZERO, FFElem::ONE, FFElem::ONE, b).expect("nonsingular")
    }

    pub fn entries(&self) -> [FFElem; 4] {
        self.m
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn inverse(&self) -> MoebiusElem {
        let f = &self.field;
        let [a, b, c, d] = self.m;
        MoebiusElem::new(f, d, f.neg(b), f.neg(c), a).expect("inverse of a nonsingular matrix")
    }

    /// Matrix product, which corresponds to composition `self o other`.
    pub fn compose(&self, other: &MoebiusElem) -> MoebiusElem {
        let f = &self.field;
        let [a, b, c, d] = self.m;
        let [e, g, h, k] = other.m;
        let dot = |x: FFElem, y: FFElem, z: FFElem, w: FFElem| f.add(f.mul(x, y), f.mul(z, w));
        MoebiusElem::new(f, dot(a, e, b, h), dot(a, g, b, k), dot(c, e, d, h), dot(c, g, d, k)).expect("nonsingular")
    }

    pub fn to_ratfunc(&self, ctx: &PFormCtx) -> Result<RatFunc> {
        if ctx.field() != &self.field {
            return Err(Error::ContextMismatch);
        }
        let [a, b, c, d] = self.m;
        let x0 = MPoly::var(ctx, 0);
        let num = x0.scale(a).add(&MPoly::constant(ctx, b))?;
        let den = x0.scale(c).add(&MPoly::constant(ctx, d))?;
        Ok(RatFunc::new(num, den)?.content_reduce())
    }

    /// Recognises `(a x_0 + b) / (c x_0 + d)` among rational functions.
    pub fn from_ratfunc(f: &RatFunc) -> Option<MoebiusElem> {
        let ctx = f.ctx();
        let field = ctx.field();
        let linear = |p: &MPoly| -> Option<(FFElem, FFElem)> {
            let mut coef = (FFElem::ZERO, FFElem::ZERO);
            for (m, c) in p.terms() {
                if m.is_one() {
                    coef.1 = *c;
                } else if m[0] == 1 && m.total_degree() == 1 {
                    coef.0 = *c;
                } else {
                    return None;
                }
            }
            Some(coef)
        };
        let (a, b) = linear(f.num())?;
        let (c, d) = linear(f.den())?;
        MoebiusElem::new(field, a, b, c, d).ok()
    }
}

impl fmt::Display for MoebiusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fld = &self.field;
        let e: Vec<String> = self.m.iter().map(|x| fld.format_elem(*x)).collect();
        write!(f, "[[{}, {}], [{}, {}]]", e[0], e[1], e[2], e[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::pform::verify_inverse;

    fn ctx(q: u64, n: usize) -> PFormCtx {
        PFormCtx::with_q(q, n).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let c = ctx(2, 2);
        let f = c.field();
        let t = MoebiusElem::translation(f, FFElem::ONE);
        assert_eq!(t.inverse(), t);
        let r = MoebiusElem::reciprocal_shift(f, FFElem::ZERO);
        assert_eq!(r.inverse(), r);
        let c3 = ctx(3, 2);
        let f3 = c3.field();
        let m = MoebiusElem::from_ratfunc(&parse(&c3, "(x0+1)/x0").unwrap()).unwrap();
        let inv = m.inverse().to_ratfunc(&c3).unwrap();
        assert!(inv.rat_eq(&parse(&c3, "1/(x0+2)").unwrap()));
        assert!(verify_inverse(&m.to_ratfunc(&c3).unwrap(), &inv).unwrap());
        assert_eq!(m.compose(&m.inverse()), MoebiusElem::identity(f3));
    }

    #[test]
    fn singular_rejected() {
        let c = ctx(3, 1);
        let f = c.field();
        assert!(MoebiusElem::new(f, FFElem::ONE, FFElem::ONE, FFElem::ONE, FFElem::ONE).is_err());
    }
}
