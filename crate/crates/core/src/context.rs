use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::degree::DegreeRing;
use crate::error::{Error, Result};
use crate::field::{self, FieldCtx};

struct CtxInner {
    field: FieldCtx,
    n: usize,
    ring: DegreeRing,
}

/// The setting for P-forms: the coefficient field F_q, the number of
/// variables `n` and the degree ring Z[q^(1/n)].
#[derive(Clone)]
pub struct PFormCtx {
    inner: Arc<CtxInner>,
}

impl PFormCtx {
    /// Requires `gcd(n, s) = 1` and `x^n - q` irreducible over Q.
    pub fn new(field: FieldCtx, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidContext("n must be at least 1".into()));
        }
        if n.gcd(&field.s()) != 1 {
            return Err(Error::InvalidContext(format!("gcd(n, s) = gcd({n}, {}) must be 1", field.s())));
        }
        let ring = DegreeRing::new(n, field.q())?;
        Ok(PFormCtx { inner: Arc::new(CtxInner { field, n, ring }) })
    }

    /// Context over F_q with the built-in modulus when `q` is not prime.
    pub fn with_q(q: u64, n: usize) -> Result<Self> {
        let (p, s) = field::prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        PFormCtx::new(FieldCtx::new(p, s, None)?, n)
    }

    /// Same field, different number of variables.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        PFormCtx::new(self.field().clone(), n)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.inner.field
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn q(&self) -> u64 {
        self.inner.field.q()
    }

    pub fn ring(&self) -> &DegreeRing {
        &self.inner.ring
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.field();
        serde_json::json!({ "p": f.p(), "s": f.s(), "q": f.q(), "n": self.n(), "modulus": f.modulus() })
    }
}

impl PartialEq for PFormCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || (self.n() == other.n() && self.field() == other.field())
    }
}

impl Eq for PFormCtx {}

impl fmt::Debug for PFormCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PFormCtx({:?}, n={})", self.field(), self.n())
    }
}
