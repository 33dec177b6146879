pub mod context;
pub mod degree;
pub mod dobbertin;
pub mod error;
pub mod expr;
pub mod field;
pub mod group;
pub mod mpoly;
pub mod pform;
pub mod ratfunc;
pub mod uniform;
pub mod upoly;

pub use context::PFormCtx;
pub use degree::{DegElem, DegreeRing, DeltaPair, ExtDeg, UnitSystem};
pub use error::{Error, Result};
pub use field::{FFElem, FieldCtx};
pub use mpoly::{Monomial, MPoly};
pub use ratfunc::RatFunc;
