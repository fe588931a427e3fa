//! Exact arithmetic in truncated skew Laurent series rings over F_p(t).

pub mod algebras;
pub mod error;
pub mod freering;
pub mod gen;
pub mod io;
pub mod resfield;
pub mod skew;
pub mod suites;
pub mod transforms;

pub use error::{Error, Result};
pub use resfield::{FpElem, Mobius, Poly, RatFunc};
pub use skew::{SkewSeries, SkewStructure};
