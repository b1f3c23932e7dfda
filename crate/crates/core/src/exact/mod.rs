//! Exact polynomial arithmetic over `ℤ[q^{1/4}, q^{-1/4}]`.

mod laurent;
mod numeric;
mod xpoly;

pub use laurent::LaurentPolyQ;
pub use numeric::NumericPoly;
pub use xpoly::XPolyExact;
