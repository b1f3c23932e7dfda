//! Base configuration, the summation engine, q-Pochhammer symbols and ᵣφₛ.

mod context;
mod hypergeometric;
mod pochhammer;
pub(crate) mod qseries;
mod scalar;
pub(crate) mod series;

pub use context::{default_rel_tol, QContext, QContextBuilder, DEFAULT_MAX_TERMS, DEFAULT_PRECISION_BITS};
pub use hypergeometric::{eval_phi, HypergeometricSpec};
pub(crate) use hypergeometric::{PhiDef, PhiValues};
pub use pochhammer::{
    q_binomial, q_binomial_exact, q_pochhammer, q_pochhammer_q_exact, q_pochhammer_qpow_exact, PochLen,
};
pub use scalar::{log2_abs, powi, Scalar};
pub use series::{ComplexValue, RealValue, SeriesValue};
