//! The Nevanlinna quadruple of the indeterminate moment problem for `P_n`,
//! its reproducing kernel, the N-extremal and absolutely continuous
//! solutions, moments, and the determinate `A_q` case.

mod abcd;
mod ac;
mod aq;
mod kernel;
mod measure;
mod moments;

pub use abcd::{approx_abcd, eval_abcd, eval_b, eval_b_prime, eval_d, eval_d_prime, Abcd};
pub use ac::{
    ac_density, ac_density_2phi2, ac_density_exponential, ac_moments, has_closed_form, verify_ac_orthogonality,
    ACMeasureSpec,
};
pub use aq::{aq_nodes, aq_orthogonality_check, aq_stieltjes_check, AqNodes};
pub use kernel::{kernel, kernel_bd, kernel_diag, kernel_diag_derivative, kernel_partial_sum};
pub use measure::{
    build_measure, cosine_measure, f_u, f_u_3phi3, first_sine_zero, rho_via_bd, rho_via_t, sine_measure,
    DiscreteMeasure, MeasureParam,
};
pub use moments::{measure_moments, verify_orthogonality, JacobiOperator, ResidualMatrix};
