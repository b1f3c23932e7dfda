//! The q- and q⁻¹-Fibonacci polynomials, the monic family T_n, the
//! orthonormal polynomials P_n, Q_n of the indeterminate moment problem,
//! the 𝔉 function, and checks of the identities connecting them to the
//! q-exponential and q-hyperbolic functions.

mod checks;
mod families;
mod numeric;

pub use checks::{
    cassini_check, cassini_sweep, chen_ismail_check, chen_ismail_closed, five_term_check, generating_function_check,
    generating_partial_sum, generating_q_difference_check, generating_two_phi_two, hyperbolic_repr_check, limit_check,
    symmetry_check, terminating_3phi3_check, terminating_3phi3_exact, wronskian_repr_check, FiveTerm, LimitKind,
    Residual,
};
pub use families::{
    fib_poly, fib_poly_recurrence, fib_sequence, p_monic, p_poly, p_poly_recurrence, p_sequence, q_poly,
    q_poly_from_fib, t_poly, t_poly_from_fib, t_poly_recurrence, Base,
};
pub(crate) use numeric::q_scaled;
pub use numeric::{
    eval_exact, eval_fib_inverse, frak_f, indeterminacy_closed_form, indeterminacy_partial_sums, recurrence_values,
    Sequence,
};
