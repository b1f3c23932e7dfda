//! The q-exponential 𝓔_q and its relatives: E_q^{(α)}, S_q, C_q, Sh_q, Ch_q,
//! Ramanujan's A_q, derivatives, and the closed-form combination formulas.

mod entire;
mod formulas;
mod id;

pub use entire::{
    eval_aq, eval_aq_prime, eval_chq, eval_cq, eval_cq_prime, eval_e, eval_eq_alpha, eval_shq, eval_sq, eval_sq_prime,
};
pub use formulas::{
    abs_e_sq, abs_e_sq_complex, abs_e_sq_trig, cq_via_bessel, eval_cq_1phi1, eval_cq_inverse_base, eval_e_inverse_base,
    eval_sq_1phi1, eval_sq_inverse_base, hahn_exton_j3_half, product_direct, product_formula_rhs, sq_via_bessel,
    trig_diff_direct, trig_diff_formula, trig_sum_direct, trig_sum_formula,
};
pub(crate) use formulas::{two_phi_two_abs, Phi33, LOWER_HALF, LOWER_THREE_HALVES};
pub(crate) use id::{b_real, d_real, fu_constants, fu_real, fu_real_with};
pub use id::{EntireFunctionId, Parity, TParam};
