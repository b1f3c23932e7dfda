//! The reproducing kernel `K(u,v) = Σ P_n(u)P_n(v)` by three routes.

use rug::Float;

use super::abcd::{eval_b, eval_b_prime, eval_d, eval_d_prime};
use crate::error::{QError, Result};
use crate::qcore::series::BOUND_PREC;
use crate::qcore::{QContext, Scalar, SeriesValue};
use crate::qfunctions::{Phi33, LOWER_THREE_HALVES};
use crate::qpolynomials::{recurrence_values, Sequence};

fn one_minus_q_inv(ctx: &QContext) -> Float {
    let prec = ctx.prec() + 64;
    Float::with_val(prec, 1 - ctx.q_at(prec)).recip()
}

/// `1/(1−q)·₃φ₃[0, u⁻¹vq, uv⁻¹q; q^{3/2}, −q^{3/2}, −q; q, −uv]`.
pub fn kernel<T: Scalar>(u: &T, v: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    if u.is_zero() || v.is_zero() {
        return Err(QError::domain("the 3phi3 kernel needs u != 0 and v != 0; use kernel_partial_sum"));
    }
    let params = |p: u32| {
        let (u, v) = (u.with_prec(p), v.with_prec(p));
        let mut vu = v.clone();
        vu.div_assign_s(&u);
        let mut uv = u.clone();
        uv.div_assign_s(&v);
        (vu, uv, u.mul_s(&v).neg_s())
    };
    let phi = Phi33 { what: "kernel 3phi3", ea: 4, eb: 4, lower: LOWER_THREE_HALVES, params: &params }
        .eval(ctx, ctx.prec())?;
    Ok(phi.scale(&one_minus_q_inv(ctx)))
}

/// `Σ_{n<N} P_n(u)P_n(v)`; the tail bound extrapolates the last terms geometrically.
pub fn kernel_partial_sum<T: Scalar>(u: &T, v: &T, terms: usize, ctx: &QContext) -> SeriesValue<T> {
    let pu = recurrence_values(Sequence::P, u, terms, ctx);
    let pv = recurrence_values(Sequence::P, v, terms, ctx);
    let mut acc = SeriesValue::exact(T::zero(ctx.prec() + 64));
    let mut mags = Vec::with_capacity(terms);
    for (a, b) in pu.iter().zip(&pv) {
        let t = a.mul(b);
        mags.push(t.magnitude());
        acc = acc.add(&t);
    }
    acc.tail_bound = geometric_tail(&mags);
    acc.terms_used = terms;
    acc
}

/// Bound on the omitted terms of a sum whose terms, taken two at a time, decay geometrically.
fn geometric_tail(mags: &[Float]) -> Float {
    let n = mags.len();
    if n < 6 {
        return Float::with_val(BOUND_PREC, f64::INFINITY);
    }
    // Parity makes single steps uneven; compare steps of two.
    let pair = |i: usize| Float::with_val(BOUND_PREC, &mags[i] + &mags[i - 1]);
    let (a, b, c) = (pair(n - 5), pair(n - 3), pair(n - 1));
    let r1 = Float::with_val(BOUND_PREC, &b / &a);
    let r2 = Float::with_val(BOUND_PREC, &c / &b);
    let r = if r1 > r2 { r1 } else { r2 };
    if !(r < 1) {
        return Float::with_val(BOUND_PREC, f64::INFINITY);
    }
    let one_minus = Float::with_val(BOUND_PREC, 1 - &r);
    Float::with_val(BOUND_PREC, &c * &r) / one_minus
}

/// `(B(u)D(v) − D(u)B(v))/(u − v)`.
pub fn kernel_bd<T: Scalar>(u: &T, v: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let mut diff = u.with_prec(ctx.prec() + 64);
    diff.sub_assign_s(&v.with_prec(ctx.prec() + 64));
    if diff.is_zero() {
        return Err(QError::domain("the B,D quotient needs u != v; use kernel_diag"));
    }
    let num = eval_b(u, ctx)?.mul(&eval_d(v, ctx)?).sub(&eval_d(u, ctx)?.mul(&eval_b(v, ctx)?));
    let mut inv = T::one(ctx.prec() + 64);
    inv.div_assign_s(&diff);
    Ok(num.scale_by(&inv))
}

/// `K(u,u) = 1/(1−q)·₃φ₃[0, q, q; q^{3/2}, −q^{3/2}, −q; q, −u²]`.
pub fn kernel_diag<T: Scalar>(u: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let params = |p: u32| {
        let u = u.with_prec(p);
        (T::one(p), T::one(p), u.mul_s(&u).neg_s())
    };
    let phi = Phi33 { what: "kernel diagonal 3phi3", ea: 4, eb: 4, lower: LOWER_THREE_HALVES, params: &params }
        .eval(ctx, ctx.prec())?;
    Ok(phi.scale(&one_minus_q_inv(ctx)))
}

/// `B′(u)D(u) − B(u)D′(u)`.
pub fn kernel_diag_derivative<T: Scalar>(u: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    Ok(eval_b_prime(u, ctx)?.mul(&eval_d(u, ctx)?).sub(&eval_b(u, ctx)?.mul(&eval_d_prime(u, ctx)?)))
}
