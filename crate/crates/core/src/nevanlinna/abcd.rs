//! The Nevanlinna functions `A = S_q`, `B = −C_q(q^{−1/2}·)`, `C = C_q`, `D = q^{1/2}S_q(q^{−1/2}·)`
//! and their polynomial approximants.

use crate::error::{QError, Result};
use crate::qcore::{QContext, Scalar, SeriesValue};
use crate::qfunctions::{eval_cq, eval_cq_prime, eval_sq, eval_sq_prime};
use crate::qpolynomials::{q_scaled, recurrence_values, Sequence};

/// Values of the four Nevanlinna functions at one point.
#[derive(Debug, Clone)]
pub struct Abcd<T> {
    pub a: SeriesValue<T>,
    pub b: SeriesValue<T>,
    pub c: SeriesValue<T>,
    pub d: SeriesValue<T>,
}

impl<T: Scalar> Abcd<T> {
    /// `A D − B C`, identically one.
    pub fn determinant(&self) -> SeriesValue<T> {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }
}

pub fn eval_abcd<T: Scalar>(z: &T, ctx: &QContext) -> Result<Abcd<T>> {
    Ok(Abcd { a: eval_sq(z, ctx)?, b: eval_b(z, ctx)?, c: eval_cq(z, ctx)?, d: eval_d(z, ctx)? })
}

fn shrink<T: Scalar>(z: &T, ctx: &QContext) -> T {
    q_scaled(z, -2, ctx, ctx.prec() + 64)
}

pub fn eval_b<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    Ok(eval_cq(&shrink(z, ctx), ctx)?.neg())
}

pub fn eval_d<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    Ok(eval_sq(&shrink(z, ctx), ctx)?.scale(ctx.q_half()))
}

/// `B′(z) = −q^{−1/2}C_q′(q^{−1/2}z)`.
pub fn eval_b_prime<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let s = ctx.q_pow_quarter(-2, ctx.prec() + 64);
    Ok(eval_cq_prime(&shrink(z, ctx), ctx)?.scale(&s).neg())
}

/// `D′(z) = S_q′(q^{−1/2}z)`.
pub fn eval_d_prime<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    eval_sq_prime(&shrink(z, ctx), ctx)
}

/// `A_{n+1}, …, D_{n+1}` from the orthogonal polynomials of both kinds.
pub fn approx_abcd<T: Scalar>(n: usize, z: &T, ctx: &QContext) -> Result<Abcd<T>> {
    if n == 0 {
        return Err(QError::domain("approx_abcd needs n >= 1"));
    }
    let zero = T::zero(ctx.prec());
    let p = recurrence_values(Sequence::P, z, n + 2, ctx);
    let q = recurrence_values(Sequence::Q, z, n + 2, ctx);
    let p0 = recurrence_values(Sequence::P, &zero, n + 2, ctx);
    let q0 = recurrence_values(Sequence::Q, &zero, n + 2, ctx);
    let beta = ctx.q_pow_quarter(-2 * n as i64, ctx.prec() + 64);
    let pair = |x1: &SeriesValue<T>, y0: &SeriesValue<T>, y1: &SeriesValue<T>, x0: &SeriesValue<T>| {
        x1.mul(y0).sub(&y1.mul(x0)).scale(&beta)
    };
    Ok(Abcd {
        a: pair(&q[n + 1], &q0[n], &q0[n + 1], &q[n]),
        b: pair(&p[n + 1], &q0[n], &q0[n + 1], &p[n]),
        c: pair(&q[n + 1], &p0[n], &p0[n + 1], &q[n]),
        d: pair(&p[n + 1], &p0[n], &p0[n + 1], &p[n]),
    })
}
