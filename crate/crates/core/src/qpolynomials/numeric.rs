//! Numeric evaluation: Horner on exact polynomials for moderate degree,
//! three-term recurrences for long sequences, and the 𝔉 function.

use rug::Float;

use super::families::{fib_poly_recurrence, Base};
use crate::exact::{NumericPoly, XPolyExact};
use crate::qcore::series::BOUND_PREC;
use crate::qcore::{QContext, Scalar, SeriesValue};

/// `p(x)` with the Horner error bound.
pub fn eval_exact<T: Scalar>(p: &XPolyExact, x: &T, ctx: &QContext) -> SeriesValue<T> {
    NumericPoly::new(p, ctx).eval(x, ctx)
}

/// `φ_n(x; q⁻¹)` through its exact coefficients.
pub fn eval_fib_inverse<T: Scalar>(n: usize, x: &T, ctx: &QContext) -> SeriesValue<T> {
    eval_exact(&fib_poly_recurrence(n, Base::QInverse), x, ctx)
}

/// `x·q^{e/4}` at `prec` bits.
pub(crate) fn q_scaled<T: Scalar>(x: &T, e: i64, ctx: &QContext, prec: u32) -> T {
    x.with_prec(prec).scale(&ctx.q_pow_quarter(e, prec))
}

/// Which sequence a three-term recurrence produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sequence {
    /// `φ_0, φ_1, …` in base `q⁻¹`.
    FibInverse,
    /// `P_0, P_1, …`.
    P,
    /// `Q_0, Q_1, …`.
    Q,
}

fn run<T: Scalar>(seq: Sequence, x: &T, len: usize, ctx: &QContext, prec: u32) -> Vec<T> {
    let x = x.with_prec(prec);
    let mut out = Vec::with_capacity(len);
    let (mut prev, mut cur) = match seq {
        // `prev` is the value before index 0.
        Sequence::FibInverse => (T::from_real(&ctx.q_pow_quarter(-4, prec), prec), T::zero(prec)),
        Sequence::P => (T::zero(prec), T::one(prec)),
        Sequence::Q => (T::from_real(&ctx.q_pow_quarter(-2, prec), prec).neg_s(), T::zero(prec)),
    };
    let qh = ctx.q_pow_quarter(2, prec);
    for m in 0..len as i64 {
        out.push(cur.clone());
        let next = match seq {
            // φ_{m+1} = xφ_m + q^{−(m−1)}φ_{m−1}; the fictitious φ_{−1} = q⁻¹ gives φ_1 = 1.
            Sequence::FibInverse => {
                let mut t = x.mul_s(&cur);
                t.add_assign_s(&prev.scale(&ctx.q_pow_quarter(-4 * (m - 1), prec)));
                t
            }
            // P_{m+1} = q^{m/2} x P_m − q^{1/2} P_{m−1}; Q obeys the same recurrence
            // with Q_0 = 0, Q_1 = 1, realised by the fictitious Q_{−1} = −q^{−1/2}.
            Sequence::P | Sequence::Q => {
                let mut t = x.mul_s(&cur).scale(&ctx.q_pow_quarter(2 * m, prec));
                t.sub_assign_s(&prev.scale(&qh));
                t
            }
        };
        prev = cur;
        cur = next;
    }
    out
}

/// The first `len` members of a sequence at `x` by the three-term recurrence.
///
/// The recurrence is run at two precisions; the bound is twice their
/// difference plus a rounding allowance at the higher one.
pub fn recurrence_values<T: Scalar>(seq: Sequence, x: &T, len: usize, ctx: &QContext) -> Vec<SeriesValue<T>> {
    let lo = run(seq, x, len, ctx, ctx.prec() + 64);
    let hi = run(seq, x, len, ctx, ctx.prec() + 128);
    lo.into_iter()
        .zip(hi)
        .enumerate()
        .map(|(n, (a, b))| {
            let mut err = Float::with_val(BOUND_PREC, a.sub_s(&b).magnitude(BOUND_PREC) * 2u32);
            let mut round = b.magnitude(BOUND_PREC);
            round >>= ctx.prec() + 120;
            err += round;
            SeriesValue {
                value: b.with_prec(ctx.prec()),
                tail_bound: Float::new(BOUND_PREC),
                round_bound: err,
                terms_used: n,
            }
        })
        .collect()
}

/// `𝔉(x₁, …, x_n)` from `𝔉_{k+1} = 𝔉_k − x_k x_{k+1} 𝔉_{k−1}`; `𝔉(∅) = 1`.
pub fn frak_f<T: Scalar>(entries: &[T], prec: u32) -> T {
    let (mut prev, mut cur) = (T::one(prec), T::one(prec));
    for k in 1..entries.len() {
        let mut t = entries[k - 1].with_prec(prec).mul_s(&entries[k].with_prec(prec));
        t.mul_assign_s(&prev);
        let next = cur.sub_s(&t);
        prev = cur;
        cur = next;
    }
    cur
}

/// Partial sums `Σ_{n≤N} (P_n(0)² + Q_n(0)²)` for `N = 0, …, len−1`.
pub fn indeterminacy_partial_sums(len: usize, ctx: &QContext) -> Vec<Float> {
    let zero = Float::new(ctx.prec());
    let p = recurrence_values(Sequence::P, &zero, len, ctx);
    let q = recurrence_values(Sequence::Q, &zero, len, ctx);
    let mut acc = Float::new(ctx.prec());
    p.iter()
        .zip(&q)
        .map(|(a, b)| {
            acc += Float::with_val(ctx.prec(), a.value.square_ref());
            acc += Float::with_val(ctx.prec(), b.value.square_ref());
            acc.clone()
        })
        .collect()
}

/// The closed value of the same partial sum, `Σ_{2k≤N} q^k + Σ_{2k+1≤N} q^k`.
pub fn indeterminacy_closed_form(n: usize, ctx: &QContext) -> Float {
    let prec = ctx.prec();
    let geometric = |terms: usize| {
        let qn = ctx.q_pow_quarter(4 * terms as i64, prec);
        Float::with_val(prec, 1 - qn) / Float::with_val(prec, 1 - ctx.q())
    };
    geometric(n / 2 + 1) + geometric(n.div_ceil(2))
}

#[cfg(test)]
mod tests {
    use rug::Complex;

    use super::super::families::{p_poly, q_poly};
    use super::*;

    #[test]
    fn recurrences_match_exact_polynomials() {
        let ctx = QContext::new("0.45").unwrap();
        let x = Float::with_val(ctx.prec(), 1.3);
        let p = recurrence_values(Sequence::P, &x, 14, &ctx);
        let q = recurrence_values(Sequence::Q, &x, 14, &ctx);
        let f = recurrence_values(Sequence::FibInverse, &x, 14, &ctx);
        for n in 0..14 {
            let pe = eval_exact(&p_poly(n as i64), &x, &ctx).value;
            let qe = eval_exact(&q_poly(n), &x, &ctx).value;
            let fe = eval_fib_inverse(n, &x, &ctx).value;
            for (a, b) in [(&p[n], pe), (&q[n], qe), (&f[n], fe)] {
                let d = Float::with_val(64, &a.value - &b).abs();
                assert!(d <= Float::with_val(64, b.abs_ref()) * 1e-60 + 1e-60, "n={n}");
                assert!(a.error_bound() < 1e-60);
            }
        }
    }

    #[test]
    fn frak_f_small_cases() {
        let prec = 128;
        let c = |v: f64| Complex::with_val(prec, (v, 0.0));
        assert_eq!(frak_f::<Complex>(&[], prec), c(1.0));
        assert_eq!(frak_f(&[c(3.0)], prec), c(1.0));
        assert_eq!(frak_f(&[c(3.0), c(5.0)], prec), c(-14.0));
    }

    #[test]
    fn indeterminacy_sums_match_closed_form() {
        let ctx = QContext::new("0.6").unwrap();
        let sums = indeterminacy_partial_sums(40, &ctx);
        let limit = 2.0 / (1.0 - 0.6);
        for (n, s) in sums.iter().enumerate() {
            let d = Float::with_val(64, s - indeterminacy_closed_form(n, &ctx)).abs();
            assert!(d < 1e-60, "N={n}");
            assert!(s.to_f64() < limit);
            if n > 0 {
                assert!(s > &sums[n - 1]);
            }
        }
    }
}
