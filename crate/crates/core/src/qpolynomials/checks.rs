//! Identity checks mixing exact polynomials with series-evaluated functions.

use rug::{Float, Rational};

use super::families::{fib_poly_recurrence, Base};
use super::numeric::{eval_exact, eval_fib_inverse, q_scaled, recurrence_values, Sequence};
use crate::error::{QError, Result};
use crate::exact::XPolyExact;
use crate::qcore::qseries::{QSeries, Shape, Values};
use crate::qcore::series::BOUND_PREC;
use crate::qcore::{PhiDef, PhiValues, QContext, Scalar, SeriesValue};
use crate::qfunctions::{eval_chq, eval_cq, eval_e, eval_shq, eval_sq, Phi33, LOWER_HALF, LOWER_THREE_HALVES};

/// `|LHS − RHS|` of an identity together with the combined error bound of both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub bound: f64,
}

impl Residual {
    pub fn of<T: Scalar>(lhs: &SeriesValue<T>, rhs: &SeriesValue<T>) -> Self {
        let d = lhs.sub(rhs);
        Residual { value: d.magnitude().to_f64(), bound: d.error_bound().to_f64() }
    }

    /// The residual is explained by the error bounds.
    pub fn within_bound(&self) -> bool {
        self.value <= self.bound
    }

    pub fn max(self, other: Residual) -> Residual {
        Residual { value: self.value.max(other.value), bound: self.bound.max(other.bound) }
    }
}

fn inv(n: usize) -> XPolyExact {
    fib_poly_recurrence(n, Base::QInverse)
}

/// `φ_n(x;q) = q^{(n−1)²/2} φ_n(q^{−(n−1)/2}x; q⁻¹)` as exact polynomials.
pub fn symmetry_check(n: usize) -> bool {
    let m = n as i64 - 1;
    let rhs = inv(n).subst_x_scale(-2 * m).shift_q(2 * m * m);
    fib_poly_recurrence(n, Base::Q) == rhs
}

/// The q-Euler–Cassini identity in base `q⁻¹`, as exact polynomials.
pub fn cassini_check(m: usize, n: usize) -> Result<bool> {
    if n > m {
        return Err(QError::domain(format!("cassini_check needs n <= m, got n={n}, m={m}")));
    }
    let (mi, ni) = (m as i64, n as i64);
    let lhs = (inv(m) * inv(n + 1).subst_x_scale(-2)).shift_q(2 * ni)
        - (inv(n) * inv(m + 1).subst_x_scale(-2)).shift_q(2 * mi);
    let mut rhs = inv(m - n).subst_x_scale(2 * ni).shift_q(4 * ni - 2 * mi * ni);
    if n % 2 == 1 {
        rhs = -rhs;
    }
    Ok(lhs == rhs)
}

/// `cassini_check` over `0 ≤ n ≤ m ≤ m_max`, spread over threads.
pub fn cassini_sweep(m_max: usize, ctx: &QContext) -> bool {
    let pairs: Vec<(usize, usize)> = (0..=m_max).flat_map(|m| (0..=m).map(move |n| (m, n))).collect();
    crate::par::map(ctx.execution(), &pairs, |&(m, n)| cassini_check(m, n).unwrap_or(false)).into_iter().all(|b| b)
}

fn e_at<T: Scalar>(x: &T, e: i64, negate: bool, ctx: &QContext) -> Result<SeriesValue<T>> {
    let mut y = q_scaled(x, e, ctx, ctx.prec() + 64);
    if negate {
        y = y.neg_s();
    }
    eval_e(&y, ctx)
}

fn fib_at<T: Scalar>(n: usize, x: &T, e: i64, ctx: &QContext) -> SeriesValue<T> {
    eval_fib_inverse(n, &q_scaled(x, e, ctx, ctx.prec() + 64), ctx)
}

type Entire<T> = fn(&T, &QContext) -> Result<SeriesValue<T>>;

fn f_at<T: Scalar>(f: Entire<T>, x: &T, e: i64, ctx: &QContext) -> Result<SeriesValue<T>> {
    f(&q_scaled(x, e, ctx, ctx.prec() + 64), ctx)
}

fn qq(e: i64, ctx: &QContext) -> Float {
    ctx.q_pow_quarter(e, ctx.prec() + 64)
}

/// `φ_n(x;q⁻¹)` against `½q^{−(n−1)²/4}(𝓔(x)𝓔(−q^{n/2}x) − (−1)ⁿ𝓔(−x)𝓔(q^{n/2}x))`.
pub fn wronskian_repr_check<T: Scalar>(n: usize, x: &T, ctx: &QContext) -> Result<Residual> {
    let ni = n as i64;
    let a = e_at(x, 0, false, ctx)?.mul(&e_at(x, 2 * ni, true, ctx)?);
    let b = e_at(x, 0, true, ctx)?.mul(&e_at(x, 2 * ni, false, ctx)?);
    let bracket = if n.is_multiple_of(2) { a.sub(&b) } else { a.add(&b) };
    let mut scale = qq(-(ni - 1) * (ni - 1), ctx);
    scale >>= 1;
    Ok(Residual::of(&eval_fib_inverse(n, x, ctx), &bracket.scale(&scale)))
}

/// The hyperbolic representations of `φ_{2n+1}(x;q⁻¹)` and `φ_{2n}(x;q⁻¹)`, as (odd, even) residuals.
pub fn hyperbolic_repr_check<T: Scalar>(n: usize, x: &T, ctx: &QContext) -> Result<(Residual, Residual)> {
    let ni = n as i64;
    let odd_rhs = f_at(eval_chq, x, 0, ctx)?
        .mul(&f_at(eval_chq, x, 4 * ni + 2, ctx)?)
        .sub(&f_at(eval_shq, x, 0, ctx)?.mul(&f_at(eval_shq, x, 4 * ni + 2, ctx)?).scale(&qq(2, ctx)))
        .scale(&qq(-4 * ni * ni, ctx));
    let even_rhs = f_at(eval_shq, x, 0, ctx)?
        .mul(&f_at(eval_chq, x, 4 * ni, ctx)?)
        .sub(&f_at(eval_chq, x, 0, ctx)?.mul(&f_at(eval_shq, x, 4 * ni, ctx)?))
        .scale(&qq(-4 * ni * (ni - 1), ctx));
    Ok((
        Residual::of(&eval_fib_inverse(2 * n + 1, x, ctx), &odd_rhs),
        Residual::of(&eval_fib_inverse(2 * n, x, ctx), &even_rhs),
    ))
}

fn terminating_phi33<T: Scalar>(
    ea: i64,
    lower: [(i32, i64); 3],
    n: usize,
    x: &T,
    ctx: &QContext,
) -> Result<SeriesValue<T>> {
    let params = |p: u32| {
        let w = x.with_prec(p).mul_s(&x.with_prec(p)).scale(&ctx.q_pow_quarter(4 * n as i64 + 4, p));
        (T::one(p), T::one(p), w)
    };
    Phi33 { what: "terminating 3phi3", ea, eb: 4 * n as i64 + 4, lower, params: &params }.eval(ctx, ctx.prec())
}

/// The terminating ₃φ₃ forms of `φ_{2n+1}(x;q⁻¹)` and `φ_{2n}(x;q⁻¹)`, as (odd, even) residuals.
pub fn terminating_3phi3_check<T: Scalar>(n: usize, x: &T, ctx: &QContext) -> Result<(Residual, Residual)> {
    let ni = n as i64;
    let prec = ctx.prec() + 64;
    let odd = terminating_phi33(-4 * ni, LOWER_HALF, n, x, ctx)?.scale(&qq(-4 * ni * ni, ctx));
    let even = if n == 0 {
        SeriesValue::exact(T::zero(ctx.prec()))
    } else {
        let mut pre = Float::with_val(prec, 1 - ctx.q_pow_quarter(4 * ni, prec));
        pre /= Float::with_val(prec, 1 - ctx.q_at(prec));
        pre *= ctx.q_pow_quarter(-4 * ni * (ni - 1), prec);
        terminating_phi33(4 - 4 * ni, LOWER_THREE_HALVES, n, x, ctx)?.scale(&pre).scale_by(&x.with_prec(prec))
    };
    Ok((
        Residual::of(&eval_fib_inverse(2 * n + 1, x, ctx), &odd),
        Residual::of(&eval_fib_inverse(2 * n, x, ctx), &even),
    ))
}

/// `(a;q)_k` over the rationals.
fn rat_poch(a: &Rational, q: &Rational, k: usize) -> Rational {
    let mut p = Rational::from(1);
    let mut t = a.clone();
    for _ in 0..k {
        p *= Rational::from(1) - &t;
        t *= q;
    }
    p
}

fn rat_pow(q: &Rational, e: i64) -> Rational {
    let mut r = Rational::from(1);
    for _ in 0..e.unsigned_abs() {
        r *= q;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// `Σ_k (a;q)_k(q^{n+1};q)_k / ((c;q²)_k(−q;q)_k(q;q)_k) · (−1)^k q^{k(k−1)/2} (q^{n+1}x²)^k`.
fn rat_terminating(a: &Rational, c: &Rational, n: usize, terms: usize, x: &Rational, q: &Rational) -> Rational {
    let q2 = Rational::from(q * q);
    let b = rat_pow(q, n as i64 + 1);
    let w = Rational::from(&b * x) * x;
    let mut sum = Rational::new();
    for k in 0..terms {
        let mut t = rat_poch(a, q, k) * rat_poch(&b, q, k);
        t /= rat_poch(c, &q2, k) * rat_poch(&Rational::from(-q), q, k) * rat_poch(q, q, k);
        t *= rat_pow(q, (k * k.saturating_sub(1) / 2) as i64) * rat_pow(&w, k as i64);
        if k % 2 == 1 {
            t = -t;
        }
        sum += t;
    }
    sum
}

/// Exact rational form of the terminating ₃φ₃ check at rational `x` and `q`: (odd, even) agreement.
pub fn terminating_3phi3_exact(n: usize, x: &Rational, q: &Rational) -> (bool, bool) {
    let ni = n as i64;
    let phi = |m: usize| inv(m).eval_rational(x, q).expect("integral q-exponents");
    let odd = rat_pow(q, -ni * ni) * rat_terminating(&rat_pow(q, -ni), q, n, n + 1, x, q);
    let even = if n == 0 {
        Rational::new()
    } else {
        let pre = rat_pow(q, -ni * (ni - 1)) * (Rational::from(1) - rat_pow(q, ni)) / (Rational::from(1) - q);
        pre * x * rat_terminating(&rat_pow(q, 1 - ni), &rat_pow(q, 3), n, n, x, q)
    };
    (phi(2 * n + 1) == odd, phi(2 * n) == even)
}

/// Which limit relation [`limit_check`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// `q^{n(n−1)}φ_{2n}(x;q⁻¹) → Sh_q(x)`.
    EvenSh,
    /// `q^{n²}φ_{2n+1}(x;q⁻¹) → Ch_q(x)`.
    OddCh,
    /// `(−1)ⁿq^{−n/2}P_{2n}(x) → C_q(q^{−1/2}x)`.
    PEven,
    /// `(−1)ⁿq^{−n/2}P_{2n+1}(x) → q^{1/2}S_q(q^{−1/2}x)`.
    POdd,
}

impl LimitKind {
    pub const ALL: [LimitKind; 4] = [LimitKind::EvenSh, LimitKind::OddCh, LimitKind::PEven, LimitKind::POdd];

    pub fn name(self) -> &'static str {
        match self {
            LimitKind::EvenSh => "even_Sh",
            LimitKind::OddCh => "odd_Ch",
            LimitKind::PEven => "P_even",
            LimitKind::POdd => "P_odd",
        }
    }
}

/// Distance between the `n`-th approximant and its limit.
pub fn limit_check<T: Scalar>(kind: LimitKind, x: &T, n: usize, ctx: &QContext) -> Result<Residual> {
    let ni = n as i64;
    let sign = |v: SeriesValue<T>| if n % 2 == 1 { v.neg() } else { v };
    let (approx, limit) = match kind {
        LimitKind::EvenSh => (eval_fib_inverse(2 * n, x, ctx).scale(&qq(4 * ni * (ni - 1), ctx)), eval_shq(x, ctx)?),
        LimitKind::OddCh => (eval_fib_inverse(2 * n + 1, x, ctx).scale(&qq(4 * ni * ni, ctx)), eval_chq(x, ctx)?),
        LimitKind::PEven => {
            let p = eval_exact(&super::families::p_poly(2 * ni), x, ctx);
            (sign(p.scale(&qq(-2 * ni, ctx))), f_at(eval_cq, x, -2, ctx)?)
        }
        LimitKind::POdd => {
            let p = eval_exact(&super::families::p_poly(2 * ni + 1), x, ctx);
            (sign(p.scale(&qq(-2 * ni, ctx))), f_at(eval_sq, x, -2, ctx)?.scale(&qq(2, ctx)))
        }
    };
    Ok(Residual::of(&approx, &limit))
}

/// The five relations between `q⁻¹`-Fibonacci polynomials and the hyperbolic and exponential functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiveTerm {
    I,
    II,
    III,
    IV,
    V,
}

impl FiveTerm {
    pub const ALL: [FiveTerm; 5] = [FiveTerm::I, FiveTerm::II, FiveTerm::III, FiveTerm::IV, FiveTerm::V];

    pub fn name(self) -> &'static str {
        match self {
            FiveTerm::I => "i",
            FiveTerm::II => "ii",
            FiveTerm::III => "iii",
            FiveTerm::IV => "iv",
            FiveTerm::V => "v",
        }
    }
}

/// LHS − RHS of the chosen relation at index `n`.
pub fn five_term_check<T: Scalar>(relation: FiveTerm, n: usize, x: &T, ctx: &QContext) -> Result<Residual> {
    let ni = n as i64;
    let n2 = qq(-4 * ni * ni, ctx);
    let (lhs, rhs) = match relation {
        // φ_{2n+1}(q^{−1/2}x)Sh(x) − q^{−n}φ_{2n}(x)Ch(q^{−1/2}x) = q^{−n²}Sh(qⁿx)
        FiveTerm::I => (
            fib_at(2 * n + 1, x, -2, ctx)
                .mul(&eval_shq(x, ctx)?)
                .sub(&fib_at(2 * n, x, 0, ctx).mul(&f_at(eval_chq, x, -2, ctx)?).scale(&qq(-4 * ni, ctx))),
            f_at(eval_shq, x, 4 * ni, ctx)?.scale(&n2),
        ),
        // φ_{2n+1}(q^{−1/2}x)Ch(x) − q^{−n+1/2}φ_{2n}(x)Sh(q^{−1/2}x) = q^{−n²}Ch(qⁿx)
        FiveTerm::II => (
            fib_at(2 * n + 1, x, -2, ctx)
                .mul(&eval_chq(x, ctx)?)
                .sub(&fib_at(2 * n, x, 0, ctx).mul(&f_at(eval_shq, x, -2, ctx)?).scale(&qq(2 - 4 * ni, ctx))),
            f_at(eval_chq, x, 4 * ni, ctx)?.scale(&n2),
        ),
        // φ_{2n+1}(x)Sh(q^{−1/2}x) − qⁿφ_{2n+2}(q^{−1/2}x)Ch(x) = q^{−n²}Sh(q^{n+1/2}x)
        FiveTerm::III => (
            fib_at(2 * n + 1, x, 0, ctx)
                .mul(&f_at(eval_shq, x, -2, ctx)?)
                .sub(&fib_at(2 * n + 2, x, -2, ctx).mul(&eval_chq(x, ctx)?).scale(&qq(4 * ni, ctx))),
            f_at(eval_shq, x, 4 * ni + 2, ctx)?.scale(&n2),
        ),
        // φ_{2n+1}(x)Ch(q^{−1/2}x) − q^{n+1/2}φ_{2n+2}(q^{−1/2}x)Sh(x) = q^{−n²}Ch(q^{n+1/2}x)
        FiveTerm::IV => (
            fib_at(2 * n + 1, x, 0, ctx)
                .mul(&f_at(eval_chq, x, -2, ctx)?)
                .sub(&fib_at(2 * n + 2, x, -2, ctx).mul(&eval_shq(x, ctx)?).scale(&qq(4 * ni + 2, ctx))),
            f_at(eval_chq, x, 4 * ni + 2, ctx)?.scale(&n2),
        ),
        // φ_{n+1}(q^{−1/2}x)𝓔(x) − q^{−(2n−1)/4}φ_n(x)𝓔(q^{−1/2}x) = (−1)ⁿq^{−n²/4}𝓔(q^{n/2}x)
        FiveTerm::V => {
            let r = e_at(x, 2 * ni, false, ctx)?.scale(&qq(-ni * ni, ctx));
            (
                fib_at(n + 1, x, -2, ctx)
                    .mul(&eval_e(x, ctx)?)
                    .sub(&fib_at(n, x, 0, ctx).mul(&e_at(x, -2, false, ctx)?).scale(&qq(1 - 2 * ni, ctx))),
                if n % 2 == 1 { r.neg() } else { r },
            )
        }
    };
    Ok(Residual::of(&lhs, &rhs))
}

/// `Σ_{n<N} q^{n(n−1)/2}φ_{n+1}(x;q⁻¹)(−s)ⁿ` against `₂φ₂[q, x⁻¹s; 0, 0; q, sx]`.
pub fn generating_function_check<T: Scalar>(x: &T, s: &T, terms: usize, ctx: &QContext) -> Result<Residual> {
    if x.is_zero() {
        return Err(QError::domain("generating function: the 2phi2 parameter s/x needs x != 0"));
    }
    let partial = generating_partial_sum(x, s, terms, ctx);
    Ok(Residual::of(&partial, &generating_two_phi_two(x, s, ctx)?))
}

/// The direct partial sum `Σ_{n<N} q^{n(n−1)/2}φ_{n+1}(x;q⁻¹)(−s)ⁿ`.
pub fn generating_partial_sum<T: Scalar>(x: &T, s: &T, terms: usize, ctx: &QContext) -> SeriesValue<T> {
    let prec = ctx.prec() + 64;
    let phis = recurrence_values(Sequence::FibInverse, x, terms + 1, ctx);
    let mut acc = SeriesValue::exact(T::zero(prec));
    let mut pow = T::one(prec);
    let ms = s.with_prec(prec).neg_s();
    for n in 0..terms {
        let ni = n as i64;
        let term = phis[n + 1].scale_by(&pow).scale(&ctx.q_pow_quarter(2 * ni * (ni - 1), prec));
        acc = acc.add(&term);
        pow.mul_assign_s(&ms);
    }
    acc
}

/// `₂φ₂[q, x⁻¹s; 0, 0; q, sx]`.
pub fn generating_two_phi_two<T: Scalar>(x: &T, s: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let values = |p: u32| {
        let mut sx = s.with_prec(p);
        sx.div_assign_s(&x.with_prec(p));
        PhiValues {
            upper: vec![T::one(p), sx],
            lower: vec![T::zero(p), T::zero(p)],
            arg: s.with_prec(p).mul_s(&x.with_prec(p)),
        }
    };
    PhiDef { what: "generating 2phi2", base_quarters: 4, upper_q: vec![4, 0], lower_q: vec![0, 0], values: &values }
        .eval(ctx, ctx.prec())
}

/// `V(s) − 1 + s(x − s)V(qs)` for `V(s) = ₂φ₂[q, x⁻¹s; 0, 0; q, sx]`.
pub fn generating_q_difference_check<T: Scalar>(x: &T, s: &T, ctx: &QContext) -> Result<Residual> {
    let prec = ctx.prec() + 64;
    let v = generating_two_phi_two(x, s, ctx)?;
    let vq = generating_two_phi_two(x, &q_scaled(s, 4, ctx, prec), ctx)?;
    let coef = s.with_prec(prec).mul_s(&x.with_prec(prec).sub_s(&s.with_prec(prec)));
    let rhs = SeriesValue::exact(T::one(prec)).sub(&vq.scale_by(&coef));
    Ok(Residual::of(&v, &rhs))
}

/// `Σ_{n<N} P_n(x)tⁿ` against `Σ_k q^{k(k−1)/4}xᵏtᵏ/(−q^{1/2}t²;q)_{k+1}`.
pub fn chen_ismail_check<T: Scalar>(x: &T, t: &T, terms: usize, ctx: &QContext) -> Result<Residual> {
    let bound = ctx.q_pow_quarter(-1, BOUND_PREC);
    if t.magnitude(BOUND_PREC) >= bound {
        return Err(QError::domain("Chen-Ismail generating function needs |t| < q^{-1/4}"));
    }
    let prec = ctx.prec() + 64;
    let ps = recurrence_values(Sequence::P, x, terms, ctx);
    let mut partial = SeriesValue::exact(T::zero(prec));
    let mut pow = T::one(prec);
    for p in &ps {
        partial = partial.add(&p.scale_by(&pow));
        pow.mul_assign_s(&t.with_prec(prec));
    }
    Ok(Residual::of(&partial, &chen_ismail_closed(x, t, ctx)?))
}

/// `Σ_k q^{k(k−1)/4}xᵏtᵏ/(−q^{1/2}t²;q)_{k+1}`.
pub fn chen_ismail_closed<T: Scalar>(x: &T, t: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    // Term ratio: q^{k/2}·xt / (1 + q^{1/2}t²·q^{k+1}).
    let values = |p: u32| {
        let t = t.with_prec(p);
        let t2 = t.mul_s(&t);
        let mut first = T::one(p);
        let mut d = T::one(p);
        d.add_assign_s(&t2.scale(&ctx.q_pow_quarter(2, p)));
        first.div_assign_s(&d);
        Values { first, w: x.with_prec(p).mul_s(&t), num: vec![], den: vec![t2.neg_s()] }
    };
    QSeries {
        what: "Chen-Ismail generating function",
        slope: 2.0,
        offset: 0.0,
        num: vec![],
        den: vec![Shape::new(4, 6)],
        lin: None,
        terminating: None,
        values: &values,
    }
    .sum(ctx, ctx.prec())
}
