//! Summation engine shared by every power series in the crate.
//!
//! A series is described by its first term, the ratio `t_{n+1}/t_n` and a
//! majorant for that ratio. The engine picks a working precision large
//! enough to absorb the cancellation between terms, sums until three
//! consecutive terms fall below the relative tolerance, and bounds the
//! remainder by the geometric tail of the majorant.

use rug::Float;

use super::context::QContext;
use super::scalar::{log2_abs, Scalar};
use crate::error::{QError, Result};

const GUARD_BITS: u32 = 32;
const MAX_WORKING_BITS: u32 = 1 << 20;
/// Precision used for magnitudes and error bounds.
pub(crate) const BOUND_PREC: u32 = 64;

/// A numeric value with a truncation bound and the number of terms summed.
///
/// `tail_bound` bounds the omitted remainder of the series only (it is zero
/// for terminating series). `round_bound` bounds the accumulated rounding
/// error of the summation; [`SeriesValue::error_bound`] is their sum and is
/// what sign certification uses.
#[derive(Debug, Clone)]
pub struct SeriesValue<T> {
    pub value: T,
    pub tail_bound: Float,
    pub round_bound: Float,
    pub terms_used: usize,
}

pub type RealValue = SeriesValue<Float>;
pub type ComplexValue = SeriesValue<rug::Complex>;

impl<T: Scalar> SeriesValue<T> {
    pub fn exact(value: T) -> Self {
        SeriesValue { value, tail_bound: Float::new(BOUND_PREC), round_bound: Float::new(BOUND_PREC), terms_used: 0 }
    }

    pub fn error_bound(&self) -> Float {
        Float::with_val(BOUND_PREC, &self.tail_bound + &self.round_bound)
    }

    pub fn magnitude(&self) -> Float {
        self.value.magnitude(BOUND_PREC)
    }

    /// Product of two values with a first-order propagated error bound.
    pub fn mul(&self, other: &Self) -> Self {
        let value = self.value.mul_s(&other.value);
        let (ea, eb) = (self.error_bound(), other.error_bound());
        let (ma, mb) = (self.magnitude(), other.magnitude());
        let mut err = Float::with_val(BOUND_PREC, &ea * &mb);
        err += Float::with_val(BOUND_PREC, &eb * &ma);
        err += Float::with_val(BOUND_PREC, &ea * &eb);
        SeriesValue::combined(value, err, self.terms_used.max(other.terms_used))
    }

    pub fn add(&self, other: &Self) -> Self {
        let value = self.value.add_s(&other.value);
        let err = Float::with_val(BOUND_PREC, self.error_bound() + other.error_bound());
        SeriesValue::combined(value, err, self.terms_used.max(other.terms_used))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let value = self.value.sub_s(&other.value);
        let err = Float::with_val(BOUND_PREC, self.error_bound() + other.error_bound());
        SeriesValue::combined(value, err, self.terms_used.max(other.terms_used))
    }

    /// Multiply by an exact real constant.
    pub fn scale(&self, r: &Float) -> Self {
        let ra = Float::with_val(BOUND_PREC, r.abs_ref());
        SeriesValue {
            value: self.value.scale(r),
            tail_bound: Float::with_val(BOUND_PREC, &self.tail_bound * &ra),
            round_bound: Float::with_val(BOUND_PREC, &self.round_bound * &ra),
            terms_used: self.terms_used,
        }
    }

    /// Multiply by an exact scalar.
    pub fn scale_by(&self, s: &T) -> Self {
        let ra = s.magnitude(BOUND_PREC);
        SeriesValue {
            value: self.value.mul_s(s),
            tail_bound: Float::with_val(BOUND_PREC, &self.tail_bound * &ra),
            round_bound: Float::with_val(BOUND_PREC, &self.round_bound * &ra),
            terms_used: self.terms_used,
        }
    }

    pub fn neg(&self) -> Self {
        SeriesValue { value: self.value.neg_s(), ..self.clone() }
    }

    fn combined(value: T, err: Float, terms_used: usize) -> Self {
        // Rounding of the combination itself.
        let mut round = value.magnitude(BOUND_PREC);
        round >>= value.prec().saturating_sub(2);
        round += &err;
        SeriesValue { value, tail_bound: Float::new(BOUND_PREC), round_bound: round, terms_used }
    }
}

impl SeriesValue<Float> {
    /// `Some(±1)` when the value is certified away from zero, `None` otherwise.
    pub fn certified_sign(&self) -> Option<i8> {
        if self.value.is_nan() {
            return None;
        }
        let mag = self.magnitude();
        if mag > self.error_bound() {
            Some(if self.value.is_sign_negative() { -1 } else { 1 })
        } else {
            None
        }
    }
}

/// Description of a power series handed to [`sum_series`].
pub(crate) struct SeriesPlan<'a, T> {
    pub what: &'a str,
    /// `log2 |t_0|`; `-inf` when the first term (hence every term) vanishes.
    pub log2_first: f64,
    /// `log2` of a bound on `|t_{m+1}/t_m|` valid for every `m >= n`.
    /// May return `+inf` while no such bound is available yet.
    pub log2_ratio_bound: &'a (dyn Fn(usize) -> f64 + Sync),
    /// Approximate `log2 |t_{n+1}/t_n|`, used only to choose the precision.
    pub log2_ratio_approx: &'a (dyn Fn(usize) -> f64 + Sync),
    /// Exact number of nonzero terms for terminating series.
    pub terminating_terms: Option<usize>,
    /// Returns the first term and a stepper producing the ratio for `n = 0, 1, ...`
    /// at the requested working precision.
    #[allow(clippy::type_complexity)]
    pub build: &'a (dyn Fn(u32) -> (T, Box<dyn FnMut(usize) -> T + 'a>) + Sync),
}

/// Sum the series to the context tolerance with at least `rel_bits` bits of
/// relative accuracy in the result (when the result is nonzero).
pub(crate) fn sum_series<T: Scalar>(ctx: &QContext, plan: &SeriesPlan<'_, T>, rel_bits: u32) -> Result<SeriesValue<T>> {
    if plan.log2_first == f64::NEG_INFINITY {
        let (first, _) = (plan.build)(ctx.prec());
        return Ok(SeriesValue { terms_used: 1, ..SeriesValue::exact(first) });
    }
    let growth = max_log2_growth(plan, ctx.max_terms());
    let mut prec = rel_bits
        .saturating_add(GUARD_BITS)
        .saturating_add(growth.ceil().max(0.0).min(MAX_WORKING_BITS as f64) as u32)
        .max(64);
    let mut attempts = 0;
    loop {
        let raw = sum_at_precision(ctx, plan, prec)?;
        attempts += 1;
        let lost = raw.lost_bits();
        let achieved = prec as f64 - lost - (16.0 * raw.terms as f64 + 64.0).log2();
        if achieved >= rel_bits as f64 || raw.value.is_zero() || attempts >= 4 || prec >= MAX_WORKING_BITS {
            return Ok(raw.finish(ctx));
        }
        let next = rel_bits as f64 + GUARD_BITS as f64 + lost + (16.0 * raw.terms as f64 + 64.0).log2();
        prec = (next.ceil() as u32).max(prec + 32).min(MAX_WORKING_BITS);
    }
}

fn max_log2_growth<T>(plan: &SeriesPlan<'_, T>, max_terms: usize) -> f64 {
    let mut level = 0.0f64;
    let mut peak = 0.0f64;
    for n in 0..max_terms {
        let bound = (plan.log2_ratio_bound)(n);
        let step = if bound.is_finite() { bound } else { (plan.log2_ratio_approx)(n) };
        if let Some(len) = plan.terminating_terms {
            if n + 1 >= len {
                break;
            }
        }
        if !step.is_finite() {
            if step == f64::NEG_INFINITY {
                break;
            }
            continue;
        }
        if bound.is_finite() && bound < 0.0 {
            break;
        }
        level += step;
        peak = peak.max(level);
    }
    peak
}

struct RawSum<T> {
    value: T,
    abs_sum: Float,
    tail: Float,
    terms: usize,
    prec: u32,
}

impl<T: Scalar> RawSum<T> {
    fn lost_bits(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        (log2_abs(&self.abs_sum) - self.value.log2_abs()).max(0.0)
    }

    fn finish(self, ctx: &QContext) -> SeriesValue<T> {
        let mut round = Float::with_val(BOUND_PREC, &self.abs_sum * (16 * self.terms as u64 + 64));
        round >>= self.prec;
        let mut value = self.value;
        if value.prec() > ctx.prec() {
            value.set_prec(ctx.prec());
            let mut r = value.magnitude(BOUND_PREC);
            r >>= ctx.prec() - 1;
            round += r;
        }
        SeriesValue { value, tail_bound: self.tail, round_bound: round, terms_used: self.terms }
    }
}

fn sum_at_precision<T: Scalar>(ctx: &QContext, plan: &SeriesPlan<'_, T>, prec: u32) -> Result<RawSum<T>> {
    let (first, mut ratio) = (plan.build)(prec);
    let mut term = first;
    let mut sum = term.clone();
    let mut abs_sum = term.magnitude(BOUND_PREC);
    let rel_tol = Float::with_val(BOUND_PREC, ctx.series_rel_tol());
    let max_terms = ctx.max_terms();

    if let Some(len) = plan.terminating_terms {
        if len > max_terms {
            return Err(QError::NonConvergence { what: plan.what.to_string(), max_terms });
        }
        for n in 0..len.saturating_sub(1) {
            term.mul_assign_s(&ratio(n));
            sum.add_assign_s(&term);
            abs_sum += term.magnitude(BOUND_PREC);
        }
        return Ok(RawSum { value: sum, abs_sum, tail: Float::new(BOUND_PREC), terms: len.max(1), prec });
    }

    let mut small_run = 0;
    for n in 0..max_terms {
        let r = ratio(n);
        term.mul_assign_s(&r);
        let terms = n + 2;
        if term.is_zero() {
            // every later term is a multiple of this one
            return Ok(RawSum { value: sum, abs_sum, tail: Float::new(BOUND_PREC), terms, prec });
        }
        sum.add_assign_s(&term);
        let t_mag = term.magnitude(BOUND_PREC);
        abs_sum += &t_mag;
        let s_mag = sum.magnitude(BOUND_PREC);
        if t_mag <= Float::with_val(BOUND_PREC, &rel_tol * &s_mag) {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            let lb = (plan.log2_ratio_bound)(n + 1);
            if lb.is_finite() && lb < -1e-3 {
                let r = Float::with_val(BOUND_PREC, lb).exp2();
                let one_minus = Float::with_val(BOUND_PREC, 1 - &r);
                // factor 2 covers the f64 rounding in the majorant
                let tail = Float::with_val(BOUND_PREC, &t_mag * &r) / one_minus * 2u32;
                if tail <= Float::with_val(BOUND_PREC, &rel_tol * &s_mag) || s_mag.is_zero() {
                    return Ok(RawSum { value: sum, abs_sum, tail, terms, prec });
                }
            } else if lb == f64::NEG_INFINITY {
                return Ok(RawSum { value: sum, abs_sum, tail: Float::new(BOUND_PREC), terms, prec });
            }
        }
    }
    Err(QError::NonConvergence { what: plan.what.to_string(), max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric_plan<'a>(
        x: f64,
        bound: &'a (dyn Fn(usize) -> f64 + Sync),
        build: &'a (dyn Fn(u32) -> (Float, Box<dyn FnMut(usize) -> Float + 'a>) + Sync),
    ) -> SeriesPlan<'a, Float> {
        let _ = x;
        SeriesPlan {
            what: "test",
            log2_first: 0.0,
            log2_ratio_bound: bound,
            log2_ratio_approx: bound,
            terminating_terms: None,
            build,
        }
    }

    #[test]
    fn sums_exponential_series() {
        // e^x = sum x^n/n!; ratio x/(n+1) bounded by |x|/(n+1) for m >= n
        let x = 1.5f64;
        let bound = move |n: usize| (x / (n as f64 + 1.0)).log2();
        let build = move |prec: u32| -> (Float, Box<dyn FnMut(usize) -> Float>) {
            (Float::with_val(prec, 1), Box::new(move |n: usize| Float::with_val(prec, x) / (n as u32 + 1)))
        };
        let ctx = QContext::new("0.5").unwrap();
        let plan = geometric_plan(x, &bound, &build);
        let v = sum_series(&ctx, &plan, ctx.prec()).unwrap();
        let exact = Float::with_val(256, 1.5f64).exp();
        let err = Float::with_val(64, &v.value - &exact).abs();
        assert!(err <= v.error_bound(), "err {err} bound {}", v.error_bound());
        assert!(err < 1e-60);
        assert!(v.terms_used < 200);
    }

    #[test]
    fn cancellation_raises_precision() {
        // e^{-40} through its Taylor series: terms reach ~1e16 while the sum is ~4e-18
        let x = -40.0f64;
        let bound = move |n: usize| (x.abs() / (n as f64 + 1.0)).log2();
        let build = move |prec: u32| -> (Float, Box<dyn FnMut(usize) -> Float>) {
            (Float::with_val(prec, 1), Box::new(move |n: usize| Float::with_val(prec, x) / (n as u32 + 1)))
        };
        let ctx = QContext::new("0.5").unwrap();
        let plan = geometric_plan(x, &bound, &build);
        let v = sum_series(&ctx, &plan, ctx.prec()).unwrap();
        let exact = Float::with_val(256, -40).exp();
        let rel = Float::with_val(64, &v.value - &exact).abs() / &exact;
        assert!(rel < 1e-58, "relative error {rel}");
    }

    #[test]
    fn certified_sign_respects_bounds() {
        let mut v = SeriesValue::exact(Float::with_val(64, 1e-30));
        assert_eq!(v.certified_sign(), Some(1));
        v.tail_bound = Float::with_val(64, 1e-29);
        assert_eq!(v.certified_sign(), None);
        let w = SeriesValue::exact(Float::with_val(64, -2));
        assert_eq!(w.certified_sign(), Some(-1));
    }
}
