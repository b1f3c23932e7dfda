//! Series definitions of 𝓔_q, E_q^{(α)}, S_q, C_q, Sh_q, Ch_q, A_q and their derivatives.

use rug::Float;

use crate::error::{QError, Result};
use crate::qcore::qseries::{QSeries, Shape, Values};
use crate::qcore::{QContext, Scalar, SeriesValue};

/// Series with unit denominators coefficients `1 − q^{(k n+l)/4}`.
#[allow(clippy::too_many_arguments)]
fn unit_series<T: Scalar>(
    ctx: &QContext,
    what: &str,
    first: &(dyn Fn(u32) -> T + Sync),
    w: &(dyn Fn(u32) -> T + Sync),
    slope: f64,
    offset: f64,
    den: &[Shape],
    lin: Option<[i64; 4]>,
    rel_bits: u32,
) -> Result<SeriesValue<T>> {
    let n_den = den.len();
    let values = |prec: u32| Values { first: first(prec), w: w(prec), num: vec![], den: vec![T::one(prec); n_den] };
    QSeries { what, slope, offset, num: vec![], den: den.to_vec(), lin, terminating: None, values: &values }
        .sum(ctx, rel_bits)
}

fn sq<T: Scalar>(z: &T, prec: u32) -> T {
    let z = z.with_prec(prec);
    z.mul_s(&z)
}

fn one_minus_q_pow(ctx: &QContext, k: i64, prec: u32) -> Float {
    Float::with_val(prec, 1 - ctx.q_pow_quarter(4 * k, prec))
}

/// `E_q^{(α)}(z) = Σ q^{αn²/2} z^n/(q;q)_n`.
pub fn eval_eq_alpha<T: Scalar>(alpha: f64, z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    eq_alpha_bits(alpha, z, ctx, ctx.prec())
}

pub(crate) fn eq_alpha_bits<T: Scalar>(alpha: f64, z: &T, ctx: &QContext, bits: u32) -> Result<SeriesValue<T>> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(QError::domain(format!("E_q^(alpha) needs alpha >= 0, got {alpha}")));
    }
    if alpha == 0.0 && z.magnitude(64) >= 1 {
        return Err(QError::NonConvergence { what: "e_q(z) with |z| >= 1".into(), max_terms: ctx.max_terms() });
    }
    unit_series(
        ctx,
        "E_q^(alpha)",
        &|p| T::one(p),
        &|p| z.with_prec(p),
        4.0 * alpha,
        2.0 * alpha,
        &[Shape::new(4, 4)],
        None,
        bits,
    )
}

/// `𝓔_q(z) = Σ q^{n²/4} z^n/(q;q)_n`.
pub fn eval_e<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    eq_alpha_bits(0.5, z, ctx, ctx.prec())
}

/// `S_q(z) = Σ (−1)^n q^{n(n+1)} z^{2n+1}/(q;q)_{2n+1}`.
pub fn eval_sq<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    sine_like(z, ctx, ctx.prec(), true)
}

/// `C_q(z) = Σ (−1)^n q^{n²} z^{2n}/(q;q)_{2n}`.
pub fn eval_cq<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    cosine_like(z, ctx, ctx.prec(), true)
}

/// `Sh_q(z) = −i S_q(iz)`: the sine series with all signs positive.
pub fn eval_shq<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    sine_like(z, ctx, ctx.prec(), false)
}

/// `Ch_q(z) = C_q(iz)`: the cosine series with all signs positive.
pub fn eval_chq<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    cosine_like(z, ctx, ctx.prec(), false)
}

pub(crate) fn sine_like<T: Scalar>(z: &T, ctx: &QContext, bits: u32, alternating: bool) -> Result<SeriesValue<T>> {
    let first = |p: u32| {
        let mut f = z.with_prec(p);
        f.mul_assign_real(&Float::with_val(p, one_minus_q_pow(ctx, 1, p).recip_ref()));
        f
    };
    let w = |p: u32| if alternating { sq(z, p).neg_s() } else { sq(z, p) };
    let what = if alternating { "S_q" } else { "Sh_q" };
    unit_series(ctx, what, &first, &w, 8.0, 8.0, &[Shape::new(8, 8), Shape::new(8, 12)], None, bits)
}

pub(crate) fn cosine_like<T: Scalar>(z: &T, ctx: &QContext, bits: u32, alternating: bool) -> Result<SeriesValue<T>> {
    let w = |p: u32| if alternating { sq(z, p).neg_s() } else { sq(z, p) };
    let what = if alternating { "C_q" } else { "Ch_q" };
    unit_series(ctx, what, &|p| T::one(p), &w, 8.0, 4.0, &[Shape::new(8, 4), Shape::new(8, 8)], None, bits)
}

/// `A_q(z) = Σ q^{n²}(−z)^n/(q;q)_n = ₀φ₁(–; 0; q, −qz)`.
pub fn eval_aq<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    aq_bits(z, ctx, ctx.prec())
}

pub(crate) fn aq_bits<T: Scalar>(z: &T, ctx: &QContext, bits: u32) -> Result<SeriesValue<T>> {
    unit_series(ctx, "A_q", &|p| T::one(p), &|p| z.with_prec(p).neg_s(), 8.0, 4.0, &[Shape::new(4, 4)], None, bits)
}

/// `S_q′(z)` by term-wise differentiation.
pub fn eval_sq_prime<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let first = |p: u32| T::from_real(&Float::with_val(p, one_minus_q_pow(ctx, 1, p).recip_ref()), p);
    let w = |p: u32| sq(z, p).neg_s();
    unit_series(
        ctx,
        "S_q'",
        &first,
        &w,
        8.0,
        8.0,
        &[Shape::new(8, 8), Shape::new(8, 12)],
        Some([2, 3, 2, 1]),
        ctx.prec(),
    )
}

/// `C_q′(z)` by term-wise differentiation.
pub fn eval_cq_prime<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let first = |p: u32| {
        // −2q z/((1−q)(1−q²))
        let mut c = Float::with_val(p, ctx.q_at(p) * 2u32);
        c /= one_minus_q_pow(ctx, 1, p);
        c /= one_minus_q_pow(ctx, 2, p);
        let mut f = z.with_prec(p);
        f.mul_assign_real(&c);
        f.neg_s()
    };
    let w = |p: u32| sq(z, p).neg_s();
    unit_series(
        ctx,
        "C_q'",
        &first,
        &w,
        8.0,
        12.0,
        &[Shape::new(8, 12), Shape::new(8, 16)],
        Some([2, 4, 2, 2]),
        ctx.prec(),
    )
}

/// `A_q′(z)` by term-wise differentiation.
pub fn eval_aq_prime<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let first = |p: u32| {
        let c = Float::with_val(p, ctx.q_at(p) / one_minus_q_pow(ctx, 1, p));
        T::from_real(&(-c), p)
    };
    let w = |p: u32| z.with_prec(p).neg_s();
    unit_series(ctx, "A_q'", &first, &w, 8.0, 12.0, &[Shape::new(4, 8)], Some([1, 2, 1, 1]), ctx.prec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Complex;

    fn ctx(q: &str) -> QContext {
        QContext::new(q).unwrap()
    }

    fn f(x: f64) -> Float {
        Float::with_val(256, x)
    }

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(64, a - b).abs() < tol
    }

    #[test]
    fn values_at_origin() {
        let c = ctx("0.5");
        assert_eq!(eval_e(&f(0.0), &c).unwrap().value, 1);
        assert!(eval_sq(&f(0.0), &c).unwrap().value.is_zero());
        assert_eq!(eval_cq(&f(0.0), &c).unwrap().value, 1);
        assert!(eval_shq(&f(0.0), &c).unwrap().value.is_zero());
        assert_eq!(eval_chq(&f(0.0), &c).unwrap().value, 1);
        assert_eq!(eval_aq(&f(0.0), &c).unwrap().value, 1);
    }

    #[test]
    fn e_q_alpha_zero_is_inverse_product() {
        let c = ctx("0.5");
        let v = eval_eq_alpha(0.0, &f(0.5), &c).unwrap();
        let mut prod = Float::with_val(300, 1);
        let mut p = Float::with_val(300, 0.5);
        for _ in 0..1000 {
            prod *= Float::with_val(300, 1 - &p);
            p /= 2;
        }
        assert!(close(&v.value, &Float::with_val(300, prod.recip_ref()), 1e-55));
        assert!(eval_eq_alpha(0.0, &f(1.5), &c).is_err());
        assert!(eval_eq_alpha(-1.0, &f(0.5), &c).is_err());
    }

    #[test]
    fn e_q_alpha_one_is_jackson_exponential() {
        // E_q^{(1)}(w) = Σ q^{n(n−1)/2} (q^{1/2} w)^n/(q;q)_n
        let c = ctx("0.3");
        let w = 1.7f64;
        let v = eval_eq_alpha(1.0, &f(w), &c).unwrap();
        let q = 0.3f64;
        let mut s = 0.0;
        let mut poch = 1.0;
        for n in 0..60 {
            if n > 0 {
                poch *= 1.0 - q.powi(n);
            }
            s += q.powf(n as f64 * (n as f64 - 1.0) / 2.0) * (q.sqrt() * w).powi(n) / poch;
        }
        assert!((v.value.to_f64() - s).abs() < 1e-13);
    }

    #[test]
    fn e_q_difference_equation() {
        let c = ctx("0.5");
        let z = f(0.7);
        let q = c.q_at(256);
        let lhs = eval_e(&z, &c).unwrap().value - eval_e(&Float::with_val(256, &z * &q), &c).unwrap().value;
        let half = Float::with_val(256, &z * c.q_half());
        let rhs = Float::with_val(256, &z * c.q_quarter()) * eval_e(&half, &c).unwrap().value;
        assert!(close(&Float::with_val(256, lhs), &rhs, 1e-70));
    }

    #[test]
    fn q_euler_identity() {
        let c = ctx("0.4");
        let z = Complex::with_val(256, (0.8, -0.3));
        let iz = Complex::with_val(256, &z * Complex::with_val(256, (0, 1)));
        let e = eval_e(&iz, &c).unwrap().value;
        let s = eval_sq(&z, &c).unwrap().value;
        let co = eval_cq(&z, &c).unwrap().value;
        let rhs = co + Complex::with_val(256, (0, 1)) * Complex::with_val(256, &s * c.q_quarter());
        let d = Float::with_val(64, (e - rhs).abs_ref());
        assert!(d < 1e-70);
    }

    #[test]
    fn hyperbolic_functions_from_complex_rotation() {
        let c = ctx("0.5");
        let x = 1.3f64;
        let ix = Complex::with_val(256, (0, x));
        let sh = eval_shq(&f(x), &c).unwrap().value;
        let s = eval_sq(&ix, &c).unwrap().value;
        // Sh_q(x) = −i S_q(ix)
        let minus_i_s = s * Complex::with_val(256, (0, -1));
        assert!(close(&sh, minus_i_s.real(), 1e-70));
        let ch = eval_chq(&f(x), &c).unwrap().value;
        assert!(ch >= 1);
        assert!(close(&ch, eval_cq(&ix, &c).unwrap().value.real(), 1e-70));
    }

    #[test]
    fn ramanujan_function_changes_sign_between_one_and_ten() {
        let c = ctx("0.5");
        let signs: Vec<bool> =
            (0..=90).map(|k| eval_aq(&f(1.0 + 0.1 * k as f64), &c).unwrap().value.is_sign_positive()).collect();
        assert!(signs.windows(2).any(|w| w[0] != w[1]));
        // A_q matches the ₀φ₁ convention form
        let spec = crate::qcore::HypergeometricSpec::new(
            vec![],
            vec![Complex::new(256)],
            Complex::with_val(256, (-0.5 * 3.0, 0)),
        );
        let phi = crate::qcore::eval_phi(&spec, &c).unwrap().value;
        let aq = eval_aq(&f(3.0), &c).unwrap().value;
        assert!(close(phi.real(), &aq, 1e-70));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let c = ctx("0.5").with_precision(512).unwrap();
        let x = Float::with_val(512, 1.1);
        let h = Float::with_val(512, 1e-40);
        let fd = |g: &dyn Fn(&Float) -> Float| {
            let a = g(&Float::with_val(512, &x + &h));
            let b = g(&Float::with_val(512, &x - &h));
            Float::with_val(512, a - b) / Float::with_val(512, &h * 2u32)
        };
        let s = fd(&|y| eval_sq(y, &c).unwrap().value);
        assert!(close(&s, &eval_sq_prime(&x, &c).unwrap().value, 1e-70));
        let co = fd(&|y| eval_cq(y, &c).unwrap().value);
        assert!(close(&co, &eval_cq_prime(&x, &c).unwrap().value, 1e-70));
        let a = fd(&|y| eval_aq(y, &c).unwrap().value);
        assert!(close(&a, &eval_aq_prime(&x, &c).unwrap().value, 1e-70));
    }

    #[test]
    fn large_arguments_keep_relative_accuracy() {
        // far out the terms reach 2^{100+} while S_q stays moderate
        let c = ctx("0.3");
        let x = f(3000.0);
        let lo = c.with_precision(128).unwrap();
        let a = eval_sq(&x, &c).unwrap();
        let b = eval_sq(&Float::with_val(128, &x), &lo).unwrap();
        let rel = Float::with_val(64, &a.value - &b.value).abs() / Float::with_val(64, a.value.abs_ref());
        assert!(rel < 1e-30, "{rel}");
    }
}
