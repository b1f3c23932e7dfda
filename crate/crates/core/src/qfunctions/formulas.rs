//! Closed ₃φ₃/₂φ₂/₁φ₁ forms, base-inversion symmetries and the q-Bessel relation.

use rug::{Complex, Float};

use super::entire::{eval_cq, eval_e, eval_sq};
use crate::error::{QError, Result};
use crate::qcore::series::BOUND_PREC;
use crate::qcore::{PhiDef, PhiValues, QContext, Scalar, SeriesValue};

/// `₃φ₃[0, a·q^{ea/4}, b·q^{eb/4}; c₁q^{l₁/4}, c₂q^{l₂/4}, c₃q^{l₃/4}; q, w]`
/// where `a`, `b`, `w` are produced at the working precision.
pub(crate) struct Phi33<'a, T> {
    pub what: &'a str,
    pub ea: i64,
    pub eb: i64,
    pub lower: [(i32, i64); 3],
    pub params: &'a (dyn Fn(u32) -> (T, T, T) + Sync + 'a),
}

impl<'a, T: Scalar> Phi33<'a, T> {
    pub fn eval(&self, ctx: &QContext, bits: u32) -> Result<SeriesValue<T>> {
        let lower = self.lower;
        let values = |prec: u32| {
            let (a, b, w) = (self.params)(prec);
            PhiValues {
                upper: vec![T::zero(prec), a, b],
                lower: lower.iter().map(|(c, _)| T::from_real(&Float::with_val(prec, *c), prec)).collect(),
                arg: w,
            }
        };
        PhiDef {
            what: self.what,
            base_quarters: 4,
            upper_q: vec![0, self.ea, self.eb],
            lower_q: lower.iter().map(|(_, e)| *e).collect(),
            values: &values,
        }
        .eval(ctx, bits)
    }
}

fn require_nonzero<T: Scalar>(u: &T, v: &T, what: &str) -> Result<()> {
    if u.is_zero() || v.is_zero() {
        return Err(QError::domain(format!("{what}: the closed form needs u != 0 and v != 0")));
    }
    Ok(())
}

/// `(u^{-1}v, u v^{-1}, u v·q^{e/4}·sign)` at precision `prec`.
fn ratio_params<T: Scalar>(u: &T, v: &T, ctx: &QContext, e: i64, negate: bool, prec: u32) -> (T, T, T) {
    let u = u.with_prec(prec);
    let v = v.with_prec(prec);
    let mut vu = v.clone();
    vu.div_assign_s(&u);
    let mut uv_ratio = u.clone();
    uv_ratio.div_assign_s(&v);
    let mut w = u.mul_s(&v);
    w.mul_assign_real(&ctx.q_pow_quarter(e, prec));
    if negate {
        w = w.neg_s();
    }
    (vu, uv_ratio, w)
}

pub(crate) const LOWER_HALF: [(i32, i64); 3] = [(1, 2), (-1, 2), (-1, 4)];
pub(crate) const LOWER_THREE_HALVES: [(i32, i64); 3] = [(1, 6), (-1, 6), (-1, 4)];

/// The even-part ₃φ₃ with parameters `u^{-1}vq^{1/2}, uv^{-1}q^{1/2}` and argument `±uvq^{1/2}`.
fn even_part<T: Scalar>(u: &T, v: &T, ctx: &QContext, negate: bool) -> Result<SeriesValue<T>> {
    let params = |p: u32| ratio_params(u, v, ctx, 2, negate, p);
    Phi33 { what: "3phi3", ea: 2, eb: 2, lower: LOWER_HALF, params: &params }.eval(ctx, ctx.prec())
}

/// `(u − v)/(1 − q) · ₃φ₃[0, u^{-1}vq, uv^{-1}q; q^{3/2}, −q^{3/2}, −q; q, ±uvq]`.
fn odd_part<T: Scalar>(u: &T, v: &T, ctx: &QContext, negate: bool) -> Result<SeriesValue<T>> {
    let params = |p: u32| ratio_params(u, v, ctx, 4, negate, p);
    let phi =
        Phi33 { what: "3phi3", ea: 4, eb: 4, lower: LOWER_THREE_HALVES, params: &params }.eval(ctx, ctx.prec())?;
    let prec = ctx.prec() + 16;
    let mut d = u.with_prec(prec);
    d.sub_assign_s(&v.with_prec(prec));
    d.mul_assign_real(&Float::with_val(prec, 1 - ctx.q_at(prec)).recip());
    Ok(phi.scale_by(&d))
}

/// Right-hand side of the addition formula for `𝓔_q(u)𝓔_q(−v)`.
pub fn product_formula_rhs<T: Scalar>(u: &T, v: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    require_nonzero(u, v, "product formula")?;
    let even = even_part(u, v, ctx, false)?;
    let odd = odd_part(u, v, ctx, false)?.scale(ctx.q_quarter());
    Ok(even.add(&odd))
}

/// Direct product `𝓔_q(u)𝓔_q(−v)`.
pub fn product_direct<T: Scalar>(u: &T, v: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    Ok(eval_e(u, ctx)?.mul(&eval_e(&v.neg_s(), ctx)?))
}

/// Closed form of `C_q(u)C_q(v) + q^{1/2}S_q(u)S_q(v)`.
pub fn trig_sum_formula<T: Scalar>(u: &T, v: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    require_nonzero(u, v, "trig sum formula")?;
    even_part(u, v, ctx, true)
}

/// Closed form of `S_q(u)C_q(v) − C_q(u)S_q(v)`.
pub fn trig_diff_formula<T: Scalar>(u: &T, v: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    require_nonzero(u, v, "trig difference formula")?;
    odd_part(u, v, ctx, true)
}

/// Direct combination `C_q(u)C_q(v) + q^{1/2}S_q(u)S_q(v)`.
pub fn trig_sum_direct<T: Scalar>(u: &T, v: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let cc = eval_cq(u, ctx)?.mul(&eval_cq(v, ctx)?);
    let ss = eval_sq(u, ctx)?.mul(&eval_sq(v, ctx)?).scale(ctx.q_half());
    Ok(cc.add(&ss))
}

/// Direct combination `S_q(u)C_q(v) − C_q(u)S_q(v)`.
pub fn trig_diff_direct<T: Scalar>(u: &T, v: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let sc = eval_sq(u, ctx)?.mul(&eval_cq(v, ctx)?);
    let cs = eval_cq(u, ctx)?.mul(&eval_sq(v, ctx)?);
    Ok(sc.sub(&cs))
}

/// `|𝓔_q(ix)|² = ₂φ₂[0, q^{1/2}; −q^{1/2}, −q; q, −x²q^{1/2}]` for real `x`.
pub fn abs_e_sq(x: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    two_phi_two_abs(x, ctx, ctx.prec())
}

pub(crate) fn two_phi_two_abs(x: &Float, ctx: &QContext, bits: u32) -> Result<SeriesValue<Float>> {
    let values = |prec: u32| {
        let x = Float::with_val(prec, x);
        let w = -(Float::with_val(prec, &x * &x) * ctx.q_pow_quarter(2, prec));
        PhiValues {
            upper: vec![Float::new(prec), Float::with_val(prec, 1)],
            lower: vec![Float::with_val(prec, -1), Float::with_val(prec, -1)],
            arg: w,
        }
    };
    PhiDef { what: "2phi2", base_quarters: 4, upper_q: vec![0, 2], lower_q: vec![2, 4], values: &values }
        .eval(ctx, bits)
}

/// `C_q(x)² + q^{1/2}S_q(x)²`.
pub fn abs_e_sq_trig(x: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    let c = eval_cq(x, ctx)?;
    let s = eval_sq(x, ctx)?;
    Ok(c.mul(&c).add(&s.mul(&s).scale(ctx.q_half())))
}

/// `|𝓔_q(ix)|²` through the complex series.
pub fn abs_e_sq_complex(x: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    let ix = Complex::with_val(ctx.prec(), (0, x));
    let e = eval_e(&ix, ctx)?;
    let norm = Float::with_val(ctx.prec(), e.value.abs_ref()).square();
    let mag = e.magnitude();
    let err = e.error_bound();
    let mut bound = Float::with_val(BOUND_PREC, &mag * &err) * 2u32;
    bound += Float::with_val(BOUND_PREC, &err * &err);
    let mut r = Float::with_val(BOUND_PREC, &norm);
    r >>= ctx.prec() - 2;
    bound += r;
    Ok(SeriesValue { value: norm, tail_bound: Float::new(BOUND_PREC), round_bound: bound, terms_used: e.terms_used })
}

/// `S_q(z) = z/(1−q) · ₁φ₁(0; q³; q², q²z²)`.
pub fn eval_sq_1phi1<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let values = |prec: u32| {
        let z = z.with_prec(prec);
        let mut w = z.mul_s(&z);
        w.mul_assign_real(&ctx.q_pow_quarter(8, prec));
        PhiValues { upper: vec![T::zero(prec)], lower: vec![T::one(prec)], arg: w }
    };
    let phi = PhiDef { what: "S_q (1phi1)", base_quarters: 8, upper_q: vec![0], lower_q: vec![12], values: &values }
        .eval(ctx, ctx.prec())?;
    let prec = ctx.prec() + 16;
    let mut f = z.with_prec(prec);
    f.mul_assign_real(&Float::with_val(prec, 1 - ctx.q_at(prec)).recip());
    Ok(phi.scale_by(&f))
}

/// `C_q(z) = ₁φ₁(0; q; q², qz²)`.
pub fn eval_cq_1phi1<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let values = |prec: u32| {
        let z = z.with_prec(prec);
        let mut w = z.mul_s(&z);
        w.mul_assign_real(&ctx.q_pow_quarter(4, prec));
        PhiValues { upper: vec![T::zero(prec)], lower: vec![T::one(prec)], arg: w }
    };
    PhiDef { what: "C_q (1phi1)", base_quarters: 8, upper_q: vec![0], lower_q: vec![4], values: &values }
        .eval(ctx, ctx.prec())
}

/// `∏_{k≥0}(1 − q^{(start + k·step)/4})` with a bound on the omitted factors.
fn qpow_product(ctx: &QContext, start: i64, step: i64) -> SeriesValue<Float> {
    let prec = ctx.prec() + 32;
    let mut p = ctx.q_pow_quarter(start, prec);
    let s = ctx.q_pow_quarter(step, prec);
    let mut prod = Float::with_val(prec, 1);
    let mut terms = 0;
    let cut = Float::with_val(BOUND_PREC, ctx.series_rel_tol()) >> 8u32;
    while Float::with_val(BOUND_PREC, &p) > cut {
        prod *= Float::with_val(prec, 1 - &p);
        p *= &s;
        terms += 1;
    }
    // Σ_{k≥K} q^{...} ≤ p/(1 − q^{step/4}); the product changes by at most twice that
    let one_minus = Float::with_val(BOUND_PREC, 1 - &s);
    let tail = Float::with_val(BOUND_PREC, &p * 4u32) / one_minus;
    let tail = tail * Float::with_val(BOUND_PREC, prod.abs_ref());
    let mut round = Float::with_val(BOUND_PREC, prod.abs_ref()) * (4 * terms as u64 + 8);
    round >>= prec;
    prod.set_prec(ctx.prec());
    SeriesValue { value: prod, tail_bound: tail, round_bound: round, terms_used: terms }
}

/// Hahn–Exton q-Bessel function `J^{(3)}_ν(x; q²)` for `ν = ±1/2` and `x > 0`.
pub fn hahn_exton_j3_half(nu_sign: i8, x: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    if *x <= 0 {
        return Err(QError::domain("the q-Bessel cross-check is defined for x > 0 only"));
    }
    if nu_sign != 1 && nu_sign != -1 {
        return Err(QError::domain("only the orders +1/2 and -1/2 are supported"));
    }
    // p^{ν+1} with p = q²: q³ for ν = 1/2, q for ν = −1/2
    let lower_q: i64 = if nu_sign > 0 { 12 } else { 4 };
    let values = |prec: u32| {
        let x = Float::with_val(prec, x);
        let w = Float::with_val(prec, &x * &x) * ctx.q_pow_quarter(8, prec);
        PhiValues { upper: vec![Float::new(prec)], lower: vec![Float::with_val(prec, 1)], arg: w }
    };
    let phi = PhiDef { what: "J3", base_quarters: 8, upper_q: vec![0], lower_q: vec![lower_q], values: &values }
        .eval(ctx, ctx.prec())?;
    let top = qpow_product(ctx, lower_q, 8);
    let bottom = qpow_product(ctx, 8, 8);
    let prec = ctx.prec() + 16;
    let xpow =
        if nu_sign > 0 { Float::with_val(prec, x.sqrt_ref()) } else { Float::with_val(prec, x.sqrt_ref()).recip() };
    let ratio = top.value.clone() / bottom.value.clone();
    let factor = Float::with_val(prec, ratio * xpow);
    let mut v = phi.scale(&factor);
    // relative errors of the two products
    let rel = Float::with_val(BOUND_PREC, top.error_bound() / Float::with_val(BOUND_PREC, top.value.abs_ref()))
        + Float::with_val(BOUND_PREC, bottom.error_bound() / Float::with_val(BOUND_PREC, bottom.value.abs_ref()));
    v.round_bound += Float::with_val(BOUND_PREC, v.magnitude() * rel) * 2u32;
    Ok(v)
}

/// `(q²;q²)_∞/(q;q²)_∞ · x^{1/2} J^{(3)}_{1/2}(x; q²)`, which equals `S_q(x)` for `x > 0`.
pub fn sq_via_bessel(x: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    let j = hahn_exton_j3_half(1, x, ctx)?;
    Ok(bessel_prefactor(ctx, x, j))
}

/// `q^{-1/4}(q²;q²)_∞/(q;q²)_∞ · x^{1/2} J^{(3)}_{-1/2}(q^{-1/2}x; q²)`, which equals `C_q(x)` for `x > 0`.
///
/// Without the leading `q^{-1/4}` the expression equals `q^{1/4}C_q(x)`.
pub fn cq_via_bessel(x: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    let y = Float::with_val(ctx.prec() + 16, x / ctx.q_half());
    let j = hahn_exton_j3_half(-1, &y, ctx)?;
    let v = bessel_prefactor(ctx, x, j);
    Ok(v.scale(&ctx.q_pow_quarter(-1, ctx.prec() + 16)))
}

fn bessel_prefactor(ctx: &QContext, x: &Float, j: SeriesValue<Float>) -> SeriesValue<Float> {
    let top = qpow_product(ctx, 8, 8);
    let bottom = qpow_product(ctx, 4, 8);
    let prec = ctx.prec() + 16;
    let f = Float::with_val(prec, &top.value / &bottom.value) * Float::with_val(prec, x.sqrt_ref());
    let mut v = j.scale(&f);
    let rel = Float::with_val(BOUND_PREC, top.error_bound() / Float::with_val(BOUND_PREC, top.value.abs_ref()))
        + Float::with_val(BOUND_PREC, bottom.error_bound() / Float::with_val(BOUND_PREC, bottom.value.abs_ref()));
    v.round_bound += Float::with_val(BOUND_PREC, v.magnitude() * rel) * 2u32;
    v
}

/// `𝓔_{q^{-1}}(z)`, defined through `𝓔_{q^{-1}}(z) = 𝓔_q(−q^{1/2}z)`.
pub fn eval_e_inverse_base<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let mut w = z.with_prec(ctx.prec() + 16).neg_s();
    w.mul_assign_real(&ctx.q_pow_quarter(2, ctx.prec() + 16));
    eval_e(&w, ctx)
}

/// `S_{q^{-1}}(z) = −q^{1/2}S_q(q^{1/2}z)`.
pub fn eval_sq_inverse_base<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let h = ctx.q_pow_quarter(2, ctx.prec() + 16);
    let w = z.with_prec(ctx.prec() + 16).scale(&h);
    Ok(eval_sq(&w, ctx)?.scale(&h).neg())
}

/// `C_{q^{-1}}(z) = C_q(q^{1/2}z)`.
pub fn eval_cq_inverse_base<T: Scalar>(z: &T, ctx: &QContext) -> Result<SeriesValue<T>> {
    let h = ctx.q_pow_quarter(2, ctx.prec() + 16);
    eval_cq(&z.with_prec(ctx.prec() + 16).scale(&h), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: &str) -> QContext {
        QContext::new(q).unwrap()
    }

    fn f(x: f64) -> Float {
        Float::with_val(256, x)
    }

    fn diff<T: Scalar>(a: &SeriesValue<T>, b: &SeriesValue<T>) -> f64 {
        a.value.sub_s(&b.value).magnitude(64).to_f64()
    }

    #[test]
    fn product_formula_two_paths() {
        let c = ctx("0.5");
        let (u, v) = (f(0.9), f(0.4));
        let a = product_formula_rhs(&u, &v, &c).unwrap();
        let b = product_direct(&u, &v, &c).unwrap();
        assert!(diff(&a, &b) < 1e-60);
        let w = f(1.3);
        let same = product_formula_rhs(&w, &w, &c).unwrap();
        assert!(diff(&same, &product_direct(&w, &w, &c).unwrap()) < 1e-60);
        assert!(product_formula_rhs(&f(0.0), &w, &c).is_err());
    }

    #[test]
    fn product_formula_complex_arguments() {
        let c = ctx("0.3");
        let u = Complex::with_val(256, (0.7, 1.1));
        let v = Complex::with_val(256, (-1.4, 0.2));
        let a = product_formula_rhs(&u, &v, &c).unwrap();
        let b = product_direct(&u, &v, &c).unwrap();
        assert!(diff(&a, &b) < 1e-60);
    }

    #[test]
    fn trig_formulas() {
        let c = ctx("0.3");
        let (u, v) = (f(1.2), f(0.5));
        assert!(diff(&trig_sum_formula(&u, &v, &c).unwrap(), &trig_sum_direct(&u, &v, &c).unwrap()) < 1e-60);
        assert!(diff(&trig_diff_formula(&u, &v, &c).unwrap(), &trig_diff_direct(&u, &v, &c).unwrap()) < 1e-60);
        assert!(trig_diff_formula(&u, &u, &c).unwrap().value.is_zero());
        // u = q^{1/2} v gives the Pythagorean identity
        let c5 = ctx("0.5");
        let v = f(1.1);
        let u = Float::with_val(256, &v * c5.q_half());
        let one = trig_sum_formula(&u, &v, &c5).unwrap();
        assert!((one.value - 1u32).abs() < 1e-60);
    }

    #[test]
    fn abs_e_squared_three_paths() {
        let c = ctx("0.5");
        let x = f(1.0);
        let a = abs_e_sq(&x, &c).unwrap();
        let b = abs_e_sq_trig(&x, &c).unwrap();
        let d = abs_e_sq_complex(&x, &c).unwrap();
        assert!(diff(&a, &b) < 1e-60);
        assert!(diff(&a, &d) < 1e-60);
        assert_eq!(abs_e_sq(&f(0.0), &c).unwrap().value, 1);
        for k in 0..20 {
            assert!(abs_e_sq(&f(k as f64 * 0.7 - 6.0), &c).unwrap().value > 0);
        }
    }

    #[test]
    fn one_phi_one_forms() {
        let c = ctx("0.4");
        for x in [0.3, 1.7, 5.0] {
            let z = f(x);
            assert!(diff(&eval_sq_1phi1(&z, &c).unwrap(), &eval_sq(&z, &c).unwrap()) < 1e-60);
            assert!(diff(&eval_cq_1phi1(&z, &c).unwrap(), &eval_cq(&z, &c).unwrap()) < 1e-60);
        }
    }

    #[test]
    fn bessel_relations() {
        let c = ctx("0.5");
        let x = f(1.4);
        let s = eval_sq(&x, &c).unwrap();
        assert!(diff(&sq_via_bessel(&x, &c).unwrap(), &s) < 1e-60);
        let co = eval_cq(&x, &c).unwrap();
        let viab = cq_via_bessel(&x, &c).unwrap();
        assert!(diff(&viab, &co) < 1e-60);
        // the expression without the q^{-1/4} correction is q^{1/4} C_q
        let printed = viab.value.clone() * c.q_quarter();
        let expected = Float::with_val(256, &co.value * c.q_quarter());
        assert!(Float::with_val(64, printed - expected).abs() < 1e-60);
        assert!(sq_via_bessel(&f(-1.0), &c).is_err());
    }

    #[test]
    fn inverse_base_matches_direct_summation() {
        // the q^{-1} series converge as well; sum them term by term with p = 1/q
        let c = ctx("0.5");
        let z = 0.3f64;
        let p = 2.0f64;
        let (mut e, mut s, mut co) = (0.0, 0.0, 0.0);
        let mut poch = 1.0;
        for n in 0..40i32 {
            if n > 0 {
                poch *= 1.0 - p.powi(n);
            }
            let t = p.powf((n * n) as f64 / 4.0) * z.powi(n) / poch;
            e += t;
            let m = n / 2;
            if n % 2 == 1 {
                s += (-1f64).powi(m) * p.powi(m * (m + 1)) * z.powi(n) / poch;
            } else {
                co += (-1f64).powi(m) * p.powi(m * m) * z.powi(n) / poch;
            }
        }
        let zz = f(z);
        assert!((eval_e_inverse_base(&zz, &c).unwrap().value.to_f64() - e).abs() < 1e-14);
        assert!((eval_sq_inverse_base(&zz, &c).unwrap().value.to_f64() - s).abs() < 1e-14);
        assert!((eval_cq_inverse_base(&zz, &c).unwrap().value.to_f64() - co).abs() < 1e-14);
    }
}
