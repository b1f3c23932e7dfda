//! Numeric evaluation of exact polynomials.

use rug::Float;

use super::xpoly::XPolyExact;
use crate::qcore::{QContext, Scalar, SeriesValue};

const BOUND_PREC: u32 = 64;

/// An exact polynomial with its coefficients specialised at the context's `q`.
///
/// Evaluation is Horner's rule in working precision. When cancellation
/// between the terms eats into the requested accuracy the coefficients are
/// re-specialised at a higher precision and the evaluation repeated.
#[derive(Debug, Clone)]
pub struct NumericPoly {
    exact: XPolyExact,
    prec: u32,
    coeffs: Vec<(Float, Float)>,
}

impl NumericPoly {
    pub fn new(exact: &XPolyExact, ctx: &QContext) -> Self {
        let prec = ctx.prec() + 64;
        let quarter = ctx.q_pow_quarter(1, prec);
        NumericPoly { exact: exact.clone(), prec, coeffs: exact.specialize(&quarter) }
    }

    pub fn exact(&self) -> &XPolyExact {
        &self.exact
    }

    pub fn degree(&self) -> Option<usize> {
        self.exact.degree()
    }

    pub fn eval<T: Scalar>(&self, x: &T, ctx: &QContext) -> SeriesValue<T> {
        let (value, abs) = horner(&self.coeffs, x, self.prec);
        let lost = (crate::qcore::log2_abs(&abs) - value.log2_abs()).max(0.0);
        let want = ctx.prec() as f64 + 16.0;
        if value.is_zero() && !abs.is_zero() || (self.prec as f64 - lost) < want {
            let prec = (want + lost + 64.0).ceil().min(1e6) as u32;
            let quarter = ctx.q_pow_quarter(1, prec);
            let coeffs = self.exact.specialize(&quarter);
            let (value, abs) = horner(&coeffs, x, prec);
            return finish(value, abs, prec, self.degree(), ctx);
        }
        finish(value, abs, self.prec, self.degree(), ctx)
    }
}

fn horner<T: Scalar>(coeffs: &[(Float, Float)], x: &T, prec: u32) -> (T, Float) {
    let x = x.with_prec(prec);
    let xa = x.magnitude(prec);
    let mut v = T::zero(prec);
    let mut a = Float::new(prec);
    for (c, ca) in coeffs.iter().rev() {
        v.mul_assign_s(&x);
        v.add_assign_s(&T::from_real(c, prec));
        a *= &xa;
        a += ca;
    }
    (v, a)
}

fn finish<T: Scalar>(mut value: T, abs: Float, prec: u32, degree: Option<usize>, ctx: &QContext) -> SeriesValue<T> {
    let d = degree.unwrap_or(0) as u64;
    let mut round = Float::with_val(BOUND_PREC, &abs * (8 * d + 16));
    round >>= prec;
    value.set_prec(ctx.prec());
    let mut r = value.magnitude(BOUND_PREC);
    r >>= ctx.prec() - 1;
    round += r;
    SeriesValue { value, tail_bound: Float::new(BOUND_PREC), round_bound: round, terms_used: d as usize + 1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::LaurentPolyQ;
    use rug::Complex;

    #[test]
    fn evaluates_with_cancellation() {
        // (x − 1)^12 near x = 1 cancels ~40 bits between its terms
        let ctx = QContext::new("0.5").unwrap();
        let xm1 = XPolyExact::x() - XPolyExact::one();
        let mut p = XPolyExact::one();
        for _ in 0..12 {
            p = &p * &xm1;
        }
        let np = NumericPoly::new(&p, &ctx);
        let x = Float::with_val(256, 1) + Float::with_val(256, 1e-3);
        let v = np.eval(&x, &ctx);
        let rel = (v.value.to_f64() / 1e-36 - 1.0).abs();
        assert!(rel < 1e-12, "{rel}");
    }

    #[test]
    fn quarter_powers_of_q() {
        let ctx = QContext::new("0.5").unwrap();
        let p = XPolyExact::from_coeffs(vec![LaurentPolyQ::q_pow(1), LaurentPolyQ::q_pow(-2)]);
        let np = NumericPoly::new(&p, &ctx);
        let z = Complex::with_val(256, (0, 1));
        let v = np.eval(&z, &ctx);
        assert!((v.value.real().to_f64() - 0.5f64.powf(0.25)).abs() < 1e-15);
        assert!((v.value.imag().to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }
}
