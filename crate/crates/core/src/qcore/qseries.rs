//! Power series whose term ratio is a product of q-power factors.
//!
//! The ratio of consecutive terms is
//!
//! ```text
//! t_{n+1}/t_n = w · q^{(σn+o)/4} · lin(n) · ∏(1 − c_i q^{(k_i n+l_i)/4}) / ∏(1 − d_j q^{(k_j n+l_j)/4})
//! ```
//!
//! with all q-exponents counted in quarters. Every q-series in the crate
//! (ᵣφₛ, the q-exponentials, q-trigonometric functions, derivatives) is an
//! instance of this shape.

use rug::Float;

use super::context::QContext;
use super::scalar::{powi, Scalar};
use super::series::{sum_series, SeriesPlan, SeriesValue};
use crate::error::Result;

/// A factor `1 − c·q^{(k n + l)/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Shape {
    pub k: i64,
    pub l: i64,
}

impl Shape {
    pub const fn new(k: i64, l: i64) -> Self {
        Shape { k, l }
    }
}

/// Numeric data of a series at a given precision.
pub(crate) struct Values<T> {
    pub first: T,
    pub w: T,
    pub num: Vec<T>,
    pub den: Vec<T>,
}

type ValuesFn<'a, T> = dyn Fn(u32) -> Values<T> + Sync + 'a;

pub(crate) struct QSeries<'a, T> {
    pub what: &'a str,
    /// Leading factor `q^{(slope·n + offset)/4}`; fractional values allowed.
    pub slope: f64,
    pub offset: f64,
    pub num: Vec<Shape>,
    pub den: Vec<Shape>,
    /// `(a n + b)/(c n + d)` with `c n + d > 0` for `n ≥ 0`.
    pub lin: Option<[i64; 4]>,
    pub terminating: Option<usize>,
    pub values: &'a ValuesFn<'a, T>,
}

/// Magnitude and phase of a coefficient, in f64.
#[derive(Clone, Copy)]
struct Coef {
    log2: f64,
    re: f64,
    im: f64,
}

fn coef_of<T: Scalar>(x: &T) -> Coef {
    let log2 = x.log2_abs();
    let (re, im) = x.unit_parts();
    Coef { log2, re, im }
}

fn log2_1p_exp2(x: f64) -> f64 {
    if x > 60.0 {
        x
    } else {
        x.exp2().ln_1p() / std::f64::consts::LN_2
    }
}

fn log2_1m_exp2(x: f64) -> f64 {
    (-x.exp2()).ln_1p() / std::f64::consts::LN_2
}

/// `log2 |1 − c·2^{e}|` estimated in f64.
fn approx_log2_one_minus(c: Coef, e: f64) -> f64 {
    let x = c.log2 + e;
    if x == f64::NEG_INFINITY || x < -60.0 {
        return 0.0;
    }
    if x > 60.0 {
        return x;
    }
    let m = x.exp2();
    let re = 1.0 - m * c.re;
    let im = -m * c.im;
    (re.hypot(im)).max(1e-18).log2()
}

impl<'a, T: Scalar> QSeries<'a, T> {
    pub fn sum(&self, ctx: &QContext, rel_bits: u32) -> Result<SeriesValue<T>> {
        let probe = (self.values)(128);
        let lq = ctx.log2_q();
        let first = probe.first.log2_abs();
        let w = probe.w.log2_abs();
        let num: Vec<Coef> = probe.num.iter().map(coef_of).collect();
        let den: Vec<Coef> = probe.den.iter().map(coef_of).collect();
        let slack = 1e-9;

        let lin_at = |n: f64| -> f64 {
            match self.lin {
                None => 0.0,
                Some([a, b, c, d]) => {
                    let v = (a as f64 * n + b as f64) / (c as f64 * n + d as f64);
                    v.abs().log2()
                }
            }
        };
        let lin_sup = |n: usize| -> f64 {
            match self.lin {
                None => 0.0,
                Some([a, b, c, d]) => {
                    // (an+b)/(cn+d) is monotone in n; take the larger of n and ∞
                    let at_n = lin_at(n as f64);
                    if a * d - b * c <= 0 || c == 0 {
                        if c == 0 && a != 0 {
                            f64::INFINITY
                        } else {
                            at_n
                        }
                    } else {
                        at_n.max((a as f64 / c as f64).abs().log2())
                    }
                }
            }
        };

        let bound = |n: usize| -> f64 {
            if w == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            if self.slope < 0.0 {
                return f64::INFINITY;
            }
            let nf = n as f64;
            let mut s = w + (self.slope * nf + self.offset) / 4.0 * lq + lin_sup(n);
            for (c, sh) in num.iter().zip(&self.num) {
                if c.log2 == f64::NEG_INFINITY {
                    continue;
                }
                if sh.k < 0 {
                    return f64::INFINITY;
                }
                s += log2_1p_exp2(c.log2 + (sh.k as f64 * nf + sh.l as f64) / 4.0 * lq);
            }
            for (d, sh) in den.iter().zip(&self.den) {
                if d.log2 == f64::NEG_INFINITY {
                    continue;
                }
                let x = d.log2 + (sh.k as f64 * nf + sh.l as f64) / 4.0 * lq;
                if sh.k < 0 || x >= -1e-6 {
                    return f64::INFINITY;
                }
                s -= log2_1m_exp2(x);
            }
            s + slack
        };
        let approx = |n: usize| -> f64 {
            if w == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            let nf = n as f64;
            let mut s = w + (self.slope * nf + self.offset) / 4.0 * lq + lin_at(nf);
            for (c, sh) in num.iter().zip(&self.num) {
                s += approx_log2_one_minus(*c, (sh.k as f64 * nf + sh.l as f64) / 4.0 * lq);
            }
            for (d, sh) in den.iter().zip(&self.den) {
                s -= approx_log2_one_minus(*d, (sh.k as f64 * nf + sh.l as f64) / 4.0 * lq);
            }
            s
        };
        let build = |prec: u32| -> (T, Box<dyn FnMut(usize) -> T + '_>) {
            let v = (self.values)(prec);
            let quarter = ctx.q_pow_quarter(1, prec);
            let qpow = |e: i64| -> Float {
                let e = i32::try_from(e).expect("q exponent out of range");
                powi(&quarter, e, prec)
            };
            let lead_pow = |e: f64| -> Float {
                if e.fract() == 0.0 {
                    qpow(e as i64)
                } else {
                    ctx.q_pow_real(e / 4.0, prec)
                }
            };
            let mut lead = lead_pow(self.offset);
            let lead_step = lead_pow(self.slope);
            let mut num_pow: Vec<Float> = self.num.iter().map(|s| qpow(s.l)).collect();
            let num_step: Vec<Float> = self.num.iter().map(|s| qpow(s.k)).collect();
            let mut den_pow: Vec<Float> = self.den.iter().map(|s| qpow(s.l)).collect();
            let den_step: Vec<Float> = self.den.iter().map(|s| qpow(s.k)).collect();
            let lin = self.lin;
            let Values { first, w, num, den } = v;
            let stepper = move |n: usize| -> T {
                let mut r = w.clone();
                r.mul_assign_real(&lead);
                for (c, p) in num.iter().zip(&num_pow) {
                    let mut f = c.clone();
                    f.mul_assign_real(p);
                    let mut one = T::one(prec);
                    one.sub_assign_s(&f);
                    r.mul_assign_s(&one);
                }
                for (d, p) in den.iter().zip(&den_pow) {
                    let mut f = d.clone();
                    f.mul_assign_real(p);
                    let mut one = T::one(prec);
                    one.sub_assign_s(&f);
                    r.div_assign_s(&one);
                }
                if let Some([a, b, c, d]) = lin {
                    let n = n as i64;
                    let mut f = Float::with_val(prec, a * n + b);
                    f /= c * n + d;
                    r.mul_assign_real(&f);
                }
                lead *= &lead_step;
                for (p, s) in num_pow.iter_mut().zip(&num_step) {
                    *p *= s;
                }
                for (p, s) in den_pow.iter_mut().zip(&den_step) {
                    *p *= s;
                }
                r
            };
            (first, Box::new(stepper))
        };
        let plan = SeriesPlan {
            what: self.what,
            log2_first: first,
            log2_ratio_bound: &bound,
            log2_ratio_approx: &approx,
            terminating_terms: self.terminating,
            build: &build,
        };
        sum_series(ctx, &plan, rel_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_exponential_matches_infinite_product() {
        // e_q(z) = Σ z^n/(q;q)_n = 1/(z;q)_∞
        let ctx = QContext::new("0.5").unwrap();
        let z = 0.5f64;
        let values = move |prec: u32| Values {
            first: Float::with_val(prec, 1),
            w: Float::with_val(prec, z),
            num: vec![],
            den: vec![Float::with_val(prec, 1)],
        };
        let s = QSeries {
            what: "e_q",
            slope: 0.0,
            offset: 0.0,
            num: vec![],
            den: vec![Shape::new(4, 4)],
            lin: None,
            terminating: None,
            values: &values,
        };
        let v = s.sum(&ctx, ctx.prec()).unwrap();
        let mut prod = Float::with_val(400, 1);
        let mut p = Float::with_val(400, z);
        for _ in 0..1200 {
            prod *= Float::with_val(400, 1 - &p);
            p /= 2;
        }
        let exact = Float::with_val(400, prod.recip_ref());
        let err = Float::with_val(64, &v.value - &exact).abs();
        assert!(err < 1e-58, "{err}");
        assert!(err <= v.error_bound());
    }

    #[test]
    fn terminating_sum_is_finite() {
        // Σ_{n≤3} (q^{-3};q)_n/(q;q)_n · z^n  =  (z q^{-3}; q)_3 by the q-binomial theorem
        let ctx = QContext::new("0.5").unwrap();
        let z = Float::with_val(64, 0.7);
        let zc = z.clone();
        let values = move |prec: u32| Values {
            first: Float::with_val(prec, 1),
            w: Float::with_val(prec, &zc),
            num: vec![Float::with_val(prec, 1)],
            den: vec![Float::with_val(prec, 1)],
        };
        let s = QSeries {
            what: "binomial",
            slope: 0.0,
            offset: 0.0,
            num: vec![Shape::new(4, -12)],
            den: vec![Shape::new(4, 4)],
            lin: None,
            terminating: Some(4),
            values: &values,
        };
        let v = s.sum(&ctx, ctx.prec()).unwrap();
        assert_eq!(v.terms_used, 4);
        assert!(v.tail_bound.is_zero());
        // (z q^{-3};q)_3 = (1 − 8z)(1 − 4z)(1 − 2z)
        let expected = (1.0 - 8.0 * 0.7) * (1.0 - 4.0 * 0.7) * (1.0 - 2.0 * 0.7);
        assert!((v.value.to_f64() - expected).abs() < 1e-12);
    }
}
