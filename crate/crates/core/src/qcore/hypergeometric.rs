//! The basic hypergeometric series ᵣφₛ.

use rug::{Complex, Float};

use super::context::QContext;
use super::qseries::{QSeries, Shape, Values};
use super::scalar::Scalar;
use super::series::SeriesValue;
use crate::error::{QError, Result};

/// Parameters of `ᵣφₛ(a₁..a_r; b₁..b_s; p, z)` with base `p = q^{base_quarters/4}`.
#[derive(Debug, Clone)]
pub struct HypergeometricSpec {
    pub upper: Vec<Complex>,
    pub lower: Vec<Complex>,
    pub base_quarters: u32,
    pub argument: Complex,
}

impl HypergeometricSpec {
    /// A series in the context's own base `q`.
    pub fn new(upper: Vec<Complex>, lower: Vec<Complex>, argument: Complex) -> Self {
        HypergeometricSpec { upper, lower, base_quarters: 4, argument }
    }

    pub fn with_base_quarters(mut self, base_quarters: u32) -> Self {
        self.base_quarters = base_quarters;
        self
    }

    /// Number of terms when some upper parameter equals `p^{-n}`.
    pub fn terminating_terms(&self, ctx: &QContext) -> Option<usize> {
        let params: Vec<(Complex, i64)> = self.upper.iter().map(|a| (a.clone(), 0)).collect();
        detect_termination(ctx, &params, self.base_quarters as i64)
    }
}

/// Evaluate `ᵣφₛ` including the factor `[(−1)^n p^{n(n−1)/2}]^{1+s−r}`.
pub fn eval_phi(spec: &HypergeometricSpec, ctx: &QContext) -> Result<SeriesValue<Complex>> {
    if spec.base_quarters == 0 {
        return Err(QError::domain("hypergeometric base must be a positive power of q"));
    }
    let upper: Vec<(Complex, i64)> = spec.upper.iter().map(|a| (a.clone(), 0)).collect();
    let lower: Vec<(Complex, i64)> = spec.lower.iter().map(|b| (b.clone(), 0)).collect();
    let arg = spec.argument.clone();
    let values = move |prec: u32| PhiValues {
        upper: upper.iter().map(|(a, _)| Complex::with_val(prec, a)).collect(),
        lower: lower.iter().map(|(b, _)| Complex::with_val(prec, b)).collect(),
        arg: Complex::with_val(prec, &arg),
    };
    let def = PhiDef {
        what: "phi",
        base_quarters: spec.base_quarters as i64,
        upper_q: vec![0; spec.upper.len()],
        lower_q: vec![0; spec.lower.len()],
        values: &values,
    };
    def.eval(ctx, ctx.prec())
}

/// Parameters scaled by fixed q-powers: entry `i` is `value_i · q^{e_i/4}`.
pub(crate) struct PhiValues<T> {
    pub upper: Vec<T>,
    pub lower: Vec<T>,
    pub arg: T,
}

pub(crate) struct PhiDef<'a, T> {
    pub what: &'a str,
    pub base_quarters: i64,
    pub upper_q: Vec<i64>,
    pub lower_q: Vec<i64>,
    pub values: &'a (dyn Fn(u32) -> PhiValues<T> + Sync + 'a),
}

impl<'a, T: Scalar> PhiDef<'a, T> {
    pub fn eval(&self, ctx: &QContext, rel_bits: u32) -> Result<SeriesValue<T>> {
        let b = self.base_quarters;
        let r = self.upper_q.len() as i64;
        let s = self.lower_q.len() as i64;
        let e = 1 + s - r;
        let probe = (self.values)(ctx.prec());

        let upper: Vec<(T, i64)> = probe.upper.iter().cloned().zip(self.upper_q.iter().copied()).collect();
        let terminating = detect_termination(ctx, &upper, b);
        if terminating.is_none() {
            if e < 0 {
                return Err(QError::domain(format!(
                    "{}: series with r > s+1 diverges unless it terminates",
                    self.what
                )));
            }
            if e == 0 && probe.arg.magnitude(64) >= 1 {
                return Err(QError::domain(format!("{}: argument outside the unit disk", self.what)));
            }
        }
        let limit = terminating.unwrap_or(usize::MAX);
        for (i, (d, eq)) in probe.lower.iter().zip(&self.lower_q).enumerate() {
            if let Some(m) = hits_pole(ctx, d, *eq, b) {
                if m + 1 < limit {
                    return Err(QError::PoleInLowerParameter { param: format!("b{}", i + 1), index: m });
                }
            }
        }

        let mut num = Vec::new();
        for eq in &self.upper_q {
            num.push(Shape::new(b, *eq));
        }
        let mut den = vec![Shape::new(b, b)];
        for eq in &self.lower_q {
            den.push(Shape::new(b, *eq));
        }
        let vals = |prec: u32| {
            let v = (self.values)(prec);
            let mut w = v.arg;
            if e.rem_euclid(2) == 1 {
                w = w.neg_s();
            }
            let mut d = vec![T::one(prec)];
            d.extend(v.lower);
            Values { first: T::one(prec), w, num: v.upper, den: d }
        };
        let series = QSeries {
            what: self.what,
            slope: (e * b) as f64,
            offset: 0.0,
            num,
            den,
            lin: None,
            terminating,
            values: &vals,
        };
        series.sum(ctx, rel_bits)
    }
}

/// Smallest `n` with `a·q^{e/4}·p^n = 1` over the given upper parameters.
pub(crate) fn detect_termination<T: Scalar>(ctx: &QContext, upper: &[(T, i64)], base_quarters: i64) -> Option<usize> {
    upper.iter().filter_map(|(a, eq)| hits_pole(ctx, a, *eq, base_quarters)).min().map(|n| n + 1)
}

/// `Some(m)` when `c·q^{e/4}·p^m = 1` to working precision for some `m ≥ 0`.
fn hits_pole<T: Scalar>(ctx: &QContext, c: &T, e: i64, base_quarters: i64) -> Option<usize> {
    if c.is_zero() {
        return None;
    }
    let (re, im) = c.unit_parts();
    if re < 0.5 || im.abs() > 1e-6 {
        return None;
    }
    let lq = ctx.log2_q() / 4.0;
    let m = -(c.log2_abs() + e as f64 * lq) / (base_quarters as f64 * lq);
    let mr = m.round();
    if mr < 0.0 || (m - mr).abs() > 1e-6 || mr > ctx.max_terms() as f64 {
        return None;
    }
    let prec = ctx.prec();
    let p = ctx.q_pow_quarter(e + base_quarters * mr as i64, prec);
    let mut x = c.with_prec(prec);
    x.mul_assign_real(&p);
    let mut one = T::one(prec);
    one.sub_assign_s(&x);
    let mut tol = Float::with_val(64, 1);
    tol >>= prec.saturating_sub(24);
    if one.magnitude(64) <= tol {
        Some(mr as usize)
    } else {
        None
    }
}
