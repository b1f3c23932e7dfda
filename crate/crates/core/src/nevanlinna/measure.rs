//! N-extremal measures: supports from the zero finder, masses from the kernel diagonal.

use rug::Float;
use serde_json::{json, Value};

use super::abcd::{eval_b, eval_b_prime, eval_d, eval_d_prime};
use super::kernel::kernel_diag;
use crate::error::{QError, Result};
use crate::format::decimal;
use crate::par;
use crate::qcore::series::BOUND_PREC;
use crate::qcore::{QContext, SeriesValue};
use crate::qfunctions::{
    eval_cq, eval_cq_prime, eval_sq, eval_sq_prime, fu_real, trig_sum_formula, EntireFunctionId, TParam,
};
use crate::qpolynomials::q_scaled;
use crate::rootfinder::find_zeros;

/// The constant Nevanlinna parameter selecting an N-extremal measure.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureParam {
    /// `u ∈ [0, s₁)`, with `t = C_q(u)/S_q(u)`.
    U(Float),
    T(TParam),
}

impl MeasureParam {
    fn to_json(&self, digits: usize) -> Value {
        match self {
            MeasureParam::U(u) => json!({ "u": decimal(u, digits) }),
            MeasureParam::T(TParam::Finite(t)) => json!({ "t": decimal(t, digits) }),
            MeasureParam::T(TParam::Infinity) => json!({ "t": "inf" }),
        }
    }
}

/// A truncated discrete orthogonality measure for `P_n`, normalized to total mass one.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    pub q: Float,
    pub param: MeasureParam,
    /// Strictly increasing.
    pub support: Vec<Float>,
    pub masses: Vec<Float>,
    /// Bound on the total mass of the omitted support points.
    pub truncation_bound: Float,
}

/// `s₁(q)`, the first positive zero of `S_q`.
pub fn first_sine_zero(ctx: &QContext) -> Result<Float> {
    Ok(find_zeros(&EntireFunctionId::Sq, 1, ctx)?.positive().remove(0))
}

fn check_u(u: &Float, ctx: &QContext) -> Result<()> {
    if u.is_sign_negative() && !u.is_zero() || !u.is_finite() {
        return Err(QError::domain(format!("u must lie in [0, s1), got {}", u.to_f64())));
    }
    let s1 = first_sine_zero(ctx)?;
    if *u >= s1 {
        return Err(QError::domain(format!("u must lie in [0, s1) with s1 = {}, got {}", s1.to_f64(), u.to_f64())));
    }
    Ok(())
}

/// `f_u(z) = C_q(q^{−1/2}z)C_q(u) + q^{1/2}S_q(q^{−1/2}z)S_q(u)`, whose zeros carry `μ_u`.
pub fn f_u(z: &Float, u: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    check_u(u, ctx)?;
    fu_real(z, u, ctx, ctx.prec())
}

/// `f_u` through the ₃φ₃ form of `C_q(u)C_q(v) + q^{1/2}S_q(u)S_q(v)`; needs `u, z ≠ 0`.
pub fn f_u_3phi3(z: &Float, u: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    check_u(u, ctx)?;
    let v = q_scaled(z, -2, ctx, ctx.prec() + 64);
    trig_sum_formula(u, &v, ctx)
}

/// `ρ(x) = (A(x)t − C(x))/(B′(x)t − D′(x))`, valid on the support of `μ_t`.
pub fn rho_via_t(x: &Float, t: &TParam, ctx: &QContext) -> Result<SeriesValue<Float>> {
    let (a, c) = (eval_sq(x, ctx)?, eval_cq(x, ctx)?);
    let (bp, dp) = (eval_b_prime(x, ctx)?, eval_d_prime(x, ctx)?);
    let (num, den) = match t {
        TParam::Infinity => (a, bp),
        TParam::Finite(t) => (a.scale(t).sub(&c), bp.scale(t).sub(&dp)),
    };
    Ok(quotient(&num, &den))
}

/// `ρ(x) = 1/(B′(x)D(x) − B(x)D′(x))`.
pub fn rho_via_bd(x: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    let den = eval_b_prime(x, ctx)?.mul(&eval_d(x, ctx)?).sub(&eval_b(x, ctx)?.mul(&eval_d_prime(x, ctx)?));
    Ok(quotient(&SeriesValue::exact(Float::with_val(ctx.prec(), 1)), &den))
}

/// `a/b` with a first-order error bound.
pub(crate) fn quotient(a: &SeriesValue<Float>, b: &SeriesValue<Float>) -> SeriesValue<Float> {
    let value = Float::with_val(a.value.prec(), &a.value / &b.value);
    let rel = |v: &SeriesValue<Float>| {
        let m = Float::with_val(BOUND_PREC, v.value.abs_ref());
        Float::with_val(BOUND_PREC, v.error_bound() / m)
    };
    let mut bound = Float::with_val(BOUND_PREC, value.abs_ref()) * (rel(a) + rel(b)) * 2u32;
    let mut round = Float::with_val(BOUND_PREC, value.abs_ref());
    round >>= value.prec() - 2;
    bound += round;
    SeriesValue {
        value,
        tail_bound: Float::new(BOUND_PREC),
        round_bound: bound,
        terms_used: a.terms_used.max(b.terms_used),
    }
}

fn mirrored(positive: &[Float], with_origin: bool) -> Vec<Float> {
    let mut out: Vec<Float> = positive.iter().rev().map(|x| Float::with_val(x.prec(), -x)).collect();
    if with_origin {
        out.push(Float::new(positive.first().map_or(64, |x| x.prec())));
    }
    out.extend(positive.iter().cloned());
    out
}

/// The N-extremal measure for a parameter `u ∈ [0, s₁)` or `t ∈ ℝ ∪ {∞}`.
///
/// For the symmetric cases (`u = 0`, `t = 0`, `t = ∞`) `count` is the number of
/// positive support points; otherwise the `2·count` support points of
/// smallest modulus are kept.
pub fn build_measure(param: &MeasureParam, count: usize, ctx: &QContext) -> Result<DiscreteMeasure> {
    if count == 0 {
        return Err(QError::domain("build_measure needs count >= 1"));
    }
    let id = match param {
        MeasureParam::U(u) => {
            check_u(u, ctx)?;
            EntireFunctionId::Fu(u.clone())
        }
        MeasureParam::T(t) => EntireFunctionId::BtMinusD(t.clone()),
    };
    id.validate()?;
    let support = match id.parity() {
        crate::qfunctions::Parity::None => find_zeros(&id, 2 * count, ctx)?.locations(),
        _ => {
            let table = find_zeros(&id, count, ctx)?;
            let origin = table.zeros.iter().any(|z| z.location.is_zero());
            mirrored(&table.positive(), origin)
        }
    };
    let masses = par::try_map(ctx.execution(), &support, |x| -> Result<Float> {
        let k = kernel_diag(x, ctx)?;
        if k.certified_sign() != Some(1) {
            return Err(QError::NonConvergence { what: "kernel diagonal".into(), max_terms: ctx.max_terms() });
        }
        Ok(Float::with_val(ctx.prec(), k.value.recip_ref()))
    })?;
    Ok(DiscreteMeasure::new(ctx, param.clone(), support, masses))
}

/// `μ_0` in the t-form: atom `1 − q` at the origin and masses `−S_q(qs_k)/(s_k S_q′(s_k))` at `±q^{1/2}s_k`.
///
/// Since `qs_k` lies close to `s_{k−1}`, the masses are evaluated in the
/// equivalent form `1/(C_q(s_k)S_q′(s_k))`, which does not cancel.
pub fn sine_measure(count: usize, ctx: &QContext) -> Result<DiscreteMeasure> {
    special_measure(count, ctx, true)
}

/// `μ_∞`: masses `−C_q(qc_k)/(c_k C_q′(c_k))` at `±q^{1/2}c_k`, evaluated as `−1/(S_q(c_k)C_q′(c_k))`.
pub fn cosine_measure(count: usize, ctx: &QContext) -> Result<DiscreteMeasure> {
    special_measure(count, ctx, false)
}

fn special_measure(count: usize, ctx: &QContext, sine: bool) -> Result<DiscreteMeasure> {
    if count == 0 {
        return Err(QError::domain("count must be >= 1"));
    }
    let id = if sine { EntireFunctionId::Sq } else { EntireFunctionId::Cq };
    let zeros = find_zeros(&id, count, ctx)?.positive();
    let prec = ctx.prec();
    let pairs = par::try_map(ctx.execution(), &zeros, |z| -> Result<(Float, Float)> {
        let den = if sine {
            eval_cq(z, ctx)?.mul(&eval_sq_prime(z, ctx)?)
        } else {
            eval_sq(z, ctx)?.mul(&eval_cq_prime(z, ctx)?).neg()
        };
        let mass = Float::with_val(prec, den.value.recip_ref());
        if !mass.is_sign_positive() {
            return Err(QError::NonConvergence { what: "special measure mass".into(), max_terms: ctx.max_terms() });
        }
        Ok((q_scaled(z, 2, ctx, prec), mass))
    })?;
    let mut support = Vec::with_capacity(2 * count + 1);
    let mut masses = Vec::with_capacity(2 * count + 1);
    for (x, m) in pairs.iter().rev() {
        support.push(Float::with_val(prec, -x));
        masses.push(m.clone());
    }
    if sine {
        support.push(Float::new(prec));
        masses.push(Float::with_val(prec, 1 - ctx.q_at(prec)));
    }
    for (x, m) in &pairs {
        support.push(x.clone());
        masses.push(m.clone());
    }
    let t = if sine { TParam::Finite(Float::new(prec)) } else { TParam::Infinity };
    Ok(DiscreteMeasure::new(ctx, MeasureParam::T(t), support, masses))
}

/// Log-masses and locations of one side of the support, ordered outward.
struct Side {
    ln_masses: Vec<f64>,
    points: Vec<f64>,
}

impl DiscreteMeasure {
    fn new(ctx: &QContext, param: MeasureParam, support: Vec<Float>, masses: Vec<Float>) -> Self {
        let mut m =
            DiscreteMeasure { q: ctx.q().clone(), param, support, masses, truncation_bound: Float::new(BOUND_PREC) };
        let bound = m.sides().iter().map(omitted_mass).sum::<f64>();
        m.truncation_bound = Float::with_val(BOUND_PREC, bound);
        m
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn total_mass(&self) -> Float {
        let prec = self.masses.first().map_or(64, |m| m.prec());
        Float::with_val(prec, Float::sum(self.masses.iter()))
    }

    fn sides(&self) -> [Side; 2] {
        let pick = |positive: bool| {
            let mut pts: Vec<(f64, f64)> = self
                .support
                .iter()
                .zip(&self.masses)
                .filter(|(x, _)| !x.is_zero() && x.is_sign_positive() == positive)
                .map(|(x, m)| (x.to_f64().abs(), Float::with_val(64, m.ln_ref()).to_f64()))
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            Side { points: pts.iter().map(|p| p.0).collect(), ln_masses: pts.iter().map(|p| p.1).collect() }
        };
        [pick(true), pick(false)]
    }

    /// Estimated contribution of the omitted support points to `∫g dμ`, where
    /// `log_growth(x)` bounds `ln|g(±x)|` beyond the cut.
    ///
    /// The omitted masses and locations are extrapolated geometrically from
    /// the last three support points on each side.
    pub fn truncation_error(&self, log_growth: impl Fn(f64) -> f64) -> f64 {
        let mut total = 0.0;
        for side in self.sides() {
            let n = side.ln_masses.len();
            let Some(ln_r) = ln_mass_ratio(&side) else { return f64::INFINITY };
            let (x_last, x_prev) = (side.points[n - 1], side.points[n - 2]);
            let g = x_last / x_prev;
            let ln_m = side.ln_masses[n - 1];
            let mut prev = f64::INFINITY;
            let mut converged = false;
            for j in 1..=400 {
                let term = ln_m + j as f64 * ln_r + log_growth(x_last * g.powi(j));
                total += term.exp();
                if term < -745.0 || (term < prev && term.exp() < total * 1e-20) {
                    converged = true;
                    break;
                }
                prev = term;
            }
            if !converged {
                return f64::INFINITY;
            }
        }
        total
    }

    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "q": decimal(&self.q, digits),
            "param": self.param.to_json(digits),
            "support": self.support.iter().map(|x| decimal(x, digits)).collect::<Vec<_>>(),
            "masses": self.masses.iter().map(|m| decimal(m, digits)).collect::<Vec<_>>(),
            "truncation_bound": decimal(&self.truncation_bound, 6),
        })
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("x,mass\n");
        for (x, m) in self.support.iter().zip(&self.masses) {
            out.push_str(&format!("{},{}\n", decimal(x, digits), decimal(m, digits)));
        }
        out
    }
}

/// Log of the larger of the last two consecutive mass ratios, if below one.
fn ln_mass_ratio(side: &Side) -> Option<f64> {
    let n = side.ln_masses.len();
    if n < 3 {
        return None;
    }
    let m = &side.ln_masses;
    let r = (m[n - 1] - m[n - 2]).max(m[n - 2] - m[n - 3]);
    (r < 0.0).then_some(r)
}

fn omitted_mass(side: &Side) -> f64 {
    match ln_mass_ratio(side) {
        Some(ln_r) => (side.ln_masses[side.ln_masses.len() - 1] + ln_r).exp() / -ln_r.exp_m1(),
        None => f64::INFINITY,
    }
}
