//! Absolutely continuous solutions `dμ_{β,γ}/dx = (γ/π)((βB − D)² + γ²B²)^{−1}`.

use std::cell::RefCell;
use std::collections::HashMap;

use rug::float::Constant;
use rug::Float;

use super::measure::quotient;
use super::moments::{log_p_growth, p_values_f64, residuals_from_integrals, ResidualMatrix};
use crate::error::{QError, Result};
use crate::qcore::{QContext, SeriesValue};
use crate::qfunctions::{abs_e_sq_complex, b_real, d_real, two_phi_two_abs};
use crate::qpolynomials::q_scaled;

#[derive(Debug, Clone, PartialEq)]
pub struct ACMeasureSpec {
    pub beta: Float,
    pub gamma: Float,
}

impl ACMeasureSpec {
    pub fn new(beta: Float, gamma: Float) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0) || !beta.is_finite() {
            return Err(QError::domain(format!("need finite beta and gamma > 0, got beta = {beta}, gamma = {gamma}")));
        }
        Ok(ACMeasureSpec { beta, gamma })
    }

    /// `β = 0, γ = q^{1/4}`, the case with a ₂φ₂ closed form.
    pub fn symmetric(ctx: &QContext) -> Self {
        ACMeasureSpec { beta: Float::new(ctx.prec()), gamma: ctx.q_quarter().clone() }
    }

    fn is_symmetric(&self, ctx: &QContext) -> bool {
        self.beta.is_zero() && self.gamma == *ctx.q_quarter()
    }
}

fn density_bits(x: &Float, spec: &ACMeasureSpec, ctx: &QContext, bits: u32) -> Result<SeriesValue<Float>> {
    let b = b_real(x, ctx, bits)?;
    let d = d_real(x, ctx, bits)?;
    let lin = b.scale(&spec.beta).sub(&d);
    let gb = b.scale(&spec.gamma);
    let den = lin.mul(&lin).add(&gb.mul(&gb));
    let prec = ctx.prec() + 16;
    let num = Float::with_val(prec, &spec.gamma / Float::with_val(prec, Constant::Pi));
    Ok(quotient(&SeriesValue::exact(num), &den))
}

pub fn ac_density(x: &Float, spec: &ACMeasureSpec, ctx: &QContext) -> Result<SeriesValue<Float>> {
    density_bits(x, spec, ctx, ctx.prec())
}

fn symmetric_prefactor(ctx: &QContext) -> SeriesValue<Float> {
    let prec = ctx.prec() + 16;
    let pi = Float::with_val(prec, Constant::Pi);
    SeriesValue::exact(Float::with_val(prec, pi * ctx.q_quarter()).recip())
}

/// `(q^{1/4}π)^{−1}|𝓔_q(iq^{−1/2}x)|^{−2}` through the complex q-exponential.
pub fn ac_density_exponential(x: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    let y = q_scaled(x, -2, ctx, ctx.prec() + 64);
    Ok(quotient(&symmetric_prefactor(ctx), &abs_e_sq_complex(&y, ctx)?))
}

/// `(πq^{1/4}·₂φ₂[0, q^{1/2}; −q^{1/2}, −q; q, −q^{−1/2}x²])^{−1}`.
pub fn ac_density_2phi2(x: &Float, ctx: &QContext) -> Result<SeriesValue<Float>> {
    let y = q_scaled(x, -2, ctx, ctx.prec() + 64);
    Ok(quotient(&symmetric_prefactor(ctx), &two_phi_two_abs(&y, ctx, ctx.prec())?))
}

const QUAD_BITS: u32 = 64;
const MAX_DOUBLINGS: usize = 40;

/// The density in f64 with memoization, shared by every integrand on the same nodes.
struct Density {
    spec: ACMeasureSpec,
    ctx: QContext,
    symmetric: bool,
    cache: RefCell<HashMap<u64, f64>>,
    err: RefCell<Option<QError>>,
}

impl Density {
    fn new(spec: &ACMeasureSpec, base: &QContext) -> Result<Self> {
        let ctx = base.with_precision(QUAD_BITS)?;
        let spec = ACMeasureSpec {
            beta: Float::with_val(QUAD_BITS, &spec.beta),
            gamma: Float::with_val(QUAD_BITS, &spec.gamma),
        };
        let symmetric = spec.beta.is_zero();
        Ok(Density { spec, ctx, symmetric, cache: RefCell::default(), err: RefCell::default() })
    }

    fn at(&self, x: f64) -> f64 {
        let key = if self.symmetric { x.abs() } else { x };
        if let Some(v) = self.cache.borrow().get(&key.to_bits()) {
            return *v;
        }
        let v = match density_bits(&Float::with_val(QUAD_BITS, key), &self.spec, &self.ctx, 56) {
            Ok(v) => v.value.to_f64(),
            Err(e) => {
                self.err.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        self.cache.borrow_mut().insert(key.to_bits(), v);
        v
    }

    fn take_err(&self) -> Result<()> {
        match self.err.borrow_mut().take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Panels `[0,1], [1,2], [2,4], …` on each side, out to a cut `R` beyond which
/// `x·density(x)·exp(log_growth(x))` stays below `tol/10`.
fn panels(density: &Density, log_growth: &dyn Fn(f64) -> f64, tol: f64) -> Result<(Vec<(f64, f64)>, f64)> {
    let tail = |x: f64| {
        let d = density.at(x).max(density.at(-x));
        (x.ln() + d.ln() + log_growth(x)).exp()
    };
    let mut r = 2.0f64;
    let mut estimate = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        let (here, next) = (tail(r), tail(2.0 * r));
        if here < tol / 10.0 && next < here {
            estimate = here;
            break;
        }
        r *= 2.0;
    }
    density.take_err()?;
    if !estimate.is_finite() {
        return Err(QError::TruncationTooCoarse { estimate, tolerance: tol });
    }
    let mut out = vec![(0.0, 1.0)];
    let mut a = 1.0;
    while a < r {
        out.push((a, 2.0 * a));
        a *= 2.0;
    }
    let neg: Vec<(f64, f64)> = out.iter().map(|&(a, b)| (-b, -a)).collect();
    out.extend(neg);
    Ok((out, estimate))
}

fn integrate(density: &Density, panels: &[(f64, f64)], g: impl Fn(f64) -> f64) -> f64 {
    panels
        .iter()
        .map(|&(a, b)| quadrature::double_exponential::integrate(|x| g(x) * density.at(x), a, b, 1e-15).integral)
        .sum()
}

/// Orthogonality residuals of `P_n` against `μ_{β,γ}` by adaptive quadrature.
pub fn verify_ac_orthogonality(spec: &ACMeasureSpec, n_max: usize, tol: f64, ctx: &QContext) -> Result<ResidualMatrix> {
    let q = ctx.q().to_f64();
    let density = Density::new(spec, ctx)?;
    let (panels, estimate) = panels(&density, &|x| log_p_growth(x, n_max, q), tol)?;
    let mut sums = vec![vec![0.0; n_max + 1]; n_max + 1];
    for (n, row) in sums.iter_mut().enumerate() {
        for (m, cell) in row.iter_mut().enumerate().skip(n) {
            *cell = integrate(&density, &panels, |x| {
                let p = p_values_f64(x, n_max, q);
                p[n] * p[m]
            });
        }
    }
    density.take_err()?;
    let lookup = |n: usize, m: usize| sums[n.min(m)][n.max(m)];
    Ok(ResidualMatrix { residuals: residuals_from_integrals(n_max, lookup), truncation_estimate: estimate })
}

/// `∫x^k dμ_{β,γ}` for `k ≤ k_max` by quadrature.
pub fn ac_moments(spec: &ACMeasureSpec, k_max: usize, tol: f64, ctx: &QContext) -> Result<Vec<f64>> {
    let density = Density::new(spec, ctx)?;
    let (panels, _) = panels(&density, &|x| k_max as f64 * x.ln().max(0.0), tol)?;
    let out = (0..=k_max).map(|k| integrate(&density, &panels, |x| x.powi(k as i32))).collect();
    density.take_err()?;
    Ok(out)
}

/// Whether the three density paths apply to `spec`.
pub fn has_closed_form(spec: &ACMeasureSpec, ctx: &QContext) -> bool {
    spec.is_symmetric(ctx)
}
