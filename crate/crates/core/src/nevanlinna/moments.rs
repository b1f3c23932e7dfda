//! Orthogonality residuals and moments of discrete measures, and the Jacobi-matrix oracle.

use rug::Float;

use super::measure::DiscreteMeasure;
use crate::error::{QError, Result};
use crate::exact::LaurentPolyQ;
use crate::par;
use crate::qcore::QContext;
use crate::qpolynomials::{recurrence_values, Sequence};

/// `|∫P_nP_m dμ − δ_{nm}|` for `0 ≤ n, m ≤ n_max`.
#[derive(Debug, Clone)]
pub struct ResidualMatrix {
    pub residuals: Vec<Vec<f64>>,
    /// Estimated contribution of the omitted part of the measure.
    pub truncation_estimate: f64,
}

impl ResidualMatrix {
    pub fn max(&self) -> f64 {
        self.residuals.iter().flatten().fold(0.0, |a, &b| a.max(b))
    }

    pub fn n_max(&self) -> usize {
        self.residuals.len() - 1
    }
}

/// `P_0(x), …, P_{n_max}(x)` in f64, for growth estimates.
pub(crate) fn p_values_f64(x: f64, n_max: usize, q: f64) -> Vec<f64> {
    let mut out = vec![1.0];
    let (mut prev, mut cur) = (0.0, 1.0);
    for m in 0..n_max {
        let next = q.powf(m as f64 / 2.0) * x * cur - q.sqrt() * prev;
        out.push(next);
        prev = cur;
        cur = next;
    }
    out
}

/// `ln max_{n ≤ n_max} P_n(±x)²`.
pub(crate) fn log_p_growth(x: f64, n_max: usize, q: f64) -> f64 {
    let a = p_values_f64(x, n_max, q);
    let b = p_values_f64(-x, n_max, q);
    a.iter().chain(&b).map(|p| 2.0 * p.abs().ln()).fold(0.0, f64::max)
}

fn check_truncation(estimate: f64, tol: f64) -> Result<()> {
    if !(estimate <= tol) {
        return Err(QError::TruncationTooCoarse { estimate, tolerance: tol });
    }
    Ok(())
}

pub(crate) fn residuals_from_integrals(n_max: usize, integral: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
    let mut r = vec![vec![0.0; n_max + 1]; n_max + 1];
    for n in 0..=n_max {
        for m in n..=n_max {
            let v = (integral(n, m) - if n == m { 1.0 } else { 0.0 }).abs();
            r[n][m] = v;
            r[m][n] = v;
        }
    }
    r
}

/// Orthogonality residuals of `P_n` against a truncated discrete measure.
///
/// Fails with `TruncationTooCoarse` when the omitted part of the measure may
/// contribute more than `tol` to some entry.
pub fn verify_orthogonality(
    measure: &DiscreteMeasure,
    n_max: usize,
    tol: f64,
    ctx: &QContext,
) -> Result<ResidualMatrix> {
    let q = measure.q.to_f64();
    let estimate = measure.truncation_error(|x| log_p_growth(x, n_max, q));
    check_truncation(estimate, tol)?;
    let prec = ctx.prec() + 32;
    let values: Vec<Vec<Float>> = par::map(ctx.execution(), &measure.support, |x| {
        recurrence_values(Sequence::P, x, n_max + 1, ctx).into_iter().map(|v| v.value).collect()
    });
    let pairs: Vec<(usize, usize)> = (0..=n_max).flat_map(|n| (n..=n_max).map(move |m| (n, m))).collect();
    let sums = par::map(ctx.execution(), &pairs, |&(n, m)| {
        let mut acc = Float::new(prec);
        for (p, w) in values.iter().zip(&measure.masses) {
            acc += Float::with_val(prec, &p[n] * &p[m]) * w;
        }
        acc.to_f64()
    });
    let lookup = |n: usize, m: usize| sums[pairs.iter().position(|&p| p == (n.min(m), n.max(m))).expect("pair")];
    Ok(ResidualMatrix { residuals: residuals_from_integrals(n_max, lookup), truncation_estimate: estimate })
}

/// `m_k = ∫x^k dμ` for `k ≤ k_max`; fails if the omitted part may shift some `m_k` by more than `tol`.
pub fn measure_moments(measure: &DiscreteMeasure, k_max: usize, tol: f64, ctx: &QContext) -> Result<Vec<Float>> {
    let estimate = measure.truncation_error(|x| k_max as f64 * x.ln().max(0.0));
    check_truncation(estimate, tol)?;
    let prec = ctx.prec() + 32;
    Ok(par::map_range(ctx.execution(), 0..k_max + 1, |k| {
        let mut acc = Float::new(prec);
        for (x, w) in measure.support.iter().zip(&measure.masses) {
            acc += Float::with_val(prec, rug::ops::Pow::pow(x, k as u32)) * w;
        }
        Float::with_val(ctx.prec(), acc)
    }))
}

/// The Jacobi matrix of `P_n`: zero diagonal, off-diagonal `β_n = q^{−n/2}`, truncated at order `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiOperator {
    pub order: usize,
}

impl JacobiOperator {
    pub fn new(order: usize) -> Self {
        JacobiOperator { order }
    }

    /// `β_n` as an exact power of `q^{1/4}`.
    fn beta(n: usize) -> LaurentPolyQ {
        LaurentPolyQ::q_pow(-2 * n as i64)
    }

    /// `(J^k)₀₀` for `k ≤ k_max`, exact in `q^{1/4}`.
    pub fn moments(&self, k_max: usize) -> Result<Vec<LaurentPolyQ>> {
        if 2 * self.order <= k_max {
            return Err(QError::domain(format!(
                "a Jacobi truncation of order {} cannot resolve moments up to {k_max}",
                self.order
            )));
        }
        let n = self.order;
        let mut v = vec![LaurentPolyQ::zero(); n];
        v[0] = LaurentPolyQ::one();
        let mut out = Vec::with_capacity(k_max + 1);
        for _ in 0..=k_max {
            out.push(v[0].clone());
            let mut next = vec![LaurentPolyQ::zero(); n];
            for i in 0..n {
                let mut s = LaurentPolyQ::zero();
                if i > 0 {
                    s = s + &Self::beta(i - 1) * &v[i - 1];
                }
                if i + 1 < n {
                    s = s + &Self::beta(i) * &v[i + 1];
                }
                next[i] = s;
            }
            v = next;
        }
        Ok(out)
    }

    /// The exact moments evaluated at the context's base.
    pub fn moments_numeric(&self, k_max: usize, ctx: &QContext) -> Result<Vec<Float>> {
        let quarter = ctx.q_pow_quarter(1, ctx.prec() + 64);
        Ok(self.moments(k_max)?.iter().map(|m| Float::with_val(ctx.prec(), m.eval(&quarter))).collect())
    }
}
