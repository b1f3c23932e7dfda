//! The determinate case: orthogonality of `T_n` on the zeros of Ramanujan's `A_q`.

use rug::{Complex, Float};

use super::moments::ResidualMatrix;
use crate::error::{QError, Result};
use crate::par;
use crate::qcore::{QContext, Scalar};
use crate::qfunctions::{eval_aq, eval_aq_prime, EntireFunctionId};
use crate::qpolynomials::{eval_exact, q_scaled, t_poly, Base};
use crate::rootfinder::find_zeros;

/// Nodes `y_j = q^{−1/2}z_j^{−1/2}` and weights `w_j = A_q(qz_j)/(z_j A_q′(z_j))` from the first zeros `z_j` of `A_q`.
#[derive(Debug, Clone)]
pub struct AqNodes {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

pub fn aq_nodes(count: usize, ctx: &QContext) -> Result<AqNodes> {
    let zeros = find_zeros(&EntireFunctionId::Aq, count, ctx)?.positive();
    let prec = ctx.prec();
    let pairs = par::try_map(ctx.execution(), &zeros, |z| -> Result<(Float, Float)> {
        let num = eval_aq(&q_scaled(z, 4, ctx, prec + 64), ctx)?;
        let den = eval_aq_prime(z, ctx)?;
        let w = Float::with_val(prec, &num.value / Float::with_val(prec + 64, z * &den.value));
        let y = Float::with_val(prec + 64, z * ctx.q()).sqrt().recip();
        Ok((Float::with_val(prec, y), w))
    })?;
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(AqNodes { nodes, weights })
}

/// Residuals of `Σ_j w_j[T_n(y_j)T_m(y_j) + T_n(−y_j)T_m(−y_j)] = −2q^{n(n−1)/2}δ_{nm}`,
/// divided by the norm `2q^{n(n−1)/2}` of the diagonal so that the target is `δ_{nm}`.
pub fn aq_orthogonality_check(n_max: usize, count: usize, ctx: &QContext) -> Result<ResidualMatrix> {
    let AqNodes { nodes, weights } = aq_nodes(count, ctx)?;
    let prec = ctx.prec() + 32;
    let polys: Vec<_> = (0..=n_max as i64).map(|n| t_poly(n, Base::Q)).collect();
    let signed: Vec<Float> = nodes.iter().flat_map(|y| [y.clone(), Float::with_val(y.prec(), -y)]).collect();
    let values: Vec<Vec<Float>> =
        par::map(ctx.execution(), &signed, |y| polys.iter().map(|p| eval_exact(p, y, ctx).value).collect());
    let mut residuals = vec![vec![0.0; n_max + 1]; n_max + 1];
    for n in 0..=n_max {
        for m in n..=n_max {
            let mut acc = Float::new(prec);
            for (j, w) in weights.iter().enumerate() {
                let pair = Float::with_val(prec, &values[2 * j][n] * &values[2 * j][m])
                    + Float::with_val(prec, &values[2 * j + 1][n] * &values[2 * j + 1][m]);
                acc += pair * w;
            }
            let norm = Float::with_val(prec, ctx.q_pow_quarter(2 * (n * n.saturating_sub(1)) as i64, prec) * 2u32);
            if n == m {
                acc += &norm;
            }
            let r = Float::with_val(prec, acc / norm).abs().to_f64();
            residuals[n][m] = r;
            residuals[m][n] = r;
        }
    }
    Ok(ResidualMatrix { residuals, truncation_estimate: 0.0 })
}

/// `|Σ_j (−w_j)/(1 − y_j²z²) − A_q(z²)/A_q(q^{−1}z²)|` at a complex `z`.
pub fn aq_stieltjes_check(z: &Complex, count: usize, ctx: &QContext) -> Result<f64> {
    let AqNodes { nodes, weights } = aq_nodes(count, ctx)?;
    let prec = ctx.prec() + 32;
    let z2 = Complex::with_val(prec, z.square_ref());
    let mut sum = Complex::new(prec);
    for (y, w) in nodes.iter().zip(&weights) {
        let mut den = Complex::with_val(prec, &z2 * Float::with_val(prec, y.square_ref()));
        den = Complex::with_val(prec, 1 - den);
        sum -= Complex::with_val(prec, w / den);
    }
    let num = eval_aq(&z2, ctx)?;
    let den = eval_aq(&z2.scale(&ctx.q_pow_quarter(-4, prec)), ctx)?;
    if den.magnitude() <= den.error_bound() {
        return Err(QError::domain("z^2/q is a zero of A_q"));
    }
    let ratio = Complex::with_val(prec, &num.value / &den.value);
    Ok(Complex::with_val(64, sum - ratio).abs().real().to_f64())
}
