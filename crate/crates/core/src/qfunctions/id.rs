//! Names for the entire functions handled by the zero finder and the CLI.

use std::fmt;

use rug::Float;

use super::entire::{aq_bits, cosine_like, eq_alpha_bits, sine_like};
use crate::error::{QError, Result};
use crate::qcore::{QContext, SeriesValue};

/// A real parameter that may be infinite (`t = ∞` selects `B` alone).
#[derive(Debug, Clone, PartialEq)]
pub enum TParam {
    Finite(Float),
    Infinity,
}

impl TParam {
    pub fn is_zero(&self) -> bool {
        matches!(self, TParam::Finite(t) if t.is_zero())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            TParam::Finite(t) => t.to_f64(),
            TParam::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for TParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TParam::Finite(t) => write!(f, "{}", t.to_f64()),
            TParam::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EntireFunctionId {
    Eq,
    EqAlpha(f64),
    Sq,
    Cq,
    Shq,
    Chq,
    Aq,
    /// `z ↦ C_q(q^{-1/2}z)C_q(u) + q^{1/2}S_q(q^{-1/2}z)S_q(u)`
    Fu(Float),
    /// `z ↦ B(z)t − D(z)`
    BtMinusD(TParam),
}

/// Reflection behaviour of a real function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl EntireFunctionId {
    pub fn validate(&self) -> Result<()> {
        match self {
            EntireFunctionId::EqAlpha(a) if !(*a >= 0.0 && a.is_finite()) => {
                Err(QError::domain(format!("EqAlpha needs alpha >= 0, got {a}")))
            }
            EntireFunctionId::Fu(u) if !u.is_finite() => Err(QError::domain("Fu needs a finite u")),
            EntireFunctionId::BtMinusD(TParam::Finite(t)) if !t.is_finite() => {
                Err(QError::domain("BtMinusD needs a finite t or infinity"))
            }
            _ => Ok(()),
        }
    }

    pub fn parity(&self) -> Parity {
        match self {
            EntireFunctionId::Sq | EntireFunctionId::Shq => Parity::Odd,
            EntireFunctionId::Cq | EntireFunctionId::Chq => Parity::Even,
            EntireFunctionId::Fu(u) if u.is_zero() => Parity::Even,
            EntireFunctionId::BtMinusD(TParam::Infinity) => Parity::Even,
            EntireFunctionId::BtMinusD(t) if t.is_zero() => Parity::Odd,
            _ => Parity::None,
        }
    }

    /// Evaluate at a real point with at least `bits` bits of relative accuracy.
    pub fn eval_real(&self, x: &Float, ctx: &QContext, bits: u32) -> Result<SeriesValue<Float>> {
        self.validate()?;
        match self {
            EntireFunctionId::Eq => eq_alpha_bits(0.5, x, ctx, bits),
            EntireFunctionId::EqAlpha(a) => eq_alpha_bits(*a, x, ctx, bits),
            EntireFunctionId::Sq => sine_like(x, ctx, bits, true),
            EntireFunctionId::Cq => cosine_like(x, ctx, bits, true),
            EntireFunctionId::Shq => sine_like(x, ctx, bits, false),
            EntireFunctionId::Chq => cosine_like(x, ctx, bits, false),
            EntireFunctionId::Aq => aq_bits(x, ctx, bits),
            EntireFunctionId::Fu(u) => fu_real(x, u, ctx, bits),
            EntireFunctionId::BtMinusD(t) => bt_minus_d_real(x, t, ctx, bits),
        }
    }
}

fn scaled_arg(x: &Float, ctx: &QContext) -> Float {
    let prec = x.prec().max(ctx.prec()) + 16;
    Float::with_val(prec, x * ctx.q_pow_quarter(-2, prec))
}

/// `B(x) = −C_q(q^{-1/2}x)` for real `x`.
pub(crate) fn b_real(x: &Float, ctx: &QContext, bits: u32) -> Result<SeriesValue<Float>> {
    Ok(cosine_like(&scaled_arg(x, ctx), ctx, bits, true)?.neg())
}

/// `D(x) = q^{1/2}S_q(q^{-1/2}x)` for real `x`.
pub(crate) fn d_real(x: &Float, ctx: &QContext, bits: u32) -> Result<SeriesValue<Float>> {
    Ok(sine_like(&scaled_arg(x, ctx), ctx, bits, true)?.scale(ctx.q_half()))
}

pub(crate) fn fu_real(x: &Float, u: &Float, ctx: &QContext, bits: u32) -> Result<SeriesValue<Float>> {
    let (cu, su) = fu_constants(u, ctx)?;
    fu_real_with(x, &cu, &su, ctx, bits)
}

/// `(C_q(u), S_q(u))`, the coefficients of `f_u`.
pub(crate) fn fu_constants(u: &Float, ctx: &QContext) -> Result<(SeriesValue<Float>, SeriesValue<Float>)> {
    Ok((cosine_like(u, ctx, ctx.prec(), true)?, sine_like(u, ctx, ctx.prec(), true)?))
}

pub(crate) fn fu_real_with(
    x: &Float,
    cu: &SeriesValue<Float>,
    su: &SeriesValue<Float>,
    ctx: &QContext,
    bits: u32,
) -> Result<SeriesValue<Float>> {
    let y = scaled_arg(x, ctx);
    let c = cosine_like(&y, ctx, bits, true)?;
    if su.value.is_zero() {
        return Ok(c.mul(cu));
    }
    let s = sine_like(&y, ctx, bits, true)?;
    Ok(c.mul(cu).add(&s.mul(su).scale(ctx.q_half())))
}

pub(crate) fn bt_minus_d_real(x: &Float, t: &TParam, ctx: &QContext, bits: u32) -> Result<SeriesValue<Float>> {
    match t {
        TParam::Infinity => b_real(x, ctx, bits),
        TParam::Finite(t) if t.is_zero() => Ok(d_real(x, ctx, bits)?.neg()),
        TParam::Finite(t) => Ok(b_real(x, ctx, bits)?.scale(t).sub(&d_real(x, ctx, bits)?)),
    }
}

impl fmt::Display for EntireFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntireFunctionId::Eq => write!(f, "Eq"),
            EntireFunctionId::EqAlpha(a) => write!(f, "EqAlpha({a})"),
            EntireFunctionId::Sq => write!(f, "Sq"),
            EntireFunctionId::Cq => write!(f, "Cq"),
            EntireFunctionId::Shq => write!(f, "Shq"),
            EntireFunctionId::Chq => write!(f, "Chq"),
            EntireFunctionId::Aq => write!(f, "Aq"),
            EntireFunctionId::Fu(u) => write!(f, "Fu({})", u.to_f64()),
            EntireFunctionId::BtMinusD(t) => write!(f, "BtMinusD({t})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parities() {
        assert_eq!(EntireFunctionId::Sq.parity(), Parity::Odd);
        assert_eq!(EntireFunctionId::BtMinusD(TParam::Infinity).parity(), Parity::Even);
        assert_eq!(EntireFunctionId::BtMinusD(TParam::Finite(Float::new(53))).parity(), Parity::Odd);
        assert_eq!(EntireFunctionId::Fu(Float::with_val(53, 0.4)).parity(), Parity::None);
        assert!(EntireFunctionId::EqAlpha(-1.0).validate().is_err());
    }

    #[test]
    fn fu_special_cases() {
        let ctx = QContext::new("0.5").unwrap();
        let x = Float::with_val(256, 1.7);
        // u = 0 gives C_q(q^{-1/2} x) = −B(x)
        let f0 = EntireFunctionId::Fu(Float::new(256)).eval_real(&x, &ctx, 256).unwrap();
        let b = b_real(&x, &ctx, 256).unwrap();
        assert!(Float::with_val(64, &f0.value + &b.value).abs() < 1e-70);
        let t0 = EntireFunctionId::BtMinusD(TParam::Finite(Float::new(53))).eval_real(&x, &ctx, 256).unwrap();
        let d = d_real(&x, &ctx, 256).unwrap();
        assert!(Float::with_val(64, &t0.value + &d.value).abs() < 1e-70);
    }
}
