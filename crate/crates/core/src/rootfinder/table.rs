//! Zero tables and their serialized forms.

use rug::Float;
use serde_json::{json, Value};

use crate::error::{QError, Result};
use crate::format::decimal;
use crate::qcore::QContext;
use crate::qfunctions::EntireFunctionId;

/// An interval on which a real function has certified opposite signs.
///
/// `f_lo_sign` and `f_hi_sign` are `±1`; both are `0` for a zero known
/// analytically (the origin for odd functions), where `lo == hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub lo: Float,
    pub hi: Float,
    pub f_lo_sign: i8,
    pub f_hi_sign: i8,
}

impl Bracket {
    pub fn exact(x: Float) -> Self {
        Bracket { lo: x.clone(), hi: x, f_lo_sign: 0, f_hi_sign: 0 }
    }

    pub fn width(&self) -> Float {
        Float::with_val(self.lo.prec().max(self.hi.prec()), &self.hi - &self.lo)
    }

    pub fn is_exact(&self) -> bool {
        self.f_lo_sign == 0 && self.lo == self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Zero {
    pub location: Float,
    pub bracket: Bracket,
}

/// Real zeros of one function, in increasing order.
///
/// Even and odd functions store their nonnegative zeros only; the negative
/// ones are their mirror images.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    pub function: EntireFunctionId,
    pub q: Float,
    pub zeros: Vec<Zero>,
    pub requested_count: usize,
    pub search_bound: Float,
    /// The zeros are those of `z ↦ f(q^{−e/4}z)` for this `e`; zero for `f` itself.
    pub scale_quarters: i64,
}

impl ZeroTable {
    pub fn locations(&self) -> Vec<Float> {
        self.zeros.iter().map(|z| z.location.clone()).collect()
    }

    /// Strictly positive zeros.
    pub fn positive(&self) -> Vec<Float> {
        self.zeros
            .iter()
            .filter(|z| z.location.is_sign_positive() && !z.location.is_zero())
            .map(|z| z.location.clone())
            .collect()
    }

    /// The table of `z ↦ f(q^{−e/4}z)`: every zero and bracket multiplied by `q^{e/4}`.
    ///
    /// Brackets are widened outward by a few ulps so that they still enclose
    /// the scaled zeros after rounding.
    pub fn scaled(&self, e: i64, ctx: &QContext) -> ZeroTable {
        let zeros = self
            .zeros
            .iter()
            .map(|z| {
                let prec = z.location.prec().max(ctx.prec());
                let factor = ctx.q_pow_quarter(e, prec + 16);
                Zero {
                    location: Float::with_val(prec, &z.location * &factor),
                    bracket: map_bracket(&z.bracket, &factor, prec),
                }
            })
            .collect();
        let factor = ctx.q_pow_quarter(e, 64);
        ZeroTable {
            zeros,
            search_bound: Float::with_val(64, &self.search_bound * factor),
            scale_quarters: self.scale_quarters + e,
            ..self.clone()
        }
    }

    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "function": self.function.to_string(),
            "q": decimal(&self.q, digits),
            "zeros": self.zeros.iter().map(|z| json!({
                "x": decimal(&z.location, digits),
                "lo": decimal(&z.bracket.lo, digits),
                "hi": decimal(&z.bracket.hi, digits),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("x,lo,hi\n");
        for z in &self.zeros {
            out.push_str(&format!(
                "{},{},{}\n",
                decimal(&z.location, digits),
                decimal(&z.bracket.lo, digits),
                decimal(&z.bracket.hi, digits)
            ));
        }
        out
    }
}

/// `[lo·s, hi·s]` for `s > 0`, rounded outward at `prec` bits.
pub(crate) fn map_bracket(b: &Bracket, factor: &Float, prec: u32) -> Bracket {
    if b.is_exact() {
        let x = Float::with_val(prec, &b.lo * factor);
        return Bracket::exact(x);
    }
    let widen = |x: Float, up: bool| {
        let mut ulp = Float::with_val(64, x.abs_ref());
        ulp >>= prec - 4;
        if up {
            x + ulp
        } else {
            x - ulp
        }
    };
    Bracket {
        lo: widen(Float::with_val(prec, &b.lo * factor), false),
        hi: widen(Float::with_val(prec, &b.hi * factor), true),
        ..b.clone()
    }
}

/// Strict interlacing of two sorted lists of points.
pub fn interlace_locations(a: &[Float], b: &[Float]) -> Result<bool> {
    if a.len() < 2 || b.len() < 2 {
        return Err(QError::InsufficientZeros(format!("tables hold {} and {} zeros", a.len(), b.len())));
    }
    let lo = if a[0] > b[0] { &a[0] } else { &b[0] };
    let hi = if a[a.len() - 1] < b[b.len() - 1] { &a[a.len() - 1] } else { &b[b.len() - 1] };
    let mut merged: Vec<(&Float, u8)> =
        a.iter().map(|x| (x, 0u8)).chain(b.iter().map(|x| (x, 1u8))).filter(|(x, _)| *x >= lo && *x <= hi).collect();
    if merged.len() < 3 {
        return Err(QError::InsufficientZeros("the common range holds fewer than three zeros".into()));
    }
    merged.sort_by(|x, y| x.0.partial_cmp(y.0).expect("finite zeros"));
    Ok(merged.windows(2).all(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0))
}
