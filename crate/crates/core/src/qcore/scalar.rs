use std::fmt::Debug;

use rug::{Complex, Float};

/// Minimal arithmetic shared by real and complex evaluation paths.
///
/// Implemented for [`rug::Float`] and [`rug::Complex`]; lets the series
/// engine and the polynomial evaluators run once for both.
pub trait Scalar: Clone + Debug + Send + Sync + 'static {
    fn zero(prec: u32) -> Self;
    fn from_real(x: &Float, prec: u32) -> Self;
    fn prec(&self) -> u32;
    fn set_prec(&mut self, prec: u32);
    fn is_zero(&self) -> bool;
    /// `|self|` rounded to `prec` bits.
    fn magnitude(&self, prec: u32) -> Float;
    fn mul_assign_s(&mut self, rhs: &Self);
    fn mul_assign_real(&mut self, rhs: &Float);
    fn add_assign_s(&mut self, rhs: &Self);
    fn sub_assign_s(&mut self, rhs: &Self);
    fn neg_s(&self) -> Self;
    fn div_assign_s(&mut self, rhs: &Self);
    /// Phase `self/|self|` in f64, used only for rough planning.
    fn unit_parts(&self) -> (f64, f64);

    fn one(prec: u32) -> Self {
        Self::from_real(&Float::with_val(prec, 1), prec)
    }

    fn log2_abs(&self) -> f64 {
        log2_abs(&self.magnitude(64))
    }

    fn mul_s(&self, rhs: &Self) -> Self {
        let mut r = self.clone();
        r.mul_assign_s(rhs);
        r
    }

    fn add_s(&self, rhs: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign_s(rhs);
        r
    }

    fn sub_s(&self, rhs: &Self) -> Self {
        let mut r = self.clone();
        r.sub_assign_s(rhs);
        r
    }

    fn scale(&self, r: &Float) -> Self {
        let mut v = self.clone();
        v.mul_assign_real(r);
        v
    }

    fn with_prec(&self, prec: u32) -> Self {
        let mut v = self.clone();
        v.set_prec(prec);
        v
    }
}

/// `log2 |x|`, `-inf` for zero.
/// `x^e` at precision `prec`.
pub fn powi(x: &Float, e: i32, prec: u32) -> Float {
    use rug::ops::PowAssign;
    let mut y = Float::with_val(prec, x);
    y.pow_assign(e);
    y
}

pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    if !x.is_finite() {
        return f64::INFINITY;
    }
    let a = Float::with_val(64, x.abs_ref());
    a.log2().to_f64()
}

impl Scalar for Float {
    fn zero(prec: u32) -> Self {
        Float::new(prec)
    }
    fn from_real(x: &Float, prec: u32) -> Self {
        Float::with_val(prec, x)
    }
    fn prec(&self) -> u32 {
        Float::prec(self)
    }
    fn set_prec(&mut self, prec: u32) {
        Float::set_prec(self, prec)
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn magnitude(&self, prec: u32) -> Float {
        Float::with_val(prec, self.abs_ref())
    }
    fn mul_assign_s(&mut self, rhs: &Self) {
        *self *= rhs;
    }
    fn mul_assign_real(&mut self, rhs: &Float) {
        *self *= rhs;
    }
    fn add_assign_s(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign_s(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn neg_s(&self) -> Self {
        -self.clone()
    }
    fn div_assign_s(&mut self, rhs: &Self) {
        *self /= rhs;
    }
    fn unit_parts(&self) -> (f64, f64) {
        if self.is_sign_negative() {
            (-1.0, 0.0)
        } else {
            (1.0, 0.0)
        }
    }
}

impl Scalar for Complex {
    fn zero(prec: u32) -> Self {
        Complex::new(prec)
    }
    fn from_real(x: &Float, prec: u32) -> Self {
        Complex::with_val(prec, (x, 0))
    }
    fn prec(&self) -> u32 {
        Complex::prec(self).0
    }
    fn set_prec(&mut self, prec: u32) {
        Complex::set_prec(self, prec)
    }
    fn is_zero(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }
    fn magnitude(&self, prec: u32) -> Float {
        Float::with_val(prec, self.abs_ref())
    }
    fn mul_assign_s(&mut self, rhs: &Self) {
        *self *= rhs;
    }
    fn mul_assign_real(&mut self, rhs: &Float) {
        *self *= rhs;
    }
    fn add_assign_s(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign_s(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn neg_s(&self) -> Self {
        -self.clone()
    }
    fn div_assign_s(&mut self, rhs: &Self) {
        *self /= rhs;
    }
    fn unit_parts(&self) -> (f64, f64) {
        let mag = Float::with_val(64, self.abs_ref());
        if mag.is_zero() {
            return (1.0, 0.0);
        }
        let re = Float::with_val(64, self.real() / &mag).to_f64();
        let im = Float::with_val(64, self.imag() / &mag).to_f64();
        (re, im)
    }
}
