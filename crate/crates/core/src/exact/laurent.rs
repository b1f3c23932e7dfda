//! Laurent polynomials in `q^{1/4}` with big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

/// `Σ c_e q^{e/4}` in canonical form (no stored zero coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolyQ {
    coeffs: BTreeMap<i64, Integer>,
}

impl LaurentPolyQ {
    pub fn zero() -> Self {
        LaurentPolyQ::default()
    }

    pub fn one() -> Self {
        LaurentPolyQ::monomial(1, 0)
    }

    /// `c·q^{e/4}`.
    pub fn monomial(c: impl Into<Integer>, quarter_exp: i64) -> Self {
        let mut p = LaurentPolyQ::zero();
        p.add_term(quarter_exp, c.into());
        p
    }

    /// `q^{e/4}`.
    pub fn q_pow(quarter_exp: i64) -> Self {
        LaurentPolyQ::monomial(1, quarter_exp)
    }

    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = LaurentPolyQ::zero();
        for &(e, c) in terms {
            p.add_term(e, Integer::from(c));
        }
        p
    }

    pub fn add_term(&mut self, quarter_exp: i64, c: Integer) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(quarter_exp).or_default();
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&quarter_exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Integer)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, quarter_exp: i64) -> Integer {
        self.coeffs.get(&quarter_exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiply by `q^{e/4}`.
    pub fn shift(&self, quarter_exp: i64) -> Self {
        LaurentPolyQ { coeffs: self.coeffs.iter().map(|(e, c)| (e + quarter_exp, c.clone())).collect() }
    }

    /// Substitute `q → q^{-1}`.
    pub fn invert_q(&self) -> Self {
        LaurentPolyQ { coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    pub fn scale(&self, c: &Integer) -> Self {
        let mut p = LaurentPolyQ::zero();
        for (e, x) in &self.coeffs {
            p.add_term(*e, Integer::from(x * c));
        }
        p
    }

    /// Exact quotient; `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let d_lo = divisor.min_exp()?;
        let d_hi = divisor.max_exp()?;
        let lead = divisor.coeffs[&d_hi].clone();
        let mut rem = self.clone();
        let mut quot = LaurentPolyQ::zero();
        while let Some(r_hi) = rem.max_exp() {
            let r_lo = rem.min_exp().unwrap();
            if r_hi - r_lo < d_hi - d_lo {
                return None;
            }
            let c = &rem.coeffs[&r_hi];
            if !c.is_divisible(&lead) {
                return None;
            }
            let t = Integer::from(c.div_exact_ref(&lead));
            let e = r_hi - d_hi;
            for (de, dc) in &divisor.coeffs {
                rem.add_term(de + e, -Integer::from(dc * &t));
            }
            quot.add_term(e, t);
        }
        Some(quot)
    }

    /// Value at `q^{1/4} = quarter` together with `Σ|c_e| quarter^e`.
    pub fn eval_with_abs(&self, quarter: &Float) -> (Float, Float) {
        let prec = quarter.prec();
        let mut v = Float::new(prec);
        let mut a = Float::new(prec);
        for (e, c) in &self.coeffs {
            let e = i32::try_from(*e).expect("exponent out of range");
            let p = Float::with_val(prec, rug::ops::Pow::pow(quarter.clone(), e));
            let t = Float::with_val(prec, c * &p);
            a += Float::with_val(prec, t.abs_ref());
            v += t;
        }
        (v, a)
    }

    pub fn eval(&self, quarter: &Float) -> Float {
        self.eval_with_abs(quarter).0
    }

    /// Exact value at rational `q` when all exponents are integral powers of `q`.
    pub fn eval_rational(&self, q: &Rational) -> Option<Rational> {
        let mut v = Rational::new();
        for (e, c) in &self.coeffs {
            if e % 4 != 0 {
                return None;
            }
            let k = i32::try_from(e / 4).ok()?;
            let p = rational_pow(q, k);
            v += Rational::from(c) * p;
        }
        Some(v)
    }

    /// `{"var":"q^(1/4)","coeffs":[[exponent, "coefficient"], ...]}`.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.coeffs.iter().map(|(e, c)| json!([e, c.to_string()])).collect();
        json!({ "var": "q^(1/4)", "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let mut p = LaurentPolyQ::zero();
        for t in v.get("coeffs")?.as_array()? {
            let e = t.get(0)?.as_i64()?;
            let c: Integer = t.get(1)?.as_str()?.parse().ok()?;
            p.add_term(e, c);
        }
        Some(p)
    }
}

pub(crate) fn rational_pow(q: &Rational, k: i32) -> Rational {
    let base = if k < 0 { Rational::from(q.recip_ref()) } else { q.clone() };
    let mut r = Rational::from(1);
    for _ in 0..k.unsigned_abs() {
        r *= &base;
    }
    r
}

impl Add for LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn add(mut self, rhs: LaurentPolyQ) -> LaurentPolyQ {
        for (e, c) in rhs.coeffs {
            self.add_term(e, c);
        }
        self
    }
}

impl<'a> Add<&'a LaurentPolyQ> for &'a LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn add(self, rhs: &LaurentPolyQ) -> LaurentPolyQ {
        self.clone() + rhs.clone()
    }
}

impl Neg for LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn neg(self) -> LaurentPolyQ {
        LaurentPolyQ { coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Sub for LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn sub(self, rhs: LaurentPolyQ) -> LaurentPolyQ {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a LaurentPolyQ> for &'a LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn sub(self, rhs: &LaurentPolyQ) -> LaurentPolyQ {
        self.clone() - rhs.clone()
    }
}

impl<'a> Mul<&'a LaurentPolyQ> for &'a LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn mul(self, rhs: &LaurentPolyQ) -> LaurentPolyQ {
        let mut p = LaurentPolyQ::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                p.add_term(ea + eb, Integer::from(ca * cb));
            }
        }
        p
    }
}

impl Mul for LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn mul(self, rhs: LaurentPolyQ) -> LaurentPolyQ {
        &self * &rhs
    }
}

fn fmt_exp(e: i64) -> String {
    if e % 4 == 0 {
        format!("{}", e / 4)
    } else if e % 2 == 0 {
        format!("({}/2)", e / 2)
    } else {
        format!("({e}/4)")
    }
}

impl fmt::Display for LaurentPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let neg = *c < 0;
            let mag = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (*e, mag == 1) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "q^{}", fmt_exp(*e))?,
                (_, false) => write!(f, "{mag}*q^{}", fmt_exp(*e))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_drops_zeros() {
        let a = LaurentPolyQ::from_terms(&[(4, 1), (0, 2)]);
        let b = LaurentPolyQ::from_terms(&[(4, -1)]);
        assert_eq!(a.clone() + b, LaurentPolyQ::monomial(2, 0));
        assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = LaurentPolyQ::from_terms(&[(0, 1), (4, -1)]);
        let b = LaurentPolyQ::from_terms(&[(0, 1), (4, 1)]);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(LaurentPolyQ::one().div_exact(&b), None);
        let shifted = p.shift(-6);
        assert_eq!(shifted.div_exact(&b.shift(-2)), Some(a.shift(-4)));
    }

    #[test]
    fn evaluation_and_inversion() {
        let p = LaurentPolyQ::from_terms(&[(-4, 3), (2, 1)]);
        let q = Rational::from((1, 2));
        assert_eq!(p.eval_rational(&q), None);
        let r = LaurentPolyQ::from_terms(&[(-4, 3), (8, 1)]);
        assert_eq!(r.eval_rational(&q), Some(Rational::from((25, 4))));
        assert_eq!(r.invert_q().eval_rational(&Rational::from(2)), Some(Rational::from((25, 4))));
        let quarter = Float::with_val(128, 0.5f64.powf(0.25));
        let (v, _) = p.eval_with_abs(&quarter);
        assert!((v.to_f64() - (6.0 + 0.5f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let p = LaurentPolyQ::from_terms(&[(2, 1), (-3, -7)]);
        let j = p.to_json();
        assert_eq!(j["var"], "q^(1/4)");
        assert_eq!(LaurentPolyQ::from_json(&j), Some(p));
    }

    #[test]
    fn display() {
        let p = LaurentPolyQ::from_terms(&[(0, 1), (2, -1), (8, 3)]);
        assert_eq!(p.to_string(), "3*q^2 - q^(1/2) + 1");
    }
}
