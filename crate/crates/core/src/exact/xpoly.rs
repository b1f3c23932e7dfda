//! Polynomials in `x` with [`LaurentPolyQ`] coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};
use serde_json::{json, Value};

use super::laurent::LaurentPolyQ;

/// `Σ_j c_j(q) x^j`, trimmed so the leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct XPolyExact {
    coeffs: Vec<LaurentPolyQ>,
}

impl XPolyExact {
    pub fn zero() -> Self {
        XPolyExact::default()
    }

    pub fn one() -> Self {
        XPolyExact::constant(LaurentPolyQ::one())
    }

    pub fn x() -> Self {
        XPolyExact::from_coeffs(vec![LaurentPolyQ::zero(), LaurentPolyQ::one()])
    }

    pub fn constant(c: LaurentPolyQ) -> Self {
        XPolyExact::from_coeffs(vec![c])
    }

    pub fn from_coeffs(coeffs: Vec<LaurentPolyQ>) -> Self {
        let mut p = XPolyExact { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(LaurentPolyQ::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `x`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[LaurentPolyQ] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> LaurentPolyQ {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    /// Multiply by `x^k`.
    pub fn mul_x_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return XPolyExact::zero();
        }
        let mut c = vec![LaurentPolyQ::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        XPolyExact { coeffs: c }
    }

    pub fn scale(&self, c: &LaurentPolyQ) -> Self {
        XPolyExact::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply every coefficient by `q^{e/4}`.
    pub fn shift_q(&self, quarter_exp: i64) -> Self {
        XPolyExact { coeffs: self.coeffs.iter().map(|a| a.shift(quarter_exp)).collect() }
    }

    /// Substitute `x → q^{e/4} x`.
    pub fn subst_x_scale(&self, quarter_exp: i64) -> Self {
        XPolyExact { coeffs: self.coeffs.iter().enumerate().map(|(j, a)| a.shift(quarter_exp * j as i64)).collect() }
    }

    /// Substitute `q → q^{-1}` in every coefficient.
    pub fn invert_q(&self) -> Self {
        XPolyExact { coeffs: self.coeffs.iter().map(LaurentPolyQ::invert_q).collect() }
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        self.fold_imaginary(2, 0)
    }

    /// `i^b · p(i^a x)` for a polynomial where every surviving power `x^j`
    /// has `a j + b` even, so the result has real coefficients.
    ///
    /// Panics if some nonzero coefficient would pick up a factor `±i`.
    pub fn fold_imaginary(&self, a: i64, b: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if c.is_zero() {
                    return LaurentPolyQ::zero();
                }
                let p = a * j as i64 + b;
                assert!(p.rem_euclid(2) == 0, "imaginary coefficient at x^{j}");
                if (p / 2).rem_euclid(2) == 0 {
                    c.clone()
                } else {
                    -c.clone()
                }
            })
            .collect();
        XPolyExact::from_coeffs(coeffs)
    }

    /// Value at rational `x` and rational `q` (integral q-exponents only).
    pub fn eval_rational(&self, x: &Rational, q: &Rational) -> Option<Rational> {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c.eval_rational(q)?;
        }
        Some(acc)
    }

    /// Coefficients specialised at `q^{1/4} = quarter`, with their absolute sums.
    pub fn specialize(&self, quarter: &Float) -> Vec<(Float, Float)> {
        self.coeffs.iter().map(|c| c.eval_with_abs(quarter)).collect()
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| json!([j, c.to_json()]))
            .collect();
        json!({ "var": "x", "degree": self.degree(), "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let mut coeffs = Vec::new();
        for t in v.get("coeffs")?.as_array()? {
            let j = t.get(0)?.as_u64()? as usize;
            let c = LaurentPolyQ::from_json(t.get(1)?)?;
            if coeffs.len() <= j {
                coeffs.resize(j + 1, LaurentPolyQ::zero());
            }
            coeffs[j] = c;
        }
        Some(XPolyExact::from_coeffs(coeffs))
    }
}

impl Add for XPolyExact {
    type Output = XPolyExact;
    fn add(self, rhs: XPolyExact) -> XPolyExact {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect();
        XPolyExact::from_coeffs(c)
    }
}

impl Neg for XPolyExact {
    type Output = XPolyExact;
    fn neg(self) -> XPolyExact {
        XPolyExact { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Sub for XPolyExact {
    type Output = XPolyExact;
    fn sub(self, rhs: XPolyExact) -> XPolyExact {
        self + (-rhs)
    }
}

impl<'a> Mul<&'a XPolyExact> for &'a XPolyExact {
    type Output = XPolyExact;
    fn mul(self, rhs: &XPolyExact) -> XPolyExact {
        if self.is_zero() || rhs.is_zero() {
            return XPolyExact::zero();
        }
        let mut c = vec![LaurentPolyQ::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        XPolyExact::from_coeffs(c)
    }
}

impl Mul for XPolyExact {
    type Output = XPolyExact;
    fn mul(self, rhs: XPolyExact) -> XPolyExact {
        &self * &rhs
    }
}

impl fmt::Display for XPolyExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let single = c.terms().count() == 1;
            let negative = single && c.terms().next().is_some_and(|(_, v)| *v < 0);
            let shown = if negative { -c.clone() } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            first = false;
            let unit = single && shown.coeff(0) == 1;
            match j {
                0 => write!(f, "{shown}")?,
                _ if unit => write!(f, "{}", xpow(j))?,
                _ if single => write!(f, "{shown}*{}", xpow(j))?,
                _ => write!(f, "({shown})*{}", xpow(j))?,
            }
        }
        Ok(())
    }
}

fn xpow(j: usize) -> String {
    if j == 1 {
        "x".into()
    } else {
        format!("x^{j}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i64) -> LaurentPolyQ {
        LaurentPolyQ::q_pow(e)
    }

    #[test]
    fn arithmetic_and_degree() {
        let x = XPolyExact::x();
        let p = &x * &x - XPolyExact::one();
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "x^2 - 1");
        let z = p.clone() - p;
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn substitution_round_trip() {
        let p = XPolyExact::from_coeffs(vec![q(3), q(-1), LaurentPolyQ::from_terms(&[(0, 2), (4, 1)])]);
        assert_eq!(p.subst_x_scale(6).subst_x_scale(-6), p);
        assert_eq!(p.invert_q().invert_q(), p);
    }

    #[test]
    fn imaginary_folding() {
        // (ix)^2 = -x^2 ; i·(ix)^3 = x^3
        let p = XPolyExact::one().mul_x_pow(2);
        assert_eq!(p.fold_imaginary(1, 0), -p.clone());
        let c = XPolyExact::one().mul_x_pow(3);
        assert_eq!(c.fold_imaginary(1, 1), c);
        let r = (XPolyExact::x() + XPolyExact::one()).reflect();
        assert_eq!(r, XPolyExact::one() - XPolyExact::x());
    }

    #[test]
    #[should_panic(expected = "imaginary coefficient")]
    fn folding_rejects_imaginary_results() {
        XPolyExact::x().fold_imaginary(1, 0);
    }

    #[test]
    fn rational_evaluation_and_json() {
        let p = XPolyExact::from_coeffs(vec![q(4), LaurentPolyQ::zero(), LaurentPolyQ::one()]);
        let v = p.eval_rational(&Rational::from((3, 2)), &Rational::from((1, 2))).unwrap();
        assert_eq!(v, Rational::from((11, 4)));
        assert_eq!(XPolyExact::from_json(&p.to_json()), Some(p));
    }
}
