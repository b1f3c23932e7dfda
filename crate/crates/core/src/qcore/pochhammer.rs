//! q-Pochhammer symbols and q-binomial coefficients.

use rug::Float;

use super::context::QContext;
use super::scalar::{powi, Scalar};
use super::series::{SeriesValue, BOUND_PREC};
use crate::error::{QError, Result};
use crate::exact::LaurentPolyQ;

/// Length of a q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochLen {
    Finite(usize),
    Infinite,
}

/// `(a;q)_n = ∏_{k<n}(1 − a q^k)`, including `n = ∞`.
pub fn q_pochhammer<T: Scalar>(a: &T, ctx: &QContext, n: PochLen) -> Result<SeriesValue<T>> {
    let prec = ctx.prec() + 32;
    let q = ctx.q_at(prec);
    let a = a.with_prec(prec);
    let mut term = a.clone();
    let mut prod = T::one(prec);
    let (limit, infinite) = match n {
        PochLen::Finite(n) => (n, false),
        PochLen::Infinite => (ctx.max_terms(), true),
    };
    let tol = Float::with_val(BOUND_PREC, ctx.series_rel_tol());
    let mut used = 0;
    let mut tail = Float::new(BOUND_PREC);
    let mut converged = !infinite;
    for k in 0..limit {
        let mut f = T::one(prec);
        f.sub_assign_s(&term);
        prod.mul_assign_s(&f);
        used = k + 1;
        if prod.is_zero() {
            converged = true;
            break;
        }
        term.mul_assign_real(&q);
        if infinite {
            // remaining factors ∏_{j>k}(1 − a q^j); |log| ≤ 2|a q^{k+1}|/(1−q) once |a q^{k+1}| ≤ 1/2
            let m = term.magnitude(BOUND_PREC);
            if m <= tol {
                let one_minus_q = Float::with_val(BOUND_PREC, 1 - &q);
                let delta = Float::with_val(BOUND_PREC, &m * 2u32) / one_minus_q;
                tail = Float::with_val(BOUND_PREC, &delta * 2u32) * prod.magnitude(BOUND_PREC);
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(QError::NonConvergence { what: "(a;q)_inf".into(), max_terms: ctx.max_terms() });
    }
    let mut round = prod.magnitude(BOUND_PREC);
    round *= 4 * used as u64 + 8;
    round >>= prec;
    let mut value = prod;
    value.set_prec(ctx.prec());
    let mut r2 = value.magnitude(BOUND_PREC);
    r2 >>= ctx.prec() - 1;
    round += r2;
    Ok(SeriesValue { value, tail_bound: tail, round_bound: round, terms_used: used })
}

/// `[n choose k]_q` evaluated at the context's `q`.
pub fn q_binomial(n: u64, k: u64, ctx: &QContext) -> Result<Float> {
    if k > n {
        return Err(QError::domain(format!("q-binomial needs k <= n, got n={n}, k={k}")));
    }
    let prec = ctx.prec() + 32;
    let q = ctx.q_at(prec);
    // product form ∏_{j<k} (1 − q^{n−j})/(1 − q^{j+1})
    let mut v = Float::with_val(prec, 1);
    for j in 0..k {
        let top = Float::with_val(prec, 1 - powi(&q, (n - j) as i32, prec));
        let bot = Float::with_val(prec, 1 - powi(&q, (j + 1) as i32, prec));
        v *= top;
        v /= bot;
    }
    Ok(Float::with_val(ctx.prec(), v))
}

/// `[n choose k]_q` as an exact polynomial in `q`.
pub fn q_binomial_exact(n: u64, k: u64) -> Result<LaurentPolyQ> {
    if k > n {
        return Err(QError::domain(format!("q-binomial needs k <= n, got n={n}, k={k}")));
    }
    let top = q_pochhammer_q_exact(n);
    let bot = q_pochhammer_q_exact(k) * q_pochhammer_q_exact(n - k);
    Ok(top.div_exact(&bot).expect("q-binomial division leaves no remainder"))
}

/// `(q;q)_n` as an exact polynomial.
pub fn q_pochhammer_q_exact(n: u64) -> LaurentPolyQ {
    q_pochhammer_qpow_exact(1, 1, n as usize)
}

/// `(c·q^{j};q)_n` for `c = ±1` and integer `j`, exactly.
pub fn q_pochhammer_qpow_exact(sign: i32, j: i64, n: usize) -> LaurentPolyQ {
    let mut p = LaurentPolyQ::one();
    for k in 0..n as i64 {
        let f = LaurentPolyQ::one() - LaurentPolyQ::monomial(sign, 4 * (j + k));
        p = p * f;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Complex;

    fn ctx() -> QContext {
        QContext::new("0.5").unwrap()
    }

    #[test]
    fn finite_products() {
        let a = Float::with_val(256, 0.5);
        let v = q_pochhammer(&a, &ctx(), PochLen::Finite(2)).unwrap();
        assert_eq!(v.value, 0.375);
        let e = q_pochhammer(&a, &ctx(), PochLen::Finite(0)).unwrap();
        assert_eq!(e.value, 1);
    }

    #[test]
    fn infinite_product_with_unit_factor_vanishes() {
        let a = Complex::with_val(256, (1, 0));
        let v = q_pochhammer(&a, &ctx(), PochLen::Infinite).unwrap();
        assert!(v.value.is_zero());
    }

    #[test]
    fn infinite_product_tail_is_valid() {
        let c = ctx();
        let a = Float::with_val(256, 0.5);
        let v = q_pochhammer(&a, &c, PochLen::Infinite).unwrap();
        let loose = c.with_rel_tol(1e-20).unwrap();
        let w = q_pochhammer(&a, &loose, PochLen::Infinite).unwrap();
        let diff = Float::with_val(64, &v.value - &w.value).abs();
        assert!(diff <= w.error_bound());
        assert!(v.terms_used > w.terms_used);
    }

    #[test]
    fn binomials() {
        let q = LaurentPolyQ::monomial(1, 4);
        let one = LaurentPolyQ::one();
        assert_eq!(q_binomial_exact(2, 1).unwrap(), one.clone() + q.clone());
        assert_eq!(q_binomial_exact(5, 0).unwrap(), one.clone());
        let expected = LaurentPolyQ::from_terms(&[(0, 1), (4, 1), (8, 2), (12, 1), (16, 1)]);
        assert_eq!(q_binomial_exact(4, 2).unwrap(), expected);
        assert_eq!(q_binomial(2, 1, &ctx()).unwrap(), 1.5);
        assert!(q_binomial(1, 2, &ctx()).is_err());
    }
}
