//! Exact constructions of φ_n(x;q), φ_n(x;q⁻¹), T_n, P_n and Q_n.

use crate::exact::{LaurentPolyQ, XPolyExact};
use crate::qcore::q_binomial_exact;

/// Which base a family is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    Q,
    QInverse,
}

fn qbin(n: u64, k: u64) -> LaurentPolyQ {
    q_binomial_exact(n, k).expect("k <= n")
}

/// `φ_n(x; q^{±1})` from the explicit sum.
pub fn fib_poly(n: usize, base: Base) -> XPolyExact {
    let mut coeffs = vec![LaurentPolyQ::zero(); n.max(1)];
    let n_i = n as i64;
    for k in 0..n {
        if 2 * k >= n {
            break;
        }
        let k_i = k as i64;
        let b = qbin((n - k - 1) as u64, k as u64);
        let p = match base {
            Base::Q => b.shift(4 * k_i * k_i),
            Base::QInverse => b.shift(4 * k_i * (k_i + 1 - n_i)),
        };
        coeffs[n - 2 * k - 1] = p;
    }
    XPolyExact::from_coeffs(coeffs)
}

/// `φ_n(x; q^{±1})` from `φ_{n+1} = xφ_n + q^{±(n−1)}φ_{n−1}`.
pub fn fib_poly_recurrence(n: usize, base: Base) -> XPolyExact {
    fib_sequence(n, base).pop().expect("nonempty")
}

/// `φ_0, …, φ_n`.
pub fn fib_sequence(n: usize, base: Base) -> Vec<XPolyExact> {
    let sign = match base {
        Base::Q => 1,
        Base::QInverse => -1,
    };
    let mut seq = vec![XPolyExact::zero(), XPolyExact::one()];
    for m in 1..n {
        let next = seq[m].mul_x_pow(1) + seq[m - 1].shift_q(sign * 4 * (m as i64 - 1));
        seq.push(next);
    }
    seq.truncate(n + 1);
    seq
}

/// `T_n(x; q^{±1})`, `n ≥ −1`, from the explicit sum `Σ [n−k,k]_q (−1)^k q^{k(k−1)} x^{n−2k}`.
pub fn t_poly(n: i64, base: Base) -> XPolyExact {
    if n < 0 {
        return XPolyExact::zero();
    }
    let n_u = n as usize;
    let mut coeffs = vec![LaurentPolyQ::zero(); n_u + 1];
    for k in 0..=n_u / 2 {
        let k_i = k as i64;
        let mut c = qbin((n_u - k) as u64, k as u64).shift(4 * k_i * (k_i - 1));
        if k % 2 == 1 {
            c = -c;
        }
        coeffs[n_u - 2 * k] = match base {
            Base::Q => c,
            Base::QInverse => c.invert_q(),
        };
    }
    XPolyExact::from_coeffs(coeffs)
}

/// `T_n(x; q^{±1})` from `T_{n+1} = xT_n − q^{±(n−1)}T_{n−1}`.
pub fn t_poly_recurrence(n: i64, base: Base) -> XPolyExact {
    if n < 0 {
        return XPolyExact::zero();
    }
    let sign = match base {
        Base::Q => 1,
        Base::QInverse => -1,
    };
    let (mut prev, mut cur) = (XPolyExact::zero(), XPolyExact::one());
    for m in 0..n {
        let next = cur.mul_x_pow(1) - prev.shift_q(sign * 4 * (m - 1));
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_n(x;q) = (−i)^n q^{−n/2} φ_{n+1}(i q^{1/2} x; q)` with the imaginary units folded away.
pub fn t_poly_from_fib(n: i64, base: Base) -> XPolyExact {
    if n < 0 {
        return XPolyExact::zero();
    }
    let s = match base {
        Base::Q => 1,
        Base::QInverse => -1,
    };
    fib_poly(n as usize + 1, base).subst_x_scale(2 * s).fold_imaginary(1, -n).shift_q(-2 * n * s)
}

/// `P_n(x;q) = (−i)^n q^{n(n+1)/4} φ_{n+1}(i q^{−1/2} x; q^{−1})`, `n ≥ −1`.
pub fn p_poly(n: i64) -> XPolyExact {
    if n < 0 {
        return XPolyExact::zero();
    }
    fib_poly_recurrence(n as usize + 1, Base::QInverse).subst_x_scale(-2).fold_imaginary(1, -n).shift_q(n * (n + 1))
}

/// `P_n` from `P_{n+1} = q^{n/2}(x P_n − q^{−(n−1)/2} P_{n−1})`.
pub fn p_poly_recurrence(n: i64) -> XPolyExact {
    if n < 0 {
        return XPolyExact::zero();
    }
    p_sequence(n as usize).pop().expect("nonempty")
}

/// `P_0, …, P_n`.
pub fn p_sequence(n: usize) -> Vec<XPolyExact> {
    let mut seq = vec![XPolyExact::one()];
    let mut prev = XPolyExact::zero();
    for m in 0..n as i64 {
        let cur = seq[m as usize].clone();
        let next = (cur.mul_x_pow(1) - prev.shift_q(-2 * (m - 1))).shift_q(2 * m);
        prev = cur;
        seq.push(next);
    }
    seq
}

/// `Q_n(x) = P_{n−1}(q^{1/2} x)`.
pub fn q_poly(n: usize) -> XPolyExact {
    p_poly(n as i64 - 1).subst_x_scale(2)
}

/// `Q_n(x) = (−i)^{n−1} q^{n(n−1)/4} φ_n(ix; q^{−1})`.
pub fn q_poly_from_fib(n: usize) -> XPolyExact {
    if n == 0 {
        return XPolyExact::zero();
    }
    let n_i = n as i64;
    fib_poly_recurrence(n, Base::QInverse).fold_imaginary(1, -(n_i - 1)).shift_q(n_i * (n_i - 1))
}

/// The monic rescaling `q^{−n(n−1)/4} P_n(x;q)`.
pub fn p_monic(n: i64) -> XPolyExact {
    p_poly(n).shift_q(-n * (n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i64) -> LaurentPolyQ {
        LaurentPolyQ::q_pow(e)
    }

    fn x2_plus(c: LaurentPolyQ) -> XPolyExact {
        XPolyExact::from_coeffs(vec![c, LaurentPolyQ::zero(), LaurentPolyQ::one()])
    }

    #[test]
    fn small_fibonacci_polynomials() {
        assert!(fib_poly(0, Base::Q).is_zero());
        assert_eq!(fib_poly(1, Base::Q), XPolyExact::one());
        assert_eq!(fib_poly(3, Base::Q), x2_plus(q(4)));
        assert_eq!(fib_poly(3, Base::QInverse), x2_plus(q(-4)));
        assert_eq!(fib_poly(3, Base::QInverse), fib_poly(3, Base::Q).invert_q());
    }

    #[test]
    fn explicit_sums_match_recurrences() {
        for n in 0..=14 {
            for base in [Base::Q, Base::QInverse] {
                assert_eq!(fib_poly(n, base), fib_poly_recurrence(n, base), "phi_{n}");
                assert_eq!(fib_poly(n, Base::QInverse), fib_poly(n, Base::Q).invert_q());
                let m = n as i64 - 1;
                assert_eq!(t_poly(m, base), t_poly_recurrence(m, base), "T_{m}");
                assert_eq!(t_poly(m, base), t_poly_from_fib(m, base), "T_{m} from phi");
            }
        }
    }

    #[test]
    fn small_t_polynomials() {
        let x = XPolyExact::x();
        assert_eq!(t_poly(1, Base::Q), x);
        assert_eq!(t_poly(2, Base::Q), x2_plus(-LaurentPolyQ::one()));
        let t3 = XPolyExact::from_coeffs(vec![
            LaurentPolyQ::zero(),
            -LaurentPolyQ::from_terms(&[(0, 1), (4, 1)]),
            LaurentPolyQ::zero(),
            LaurentPolyQ::one(),
        ]);
        assert_eq!(t_poly(3, Base::Q), t3);
    }

    #[test]
    fn orthogonal_polynomials() {
        assert_eq!(p_poly(2), x2_plus(-LaurentPolyQ::one()).shift_q(2));
        assert_eq!(q_poly(1), XPolyExact::one());
        assert!(q_poly(0).is_zero());
        assert!(p_poly(-1).is_zero());
        for n in 0..=12 {
            assert_eq!(p_poly(n), p_poly_recurrence(n), "P_{n}");
            assert_eq!(p_monic(n), t_poly(n, Base::QInverse), "monic P_{n}");
            assert_eq!(q_poly(n as usize), q_poly_from_fib(n as usize), "Q_{n}");
            assert_eq!(p_poly(n).reflect(), if n % 2 == 0 { p_poly(n) } else { -p_poly(n) });
        }
    }
}
