use proptest::prelude::*;
use qmoment::nevanlinna::{eval_abcd, kernel};
use qmoment::qcore::{q_pochhammer, PochLen};
use qmoment::qfunctions::{eval_cq, eval_e, eval_sq};
use qmoment::qpolynomials::{p_poly, t_poly, Base};
use qmoment::{QContext, SeriesValue};
use rug::{Complex, Float};

const PREC: u32 = 192;

fn ctx(q: f64) -> QContext {
    QContext::builder(&format!("{q}")).precision_bits(PREC).build().unwrap()
}

fn float(v: f64) -> Float {
    Float::with_val(PREC, v)
}

// |a - b| within both certified bounds plus a few ulps of the larger magnitude.
fn agree(a: &SeriesValue<Float>, b: &SeriesValue<Float>) -> bool {
    let diff = Float::with_val(64, &a.value - &b.value).abs();
    let scale = Float::with_val(64, a.magnitude().max(&b.magnitude())).max(&Float::with_val(64, 1));
    let slack = scale >> (PREC as i32 - 24);
    diff <= a.error_bound() + b.error_bound() + slack
}

fn rel_complex(a: &SeriesValue<Complex>, b: &SeriesValue<Complex>) -> f64 {
    let d = Complex::with_val(64, &a.value - &b.value).abs().real().to_f64();
    let m = Complex::with_val(64, a.value.abs_ref()).real().to_f64().max(1.0);
    d / m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn refinement_stays_within_tail_bound(q in 0.1f64..0.9, x in -20.0f64..20.0) {
        let c = ctx(q);
        let fine = c.with_max_terms(2 * c.max_terms()).unwrap().with_rel_tol(c.series_rel_tol() / 2.0).unwrap();
        let x = float(x);
        for f in [eval_sq::<Float>, eval_cq::<Float>] {
            prop_assert!(agree(&f(&x, &c).unwrap(), &f(&x, &fine).unwrap()));
        }
    }

    #[test]
    fn pochhammer_step(q in 0.05f64..0.95, a in -3.0f64..3.0, n in 0usize..30) {
        let c = ctx(q);
        let a = float(a);
        let lhs = q_pochhammer(&a, &c, PochLen::Finite(n + 1)).unwrap();
        let head = q_pochhammer(&a, &c, PochLen::Finite(n)).unwrap();
        let factor = float(1.0) - Float::with_val(PREC, &a * c.q_pow_quarter(4 * n as i64, PREC));
        let rhs = head.scale(&factor);
        prop_assert!(agree(&lhs, &rhs));
    }

    #[test]
    fn q_euler_identity(q in 0.1f64..0.9, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let c = ctx(q);
        let z = Complex::with_val(PREC, (re, im));
        let iz = Complex::with_val(PREC, &z * Complex::with_val(PREC, (0, 1)));
        let iq = Complex::with_val(PREC, (Float::new(PREC), c.q_quarter()));
        let lhs = eval_e(&iz, &c).unwrap();
        let rhs = eval_cq(&z, &c).unwrap().add(&eval_sq(&z, &c).unwrap().scale_by(&iq));
        prop_assert!(rel_complex(&lhs, &rhs) < 1e-40);
    }

    #[test]
    fn abcd_determinant_is_one(q in 0.1f64..0.9, x in -10.0f64..10.0) {
        let c = ctx(q);
        let m = eval_abcd(&float(x), &c).unwrap();
        let det = m.determinant();
        let err = Float::with_val(64, &det.value - 1u32).abs();
        prop_assert!(err <= det.error_bound() + float(1e-40), "{err}");
    }

    #[test]
    fn kernel_is_symmetric(q in 0.1f64..0.9, u in -5.0f64..5.0, v in -5.0f64..5.0) {
        prop_assume!((u - v).abs() > 1e-3 && u.abs() > 1e-3 && v.abs() > 1e-3);
        let c = ctx(q);
        let (u, v) = (float(u), float(v));
        prop_assert!(agree(&kernel(&u, &v, &c).unwrap(), &kernel(&v, &u, &c).unwrap()));
    }

    #[test]
    fn substitution_round_trip(n in 0i64..16, k in -8i64..8) {
        for base in [Base::Q, Base::QInverse] {
            let p = t_poly(n, base);
            prop_assert_eq!(p.subst_x_scale(k).subst_x_scale(-k), p.clone());
            prop_assert_eq!(p.invert_q().invert_q(), p.clone());
            prop_assert_eq!(p.reflect().reflect(), p);
        }
    }

    #[test]
    fn p_has_parity_of_its_degree(n in 0i64..20) {
        let p = p_poly(n);
        let expected = if n % 2 == 0 { p.clone() } else { -p.clone() };
        prop_assert_eq!(p.reflect(), expected);
    }
}
