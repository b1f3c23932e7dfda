use qmoment::qfunctions::{EntireFunctionId, TParam};
use qmoment::rootfinder::{find_zeros, interlace_certified, interlace_check, interlace_locations};
use qmoment::QContext;
use rug::Float;

fn ctx(q: &str) -> QContext {
    QContext::builder(q).precision_bits(256).build().unwrap()
}

#[test]
fn first_sine_zero_in_expected_range() {
    let c = ctx("0.5");
    let t = find_zeros(&EntireFunctionId::Sq, 3, &c).unwrap();
    let s1 = t.zeros[0].location.to_f64();
    assert!(s1 > 1.0 && s1 < 4.0, "{s1}");
    for z in &t.zeros {
        let b = &z.bracket;
        assert!(b.lo < b.hi && b.f_lo_sign != b.f_hi_sign);
        assert!(z.location >= b.lo && z.location <= b.hi);
        let mut width = Float::with_val(64, 1).max(&Float::with_val(64, z.location.abs_ref()));
        width >>= 128;
        assert!(b.width() <= width);
    }
}

#[test]
fn cosine_changes_sign() {
    let c = ctx("0.5");
    let t = find_zeros(&EntireFunctionId::Cq, 2, &c).unwrap();
    assert!(t.zeros[0].location > 0);
}

#[test]
fn zero_interlacing() {
    for q in ["0.3", "0.5", "0.8"] {
        let c = ctx(q);
        let s = find_zeros(&EntireFunctionId::Sq, 15, &c).unwrap();
        let b = find_zeros(&EntireFunctionId::BtMinusD(TParam::Infinity), 15, &c).unwrap();
        assert!(interlace_certified(&s, &b, &c).unwrap(), "q={q}");
        let d = find_zeros(&EntireFunctionId::BtMinusD(TParam::Finite(Float::new(64))), 15, &c).unwrap();
        let cq = find_zeros(&EntireFunctionId::Cq, 15, &c).unwrap();
        assert!(interlace_certified(&d, &cq, &c).unwrap(), "q={q}");
        assert!(!interlace_check(&s, &s).unwrap());
        assert!(!interlace_certified(&s, &s, &c).unwrap());
        // B's zeros are q^{1/2} times those of C_q.
        let scaled = cq.scaled(2, &c);
        for (x, y) in scaled.locations().iter().zip(b.locations()) {
            assert!(Float::with_val(64, x - &y).abs() < Float::with_val(64, &y * 1e-30));
        }
    }
}

#[test]
fn f_u_interlacing() {
    let c = ctx("0.5");
    let s1 = find_zeros(&EntireFunctionId::Sq, 1, &c).unwrap().zeros[0].location.clone();
    let u1 = Float::with_val(c.prec(), &s1 * 0.2);
    let u2 = Float::with_val(c.prec(), &s1 * 0.6);
    let a = find_zeros(&EntireFunctionId::Fu(u1), 15, &c).unwrap();
    let b = find_zeros(&EntireFunctionId::Fu(u2), 15, &c).unwrap();
    assert!(interlace_certified(&a, &b, &c).unwrap());
}

#[test]
fn extending_the_table_is_consistent() {
    let c = ctx("0.5");
    let a = find_zeros(&EntireFunctionId::Aq, 5, &c).unwrap();
    let b = find_zeros(&EntireFunctionId::Aq, 10, &c).unwrap();
    for (x, y) in a.zeros.iter().zip(&b.zeros) {
        assert!(Float::with_val(64, &x.location - &y.location).abs() <= x.bracket.width());
    }
}

#[test]
fn doubled_precision_moves_zeros_within_bracket() {
    let lo = ctx("0.5");
    let hi = QContext::builder("0.5").precision_bits(512).build().unwrap();
    let a = find_zeros(&EntireFunctionId::Cq, 6, &lo).unwrap();
    let b = find_zeros(&EntireFunctionId::Cq, 6, &hi).unwrap();
    for (x, y) in a.zeros.iter().zip(&b.zeros) {
        assert!(Float::with_val(64, &x.location - &y.location).abs() <= x.bracket.width());
    }
}

#[test]
fn origin_for_sine_measure() {
    let c = ctx("0.5");
    let t = find_zeros(&EntireFunctionId::BtMinusD(TParam::Finite(Float::new(64))), 4, &c).unwrap();
    assert_eq!(t.zeros.len(), 5);
    assert!(t.zeros[0].location.is_zero() && t.zeros[0].bracket.is_exact());
}

#[test]
fn asymmetric_functions_use_both_sides() {
    let c = ctx("0.5");
    let t = find_zeros(&EntireFunctionId::BtMinusD(TParam::Finite(Float::with_val(64, 0.7))), 8, &c).unwrap();
    assert_eq!(t.zeros.len(), 8);
    assert!(t.zeros.iter().any(|z| z.location < 0) && t.zeros.iter().any(|z| z.location > 0));
    let e = find_zeros(&EntireFunctionId::Eq, 3, &c).unwrap();
    assert!(e.zeros.iter().all(|z| z.location < 0));
}

#[test]
fn hyperbolic_functions_have_no_real_zeros() {
    let c = ctx("0.5");
    assert!(find_zeros(&EntireFunctionId::Shq, 1, &c).is_err());
    assert!(find_zeros(&EntireFunctionId::Sq, 0, &c).is_err());
}

#[test]
fn interlacing_needs_enough_zeros() {
    let one = [Float::with_val(64, 1)];
    let two = [Float::with_val(64, 1), Float::with_val(64, 2)];
    assert!(interlace_locations(&one, &two).is_err());
}

#[test]
fn serialization() {
    let c = ctx("0.5");
    let t = find_zeros(&EntireFunctionId::Sq, 2, &c).unwrap();
    let j = t.to_json(c.output_digits());
    assert_eq!(j["function"], "Sq");
    assert_eq!(j["zeros"].as_array().unwrap().len(), 2);
    assert!(t.to_csv(20).starts_with("x,lo,hi\n"));
}

#[test]
fn scaled_tables_with_touching_end_zeros() {
    // At q = 0.8 the 15th zeros of S_q(q^{-1/2}z) and C_q(z) differ by about 4e-41
    // relative, below the 256-bit bracket width.
    let c = ctx("0.8");
    let cq = find_zeros(&EntireFunctionId::Cq, 15, &c).unwrap();
    let s = find_zeros(&EntireFunctionId::Sq, 15, &c).unwrap().scaled(2, &c);
    assert!(interlace_certified(&s, &cq, &c).unwrap());
    assert!(interlace_certified(&cq, &s, &c).unwrap());
}
