//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::Instant;

use qmoment::exact::LaurentPolyQ;
use qmoment::nevanlinna::*;
use qmoment::qcore::q_binomial_exact;
use qmoment::qfunctions::*;
use qmoment::qpolynomials::*;
use qmoment::rootfinder::{find_zeros, interlace_certified, ZeroTable};
use qmoment::{QContext, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};

const PREC: u32 = 256;
const SEED: u64 = 20_240_601;

fn ctx(q: &str) -> QContext {
    QContext::builder(q).precision_bits(PREC).build().expect("valid context")
}

fn f(x: f64) -> Float {
    Float::with_val(PREC, x)
}

fn dist(a: &Float, b: &Float) -> f64 {
    Float::with_val(64, a - b).abs().to_f64()
}

fn cdist(a: &Complex, b: &Complex) -> f64 {
    Complex::with_val(64, a - b).abs().real().to_f64()
}

/// Outcome of one criterion: pass flag and a short detail line.
type Outcome = Result<(bool, String)>;

fn c01_cassini() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for m in 0..=10 {
        for n in 0..=m {
            if !cassini_check(m, n)? {
                return Ok((false, format!("cassini_check({m},{n}) false")));
            }
            pairs += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((secs < 10.0, format!("{pairs} pairs exact in {secs:.2} s")))
}

fn criterion_measures(c: &QContext) -> Result<Vec<(String, DiscreteMeasure)>> {
    let s1 = first_sine_zero(c)?;
    let mut out = Vec::new();
    for frac in [0.0, 0.3, 0.7] {
        let u = Float::with_val(PREC, &s1 * frac);
        out.push((format!("u={frac}s1"), build_measure(&MeasureParam::U(u), 40, c)?));
    }
    out.push(("t=0".into(), sine_measure(40, c)?));
    out.push(("t=inf".into(), cosine_measure(40, c)?));
    Ok(out)
}

fn c02_c03_measures() -> Result<((bool, String), (bool, String))> {
    let (mut ok2, mut worst2) = (true, 0.0f64);
    let (mut ok3, mut worst3) = (true, 0.0f64);
    let mut oracle_ok = true;
    for q in ["0.3", "0.5", "0.8"] {
        let c = ctx(q);
        let jacobi = JacobiOperator::new(8);
        let exact = jacobi.moments(12)?;
        let qinv = LaurentPolyQ::from_terms(&[(0, 1), (-4, 1)]);
        oracle_ok &= exact[2] == LaurentPolyQ::one() && exact[4] == qinv;
        let oracle = jacobi.moments_numeric(12, &c)?;
        for (name, m) in criterion_measures(&c)? {
            let r = verify_orthogonality(&m, 8, 1e-11, &c)?;
            worst2 = worst2.max(r.max());
            if !(r.max() < 1e-10) {
                ok2 = false;
                println!("    q={q} {name}: orthogonality residual {:.3e}", r.max());
            }
            let mk = measure_moments(&m, 12, 1e-11, &c)?;
            for (k, (a, b)) in mk.iter().zip(&oracle).enumerate() {
                let rel = dist(a, b) / b.to_f64().abs().max(1.0);
                worst3 = worst3.max(rel);
                if !(rel < 1e-8) {
                    ok3 = false;
                    println!("    q={q} {name}: moment {k} relative error {rel:.3e}");
                }
            }
        }
    }
    Ok((
        (ok2, format!("15 measures, 40 pairs each, max residual {worst2:.3e}")),
        (ok3 && oracle_ok, format!("max relative moment error {worst3:.3e}, oracle m2 = 1, m4 = 1 + 1/q: {oracle_ok}")),
    ))
}

fn c04_kernel() -> Outcome {
    let c = ctx("0.5");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut worst_sum, mut worst_bd) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < 20 {
        let (u, v) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if u == v || u * v == 0.0 {
            continue;
        }
        let (u, v) = (f(u), f(v));
        let closed = kernel(&u, &v, &c)?.value;
        worst_sum = worst_sum.max(dist(&closed, &kernel_partial_sum(&u, &v, 200, &c).value));
        worst_bd = worst_bd.max(dist(&closed, &kernel_bd(&u, &v, &c)?.value));
        done += 1;
    }
    Ok((worst_sum < 1e-12 && worst_bd < 1e-12, format!("partial sum {worst_sum:.3e}, B/D quotient {worst_bd:.3e}")))
}

fn c05_determinant() -> Outcome {
    let c = ctx("0.5");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (r, th) = (3.0 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
        let z = Complex::with_val(PREC, (r * th.cos(), r * th.sin()));
        let det = eval_abcd(&z, &c)?.determinant().value;
        worst = worst.max(cdist(&det, &Complex::with_val(PREC, 1)));
    }
    let mut worst_real = 0.0f64;
    for _ in 0..100 {
        let x = f(rng.gen_range(-3.0..3.0));
        let y = Float::with_val(PREC, &x / c.q_half());
        let s = eval_sq(&x, &c)?.mul(&eval_sq(&y, &c)?).scale(c.q_half());
        let v = eval_cq(&x, &c)?.mul(&eval_cq(&y, &c)?).add(&s).value;
        worst_real = worst_real.max(dist(&v, &f(1.0)));
    }
    Ok((worst < 1e-15 && worst_real < 1e-15, format!("complex {worst:.3e}, real {worst_real:.3e}")))
}

fn positive_table(t: ZeroTable, n: usize) -> ZeroTable {
    let mut t = t;
    t.zeros.retain(|z| z.location.is_sign_positive() && !z.location.is_zero());
    t.zeros.truncate(n);
    t
}

fn fu_positive_zeros(u: &Float, n: usize, c: &QContext) -> Result<ZeroTable> {
    let mut count = 2 * n;
    loop {
        let t = find_zeros(&EntireFunctionId::Fu(u.clone()), count, c)?;
        if t.positive().len() >= n {
            return Ok(positive_table(t, n));
        }
        count *= 2;
    }
}

fn c06_interlacing() -> Outcome {
    let mut failures = Vec::new();
    for q in ["0.3", "0.5", "0.8"] {
        let c = ctx(q);
        let sq = find_zeros(&EntireFunctionId::Sq, 15, &c)?;
        let cq = find_zeros(&EntireFunctionId::Cq, 15, &c)?;
        // Zeros of z ↦ f(q^{−1/2}z) are q^{1/2} times those of f.
        let sq_scaled = sq.scaled(2, &c);
        let cq_scaled = cq.scaled(2, &c);
        if !interlace_certified(&sq, &cq_scaled, &c)? {
            failures.push(format!("q={q}: S_q(z) vs C_q(q^-1/2 z)"));
        }
        if !interlace_certified(&sq_scaled, &cq, &c)? {
            failures.push(format!("q={q}: S_q(q^-1/2 z) vs C_q(z)"));
        }
        let s1 = sq.zeros[0].location.clone();
        let u1 = Float::with_val(PREC, &s1 * 0.2);
        let u2 = Float::with_val(PREC, &s1 * 0.6);
        let (a, b) = (fu_positive_zeros(&u1, 15, &c)?, fu_positive_zeros(&u2, 15, &c)?);
        if !interlace_certified(&a, &b, &c)? {
            failures.push(format!("q={q}: f_u1 vs f_u2"));
        }
    }
    let detail = if failures.is_empty() { "3 pairs x 3 bases, 15 zeros each".to_string() } else { failures.join("; ") };
    Ok((failures.is_empty(), detail))
}

fn c07_limits() -> Outcome {
    let c = ctx("0.5");
    let mut worst = 0.0f64;
    for x in [0.5, 1.0, 2.0] {
        for kind in LimitKind::ALL {
            let r = limit_check(kind, &f(x), 15, &c)?;
            worst = worst.max(r.value);
        }
    }
    Ok((worst < 1e-10, format!("max residual {worst:.3e} at n = 15")))
}

fn c08_addition() -> Outcome {
    let c = ctx("0.5");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut worst = [0.0f64; 3];
    let mut done = 0;
    while done < 50 {
        let (u, v) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if u == 0.0 || v == 0.0 {
            continue;
        }
        let (u, v) = (f(u), f(v));
        let pairs = [
            (product_direct(&u, &v, &c)?, product_formula_rhs(&u, &v, &c)?),
            (trig_sum_direct(&u, &v, &c)?, trig_sum_formula(&u, &v, &c)?),
            (trig_diff_direct(&u, &v, &c)?, trig_diff_formula(&u, &v, &c)?),
        ];
        for (w, (a, b)) in worst.iter_mut().zip(&pairs) {
            *w = w.max(dist(&a.value, &b.value));
        }
        done += 1;
    }
    let ok = worst.iter().all(|w| *w < 1e-12);
    Ok((ok, format!("product {:.3e}, sum {:.3e}, difference {:.3e}", worst[0], worst[1], worst[2])))
}

fn c09_five_term() -> Outcome {
    let mut worst = 0.0f64;
    for q in ["0.4", "0.7"] {
        let c = ctx(q);
        for x in [0.5, 1.3] {
            for n in 0..=10 {
                for rel in FiveTerm::ALL {
                    worst = worst.max(five_term_check(rel, n, &f(x), &c)?.value);
                }
            }
        }
    }
    Ok((worst < 1e-10, format!("max residual {worst:.3e}")))
}

fn c10_generating() -> Outcome {
    let c = ctx("0.5");
    let g = generating_function_check(&f(1.2), &f(0.6), 60, &c)?.value;
    let ci = chen_ismail_check(&f(1.0), &f(0.5), 200, &c)?.value;
    Ok((g < 1e-10 && ci < 1e-10, format!("2phi2 {g:.3e}, Chen-Ismail {ci:.3e}")))
}

fn c11_ac() -> Outcome {
    let c = ctx("0.5");
    let spec = ACMeasureSpec::symmetric(&c);
    let r = verify_ac_orthogonality(&spec, 4, 1e-8, &c)?;
    let mut worst = 0.0f64;
    for i in 0..=40 {
        let x = f(-4.0 + 0.2 * i as f64);
        let a = ac_density(&x, &spec, &c)?.value;
        worst = worst.max(dist(&a, &ac_density_exponential(&x, &c)?.value));
        worst = worst.max(dist(&a, &ac_density_2phi2(&x, &c)?.value));
    }
    Ok((r.max() < 1e-6 && worst < 1e-15, format!("quadrature residual {:.3e}, density paths {worst:.3e}", r.max())))
}

fn c12_aq() -> Outcome {
    let c = ctx("0.5");
    let r = aq_orthogonality_check(5, 30, &c)?;
    let s1 = aq_stieltjes_check(&Complex::with_val(PREC, (0.1, 0)), 30, &c)?;
    let s2 = aq_stieltjes_check(&Complex::with_val(PREC, (0, 0.25)), 30, &c)?;
    let ok = r.max() < 1e-8 && s1 < 1e-8 && s2 < 1e-8;
    Ok((ok, format!("orthogonality {:.3e}, Stieltjes {s1:.3e} (z=0.1), {s2:.3e} (z=0.25i)", r.max())))
}

/// Determinant by expansion over permutations; exact for dyadic entries.
fn det_permutations(m: &[Vec<Float>]) -> Float {
    fn rec(m: &[Vec<Float>], row: usize, used: &mut Vec<bool>, sign: i32, acc: Float, out: &mut Float) {
        let n = m.len();
        if row == n {
            *out += if sign > 0 { acc } else { -acc };
            return;
        }
        let mut parity = 0;
        for col in 0..n {
            if used[col] {
                parity += 1;
                continue;
            }
            if !m[row][col].is_zero() {
                used[col] = true;
                let s = if (col - parity) % 2 == 0 { sign } else { -sign };
                rec(m, row + 1, used, s, Float::with_val(PREC, &acc * &m[row][col]), out);
                used[col] = false;
            }
        }
    }
    let mut out = Float::new(PREC);
    rec(m, 0, &mut vec![false; m.len()], 1, Float::with_val(PREC, 1), &mut out);
    out
}

fn c13_exact() -> Outcome {
    let mut failures = Vec::new();
    for n in 0..=25usize {
        for base in [Base::Q, Base::QInverse] {
            if fib_poly(n, base) != fib_poly_recurrence(n, base) {
                failures.push(format!("phi_{n}"));
            }
            if t_poly(n as i64, base) != t_poly_recurrence(n as i64, base) {
                failures.push(format!("T_{n}"));
            }
        }
    }
    for n in 0..=15i64 {
        if p_monic(n) != t_poly(n, Base::QInverse) {
            failures.push(format!("monic P_{n}"));
        }
    }
    for n in 0..=12 {
        if !symmetry_check(n) {
            failures.push(format!("symmetry {n}"));
        }
    }
    for n in 0..=8usize {
        let entries: Vec<Float> =
            (0..n).map(|k| f((k as f64 + 3.0) / 8.0 * if k % 2 == 0 { 1.0 } else { -1.0 })).collect();
        let mut m = vec![vec![Float::new(PREC); n]; n];
        for i in 0..n {
            m[i][i] = f(1.0);
            if i + 1 < n {
                m[i][i + 1] = entries[i].clone();
                m[i + 1][i] = entries[i + 1].clone();
            }
        }
        if frak_f(&entries, PREC) != det_permutations(&m) {
            failures.push(format!("frak F {n}"));
        }
    }
    for n in 1..=20u64 {
        for k in 1..n {
            let rhs = q_binomial_exact(n - 1, k - 1)? + q_binomial_exact(n - 1, k)?.shift(4 * k as i64);
            if q_binomial_exact(n, k)? != rhs {
                failures.push(format!("q-Pascal ({n},{k})"));
            }
        }
    }
    let detail = if failures.is_empty() { "all exact".to_string() } else { failures.join(", ") };
    Ok((failures.is_empty(), detail))
}

fn report(id: u32, name: &str, start: Instant, outcome: Outcome) -> bool {
    let secs = start.elapsed().as_secs_f64();
    let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    println!("criterion {id:2} {name}: {} ({detail}; {secs:.1} s)", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() {
    let mut results = Vec::new();
    let t = Instant::now();
    results.push(report(1, "exact Euler-Cassini", t, c01_cassini()));
    let t = Instant::now();
    let (r2, r3) = match c02_c03_measures() {
        Ok((a, b)) => (Ok(a), Ok(b)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    results.push(report(2, "N-extremal orthogonality", t, r2));
    results.push(report(3, "moment consistency", t, r3));
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (4, "kernel triple equality", c04_kernel),
        (5, "Nevanlinna determinant", c05_determinant),
        (6, "interlacing", c06_interlacing),
        (7, "limit relations", c07_limits),
        (8, "addition formula", c08_addition),
        (9, "five-term relations i-v", c09_five_term),
        (10, "generating functions", c10_generating),
        (11, "absolutely continuous measure", c11_ac),
        (12, "determinate A_q case", c12_aq),
        (13, "exact structural suite", c13_exact),
    ];
    for (id, name, run) in criteria {
        let t = Instant::now();
        results.push(report(id, name, t, run()));
    }
    let passed = results.iter().filter(|r| **r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
