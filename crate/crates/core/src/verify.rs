//! Verification suites: named identity checks with residuals, tolerances and
//! a reproducible random grid.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};
use serde_json::{json, Value};

use crate::error::{QError, Result};
use crate::exact::LaurentPolyQ;
use crate::nevanlinna::*;
use crate::qcore::{eval_phi, q_binomial_exact, q_pochhammer, q_pochhammer_qpow_exact, HypergeometricSpec, PochLen};
use crate::qcore::{QContext, Scalar, SeriesValue};
use crate::qfunctions::*;
use crate::qpolynomials::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Series,
    Functions,
    Polynomials,
    Cassini,
    Nevanlinna,
    Orthogonality,
    Moments,
    Aq,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Series,
        Suite::Functions,
        Suite::Polynomials,
        Suite::Cassini,
        Suite::Nevanlinna,
        Suite::Orthogonality,
        Suite::Moments,
        Suite::Aq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Series => "series",
            Suite::Functions => "functions",
            Suite::Polynomials => "polynomials",
            Suite::Cassini => "cassini",
            Suite::Nevanlinna => "nevanlinna",
            Suite::Orthogonality => "orthogonality",
            Suite::Moments => "moments",
            Suite::Aq => "aq",
            Suite::All => "all",
        }
    }

    fn index(self) -> u64 {
        Suite::EACH.iter().position(|s| *s == self).unwrap_or(Suite::EACH.len()) as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| QError::Domain(format!("unknown suite {s:?}")))
    }
}

/// The measure examined by the orthogonality and moment suites.
#[derive(Debug, Clone, PartialEq)]
pub enum VerifyMeasure {
    Discrete(MeasureParam),
    Ac(ACMeasureSpec),
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    pub tol: f64,
    pub measure: VerifyMeasure,
    /// Support size passed to `build_measure`.
    pub count: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            tol: 1e-10,
            measure: VerifyMeasure::Discrete(MeasureParam::U(Float::new(64))),
            count: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

/// One named identity. `residual` is `None` for exact checks.
#[derive(Debug, Clone)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub status: Status,
    pub detail: String,
    pub error: Option<QError>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub suite: Suite,
    pub q: Float,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn errors(&self) -> impl Iterator<Item = &QError> {
        self.checks.iter().filter_map(|c| c.error.as_ref())
    }

    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "suite": self.suite.name(),
            "q": crate::format::decimal(&self.q, digits),
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "suite": c.suite.name(),
                "name": c.name,
                "status": c.status.name(),
                "residual": c.residual.map_or_else(|| "exact".to_string(), |r| format!("{r:.3e}")),
                "tolerance": c.tolerance.map_or_else(|| "exact".to_string(), |t| format!("{t:.3e}")),
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,name,status,residual,tolerance,detail\n");
        for c in &self.checks {
            let num = |v: Option<f64>| v.map_or_else(|| "exact".to_string(), |r| format!("{r:.3e}"));
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.suite,
                csv_field(&c.name),
                c.status.name(),
                num(c.residual),
                num(c.tolerance),
                csv_field(&c.detail)
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

enum Outcome {
    Exact(bool, String),
    Numeric(f64, f64, String),
}

fn exact(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome::Exact(ok, detail.into()))
}

fn numeric(residual: f64, tol: f64, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome::Numeric(residual, tol, detail.into()))
}

struct Runner<'a> {
    suite: Suite,
    ctx: &'a QContext,
    opts: &'a VerifyOptions,
    rng: ChaCha8Rng,
    checks: Vec<Check>,
}

impl<'a> Runner<'a> {
    fn new(suite: Suite, ctx: &'a QContext, opts: &'a VerifyOptions) -> Self {
        // Each suite draws from its own stream so that `all` and a single suite agree.
        let rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ suite.index());
        Runner { suite, ctx, opts, rng, checks: Vec::new() }
    }

    fn check(&mut self, name: &str, f: impl FnOnce(&mut Self) -> Result<Outcome>) {
        let (residual, tolerance, status, detail, error) = match f(self) {
            Ok(Outcome::Exact(ok, d)) => (None, None, if ok { Status::Pass } else { Status::Fail }, d, None),
            Ok(Outcome::Numeric(r, t, d)) => {
                (Some(r), Some(t), if r <= t { Status::Pass } else { Status::Fail }, d, None)
            }
            Err(e) => (None, None, Status::Error, e.to_string(), Some(e)),
        };
        self.checks.push(Check {
            suite: self.suite,
            name: name.to_string(),
            residual,
            tolerance,
            status,
            detail,
            error,
        });
    }

    fn prec(&self) -> u32 {
        self.ctx.prec()
    }

    fn real(&mut self, lo: f64, hi: f64) -> Float {
        Float::with_val(self.prec(), self.rng.gen_range(lo..hi))
    }

    fn nonzero_real(&mut self, r: f64) -> Float {
        loop {
            let x: f64 = self.rng.gen_range(-r..r);
            if x != 0.0 {
                return Float::with_val(self.prec(), x);
            }
        }
    }

    /// Uniform in the disc of radius `r`.
    fn complex(&mut self, r: f64) -> Complex {
        let rho = r * self.rng.gen::<f64>().sqrt();
        let th = self.rng.gen_range(0.0..std::f64::consts::TAU);
        Complex::with_val(self.prec(), (rho * th.cos(), rho * th.sin()))
    }
}

/// `|a − b| / max(1, |b|)`.
fn rel<T: Scalar>(a: &SeriesValue<T>, b: &SeriesValue<T>) -> f64 {
    let d = a.sub(b).magnitude().to_f64();
    d / b.magnitude().to_f64().max(1.0)
}

/// Run one suite, or every suite for [`Suite::All`]. Failures and errors of
/// individual checks are recorded in the report rather than returned.
pub fn run(suite: Suite, opts: &VerifyOptions, ctx: &QContext) -> Report {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    for s in suites {
        let mut r = Runner::new(s, ctx, opts);
        match s {
            Suite::Series => series(&mut r),
            Suite::Functions => functions(&mut r),
            Suite::Polynomials => polynomials(&mut r),
            Suite::Cassini => cassini(&mut r),
            Suite::Nevanlinna => nevanlinna(&mut r),
            Suite::Orthogonality => orthogonality(&mut r),
            Suite::Moments => moments(&mut r),
            Suite::Aq => aq(&mut r),
            Suite::All => unreachable!("expanded above"),
        }
        checks.extend(r.checks);
    }
    Report { suite, q: ctx.q().clone(), seed: opts.seed, checks }
}

fn series(r: &mut Runner) {
    let tol = r.opts.tol;
    r.check("q-binomial theorem 1phi0(a;-;q,z) = (az;q)_inf/(z;q)_inf", |r| {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let (a, z) = (r.complex(2.0), r.complex(0.5));
            let c = r.ctx;
            let lhs = eval_phi(&HypergeometricSpec::new(vec![a.clone()], vec![], z.clone()), c)?;
            let az = Complex::with_val(r.prec(), &a * &z);
            let num = q_pochhammer(&az, c, PochLen::Infinite)?;
            let den = q_pochhammer(&z, c, PochLen::Infinite)?;
            let rhs = SeriesValue {
                value: Complex::with_val(r.prec(), &num.value / &den.value),
                ..SeriesValue::exact(Complex::new(r.prec()))
            };
            worst = worst.max(rel(&lhs, &rhs));
        }
        numeric(worst, tol, "10 random (a, z), |a| <= 2, |z| <= 0.5")
    });
    r.check("terminating series use n+1 terms with zero tail", |r| {
        let mut ok = true;
        for n in 0..=8usize {
            let top = Complex::with_val(r.prec(), r.ctx.q_pow_quarter(-4 * n as i64, r.prec()));
            let (a, b, z) = (r.complex(1.0), r.complex(0.5), r.complex(2.0));
            let v = eval_phi(&HypergeometricSpec::new(vec![top, a], vec![b], z), r.ctx)?;
            ok &= v.terms_used == n + 1 && v.tail_bound.is_zero();
        }
        exact(ok, "2phi1 with upper parameter q^-n, n <= 8")
    });
    r.check("(a;q)_{n+1} = (a;q)_n (1 - a q^n)", |r| {
        let mut worst = 0.0f64;
        for n in 0..=20usize {
            let a = r.complex(2.0);
            let lhs = q_pochhammer(&a, r.ctx, PochLen::Finite(n + 1))?;
            let step = Complex::with_val(
                r.prec(),
                1 - Complex::with_val(r.prec(), &a * r.ctx.q_pow_quarter(4 * n as i64, r.prec())),
            );
            let rhs = q_pochhammer(&a, r.ctx, PochLen::Finite(n))?.scale_by(&step);
            worst = worst.max(rel(&lhs, &rhs));
        }
        numeric(worst, tol, "random a, n <= 20")
    });
    r.check("q-Pascal identity", |_| {
        let mut ok = true;
        for n in 1..=20u64 {
            for k in 1..n {
                let rhs = q_binomial_exact(n - 1, k - 1)? + q_binomial_exact(n - 1, k)?.shift(4 * k as i64);
                ok &= q_binomial_exact(n, k)? == rhs;
            }
        }
        exact(ok, "1 <= k < n <= 20, exact")
    });
    r.check("finite q-binomial sum = (z;q)_n", |_| {
        let mut ok = true;
        for n in 0..=12usize {
            for sign in [1i32, -1] {
                for j in 0..=2i64 {
                    // z = sign·q^j
                    let mut lhs = LaurentPolyQ::zero();
                    for k in 0..=n as i64 {
                        let c = if k % 2 == 1 { -sign } else { 1 };
                        let e = 4 * (k * (k - 1) / 2 + j * k);
                        lhs = lhs + q_binomial_exact(n as u64, k as u64)? * LaurentPolyQ::monomial(c, e);
                    }
                    ok &= lhs == q_pochhammer_qpow_exact(sign, j, n);
                }
            }
        }
        exact(ok, "z = +-q^j, j <= 2, n <= 12, exact")
    });
    r.check("tail bound covers doubled terms and halved tolerance", |r| {
        let loose = r.ctx.clone();
        let tight = loose.with_rel_tol(loose.series_rel_tol() / 2.0)?.with_max_terms(2 * loose.max_terms())?;
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let z = r.complex(4.0);
            let a = eval_e(&z, &loose)?;
            let b = eval_e(&z, &tight)?;
            let d = Complex::with_val(64, &a.value - &b.value).abs().real().to_f64();
            let bound = a.error_bound().to_f64() + b.error_bound().to_f64();
            worst = worst.max(if d == 0.0 { 0.0 } else { d / bound });
        }
        numeric(worst, 1.0, "ratio of change to reported bound, 20 random z for E_q")
    });
}

fn functions(r: &mut Runner) {
    let tol = r.opts.tol;
    r.check("q-Euler identity E_q(iz) = C_q(z) + i q^(1/4) S_q(z)", |r| {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let z = r.complex(3.0);
            let iz = Complex::with_val(r.prec(), &z * Complex::with_val(r.prec(), (0, 1)));
            let lhs = eval_e(&iz, r.ctx)?;
            let iq = Complex::with_val(r.prec(), (Float::new(r.prec()), r.ctx.q_quarter()));
            let rhs = eval_cq(&z, r.ctx)?.add(&eval_sq(&z, r.ctx)?.scale_by(&iq));
            worst = worst.max(rel(&lhs, &rhs));
        }
        numeric(worst, tol, "20 random complex z, |z| <= 3")
    });
    r.check("q-difference relations for S_q and C_q", |r| {
        let mut worst = 0.0f64;
        let q = r.ctx.q().clone();
        for _ in 0..20 {
            let z = r.real(-3.0, 3.0);
            let qz = Float::with_val(r.prec(), &z * &q);
            let hz = Float::with_val(r.prec(), &z * r.ctx.q_half());
            let s1 = eval_sq(&z, r.ctx)?.sub(&eval_sq(&qz, r.ctx)?);
            let s2 = eval_cq(&hz, r.ctx)?.scale(&z);
            worst = worst.max(rel(&s1, &s2));
            let c1 = eval_cq(&z, r.ctx)?.sub(&eval_cq(&qz, r.ctx)?);
            let c2 = eval_sq(&hz, r.ctx)?.scale(&Float::with_val(r.prec(), &z * r.ctx.q_half())).neg();
            worst = worst.max(rel(&c1, &c2));
        }
        numeric(worst, tol, "20 random real z in [-3, 3]")
    });
    r.check("three-term q-difference equation for S_q and C_q", |r| {
        let mut worst = 0.0f64;
        let prec = r.prec();
        let q = r.ctx.q().clone();
        let q2 = Float::with_val(prec, q.square_ref());
        for _ in 0..20 {
            let z = r.real(-3.0, 3.0);
            let (qz, q2z) = (Float::with_val(prec, &z * &q), Float::with_val(prec, &z * &q2));
            let coef =
                Float::with_val(prec, &q2 * Float::with_val(prec, z.square_ref())) - Float::with_val(prec, 1 + &q);
            for sine in [true, false] {
                let u = |x: &Float| if sine { eval_sq(x, r.ctx) } else { eval_cq(x, r.ctx) };
                let lhs = u(&q2z)?.add(&u(&qz)?.scale(&coef)).add(&u(&z)?.scale(&q));
                let zero = SeriesValue::exact(Float::new(prec));
                worst = worst.max(rel(&lhs, &zero));
            }
        }
        numeric(worst, tol, "u(q^2 z) + (q^2 z^2 - 1 - q) u(qz) + q u(z), 20 random z")
    });
    r.check("addition formulas (product, sum, difference)", |r| {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let (u, v) = (r.nonzero_real(2.0), r.nonzero_real(2.0));
            let c = r.ctx;
            worst = worst.max(rel(&product_direct(&u, &v, c)?, &product_formula_rhs(&u, &v, c)?));
            worst = worst.max(rel(&trig_sum_direct(&u, &v, c)?, &trig_sum_formula(&u, &v, c)?));
            worst = worst.max(rel(&trig_diff_direct(&u, &v, c)?, &trig_diff_formula(&u, &v, c)?));
        }
        numeric(worst, tol, "20 random nonzero (u, v), |u|, |v| <= 2")
    });
    r.check("C_q(x)C_q(q^-1/2 x) + q^1/2 S_q(x)S_q(q^-1/2 x) = 1", |r| {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let x = r.real(-3.0, 3.0);
            let y = Float::with_val(r.prec(), &x / r.ctx.q_half());
            let s = eval_sq(&x, r.ctx)?.mul(&eval_sq(&y, r.ctx)?).scale(r.ctx.q_half());
            let v = eval_cq(&x, r.ctx)?.mul(&eval_cq(&y, r.ctx)?).add(&s);
            worst = worst.max(rel(&v, &SeriesValue::exact(Float::with_val(r.prec(), 1))));
        }
        numeric(worst, tol, "20 random real x in [-3, 3]")
    });
    r.check("1phi1 forms of S_q and C_q", |r| {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let z = r.complex(3.0);
            worst = worst.max(rel(&eval_sq_1phi1(&z, r.ctx)?, &eval_sq(&z, r.ctx)?));
            worst = worst.max(rel(&eval_cq_1phi1(&z, r.ctx)?, &eval_cq(&z, r.ctx)?));
        }
        numeric(worst, tol, "10 random complex z, |z| <= 3")
    });
    r.check("Hahn-Exton q-Bessel forms of S_q and C_q", |r| {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let x = r.real(0.05, 4.0);
            worst = worst.max(rel(&sq_via_bessel(&x, r.ctx)?, &eval_sq(&x, r.ctx)?));
            worst = worst.max(rel(&cq_via_bessel(&x, r.ctx)?, &eval_cq(&x, r.ctx)?));
        }
        numeric(worst, tol, "10 random x in (0, 4)")
    });
    r.check("|E_q(x)|^2 three paths", |r| {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let x = r.real(-3.0, 3.0);
            let a = abs_e_sq(&x, r.ctx)?;
            worst = worst.max(rel(&abs_e_sq_trig(&x, r.ctx)?, &a));
            worst = worst.max(rel(&abs_e_sq_complex(&x, r.ctx)?, &a));
        }
        numeric(worst, tol, "10 random real x in [-3, 3]")
    });
}

/// Determinant of the unit-diagonal tridiagonal matrix with off-diagonals `x_k` by elimination.
fn det_tridiagonal(x: &[Float], prec: u32) -> Float {
    let n = x.len();
    let mut m = vec![vec![Float::new(prec); n]; n];
    for i in 0..n {
        m[i][i] = Float::with_val(prec, 1);
        if i + 1 < n {
            m[i][i + 1] = x[i].clone();
            m[i + 1][i] = x[i + 1].clone();
        }
    }
    let mut det = Float::with_val(prec, 1);
    for c in 0..n {
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            let factor = Float::with_val(prec, &m[r][c] / &pivot);
            for k in c..n {
                let t = Float::with_val(prec, &factor * &m[c][k]);
                m[r][k] -= t;
            }
        }
    }
    det
}

fn polynomials(r: &mut Runner) {
    let tol = r.opts.tol;
    r.check("explicit sums equal recurrences for phi_n and T_n", |_| {
        let ok = (0..=25usize).all(|n| {
            [Base::Q, Base::QInverse].into_iter().all(|b| {
                fib_poly(n, b) == fib_poly_recurrence(n, b) && t_poly(n as i64, b) == t_poly_recurrence(n as i64, b)
            })
        });
        exact(ok, "n <= 25, both bases, exact")
    });
    r.check("monic relation q^(-n(n-1)/4) P_n = T_n(.; q^-1)", |_| {
        exact((0..=15i64).all(|n| p_monic(n) == t_poly(n, Base::QInverse)), "n <= 15, exact")
    });
    r.check("base-inversion symmetry of phi_n", |_| exact((0..=12).all(symmetry_check), "n <= 12, exact"));
    r.check("substitution round trip", |_| {
        let ok = (0..=10i64)
            .all(|n| [-3, 1, 2, 7].into_iter().all(|a| p_poly(n).subst_x_scale(a).subst_x_scale(-a) == p_poly(n)));
        exact(ok, "P_n, n <= 10, scales q^(a/4), exact")
    });
    r.check("F recurrence matches tridiagonal determinant", |r| {
        let mut worst = 0.0f64;
        for n in 0..=8usize {
            let x: Vec<Float> = (0..n).map(|_| r.real(-1.0, 1.0)).collect();
            let a = frak_f(&x, r.prec());
            let b = det_tridiagonal(&x, r.prec());
            worst = worst.max(Float::with_val(64, &a - &b).abs().to_f64() / b.to_f64().abs().max(1.0));
        }
        numeric(worst, tol, "random entries in [-1, 1], n <= 8")
    });
    let xs: Vec<Float> = (0..2).map(|_| r.real(0.2, 2.0)).collect();
    for rel in FiveTerm::ALL {
        r.check(&format!("five-term relation {}", rel.name()), |r| {
            let mut worst = 0.0f64;
            for x in &xs {
                for n in 0..=10 {
                    worst = worst.max(five_term_check(rel, n, x, r.ctx)?.value);
                }
            }
            numeric(worst, tol, "n <= 10, 2 random x in (0.2, 2)")
        });
    }
    r.check("Wronskian and hyperbolic representations", |r| {
        let mut worst = 0.0f64;
        for x in &xs {
            for n in 0..=8 {
                worst = worst.max(wronskian_repr_check(n, x, r.ctx)?.value);
                let (a, b) = hyperbolic_repr_check(n, x, r.ctx)?;
                worst = worst.max(a.value).max(b.value);
            }
        }
        numeric(worst, tol, "n <= 8")
    });
    r.check("terminating 3phi3 forms", |r| {
        let mut worst = 0.0f64;
        for x in &xs {
            for n in 0..=6 {
                let (a, b) = terminating_3phi3_check(n, x, r.ctx)?;
                worst = worst.max(a.value).max(b.value);
            }
        }
        numeric(worst, tol, "n <= 6")
    });
    r.check("generating function vs 2phi2", |r| {
        let (x, s) = (r.real(0.5, 1.5), r.real(0.1, 0.7));
        let v = generating_function_check(&x, &s, 60, r.ctx)?.value;
        numeric(v, tol, format!("x = {:.4}, s = {:.4}, 60 terms", x.to_f64(), s.to_f64()))
    });
    r.check("Chen-Ismail generating function", |r| {
        let (x, t) = (r.real(0.5, 1.5), r.real(0.1, 0.6));
        let v = chen_ismail_check(&x, &t, 200, r.ctx)?.value;
        numeric(v, tol, format!("x = {:.4}, t = {:.4}, 200 terms", x.to_f64(), t.to_f64()))
    });
    r.check("limit relations", |r| {
        // The limits converge like q^n with constants up to about 1e3; the exact
        // polynomials make n beyond 80 expensive.
        let n = ((tol * 1e-3).ln() / r.ctx.q().to_f64().ln()).ceil().clamp(1.0, 80.0) as usize;
        let mut worst = 0.0f64;
        for kind in LimitKind::ALL {
            worst = worst.max(limit_check(kind, &xs[0], n, r.ctx)?.value);
        }
        numeric(worst, tol, format!("all four limits at n = {n}, x = {:.4}", xs[0].to_f64()))
    });
    r.check("indeterminacy sums increase to the closed form", |r| {
        let sums = indeterminacy_partial_sums(40, r.ctx);
        let increasing = sums.windows(2).all(|w| w[1] >= w[0]);
        let q = r.ctx.q().to_f64();
        let bounded = sums.last().is_some_and(|s| s.to_f64() <= (1.0 + q) / (1.0 - q) + 1.0);
        let mut worst = 0.0f64;
        for (n, s) in sums.iter().enumerate() {
            worst = worst.max(Float::with_val(64, s - indeterminacy_closed_form(n, r.ctx)).abs().to_f64());
        }
        if !(increasing && bounded) {
            return numeric(f64::INFINITY, tol, "partial sums not increasing or not bounded");
        }
        numeric(worst, tol, "N < 40, increasing and bounded")
    });
}

fn cassini(r: &mut Runner) {
    r.check("q-Euler-Cassini identity", |_| {
        let mut pairs = 0;
        let mut bad = Vec::new();
        for m in 0..=10 {
            for n in 0..=m {
                if !cassini_check(m, n)? {
                    bad.push(format!("({m},{n})"));
                }
                pairs += 1;
            }
        }
        if bad.is_empty() {
            exact(true, format!("exact, {pairs} (m,n) pairs"))
        } else {
            exact(false, format!("fails at {}", bad.join(" ")))
        }
    });
}

fn nevanlinna(r: &mut Runner) {
    let tol = r.opts.tol;
    r.check("AD - BC = 1", |r| {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let z = r.complex(3.0);
            let det = eval_abcd(&z, r.ctx)?.determinant();
            worst = worst.max(rel(&det, &SeriesValue::exact(Complex::with_val(r.prec(), 1))));
        }
        numeric(worst, tol, "20 random complex z, |z| <= 3")
    });
    r.check("kernel closed form vs partial sum and (B(u)D(v) - D(u)B(v))/(u - v)", |r| {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let (u, v) = (r.nonzero_real(2.0), r.nonzero_real(2.0));
            if u == v {
                continue;
            }
            let k = kernel(&u, &v, r.ctx)?;
            worst = worst.max(rel(&kernel_partial_sum(&u, &v, 200, r.ctx), &k));
            worst = worst.max(rel(&kernel_bd(&u, &v, r.ctx)?, &k));
        }
        numeric(worst, tol, "10 random (u, v) in [-2, 2]^2, 200 terms")
    });
    r.check("kernel diagonal vs partial sum", |r| {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let u = r.real(-2.0, 2.0);
            worst = worst.max(rel(&kernel_partial_sum(&u, &u, 200, r.ctx), &kernel_diag(&u, r.ctx)?));
        }
        numeric(worst, tol, "10 random u in [-2, 2]")
    });
    r.check("ABCD approximants approach ABCD", |r| {
        let z = Float::with_val(r.prec(), 1);
        let d = eval_d(&z, r.ctx)?;
        let mut errs = Vec::new();
        for n in [20, 40, 80] {
            errs.push(approx_abcd(n, &z, r.ctx)?.d.sub(&d).magnitude().to_f64());
        }
        let ok = errs.windows(2).all(|w| w[1] < w[0]);
        exact(ok, format!("|D_n(1) - D(1)| at n = 20, 40, 80: {:.3e}, {:.3e}, {:.3e}", errs[0], errs[1], errs[2]))
    });
    r.check("f_u series vs 3phi3 form", |r| {
        let mut worst = 0.0f64;
        let s1 = first_sine_zero(r.ctx)?;
        for _ in 0..10 {
            let frac = r.rng.gen_range(0.0..1.0);
            let u = Float::with_val(r.prec(), &s1 * frac);
            let z = r.real(-4.0, 4.0);
            worst = worst.max(rel(&f_u_3phi3(&z, &u, r.ctx)?, &f_u(&z, &u, r.ctx)?));
        }
        numeric(worst, tol, "10 random u in [0, s1), z in [-4, 4]")
    });
    r.check("absolutely continuous density three paths", |r| {
        let spec = ACMeasureSpec::symmetric(r.ctx);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let x = r.real(-4.0, 4.0);
            let a = ac_density(&x, &spec, r.ctx)?;
            worst = worst.max(rel(&ac_density_exponential(&x, r.ctx)?, &a));
            worst = worst.max(rel(&ac_density_2phi2(&x, r.ctx)?, &a));
        }
        numeric(worst, tol, "beta = 0, gamma = q^(1/4), 10 random x in [-4, 4]")
    });
}

fn build(r: &Runner, p: &MeasureParam) -> Result<DiscreteMeasure> {
    match p {
        MeasureParam::T(TParam::Finite(t)) if t.is_zero() => sine_measure(r.opts.count, r.ctx),
        MeasureParam::T(TParam::Infinity) => cosine_measure(r.opts.count, r.ctx),
        _ => build_measure(p, r.opts.count, r.ctx),
    }
}

fn param_name(p: &MeasureParam) -> String {
    match p {
        MeasureParam::U(u) => format!("u = {}", u.to_f64()),
        MeasureParam::T(t) => format!("t = {t}"),
    }
}

fn orthogonality(r: &mut Runner) {
    let tol = r.opts.tol;
    let p = match &r.opts.measure {
        VerifyMeasure::Ac(spec) => {
            let spec = spec.clone();
            // Double-exponential quadrature in f64 limits the attainable residual.
            let t = tol.max(1e-6);
            r.check("absolutely continuous measure orthogonality", move |r| {
                let m = verify_ac_orthogonality(&spec, 4, t / 10.0, r.ctx)?;
                numeric(
                    m.max(),
                    t,
                    format!("beta = {}, gamma = {}, n, m <= 4", spec.beta.to_f64(), spec.gamma.to_f64()),
                )
            });
            return;
        }
        VerifyMeasure::Discrete(p) => p.clone(),
    };
    let measure = match build(r, &p) {
        Ok(m) => m,
        Err(e) => {
            r.check("measure construction", |_| Err(e));
            return;
        }
    };
    let name = param_name(&p);
    r.check("orthogonality of P_n", |r| {
        let m = verify_orthogonality(&measure, 8, tol / 10.0, r.ctx)?;
        numeric(m.max(), tol, format!("{name}, {} support points, n, m <= 8", measure.len()))
    });
    r.check("residual matrix symmetric", |r| {
        let m = verify_orthogonality(&measure, 8, tol / 10.0, r.ctx)?;
        let n = m.residuals.len();
        let ok = (0..n).all(|i| (0..n).all(|j| m.residuals[i][j] == m.residuals[j][i]));
        exact(ok, "n, m <= 8")
    });
    r.check("masses positive", |_| exact(measure.masses.iter().all(|m| *m > 0), format!("{} masses", measure.len())));
    let symmetric = match &p {
        MeasureParam::U(u) => u.is_zero(),
        MeasureParam::T(t) => t.is_zero() || *t == TParam::Infinity,
    };
    if symmetric {
        r.check("support symmetric", |_| {
            let s = &measure.support;
            let ok = s.iter().zip(s.iter().rev()).all(|(a, b)| Float::with_val(a.prec(), a + b).is_zero());
            exact(ok, format!("{} points", s.len()))
        });
    }
    r.check("masses match 1/(B'D - BD')", |r| {
        let mut worst = 0.0f64;
        let n = measure.len();
        for i in [0, n / 4, n / 2, 3 * n / 4, n - 1] {
            let rho = rho_via_bd(&measure.support[i], r.ctx)?;
            let m = &measure.masses[i];
            worst = worst.max(Float::with_val(64, &rho.value - m).abs().to_f64() / m.to_f64());
        }
        numeric(worst, tol, "relative, 5 support points")
    });
}

fn moments(r: &mut Runner) {
    let tol = r.opts.tol;
    r.check("oracle m2 = 1, m4 = 1 + 1/q, odd moments 0", |_| {
        let m = JacobiOperator::new(8).moments(12)?;
        let mut ok = m[2] == LaurentPolyQ::one() && m[4] == LaurentPolyQ::from_terms(&[(0, 1), (-4, 1)]);
        ok &= m.iter().skip(1).step_by(2).all(|x| *x == LaurentPolyQ::zero());
        exact(ok, "Jacobi operator, exact")
    });
    let VerifyMeasure::Discrete(p) = r.opts.measure.clone() else {
        r.check("absolutely continuous moments match the oracle", |r| {
            let VerifyMeasure::Ac(spec) = &r.opts.measure else { unreachable!() };
            let t = tol.max(1e-6);
            let m = ac_moments(spec, 8, t / 10.0, r.ctx)?;
            let oracle = JacobiOperator::new(8).moments_numeric(8, r.ctx)?;
            let worst = m
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b.to_f64()).abs() / b.to_f64().abs().max(1.0))
                .fold(0.0, f64::max);
            numeric(worst, t, "k <= 8, relative")
        });
        return;
    };
    r.check("measure moments match the oracle", |r| {
        let measure = build(r, &p)?;
        let m = measure_moments(&measure, 12, tol / 10.0, r.ctx)?;
        let oracle = JacobiOperator::new(8).moments_numeric(12, r.ctx)?;
        let mut worst = 0.0f64;
        for (a, b) in m.iter().zip(&oracle) {
            worst = worst.max(Float::with_val(64, a - b).abs().to_f64() / b.to_f64().abs().max(1.0));
        }
        numeric(worst, tol, format!("{}, k <= 12, relative", param_name(&p)))
    });
}

fn aq(r: &mut Runner) {
    // Thirty nodes bound the attainable accuracy near 1e-9.
    let t = r.opts.tol.max(1e-8);
    r.check("A_q orthogonality", |r| {
        let m = aq_orthogonality_check(5, 30, r.ctx)?;
        numeric(m.max(), t, "n, m <= 5, 30 zeros of A_q")
    });
    r.check("A_q Stieltjes transform", |r| {
        let mut worst = 0.0f64;
        for z in [(0.1, 0.0), (0.0, 0.25)] {
            worst = worst.max(aq_stieltjes_check(&Complex::with_val(r.prec(), z), 30, r.ctx)?);
        }
        let z = r.complex(0.3);
        worst = worst.max(aq_stieltjes_check(&z, 30, r.ctx)?);
        numeric(worst, t, "z = 0.1, 0.25i and one random |z| <= 0.3, 30 zeros")
    });
}
