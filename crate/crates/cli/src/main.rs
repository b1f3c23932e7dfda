//! `qmoment`: evaluation, polynomials, zero tables, measures and verification suites.

mod literal;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmoment::exact::XPolyExact;
use qmoment::nevanlinna::*;
use qmoment::qcore::{eval_phi, HypergeometricSpec, Scalar, SeriesValue};
use qmoment::qfunctions::*;
use qmoment::qpolynomials::{eval_exact, fib_poly, p_poly, q_poly, t_poly, Base};
use qmoment::rootfinder::find_zeros;
use qmoment::verify::{self, Suite, VerifyMeasure, VerifyOptions};
use qmoment::{Execution, QContext, QError};
use rug::{Complex, Float};
use serde_json::{json, Value};

use literal::{parse_complex, parse_list, parse_t};
use render::{Output, Row};

#[derive(Parser)]
#[command(name = "qmoment", version, about = "q-special functions, q^-1-Fibonacci polynomials and N-extremal measures")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Base q, a decimal in (0, 1).
    #[arg(long, global = true, default_value = "0.5")]
    q: String,
    #[arg(long, global = true, default_value_t = 256)]
    precision_bits: u32,
    /// Verification and truncation tolerance.
    #[arg(long, global = true, default_value = "1e-10")]
    tol: String,
    #[arg(long, global = true, default_value_t = qmoment::qcore::DEFAULT_MAX_TERMS)]
    max_terms: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized verification grids.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads, or "auto". QMOMENT_THREADS takes precedence.
    #[arg(long, global = true, default_value = "auto")]
    threads: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function at complex literals such as 1.5, 0.3+1.2i or 0-2i.
    #[command(allow_negative_numbers = true)]
    Eval {
        /// Eq, EqAlpha, Sq, Cq, Shq, Chq, Aq, kernel, kernel_diag, f_u, ABCD, ac_density, phi_rs
        function: String,
        args: Vec<String>,
        /// Exponent for EqAlpha.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[command(flatten)]
        ac: AcArgs,
        /// Upper parameters of phi_rs, comma separated.
        #[arg(long, default_value = "")]
        upper: String,
        /// Lower parameters of phi_rs, comma separated.
        #[arg(long, default_value = "")]
        lower: String,
    },
    /// Exact coefficients or a numeric value of a polynomial.
    #[command(allow_negative_numbers = true)]
    Poly {
        family: Family,
        n: i64,
        #[arg(long, conflicts_with = "at")]
        exact: bool,
        /// Evaluate at this complex literal.
        #[arg(long)]
        at: Option<String>,
    },
    /// Certified zero table.
    #[command(allow_negative_numbers = true)]
    Zeros {
        /// Eq, EqAlpha, Sq, Cq, Aq, f_u (with --u) or BtD (with --t)
        function: String,
        count: usize,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        t: Option<String>,
    },
    /// N-extremal measure, or samples of an absolutely continuous density.
    #[command(allow_negative_numbers = true)]
    Measure {
        #[command(flatten)]
        param: MeasureArgs,
        #[arg(long, default_value_t = 40)]
        count: usize,
        /// Half-width of the sampling window for densities.
        #[arg(long, default_value_t = 8.0)]
        range: f64,
    },
    /// Reproducing kernel K(u, v) by its three paths.
    #[command(allow_negative_numbers = true)]
    Kernel {
        u: String,
        v: String,
        #[arg(long, default_value_t = 200)]
        terms: usize,
    },
    /// Moments from the Jacobi operator, or of a measure against it.
    #[command(allow_negative_numbers = true)]
    Moments {
        k_max: usize,
        #[command(flatten)]
        param: MeasureArgs,
        #[arg(long, default_value_t = 40)]
        count: usize,
    },
    /// Run verification suites and report residuals against tolerances.
    #[command(allow_negative_numbers = true)]
    Verify {
        /// series, functions, polynomials, cassini, nevanlinna, orthogonality, moments, aq, all
        suite: String,
        #[command(flatten)]
        param: MeasureArgs,
        #[arg(long, default_value_t = 40)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Phi,
    PhiInv,
    #[value(name = "T")]
    T,
    #[value(name = "P")]
    P,
    #[value(name = "Q")]
    Q,
}

#[derive(Args, Clone, Default)]
struct AcArgs {
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
}

#[derive(Args, Clone, Default)]
#[group(multiple = true)]
struct MeasureArgs {
    /// Parameter u in [0, s1).
    #[arg(long, conflicts_with_all = ["t", "sine", "cosine", "beta", "gamma"])]
    u: Option<String>,
    /// Parameter t, a real number or "inf".
    #[arg(long, conflicts_with_all = ["sine", "cosine", "beta", "gamma"])]
    t: Option<String>,
    #[arg(long, conflicts_with_all = ["cosine", "beta", "gamma"])]
    sine: bool,
    #[arg(long, conflicts_with_all = ["beta", "gamma"])]
    cosine: bool,
    #[arg(long, requires = "gamma")]
    beta: Option<String>,
    #[arg(long, requires = "beta")]
    gamma: Option<String>,
}

enum CliError {
    Usage(String),
    Lib(QError),
    /// Verification ran but some checks failed; the report is already printed.
    Failed {
        domain: bool,
    },
}

impl From<QError> for CliError {
    fn from(e: QError) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn threads(flag: &str) -> CliResult<Option<usize>> {
    let env = std::env::var("QMOMENT_THREADS").ok();
    let raw = env.as_deref().unwrap_or(flag).trim();
    if raw.eq_ignore_ascii_case("auto") {
        return Ok(None);
    }
    match raw.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Some(n)),
        _ => Err(usage(format!("threads must be a positive integer or auto, got {raw:?}"))),
    }
}

fn context(cfg: &RunConfig) -> CliResult<QContext> {
    let exec = match threads(&cfg.threads)? {
        Some(1) => Execution::Sequential,
        Some(n) => {
            // A second initialization in the same process is harmless.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Execution::Parallel
        }
        None => Execution::default(),
    };
    Ok(QContext::builder(&cfg.q).precision_bits(cfg.precision_bits).max_terms(cfg.max_terms).execution(exec).build()?)
}

fn tolerance(cfg: &RunConfig) -> CliResult<f64> {
    match cfg.tol.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(usage(format!("--tol must be a positive number, got {:?}", cfg.tol))),
    }
}

fn real(s: &str, ctx: &QContext) -> CliResult<Float> {
    let z = parse_complex(s, ctx.prec()).map_err(usage)?;
    if !z.imag().is_zero() {
        return Err(usage(format!("{s:?} must be real")));
    }
    Ok(z.real().clone())
}

fn ac_spec(beta: &str, gamma: &str, ctx: &QContext) -> CliResult<ACMeasureSpec> {
    Ok(ACMeasureSpec::new(real(beta, ctx)?, real(gamma, ctx)?)?)
}

enum Selected {
    Discrete(MeasureParam),
    Ac(ACMeasureSpec),
    None,
}

fn select(m: &MeasureArgs, ctx: &QContext) -> CliResult<Selected> {
    Ok(if let Some(u) = &m.u {
        Selected::Discrete(MeasureParam::U(real(u, ctx)?))
    } else if let Some(t) = &m.t {
        Selected::Discrete(MeasureParam::T(parse_t(t, ctx.prec()).map_err(usage)?))
    } else if m.sine {
        Selected::Discrete(MeasureParam::T(TParam::Finite(Float::new(ctx.prec()))))
    } else if m.cosine {
        Selected::Discrete(MeasureParam::T(TParam::Infinity))
    } else if let (Some(b), Some(g)) = (&m.beta, &m.gamma) {
        Selected::Ac(ac_spec(b, g, ctx)?)
    } else {
        Selected::None
    })
}

fn discrete(p: &MeasureParam, count: usize, ctx: &QContext) -> qmoment::Result<DiscreteMeasure> {
    match p {
        MeasureParam::T(t) if t.is_zero() => sine_measure(count, ctx),
        MeasureParam::T(TParam::Infinity) => cosine_measure(count, ctx),
        _ => build_measure(p, count, ctx),
    }
}

/// `K(u, v)` through the closed form, its diagonal, or `(B(u)D(v) − D(u)B(v))/(u − v)`
/// where the closed form has a removable singularity at `uv = 0`.
fn kernel_any<T: Scalar + PartialEq>(u: &T, v: &T, ctx: &QContext) -> qmoment::Result<SeriesValue<T>> {
    if u == v {
        kernel_diag(u, ctx)
    } else if u.is_zero() || v.is_zero() {
        kernel_bd(u, v, ctx)
    } else {
        kernel(u, v, ctx)
    }
}

/// Values of a function evaluated on real or complex arguments.
fn eval_with<T: Scalar + PartialEq + render::Render>(
    function: &str,
    args: &[T],
    alpha: f64,
    ctx: &QContext,
) -> CliResult<Vec<(String, SeriesValue<T>)>> {
    let want = |n: usize| -> CliResult<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(usage(format!("{function} takes {n} argument(s), got {}", args.len())))
        }
    };
    let one = |v: SeriesValue<T>| vec![("value".to_string(), v)];
    Ok(match function {
        "Eq" => {
            want(1)?;
            one(eval_e(&args[0], ctx)?)
        }
        "EqAlpha" => {
            want(1)?;
            one(eval_eq_alpha(alpha, &args[0], ctx)?)
        }
        "Sq" => {
            want(1)?;
            one(eval_sq(&args[0], ctx)?)
        }
        "Cq" => {
            want(1)?;
            one(eval_cq(&args[0], ctx)?)
        }
        "Shq" => {
            want(1)?;
            one(eval_shq(&args[0], ctx)?)
        }
        "Chq" => {
            want(1)?;
            one(eval_chq(&args[0], ctx)?)
        }
        "Aq" => {
            want(1)?;
            one(eval_aq(&args[0], ctx)?)
        }
        "kernel" => {
            want(2)?;
            one(kernel_any(&args[0], &args[1], ctx)?)
        }
        "kernel_diag" => {
            want(1)?;
            one(kernel_diag(&args[0], ctx)?)
        }
        "ABCD" => {
            want(1)?;
            let m = eval_abcd(&args[0], ctx)?;
            vec![("A".into(), m.a), ("B".into(), m.b), ("C".into(), m.c), ("D".into(), m.d)]
        }
        _ => return Err(usage(format!("unknown function {function:?}"))),
    })
}

fn rows<T: render::Render>(values: Vec<(String, SeriesValue<T>)>, digits: usize) -> Vec<Row> {
    values.into_iter().map(|(name, v)| Row::new(name, &v, digits)).collect()
}

fn cmd_eval(
    function: &str,
    args: &[String],
    alpha: f64,
    ac: &AcArgs,
    upper: &str,
    lower: &str,
    ctx: &QContext,
) -> CliResult<Output> {
    let prec = ctx.prec();
    let digits = ctx.output_digits();
    let z: Vec<Complex> = args.iter().map(|a| parse_complex(a, prec)).collect::<Result<_, _>>().map_err(usage)?;
    let all_real = z.iter().all(|c| c.imag().is_zero());
    let reals = || -> CliResult<Vec<Float>> { args.iter().map(|a| real(a, ctx)).collect() };
    let rows = match function {
        "f_u" => {
            let x = reals()?;
            if x.len() != 2 {
                return Err(usage("f_u takes 2 arguments: z u"));
            }
            rows(vec![("value".into(), f_u(&x[0], &x[1], ctx)?)], digits)
        }
        "ac_density" => {
            let x = reals()?;
            if x.len() != 1 {
                return Err(usage("ac_density takes 1 argument"));
            }
            let spec = match (&ac.beta, &ac.gamma) {
                (None, None) => ACMeasureSpec::symmetric(ctx),
                (Some(b), Some(g)) => ac_spec(b, g, ctx)?,
                _ => return Err(usage("--beta and --gamma go together")),
            };
            rows(vec![("value".into(), ac_density(&x[0], &spec, ctx)?)], digits)
        }
        "phi_rs" => {
            if z.len() != 1 {
                return Err(usage("phi_rs takes 1 argument, the series variable"));
            }
            let up = parse_list(upper, prec).map_err(usage)?;
            let lo = parse_list(lower, prec).map_err(usage)?;
            let spec = HypergeometricSpec::new(up, lo, z[0].clone());
            rows(vec![("value".into(), eval_phi(&spec, ctx)?)], digits)
        }
        _ if all_real => {
            let x: Vec<Float> = z.iter().map(|c| c.real().clone()).collect();
            rows(eval_with(function, &x, alpha, ctx)?, digits)
        }
        _ => rows(eval_with(function, &z, alpha, ctx)?, digits),
    };
    let mut head = json!({ "function": function, "q": render::decimal(ctx.q(), digits), "args": args });
    if function == "EqAlpha" {
        head["alpha"] = json!(alpha);
    }
    Ok(Output::Values { head, rows })
}

fn cmd_poly(family: Family, n: i64, at: Option<&str>, ctx: &QContext) -> CliResult<Output> {
    let need_nonneg =
        || -> CliResult<usize> { usize::try_from(n).map_err(|_| usage(format!("index must be >= 0, got {n}"))) };
    let (name, p): (&str, XPolyExact) = match family {
        Family::Phi => ("phi", fib_poly(need_nonneg()?, Base::Q)),
        Family::PhiInv => ("phi_inv", fib_poly(need_nonneg()?, Base::QInverse)),
        Family::T => ("T", t_poly(n, Base::Q)),
        Family::P => ("P", p_poly(need_nonneg()? as i64)),
        Family::Q => ("Q", q_poly(need_nonneg()?)),
    };
    let digits = ctx.output_digits();
    match at {
        None => Ok(Output::Poly { family: name.into(), n, poly: p }),
        Some(x) => {
            let z = parse_complex(x, ctx.prec()).map_err(usage)?;
            let rows = if z.imag().is_zero() {
                rows(vec![("value".into(), eval_exact(&p, z.real(), ctx))], digits)
            } else {
                rows(vec![("value".into(), eval_exact(&p, &z, ctx))], digits)
            };
            let head = json!({ "family": name, "n": n, "q": render::decimal(ctx.q(), digits), "at": x });
            Ok(Output::Values { head, rows })
        }
    }
}

fn function_id(
    name: &str,
    alpha: f64,
    u: Option<&str>,
    t: Option<&str>,
    ctx: &QContext,
) -> CliResult<EntireFunctionId> {
    let id = match name {
        "Eq" => EntireFunctionId::Eq,
        "EqAlpha" => EntireFunctionId::EqAlpha(alpha),
        "Sq" => EntireFunctionId::Sq,
        "Cq" => EntireFunctionId::Cq,
        "Shq" => EntireFunctionId::Shq,
        "Chq" => EntireFunctionId::Chq,
        "Aq" => EntireFunctionId::Aq,
        "f_u" => EntireFunctionId::Fu(real(u.ok_or_else(|| usage("f_u needs --u"))?, ctx)?),
        "BtD" => {
            EntireFunctionId::BtMinusD(parse_t(t.ok_or_else(|| usage("BtD needs --t"))?, ctx.prec()).map_err(usage)?)
        }
        _ => return Err(usage(format!("unknown function {name:?}"))),
    };
    Ok(id)
}

fn cmd_measure(param: &MeasureArgs, count: usize, range: f64, ctx: &QContext) -> CliResult<Output> {
    let digits = ctx.output_digits();
    match select(param, ctx)? {
        Selected::Discrete(p) => Ok(Output::Measure(discrete(&p, count, ctx)?)),
        Selected::Ac(spec) => {
            if count < 2 || !(range > 0.0) {
                return Err(usage("density sampling needs --count >= 2 and --range > 0"));
            }
            let mut samples = Vec::with_capacity(count);
            for k in 0..count {
                let x = Float::with_val(ctx.prec(), -range + 2.0 * range * k as f64 / (count - 1) as f64);
                let w = ac_density(&x, &spec, ctx)?;
                samples.push((render::decimal(&x, digits), render::decimal(&w.value, digits)));
            }
            let head = json!({
                "q": render::decimal(ctx.q(), digits),
                "beta": render::decimal(&spec.beta, digits),
                "gamma": render::decimal(&spec.gamma, digits),
                "closed_form": has_closed_form(&spec, ctx),
            });
            Ok(Output::Density { head, samples })
        }
        Selected::None => Err(usage("choose one of --u, --t, --sine, --cosine or --beta with --gamma")),
    }
}

fn cmd_kernel(u: &str, v: &str, terms: usize, ctx: &QContext) -> CliResult<Output> {
    let digits = ctx.output_digits();
    let (a, b) = (real(u, ctx)?, real(v, ctx)?);
    let partial = kernel_partial_sum(&a, &b, terms, ctx);
    let mut values = vec![("closed_form".to_string(), kernel_any(&a, &b, ctx)?)];
    values.push((format!("partial_sum_{terms}"), partial));
    if a != b {
        values.push(("bd_quotient".into(), kernel_bd(&a, &b, ctx)?));
    }
    let head = json!({ "q": render::decimal(ctx.q(), digits), "u": u, "v": v });
    Ok(Output::Values { head, rows: rows(values, digits) })
}

fn cmd_moments(k_max: usize, param: &MeasureArgs, count: usize, tol: f64, ctx: &QContext) -> CliResult<Output> {
    let digits = ctx.output_digits();
    let jacobi = JacobiOperator::new(k_max.div_ceil(2) + 1);
    let exact = jacobi.moments(k_max)?;
    let oracle = jacobi.moments_numeric(k_max, ctx)?;
    let (source, measured): (Value, Option<Vec<String>>) = match select(param, ctx)? {
        Selected::None => (json!("jacobi"), None),
        Selected::Discrete(p) => {
            let m = discrete(&p, count, ctx)?;
            let mk = measure_moments(&m, k_max, tol, ctx)?;
            (
                json!({ "measure": m.to_json(digits)["param"].clone(), "support_points": m.len() }),
                Some(mk.iter().map(|x| render::decimal(x, digits)).collect()),
            )
        }
        Selected::Ac(spec) => {
            let mk = ac_moments(&spec, k_max, tol, ctx)?;
            let src =
                json!({ "beta": render::decimal(&spec.beta, digits), "gamma": render::decimal(&spec.gamma, digits) });
            (src, Some(mk.iter().map(|x| format!("{x:.15e}")).collect()))
        }
    };
    let moments = (0..=k_max)
        .map(|k| {
            (k, exact[k].to_string(), render::decimal(&oracle[k], digits), measured.as_ref().map(|m| m[k].clone()))
        })
        .collect();
    Ok(Output::Moments { head: json!({ "q": render::decimal(ctx.q(), digits), "source": source }), moments })
}

fn cmd_verify(
    suite: &str,
    param: &MeasureArgs,
    count: usize,
    cfg: &RunConfig,
    ctx: &QContext,
) -> CliResult<(Output, bool, bool)> {
    let suite: Suite = suite.parse().map_err(|e: QError| usage(e.to_string()))?;
    let mut opts = VerifyOptions { seed: cfg.seed, tol: tolerance(cfg)?, count, ..VerifyOptions::default() };
    match select(param, ctx)? {
        Selected::Discrete(p) => opts.measure = VerifyMeasure::Discrete(p),
        Selected::Ac(spec) => opts.measure = VerifyMeasure::Ac(spec),
        Selected::None => {}
    }
    let report = verify::run(suite, &opts, ctx);
    let passed = report.passed();
    let domain = report.errors().any(|e| !e.is_numerical());
    let failed = report.checks.iter().filter(|c| c.status != verify::Status::Pass).count();
    eprintln!(
        "verify {suite}: {} ({} checks, {failed} not passing, seed {})",
        if passed { "PASS" } else { "FAIL" },
        report.checks.len(),
        report.seed
    );
    Ok((Output::Report(report), passed, domain))
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = &cli.config;
    let ctx = context(cfg)?;
    let tol = tolerance(cfg)?;
    let digits = ctx.output_digits();
    let mut verdict = Ok(());
    let out = match &cli.command {
        Command::Eval { function, args, alpha, ac, upper, lower } => {
            cmd_eval(function, args, *alpha, ac, upper, lower, &ctx)?
        }
        Command::Poly { family, n, exact: _, at } => cmd_poly(*family, *n, at.as_deref(), &ctx)?,
        Command::Zeros { function, count, alpha, u, t } => {
            let id = function_id(function, *alpha, u.as_deref(), t.as_deref(), &ctx)?;
            Output::Zeros(find_zeros(&id, *count, &ctx)?)
        }
        Command::Measure { param, count, range } => cmd_measure(param, *count, *range, &ctx)?,
        Command::Kernel { u, v, terms } => cmd_kernel(u, v, *terms, &ctx)?,
        Command::Moments { k_max, param, count } => cmd_moments(*k_max, param, *count, tol, &ctx)?,
        Command::Verify { suite, param, count } => {
            let (out, passed, domain) = cmd_verify(suite, param, *count, cfg, &ctx)?;
            if !passed {
                verdict = Err(CliError::Failed { domain });
            }
            out
        }
    };
    let text = match cfg.format {
        Format::Json => out.json(digits),
        Format::Csv => out.csv(digits),
    };
    print!("{text}");
    verdict
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 4 } else { 3 })
        }
        Err(CliError::Failed { domain }) => ExitCode::from(if domain { 3 } else { 4 }),
    }
}
