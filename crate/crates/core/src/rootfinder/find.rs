//! Grid scan with certified signs followed by bisection.

use rug::Float;

use super::table::{Bracket, Zero, ZeroTable};
use crate::error::{QError, Result};
use crate::par;
use crate::qcore::{QContext, SeriesValue};
use crate::qfunctions::{fu_constants, fu_real_with, EntireFunctionId, Parity};

const GRID_START: f64 = 0.1;
const GRID_BATCH: usize = 32;
const MAX_GRID_POINTS: usize = 200_000;
const OVERSAMPLE: usize = 8;

/// A real function ready for repeated evaluation.
pub(crate) struct Prepared {
    id: EntireFunctionId,
    fu: Option<(SeriesValue<Float>, SeriesValue<Float>)>,
}

impl Prepared {
    pub fn new(id: &EntireFunctionId, ctx: &QContext) -> Result<Self> {
        id.validate()?;
        let fu = match id {
            EntireFunctionId::Fu(u) => Some(fu_constants(u, ctx)?),
            _ => None,
        };
        Ok(Prepared { id: id.clone(), fu })
    }

    pub fn eval(&self, x: &Float, ctx: &QContext, bits: u32) -> Result<SeriesValue<Float>> {
        match &self.fu {
            Some((cu, su)) => fu_real_with(x, cu, su, ctx, bits),
            None => self.id.eval_real(x, ctx, bits),
        }
    }

    /// Certified sign, raising the accuracy when the first attempt is inconclusive.
    /// `Ok(None)` when even the highest accuracy cannot decide.
    pub fn sign(&self, x: &Float, ctx: &QContext) -> Result<Option<(i8, Float)>> {
        let mut bits = ctx.prec();
        for _ in 0..3 {
            let v = self.eval(x, ctx, bits)?;
            if let Some(s) = v.certified_sign() {
                return Ok(Some((s, v.magnitude())));
            }
            bits *= 2;
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sides {
    Positive,
    Negative,
    Both,
}

fn sides(id: &EntireFunctionId) -> Result<Sides> {
    match id {
        EntireFunctionId::Shq | EntireFunctionId::Chq => Err(QError::domain(format!("{id} has no nonzero real zeros"))),
        EntireFunctionId::Eq | EntireFunctionId::EqAlpha(_) => Ok(Sides::Negative),
        EntireFunctionId::Sq | EntireFunctionId::Cq | EntireFunctionId::Aq => Ok(Sides::Positive),
        _ if id.parity() != Parity::None => Ok(Sides::Positive),
        _ => Ok(Sides::Both),
    }
}

#[derive(Clone)]
struct Sample {
    x: Float,
    sign: i8,
    mag: Float,
}

/// Certified sign at `x`, nudging the point outward when the value is too close to zero to decide.
fn sample(f: &Prepared, x: &Float, ctx: &QContext) -> Result<Sample> {
    let mut y = x.clone();
    for _ in 0..4 {
        if let Some((sign, mag)) = f.sign(&y, ctx)? {
            return Ok(Sample { x: y, sign, mag });
        }
        y *= 1.0 + 1e-3;
    }
    Err(QError::BracketFailure {
        lo: format!("{}", x.to_f64()),
        hi: format!("{}", y.to_f64()),
        reason: "sign cannot be certified at the grid point".into(),
    })
}

/// One direction of the scan: samples ordered by distance from the origin.
struct Ray {
    dir: f64,
    samples: Vec<Sample>,
    next_grid: usize,
    dip_checked: usize,
}

impl Ray {
    fn new(dir: f64, origin: Option<Sample>) -> Self {
        Ray { dir, samples: origin.into_iter().collect(), next_grid: 0, dip_checked: 1 }
    }

    /// Extend by one batch of grid points `x₀·rʲ` and oversample suspicious dips.
    fn extend(&mut self, f: &Prepared, ratio: f64, ctx: &QContext) -> Result<()> {
        let prec = ctx.prec();
        let pts: Vec<Float> = (self.next_grid..self.next_grid + GRID_BATCH)
            .map(|j| Float::with_val(prec, GRID_START * ratio.powi(j as i32) * self.dir))
            .collect();
        self.next_grid += GRID_BATCH;
        self.samples.extend(par::try_map(ctx.execution(), &pts, |x| sample(f, x, ctx))?);

        // A local minimum of |f| without a sign change on either side may hide two
        // close zeros between grid points.
        let mut extra = Vec::new();
        for i in self.dip_checked.max(1)..self.samples.len() - 1 {
            let (a, b, c) = (&self.samples[i - 1], &self.samples[i], &self.samples[i + 1]);
            if a.sign == b.sign && b.sign == c.sign && b.mag < a.mag && b.mag < c.mag {
                extra.extend(oversample(f, &a.x, &c.x, ctx)?);
            }
        }
        self.samples.extend(extra);
        self.samples.sort_by(|a, b| a.x.as_abs().partial_cmp(&*b.x.as_abs()).expect("finite grid"));
        self.samples.dedup_by(|a, b| a.x == b.x);
        self.dip_checked = self.samples.len() - 1;
        Ok(())
    }

    fn brackets(&self) -> Vec<Bracket> {
        self.samples.windows(2).filter(|w| w[0].sign != w[1].sign).map(|w| ordered_bracket(&w[0], &w[1])).collect()
    }

    fn reach(&self) -> Float {
        self.samples.last().map(|s| Float::with_val(64, s.x.abs_ref())).unwrap_or_else(|| Float::new(64))
    }
}

fn oversample(f: &Prepared, a: &Float, c: &Float, ctx: &QContext) -> Result<Vec<Sample>> {
    let prec = ctx.prec();
    let pts: Vec<Float> = (1..=OVERSAMPLE)
        .map(|k| {
            let t = k as f64 / (OVERSAMPLE + 1) as f64;
            Float::with_val(prec, a * (1.0 - t)) + Float::with_val(prec, c * t)
        })
        .collect();
    par::try_map(ctx.execution(), &pts, |x| sample(f, x, ctx))
}

fn ordered_bracket(a: &Sample, b: &Sample) -> Bracket {
    if a.x < b.x {
        Bracket { lo: a.x.clone(), hi: b.x.clone(), f_lo_sign: a.sign, f_hi_sign: b.sign }
    } else {
        Bracket { lo: b.x.clone(), hi: a.x.clone(), f_lo_sign: b.sign, f_hi_sign: a.sign }
    }
}

/// Bisect until the width is at most `2^{−prec/2}·max(1, |x|)`.
pub(crate) fn refine(f: &Prepared, bracket: &Bracket, ctx: &QContext) -> Result<Zero> {
    let prec = ctx.prec();
    let mut b = bracket.clone();
    b.lo.set_prec(prec);
    b.hi.set_prec(prec);
    loop {
        let mut target = Float::with_val(64, b.lo.abs_ref()).max(&Float::with_val(64, b.hi.abs_ref()));
        if target < 1 {
            target = Float::with_val(64, 1);
        }
        target >>= prec / 2;
        if b.width() <= target {
            break;
        }
        let mid = Float::with_val(prec, &b.lo + &b.hi) / 2u32;
        if mid <= b.lo || mid >= b.hi {
            break;
        }
        match f.sign(&mid, ctx)? {
            Some((s, _)) if s == b.f_lo_sign => b.lo = mid,
            Some((s, _)) if s == b.f_hi_sign => b.hi = mid,
            _ => return Err(QError::NonSimpleZeroSuspected { x: format!("{}", mid.to_f64()) }),
        }
    }
    let location = Float::with_val(prec, &b.lo + &b.hi) / 2u32;
    Ok(Zero { location, bracket: b })
}

/// The first `count` real zeros of `f`.
///
/// Even and odd functions, `A_q` and the q-exponentials report their first
/// `count` zeros on the side where they live (positive, or negative for the
/// q-exponentials); other functions report the `count` zeros of smallest
/// absolute value. `B t − D` with `t = 0` also reports the zero at the origin.
pub fn find_zeros(f: &EntireFunctionId, count: usize, ctx: &QContext) -> Result<ZeroTable> {
    if count == 0 {
        return Err(QError::domain("find_zeros needs count >= 1"));
    }
    let side = sides(f)?;
    let prepared = Prepared::new(f, ctx)?;
    let ratio = ctx.q_pow_quarter(-1, 64).to_f64();
    let prec = ctx.prec();
    let origin = |dir: f64| -> Result<Option<Sample>> {
        let x = match f.parity() {
            Parity::Odd => Float::with_val(prec, GRID_START * 1e-3 * dir),
            _ => Float::new(prec),
        };
        Ok(Some(sample(&prepared, &x, ctx)?))
    };
    let mut rays = match side {
        Sides::Positive => vec![Ray::new(1.0, origin(1.0)?)],
        Sides::Negative => vec![Ray::new(-1.0, origin(-1.0)?)],
        Sides::Both => vec![Ray::new(1.0, None), Ray::new(-1.0, None)],
    };
    let found = |rays: &[Ray]| -> Vec<Bracket> {
        let mut all: Vec<Bracket> = rays.iter().flat_map(|r| r.brackets()).collect();
        if let [p, n] = rays {
            if let (Some(a), Some(b)) = (p.samples.first(), n.samples.first()) {
                if a.sign != b.sign {
                    all.push(ordered_bracket(a, b));
                }
            }
        }
        all
    };
    loop {
        for r in rays.iter_mut() {
            r.extend(&prepared, ratio, ctx)?;
        }
        if found(&rays).len() >= count {
            break;
        }
        if rays[0].next_grid >= MAX_GRID_POINTS || !rays[0].reach().is_finite() || rays[0].reach() > 1e300 {
            return Err(QError::BracketFailure {
                lo: format!("{GRID_START}"),
                hi: format!("{}", rays[0].reach().to_f64()),
                reason: format!("only {} of {count} sign changes found", found(&rays).len()),
            });
        }
    }
    let brackets = found(&rays);
    let mut zeros = par::try_map(ctx.execution(), &brackets, |b| refine(&prepared, b, ctx))?;
    zeros.sort_by(|a, b| a.location.as_abs().partial_cmp(&*b.location.as_abs()).expect("finite zeros"));
    zeros.truncate(count);
    if matches!(f, EntireFunctionId::BtMinusD(t) if t.is_zero()) {
        zeros.push(Zero { location: Float::new(prec), bracket: Bracket::exact(Float::new(prec)) });
    }
    zeros.sort_by(|a, b| a.location.partial_cmp(&b.location).expect("finite zeros"));
    let search_bound = rays.iter().map(|r| r.reach()).fold(Float::new(64), |a, b| a.max(&b));
    Ok(ZeroTable {
        function: f.clone(),
        q: ctx.q().clone(),
        zeros,
        requested_count: count,
        search_bound,
        scale_quarters: 0,
    })
}
