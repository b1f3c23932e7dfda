//! Interlacing decided on certified brackets, refining where they overlap.

use std::cmp::Ordering;

use super::find::{refine, Prepared};
use super::table::{map_bracket, Bracket, Zero, ZeroTable};
use crate::error::{QError, Result};
use crate::par;
use crate::qcore::QContext;
use rug::Float;

const MAX_REFINE_ROUNDS: u32 = 5;

enum Verdict {
    Decided(bool),
    /// Zeros (table, index) whose brackets overlap a zero of the other table.
    Ambiguous(Vec<(usize, usize)>),
}

fn decide(tables: [&[Zero]; 2]) -> Result<Verdict> {
    let [a, b] = tables;
    if a.len() < 2 || b.len() < 2 {
        return Err(QError::InsufficientZeros(format!("tables hold {} and {} zeros", a.len(), b.len())));
    }
    // The common range is taken on brackets so that an end zero whose bracket
    // overlaps the other table is kept and resolved.
    let lo = a[0].bracket.lo.clone().max(&b[0].bracket.lo);
    let hi = a[a.len() - 1].bracket.hi.clone().min(&b[b.len() - 1].bracket.hi);
    let mut merged: Vec<(&Zero, usize, usize)> = tables
        .iter()
        .enumerate()
        .flat_map(|(t, zs)| zs.iter().enumerate().map(move |(i, z)| (z, t, i)))
        .filter(|(z, _, _)| z.bracket.hi >= lo && z.bracket.lo <= hi)
        .collect();
    if merged.len() < 3 {
        return Err(QError::InsufficientZeros("the common range holds fewer than three zeros".into()));
    }
    merged.sort_by(|x, y| x.0.bracket.lo.partial_cmp(&y.0.bracket.lo).unwrap_or(Ordering::Equal));
    // The order of overlapping brackets is unknown, so overlaps are resolved before
    // alternation is judged.
    let mut ambiguous = Vec::new();
    for (k, &(z0, t0, i0)) in merged.iter().enumerate() {
        for &(z1, t1, i1) in &merged[k + 1..] {
            if z1.bracket.lo > z0.bracket.hi {
                break;
            }
            if t0 != t1 {
                ambiguous.push((t0, i0));
                ambiguous.push((t1, i1));
            }
        }
    }
    if ambiguous.is_empty() && merged.windows(2).any(|w| w[0].1 == w[1].1) {
        return Ok(Verdict::Decided(false));
    }
    if ambiguous.is_empty() {
        Ok(Verdict::Decided(true))
    } else {
        ambiguous.sort_unstable();
        ambiguous.dedup();
        Ok(Verdict::Ambiguous(ambiguous))
    }
}

/// Whether the certified brackets of `a` and `b` strictly interlace over their
/// common range. Overlapping brackets count as not interlacing; see
/// [`interlace_certified`] for the refining variant.
pub fn interlace_check(a: &ZeroTable, b: &ZeroTable) -> Result<bool> {
    if a.q != b.q {
        return Err(QError::domain("interlacing needs tables over the same q"));
    }
    Ok(match decide([&a.zeros, &b.zeros])? {
        Verdict::Decided(v) => v,
        Verdict::Ambiguous(_) => false,
    })
}

/// Strict interlacing of two tables produced by [`find_zeros`](super::find_zeros).
///
/// Zeros of the two tables whose brackets overlap are re-bisected at doubled
/// precision, up to five times; if they still cannot be separated the zeros
/// are reported as not strictly interlacing.
pub fn interlace_certified(a: &ZeroTable, b: &ZeroTable, ctx: &QContext) -> Result<bool> {
    if a.q != b.q {
        return Err(QError::domain("interlacing needs tables over the same q"));
    }
    if a.function == b.function && a.scale_quarters == b.scale_quarters {
        return Ok(false);
    }
    let mut zeros = [a.zeros.clone(), b.zeros.clone()];
    let ids = [&a.function, &b.function];
    let scales = [a.scale_quarters, b.scale_quarters];
    let mut prec = ctx.prec();
    for _ in 0..=MAX_REFINE_ROUNDS {
        let todo = match decide([&zeros[0], &zeros[1]])? {
            Verdict::Decided(v) => return Ok(v),
            Verdict::Ambiguous(todo) => todo,
        };
        prec *= 2;
        if prec > ctx.prec() << MAX_REFINE_ROUNDS {
            break;
        }
        let hi = ctx.with_precision(prec)?;
        let prepared = [Prepared::new(ids[0], &hi)?, Prepared::new(ids[1], &hi)?];
        let refined = par::try_map(ctx.execution(), &todo, |&(t, i)| -> Result<Option<Zero>> {
            let z = &zeros[t][i];
            if z.bracket.is_exact() {
                return Ok(Some(z.clone()));
            }
            if scales[t] == 0 {
                return refine(&prepared[t], &z.bracket, &hi).map(Some);
            }
            // Map back to the variable of `f`, re-certify the end signs, refine, map forward.
            let back = map_bracket(&z.bracket, &hi.q_pow_quarter(-scales[t], prec + 16), prec);
            let ends = (prepared[t].sign(&back.lo, &hi)?, prepared[t].sign(&back.hi, &hi)?);
            let (Some((s_lo, _)), Some((s_hi, _))) = ends else { return Ok(None) };
            if s_lo == s_hi {
                return Ok(None);
            }
            let start = Bracket { f_lo_sign: s_lo, f_hi_sign: s_hi, ..back };
            let r = refine(&prepared[t], &start, &hi)?;
            let factor = hi.q_pow_quarter(scales[t], prec + 16);
            Ok(Some(Zero {
                location: Float::with_val(prec, &r.location * &factor),
                bracket: map_bracket(&r.bracket, &factor, prec),
            }))
        })?;
        for (&(t, i), z) in todo.iter().zip(refined) {
            match z {
                Some(z) => zeros[t][i] = z,
                None => return Ok(false),
            }
        }
    }
    Ok(false)
}
