//! Complex literals on the command line: `1.5`, `-2i`, `i`, `0.3+1.2i`, `1e-3-4e2i`.

use qmoment::qfunctions::TParam;
use rug::{Complex, Float};

fn real_part(s: &str, prec: u32) -> Result<Float, String> {
    Float::parse(s).map(|p| Float::with_val(prec, p)).map_err(|_| format!("invalid number {s:?}"))
}

fn imag_part(s: &str, prec: u32) -> Result<Float, String> {
    match s {
        "" | "+" => Ok(Float::with_val(prec, 1)),
        "-" => Ok(Float::with_val(prec, -1)),
        _ => real_part(s, prec),
    }
}

pub fn parse_complex(s: &str, prec: u32) -> Result<Complex, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(Complex::with_val(prec, (real_part(t, prec)?, 0)));
    };
    // The split point is the last sign that does not belong to an exponent.
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real_part(&body[..k], prec)?, imag_part(&body[k..], prec)?),
        None => (Float::new(prec), imag_part(body, prec)?),
    };
    Ok(Complex::with_val(prec, (re, im)))
}

pub fn parse_list(s: &str, prec: u32) -> Result<Vec<Complex>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_complex(x, prec)).collect()
}

pub fn parse_t(s: &str, prec: u32) -> Result<TParam, String> {
    match s.trim() {
        "inf" | "infinity" | "+inf" | "∞" => Ok(TParam::Infinity),
        x => Ok(TParam::Finite(real_part(x, prec)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(s: &str) -> (f64, f64) {
        let z = parse_complex(s, 64).unwrap();
        (z.real().to_f64(), z.imag().to_f64())
    }

    #[test]
    fn forms() {
        assert_eq!(parts("1.5"), (1.5, 0.0));
        assert_eq!(parts("-2i"), (0.0, -2.0));
        assert_eq!(parts("i"), (0.0, 1.0));
        assert_eq!(parts("-i"), (0.0, -1.0));
        assert_eq!(parts("0.25+1.5i"), (0.25, 1.5));
        assert_eq!(parts("1e-3-4e2i"), (1e-3, -400.0));
        assert_eq!(parts("2-i"), (2.0, -1.0));
        assert!(parse_complex("abc", 64).is_err());
        assert!(parse_complex("", 64).is_err());
        assert_eq!(parse_list("1,2i", 64).unwrap().len(), 2);
        assert_eq!(parse_t("inf", 64).unwrap(), TParam::Infinity);
    }
}
