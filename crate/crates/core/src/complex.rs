//! Complex-number helpers shared by the solver, trainer and CLI.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub fn expm1(z: C64) -> C64 {
    let half_sin = (0.5 * z.im).sin();
    // cos(y) - 1 = -2 sin^2(y/2)
    let cos_m1 = -2.0 * half_sin * half_sin;
    let em1 = z.re.exp_m1();
    c64(em1 * z.im.cos() + cos_m1, z.re.exp() * z.im.sin())
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i` (no internal spaces).
pub fn parse_complex(text: &str) -> Result<C64> {
    let s = text.trim();
    let bad = || Error::InvalidArgument(format!("bad complex literal `{text}`; expected a+bi"));
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(|re| c64(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    let value = match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            c64(re, imag(&body[k..])?)
        }
        None => c64(0.0, imag(body)?),
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

/// Formats as `a+bi` / `a-bi`, parseable by [`parse_complex`].
pub fn format_complex(z: C64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
