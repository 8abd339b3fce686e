//! Decimal rendering of reals and complex literals with 17 significant digits.
//!
//! A complex literal is written `<re><sign><im>i`, e.g. `0.70710678118654757+0i`.
//! Seventeen significant digits identify every `f64` uniquely, so the text
//! forms round-trip bit-exactly (including the sign of zero).

use num_complex::Complex64;

/// Formats `x` with 17 significant digits, trailing zeros removed.
///
/// Plain positional notation is used for decimal exponents in `[-5, 17)`,
/// scientific notation (`1.25e-7`) otherwise.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let mut digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    while digits.len() > 1 && digits.ends_with('0') {
        digits.pop();
    }
    let sign = if x < 0.0 { "-" } else { "" };
    if (-5..17).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                let zeros = "0".repeat(int_len - digits.len());
                format!("{sign}{digits}{zeros}")
            } else {
                format!("{sign}{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("{sign}0.{zeros}{digits}")
        }
    } else if digits.len() == 1 {
        format!("{sign}{digits}e{exp}")
    } else {
        format!("{sign}{}.{}e{exp}", &digits[..1], &digits[1..])
    }
}

pub fn format_complex(z: Complex64) -> String {
    let (sign, im) = if z.im.is_sign_negative() {
        ('-', -z.im)
    } else {
        ('+', z.im)
    };
    format!("{}{}{}i", format_real(z.re), sign, format_real(im))
}

/// Parses a finite real number.
pub fn parse_real(s: &str) -> Option<f64> {
    let v: f64 = s.trim().parse().ok()?;
    v.is_finite().then_some(v)
}

/// Parses `<re><sign><im>i`, a bare real `<re>`, or a bare imaginary `<im>i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(&s).map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let parse_im = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(t),
    };
    match split {
        Some(k) => Some(Complex64::new(parse_real(&body[..k])?, parse_im(&body[k..])?)),
        None => Some(Complex64::new(0.0, parse_im(body)?)),
    }
}
