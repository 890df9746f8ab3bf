//! Text and JSON forms of complex numbers.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// JSON form of a complex number: `[re, im]`.
pub type Pair = [f64; 2];

pub fn to_pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn from_pair(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn to_pairs(zs: &[Complex64]) -> Vec<Pair> {
    zs.iter().copied().map(to_pair).collect()
}

pub fn from_pairs(ps: &[Pair]) -> Vec<Complex64> {
    ps.iter().copied().map(from_pair).collect()
}

/// Formats a real number with `digits` significant digits, like C's `%g`.
pub fn format_general(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.max(1);
    // Round first so the exponent reflects carries such as 9.99.. -> 10.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `re+imi` with 12 significant digits per part.
pub fn format_complex(z: Complex64) -> String {
    let re = format_general(z.re, 12);
    let im = format_general(z.im.abs(), 12);
    let sign = if z.im.is_sign_negative() && !z.im.is_nan() {
        '-'
    } else {
        '+'
    };
    format!("{re}{sign}{im}i")
}

/// Parses forms like `3`, `-1.5e-3`, `2i`, `-i` and `1.5-0.25i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Input(format!("cannot parse complex number '{text}'"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some(body) = s.strip_suffix('i') {
        // Split at the last sign that is not part of an exponent and not leading.
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
        });
        let (re_text, im_text) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let re = if re_text.is_empty() {
            0.0
        } else {
            re_text.parse::<f64>().map_err(|_| bad())?
        };
        let im = match im_text {
            "" | "+" => 1.0,
            "-" => -1.0,
            t => t.parse::<f64>().map_err(|_| bad())?,
        };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}
