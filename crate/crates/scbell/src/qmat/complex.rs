//! Textual form for complex scalars: `<re>`, `<re>+<im>i`, `<re>-<im>i`,
//! or `<im>i`. Formatting uses the shortest f64 representation, so
//! `format_complex` round-trips exactly through `parse_complex`.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid complex number `{input}`: {reason}")]
pub struct ParseComplexError {
    pub input: String,
    pub reason: String,
}

fn err(input: &str, reason: impl Into<String>) -> ParseComplexError {
    ParseComplexError {
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn parse_f64(input: &str, part: &str) -> Result<f64, ParseComplexError> {
    let v: f64 = part
        .parse()
        .map_err(|_| err(input, format!("`{part}` is not a number")))?;
    if !v.is_finite() {
        return Err(err(input, "components must be finite"));
    }
    Ok(v)
}

/// Position of the `+`/`-` separating real and imaginary parts, if any.
/// Signs at position 0 or directly after an exponent marker don't split.
fn split_position(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
}

pub fn parse_complex(s: &str) -> Result<Complex64, ParseComplexError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(err(s, "empty string"));
    }
    if let Some(im_str) = t.strip_suffix('i') {
        match split_position(im_str) {
            Some(pos) => {
                let re = parse_f64(s, &im_str[..pos])?;
                let im = parse_f64(s, &im_str[pos..])?;
                Ok(Complex64::new(re, im))
            }
            // No split: the whole thing is the imaginary part, e.g. `0.3i`.
            None => Ok(Complex64::new(0.0, parse_f64(s, im_str)?)),
        }
    } else {
        if split_position(t).is_some() {
            return Err(err(s, "missing trailing `i` on imaginary part"));
        }
        Ok(Complex64::new(parse_f64(s, t)?, 0.0))
    }
}

pub fn format_complex(z: Complex64) -> String {
    // Canonicalize -0.0 so the sign test below is stable.
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im < 0.0 {
        format!("{}-{}i", re, -im)
    } else {
        format!("{}+{}i", re, im)
    }
}
