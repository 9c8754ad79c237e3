//! Complex literals (`a+bi`) and ranges (`a:b`, `a:b:step`).

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("invalid complex literal '{0}' (expected a, bi or a+bi)")]
    Complex(String),
    #[error("invalid range '{0}' (expected a:b or a:b:step)")]
    Range(String),
}

/// Parses `2`, `-1.5e-3`, `0.5+14.13i`, `3i`, `-i`, `1e-3 - 2.5e+2i`.
pub fn parse_complex(s: &str) -> Result<Complex64, ParseError> {
    let err = || ParseError::Complex(s.to_string());
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t
            .parse::<f64>()
            .ok()
            .filter(|re| re.is_finite())
            .map(|re| Complex64::new(re, 0.0))
            .ok_or_else(err);
    };
    // The sign that separates the parts is the last one not opening the string
    // and not belonging to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| err())? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| err())?,
    };
    if !(re.is_finite() && im.is_finite()) {
        return Err(err());
    }
    Ok(Complex64::new(re, im))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub step: Option<f64>,
}

pub fn parse_range(s: &str) -> Result<Range, ParseError> {
    let err = || ParseError::Range(s.to_string());
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(err);
    let range = match parts.as_slice() {
        [a, b] => Range {
            start: num(a)?,
            end: num(b)?,
            step: None,
        },
        [a, b, h] => Range {
            start: num(a)?,
            end: num(b)?,
            step: Some(num(h)?),
        },
        _ => return Err(err()),
    };
    if !(range.start < range.end) || range.step.is_some_and(|h| h <= 0.0) {
        return Err(err());
    }
    Ok(range)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("0.5+14.134725i").unwrap(), c(0.5, 14.134725));
        assert_eq!(parse_complex(" 0.5 - 3 i ").unwrap(), c(0.5, -3.0));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("1e-3-2.5e+2i").unwrap(), c(1e-3, -250.0));
        assert_eq!(parse_complex("-1.5E-3").unwrap(), c(-1.5e-3, 0.0));
        assert_eq!(parse_complex("-2-1e-2i").unwrap(), c(-2.0, -0.01));
        for bad in ["", "abc", "1+", "1++2i", "nan", "1+xi"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(
            parse_range("0:30").unwrap(),
            Range {
                start: 0.0,
                end: 30.0,
                step: None
            }
        );
        assert_eq!(parse_range("0.4:0.6:0.05").unwrap().step, Some(0.05));
        for bad in ["1", "2:1", "0:1:0", "0:1:-1", "a:b", "0:1:2:3"] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }
}
