//! Literal syntax for angles, fractions and grids, and fixed-precision
//! decimal output.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Characters allowed in a plain decimal literal.
fn is_decimal(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let mut parts = body.splitn(2, ['e', 'E']);
    let mantissa = parts.next().unwrap_or("");
    let exponent_ok = match parts.next() {
        None => true,
        Some(e) => {
            let e = e.strip_prefix(['+', '-']).unwrap_or(e);
            !e.is_empty() && e.bytes().all(|b| b.is_ascii_digit())
        }
    };
    let mut dots = 0;
    let mut digits = 0;
    for b in mantissa.bytes() {
        match b {
            b'0'..=b'9' => digits += 1,
            b'.' => dots += 1,
            _ => return false,
        }
    }
    exponent_ok && digits > 0 && dots <= 1
}

fn decimal(s: &str, offset: usize) -> Result<f64> {
    if !is_decimal(s) {
        return Err(Error::parse(offset, format!("invalid number {s:?}")));
    }
    let v: f64 = s
        .parse()
        .map_err(|_| Error::parse(offset, format!("invalid number {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(offset, format!("number {s:?} is out of range")));
    }
    Ok(v)
}

fn positive_integer(s: &str, offset: usize) -> Result<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(
            offset,
            format!("expected a positive integer, found {s:?}"),
        ));
    }
    match s.parse::<u64>() {
        Ok(0) => Err(Error::parse(offset, "denominator must be positive")),
        Ok(v) => Ok(v),
        Err(_) => Err(Error::parse(offset, "integer too large")),
    }
}

/// Radians, either as a decimal (`0.628`) or as a multiple of π
/// (`pi`, `-pi/2`, `2pi/3`, `0.5pi`).
pub fn parse_angle(text: &str) -> Result<f64> {
    let (sign, body, start) = match text.as_bytes().first() {
        Some(b'-') => (-1.0, &text[1..], 1),
        Some(b'+') => (1.0, &text[1..], 1),
        _ => (1.0, text, 0),
    };
    let Some(at) = body.find("pi") else {
        return decimal(text, 0);
    };
    let coef_text = &body[..at];
    let coef = if coef_text.is_empty() {
        1.0
    } else if coef_text.starts_with(['+', '-']) {
        return Err(Error::parse(start, "sign must come before the coefficient"));
    } else {
        decimal(coef_text, start)?
    };
    let rest = &body[at + 2..];
    let den = match rest.strip_prefix('/') {
        None if rest.is_empty() => 1,
        None => return Err(Error::parse(start + at + 2, format!("unexpected {rest:?} after pi"))),
        Some(d) => positive_integer(d, start + at + 3)?,
    };
    Ok(sign * coef * PI / den as f64)
}

/// A decimal or an exact ratio `a/b` of decimals.
pub fn parse_fraction(text: &str) -> Result<f64> {
    match text.split_once('/') {
        None => decimal(text, 0),
        Some((num, den)) => {
            let n = decimal(num, 0)?;
            let d = decimal(den, num.len() + 1)?;
            if d == 0.0 {
                return Err(Error::parse(num.len() + 1, "division by zero"));
            }
            let v = n / d;
            if !v.is_finite() {
                return Err(Error::parse(0, "ratio is out of range"));
            }
            Ok(v)
        }
    }
}

/// Inclusive uniform grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

/// Upper bound on grid points; keeps a typo from queueing billions of runs.
pub const MAX_GRID_POINTS: usize = 100_000;

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(2..=MAX_GRID_POINTS).contains(&count) {
            return Err(Error::OutOfRange {
                name: "grid count",
                value: count as f64,
                min: 2.0,
                max: MAX_GRID_POINTS as f64,
            });
        }
        if start.partial_cmp(&stop) != Some(std::cmp::Ordering::Less) {
            return Err(Error::parse(0, format!("grid start {start} must be below stop {stop}")));
        }
        Ok(Self { start, stop, count })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / last)
            .collect()
    }
}

/// `start:stop:count`; bounds accept angle syntax.
pub fn parse_grid(text: &str) -> Result<Grid> {
    let mut parts = text.splitn(3, ':');
    let (Some(a), Some(b), Some(n)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::parse(0, "expected start:stop:count"));
    };
    let offset_b = a.len() + 1;
    let offset_n = offset_b + b.len() + 1;
    let start = parse_angle(a).map_err(|e| shift(e, 0))?;
    let stop = parse_angle(b).map_err(|e| shift(e, offset_b))?;
    if n.is_empty() || !n.bytes().all(|c| c.is_ascii_digit()) {
        return Err(Error::parse(offset_n, format!("invalid grid count {n:?}")));
    }
    let count = n.parse::<usize>().unwrap_or(usize::MAX);
    Grid::new(start, stop, count)
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { offset, message } => Error::Parse {
            offset: offset + by,
            message,
        },
        other => other,
    }
}

/// Fixed-point decimal with 12 significant digits, `.` separator.
pub fn format_sig(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0.00000000000".to_string();
    }
    // exponent after rounding to 12 digits, so 9.9999999999996 counts as 10
    let sci = format!("{:.11e}", v);
    let exp: i32 = sci[sci.find('e').expect("scientific format") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (11 - exp).max(0) as usize;
    format!("{:.*}", decimals, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("-1.25").unwrap(), -1.25);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/5").unwrap(), PI / 5.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("0.5pi").unwrap(), 0.5 * PI);
        for bad in [
            "", "pi/0", "pi/", "pi*2", "2*pi", "--1", "1/2", "nan", "inf", "pi/-3", "p", "1e", "1e400", ".", "pipi",
        ] {
            assert!(parse_angle(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("1/168").unwrap(), 1.0 / 168.0);
        assert_eq!(parse_fraction("0.005").unwrap(), 0.005);
        assert_eq!(parse_fraction("3/4").unwrap(), 0.75);
        for bad in ["1/0", "1/", "/2", "a", "1/2/3", "1e999/1"] {
            assert!(parse_fraction(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn grids() {
        let g = parse_grid("0:1:51").unwrap();
        let v = g.values();
        assert_eq!(v.len(), 51);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[50], 1.0);
        assert!((v[25] - 0.5).abs() < 1e-15);
        let g = parse_grid("0:2pi:81").unwrap();
        assert_eq!(g.stop, 2.0 * PI);
        assert_eq!(g.values()[80], 2.0 * PI);
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("0:1:1").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:x").is_err());
        match parse_grid("0:1x:5") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0 / 15.0), "0.0666666666667");
        assert_eq!(format_sig(-3.0), "-3.00000000000");
        assert_eq!(format_sig(0.0), "0.00000000000");
        assert_eq!(format_sig(-0.0), "0.00000000000");
        assert_eq!(format_sig(123456.789), "123456.789000");
        assert_eq!(format_sig(9.99999999999996), "10.0000000000");
        assert_eq!(format_sig(1e13), "10000000000000");
    }
}
