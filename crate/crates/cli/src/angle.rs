//! Angle literals: decimal radians or rational multiples of `pi`.
//!
//! ```text
//! angle := '-'? ( INT ( '/' INT )? )? 'pi' ( '/' INT )?
//!        | decimal
//! ```
//!
//! Examples: `pi`, `pi/3`, `-pi/3`, `3pi/4`, `15/16pi`, `1.0471975512`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseAngleError {
    pub input: String,
    /// Byte offset of the offending character.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseAngleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid angle '{}' at position {}: {}",
            self.input, self.position, self.message
        )
    }
}

impl std::error::Error for ParseAngleError {}

/// A parsed angle together with the text it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleExpr {
    pub raw: String,
    pub value: f64,
}

impl AngleExpr {
    pub fn from_value(value: f64) -> Self {
        AngleExpr {
            raw: format_angle(value),
            value,
        }
    }
}

impl fmt::Display for AngleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl FromStr for AngleExpr {
    type Err = ParseAngleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(AngleExpr {
            raw: s.to_string(),
            value: parse_angle(s)?,
        })
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, position: usize, message: impl Into<String>) -> ParseAngleError {
        ParseAngleError {
            input: self.src.to_string(),
            position,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<u64, ParseAngleError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(start, "expected an integer"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err(start, "integer too large"))
    }

    fn denominator(&mut self) -> Result<u64, ParseAngleError> {
        let at = self.pos;
        match self.int()? {
            0 => Err(self.err(at, "zero denominator")),
            d => Ok(d),
        }
    }
}

pub fn parse_angle(s: &str) -> Result<f64, ParseAngleError> {
    let mut cur = Cursor { src: s, pos: 0 };
    if s.is_empty() {
        return Err(cur.err(0, "empty input"));
    }
    if !s.contains("pi") {
        return match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(cur.err(0, "angle must be finite")),
            Err(_) => {
                let bad = s
                    .char_indices()
                    .find(|&(_, c)| !(c.is_ascii_digit() || "+-.eE".contains(c)))
                    .map_or(0, |(i, _)| i);
                Err(cur.err(bad, "expected decimal radians or a multiple of pi"))
            }
        };
    }

    let negative = cur.eat(b'-');
    let (mut num, mut den) = (1u64, 1u64);
    if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        num = cur.int()?;
        if cur.eat(b'/') {
            den = cur.denominator()?;
        }
    }
    if !cur.eat_str("pi") {
        return Err(cur.err(cur.pos, "expected 'pi'"));
    }
    if cur.eat(b'/') {
        let at = cur.pos;
        den = den
            .checked_mul(cur.denominator()?)
            .ok_or_else(|| cur.err(at, "denominator too large"))?;
    }
    if cur.pos != s.len() {
        return Err(cur.err(cur.pos, "unexpected trailing input"));
    }
    let v = pi_ratio(num, den);
    Ok(if negative { -v } else { v })
}

/// π·num/den rounded once, using a two-term π and one Newton-style correction
/// (`PI * 1.0 / 3.0` alone misses `FRAC_PI_3` by an ulp).
fn pi_ratio(num: u64, den: u64) -> f64 {
    const PI_LO: f64 = 1.2246467991473532e-16;
    let (n, d) = (num as f64, den as f64);
    let q = n * PI / d;
    let p = n * PI;
    let p_err = n.mul_add(PI, -p);
    let rem = (-q).mul_add(d, p) + p_err + n * PI_LO;
    q + rem / d
}

/// Shortest text that parses back to exactly `value`: a small rational
/// multiple of `pi` when one matches bit for bit, otherwise decimal.
pub fn format_angle(value: f64) -> String {
    if value != 0.0 && value.is_finite() && value.abs() <= 64.0 * PI {
        for den in 1u64..=64 {
            let num = (value.abs() * den as f64 / PI).round() as u64;
            if num == 0 || gcd(num, den) != 1 {
                continue;
            }
            let sign = if value < 0.0 { "-" } else { "" };
            let coef = if num == 1 {
                String::new()
            } else {
                num.to_string()
            };
            let text = if den == 1 {
                format!("{sign}{coef}pi")
            } else {
                format!("{sign}{coef}pi/{den}")
            };
            if parse_angle(&text).is_ok_and(|v| v.to_bits() == value.to_bits()) {
                return text;
            }
        }
    }
    format!("{value}")
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `MIN:MAX` with angle-literal endpoints.
pub fn parse_range(s: &str) -> Result<(AngleExpr, AngleExpr), ParseAngleError> {
    let Some((lo, hi)) = s.split_once(':') else {
        return Err(ParseAngleError {
            input: s.to_string(),
            position: s.len(),
            message: "expected MIN:MAX".into(),
        });
    };
    let shift = |mut e: ParseAngleError, by: usize| {
        e.input = s.to_string();
        e.position += by;
        e
    };
    let lo_e = lo.parse::<AngleExpr>().map_err(|e| shift(e, 0))?;
    let hi_e = hi
        .parse::<AngleExpr>()
        .map_err(|e| shift(e, lo.len() + 1))?;
    Ok((lo_e, hi_e))
}

/// Parsed `MIN:MAX` range, kept with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleRange {
    pub min: AngleExpr,
    pub max: AngleExpr,
}

impl fmt::Display for AngleRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.min, self.max)
    }
}

impl FromStr for AngleRange {
    type Err = ParseAngleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (min, max) = parse_range(s)?;
        Ok(AngleRange { min, max })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, TAU};

    #[test]
    fn pi_forms() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/3").unwrap(), FRAC_PI_3);
        assert_eq!(parse_angle("-pi/3").unwrap(), -FRAC_PI_3);
        assert_eq!(parse_angle("pi/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle("pi/6").unwrap(), FRAC_PI_6);
        assert_eq!(parse_angle("pi/8").unwrap(), FRAC_PI_8);
        assert_eq!(parse_angle("2pi").unwrap(), TAU);
        assert!((parse_angle("3pi/4").unwrap() - 3.0 * PI / 4.0).abs() < 1e-15);
        assert!((parse_angle("15/16pi").unwrap() - 15.0 * PI / 16.0).abs() < 1e-15);
        assert!((parse_angle("3/4pi/2").unwrap() - 3.0 * PI / 8.0).abs() < 1e-15);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn decimal_forms() {
        assert_eq!(parse_angle("1.0471975512").unwrap(), 1.0471975512);
        assert_eq!(parse_angle("-0.5").unwrap(), -0.5);
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert_eq!(parse_angle("1e-3").unwrap(), 1e-3);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_angle("pi/x").unwrap_err();
        assert_eq!(e.position, 3);
        let e = parse_angle("pi/0").unwrap_err();
        assert_eq!(e.position, 3);
        let e = parse_angle("3pj").unwrap_err();
        assert_eq!(e.position, 1);
        let e = parse_angle("2pi3").unwrap_err();
        assert_eq!(e.position, 3);
        let e = parse_angle("1.2x").unwrap_err();
        assert_eq!(e.position, 3);
        assert!(parse_angle("").is_err());
        assert!(parse_angle("inf").is_err());
        assert!(parse_angle("--pi").is_err());
        let e = parse_range("0.2:pi/q").unwrap_err();
        assert_eq!(e.position, 7);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_angle(FRAC_PI_3), "pi/3");
        assert_eq!(format_angle(-FRAC_PI_3), "-pi/3");
        assert_eq!(format_angle(PI), "pi");
        assert_eq!(format_angle(0.2), "0.2");
        assert_eq!(format_angle(0.0), "0");
        assert_eq!(AngleExpr::from_value(FRAC_PI_4).raw, "pi/4");
    }

    #[test]
    fn ranges() {
        let (a, b) = parse_range("-pi/4:1.3").unwrap();
        assert_eq!(a.value, -FRAC_PI_4);
        assert_eq!(b.value, 1.3);
        assert!(parse_range("0.2").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn parse_format_round_trip(v in -200.0f64..200.0) {
                let text = format_angle(v);
                prop_assert_eq!(parse_angle(&text).unwrap().to_bits(), v.to_bits());
            }

            #[test]
            fn rational_pi_round_trip(num in 1u64..200, den in 1u64..65, neg in any::<bool>()) {
                let sign = if neg { "-" } else { "" };
                let v = parse_angle(&format!("{sign}{num}pi/{den}")).unwrap();
                prop_assert_eq!(parse_angle(&format_angle(v)).unwrap().to_bits(), v.to_bits());
            }
        }
    }
}
