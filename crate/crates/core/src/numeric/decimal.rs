//! Exact parsing of decimal literals and decimal-string formatting.

use rug::{Float, Integer, Rational};

use super::Cplx;
use crate::error::{Error, Result};

fn parse_err(what: &'static str, input: &str) -> Error {
    Error::Parse { what, input: input.to_string() }
}

/// Parse `"-1.25e-3"`, `"7"`, `"+0.5"` or `"3/4"` into an exact rational.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    if s.is_empty() {
        return Err(parse_err("rational", input));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_rational(n)?;
        let den = parse_rational(d)?;
        if den.cmp0().is_eq() {
            return Err(parse_err("rational (zero denominator)", input));
        }
        return Ok(num / den);
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = body[i + 1..].parse().map_err(|_| parse_err("rational", input))?;
            (&body[..i], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(parse_err("rational", input));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err("rational", input));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(Integer::from_str_radix(&digits, 10).map_err(|_| parse_err("rational", input))?);
    let shift = exp - frac_part.len() as i32;
    let scale = Integer::from(Integer::u_pow_u(10, shift.unsigned_abs()));
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Parse a complex literal `a+bi`, `bi`, `-i`, `a` with exact components.
pub fn parse_complex(input: &str) -> Result<Cplx<Rational>> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err("complex", input));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Cplx::from_real(parse_rational(&s)?));
    };
    // split point: last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'/') {
            split = Some(i);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let im = match im_str {
        "" | "+" => Rational::from(1),
        "-" => Rational::from(-1),
        other => parse_rational(other).map_err(|_| parse_err("complex", input))?,
    };
    let re = if re_str.is_empty() {
        Rational::new()
    } else {
        parse_rational(re_str).map_err(|_| parse_err("complex", input))?
    };
    Ok(Cplx::new(re, im))
}

/// Comma-separated complex literals.
pub fn parse_complex_list(input: &str) -> Result<Vec<Cplx<Rational>>> {
    input.split(',').filter(|p| !p.trim().is_empty()).map(parse_complex).collect()
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal string with `digits` significant digits and trailing zeros trimmed.
/// Plain notation is used for exponents in `-6..=digits`, scientific otherwise.
pub fn format_float(f: &Float, digits: usize) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    if !f.is_finite() {
        return f.to_string();
    }
    let raw = f.to_string_radix(10, Some(digits.max(2)));
    let (mant, exp) = match raw.find('e') {
        Some(i) => (&raw[..i], raw[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (raw.as_str(), 0),
    };
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mant),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    // value = 0.DIGITS * 10^point
    let digits_all = format!("{int_part}{frac_part}");
    let point = int_part.len() as i64 + exp;
    let lead = digits_all.len() - digits_all.trim_start_matches('0').len();
    let sig = digits_all.trim_start_matches('0').trim_end_matches('0');
    let point = point - lead as i64;
    if sig.is_empty() {
        return "0".to_string();
    }
    if (-6..=digits as i64).contains(&point) {
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), sig)
        } else if point as usize >= sig.len() {
            format!("{}{}", sig, "0".repeat(point as usize - sig.len()))
        } else {
            format!("{}.{}", &sig[..point as usize], &sig[point as usize..])
        };
        return format!("{sign}{body}");
    }
    let rest = &sig[1..];
    let e = point - 1;
    if rest.is_empty() {
        format!("{sign}{}e{e}", &sig[..1])
    } else {
        format!("{sign}{}.{rest}e{e}", &sig[..1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_rational("0.1").unwrap(), Rational::from((1, 10)));
        assert_eq!(parse_rational("-1.25e-3").unwrap(), Rational::from((-1, 800)));
        assert_eq!(parse_rational("3/4").unwrap(), Rational::from((3, 4)));
        assert_eq!(parse_rational("+12").unwrap(), Rational::from(12));
        assert_eq!(parse_rational(".5").unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_rational("2E2").unwrap(), Rational::from(200));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("-").is_err());
    }

    #[test]
    fn complex_literals() {
        let z = parse_complex("1.5-2.25i").unwrap();
        assert_eq!(z.re, Rational::from((3, 2)));
        assert_eq!(z.im, Rational::from((-9, 4)));
        let w = parse_complex("2i").unwrap();
        assert_eq!(w.re, Rational::new());
        assert_eq!(w.im, Rational::from(2));
        assert_eq!(parse_complex("-i").unwrap().im, Rational::from(-1));
        assert_eq!(parse_complex("1e-2+3e-1i").unwrap().im, Rational::from((3, 10)));
        assert_eq!(parse_complex("-3").unwrap().re, Rational::from(-3));
        let list = parse_complex_list("0, 0, 1").unwrap();
        assert_eq!(list.len(), 3);
        assert_eq!(parse_complex("1/2+1/3i").unwrap().im, Rational::from((1, 3)));
    }

    #[test]
    fn literal_round_trip() {
        for s in ["1/2+3i", "-2i", "5", "-1/3-1/7i"] {
            assert_eq!(parse_complex(s).unwrap().to_literal(), s);
        }
    }

    #[test]
    fn float_formatting() {
        let f = Float::with_val(128, 1024);
        assert_eq!(format_float(&f, 30), "1024");
        let third = Float::with_val(64, 1) / 3;
        assert!(format_float(&third, 10).starts_with("0.333333333"));
        assert_eq!(format_float(&Float::new(64), 10), "0");
        assert_eq!(format_float(&Float::with_val(64, -0.5), 10), "-0.5");
        assert_eq!(format_float(&Float::with_val(64, 1.5e-9), 5), "1.5e-9");
        assert_eq!(format_float(&Float::with_val(64, 3e40), 5), "3e40");
        assert_eq!(format_float(&Float::with_val(64, 12.25), 10), "12.25");
    }
}
