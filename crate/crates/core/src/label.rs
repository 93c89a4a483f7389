//! Exact rational labels for lattice elements.
//!
//! Labels are accepted as fractions (`"3/10"`), integers (`"1"`) or finite
//! decimals (`"0.3"`), and are always parsed exactly. Rendering prefers a
//! decimal when the denominator has no prime factors other than 2 and 5.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Label = Ratio<i64>;

pub fn parse_label(text: &str) -> Result<Label> {
    let s = text.trim();
    let bad = || Error::InvalidLabel(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) || frac_part.len() > 15 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i64 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = 10i64
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(bad)?;
    let value = Ratio::new(numer, denom);
    Ok(if negative { -value } else { value })
}

pub fn format_label(value: &Label) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    let mut den = *value.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    let scale = match 10i64.checked_pow(places) {
        Some(s) => s,
        None => return format!("{}/{}", value.numer(), value.denom()),
    };
    let scaled = value * Ratio::from_integer(scale);
    let digits = scaled.to_integer().abs().to_string();
    let sign = if value.is_negative() { "-" } else { "" };
    let places = places as usize;
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    format!("{sign}{int_part}.{frac_part}")
}

/// True when the label lies in the closed unit interval.
pub fn in_unit_interval(value: &Label) -> bool {
    *value >= Label::zero() && *value <= Label::one()
}
