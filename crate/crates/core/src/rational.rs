//! Exact rationals and parsing of decimal / fraction strings.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Signed;

use crate::error::{Error, Result};

/// Exact rational used for the defended share and all payoffs.
pub type Rational = Ratio<i128>;

/// Upper bound on the denominator of a parsed value. Payoff sums over up to
/// 40 players stay inside `i128` with this cap.
pub const MAX_DENOMINATOR: i128 = 1_000_000_000_000_000_000;

/// Parses `"0.1"`, `"1"`, `".25"` or `"3/10"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a decimal or fraction: {s:?}"));
    let value = if let Some((num, den)) = s.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den: i128 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")));
        }
        Rational::new(num, den)
    } else {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        if frac_part.len() > 18 || int_part.len() > 18 {
            return Err(Error::InvalidArgument(format!("too many digits in {s:?}")));
        }
        let scale = 10i128.pow(frac_part.len() as u32);
        let int: i128 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac: i128 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let r = Rational::new(int * scale + frac, scale);
        if neg {
            -r
        } else {
            r
        }
    };
    if value.denom().abs() > MAX_DENOMINATOR {
        return Err(Error::InvalidArgument(format!(
            "denominator too large in {s:?}"
        )));
    }
    Ok(value)
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

pub fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// `p/q` in lowest terms, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::from_integer(1)
}
