//! Exact rational helpers shared by the weight schemes, atoms and certificates.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parse `p/q`, an integer, or a decimal such as `0.5`, `-1.25e-3` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigInt::from(0u8);
    if !all.is_empty() {
        value = all.parse().map_err(|_| bad())?;
    }
    if negative {
        value = -value;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u8);
    let r = if scale >= 0 {
        BigRational::from_integer(value * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(value, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

/// `p/q` form, or just `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest-ish f64; saturates to ±inf for huge values instead of returning `None`.
pub fn to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Fall back to a log-scale computation for magnitudes beyond f64 conversion.
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let n = r.numer().abs();
    let d = r.denom();
    let ln = big_ln(&n.to_biguint().unwrap_or_default()) - big_ln(&d.to_biguint().unwrap_or_default());
    sign * ln.exp()
}

/// Natural log of a big unsigned integer (−inf for zero).
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(0.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_biguint(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

pub fn pow(r: &BigRational, e: u32) -> BigRational {
    num_traits::pow(r.clone(), e as usize)
}

/// Exact rational for p given as a positive exponent; checks `0 < p`.
pub fn positive(r: &BigRational, what: &str) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} must be positive, got {}", format_rational(r))))
    }
}

/// If `r` is a (positive or negative) integer, return it.
pub fn as_integer(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// Compare `x` with `base^exponent` exactly, for positive `x`, integer `base ≥ 1` and rational exponent.
///
/// Writes the exponent as `u/s` with `s > 0` and compares `x^s` with `base^u`.
pub fn cmp_with_power(x: &BigRational, base: &BigUint, exponent: &BigRational) -> std::cmp::Ordering {
    debug_assert!(x.is_positive());
    let s = exponent.denom().to_u32().expect("exponent denominator fits u32");
    let u = exponent.numer();
    let lhs = pow(x, s);
    let b = from_biguint(base);
    let u_abs = u.abs().to_u32().expect("exponent numerator fits u32");
    let rhs = if u.is_negative() {
        pow(&b, u_abs).recip()
    } else {
        pow(&b, u_abs)
    };
    lhs.cmp(&rhs)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Power of a big integer by a nonnegative integer given as rational.
pub fn big_pow_int(base: &BigUint, e: &BigInt) -> BigRational {
    let b = from_biguint(base);
    let abs = e.abs().to_u32().expect("integer exponent fits u32");
    if e.is_negative() {
        pow(&b, abs).recip()
    } else {
        pow(&b, abs)
    }
}

pub fn zero() -> BigRational {
    BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_and_exponents() {
        assert_eq!(parse_rational("1/4").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("0.5").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-1.25e-1").unwrap(), BigRational::new((-1).into(), 8.into()));
        assert_eq!(parse_rational("3").unwrap(), big(3));
        assert_eq!(parse_rational(".3").unwrap(), BigRational::new(3.into(), 10.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn power_comparison_is_exact() {
        // 2^(3/2) = 2.828..., so 2.8 < 2^(3/2) < 2.9
        let e = BigRational::new(3.into(), 2.into());
        let two = BigUint::from(2u8);
        assert_eq!(cmp_with_power(&parse_rational("2.8").unwrap(), &two, &e), std::cmp::Ordering::Less);
        assert_eq!(cmp_with_power(&parse_rational("2.9").unwrap(), &two, &e), std::cmp::Ordering::Greater);
        assert_eq!(cmp_with_power(&big(8), &two, &big(3)), std::cmp::Ordering::Equal);
    }

    #[test]
    fn huge_values_convert_through_logs() {
        let x = pow(&big(2), 2000);
        assert!(to_f64(&x).is_infinite());
        let y = pow(&big(2), 2000) / pow(&big(2), 1990);
        assert_eq!(to_f64(&y), 1024.0);
        assert!((big_ln(&BigUint::from(2u8).pow(3000)) - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
