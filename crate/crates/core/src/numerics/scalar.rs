use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number. `BigRational` keeps values in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `n / d` in lowest terms. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses an integer (`-3`), a fraction (`5/8`) or a finite decimal (`0.05`)
/// into an exact rational.
pub fn parse_scalar(input: &str) -> Result<Scalar> {
    let fail = |reason: &str| Error::ParseNumber {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(fail("empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num).ok_or_else(|| fail("bad numerator"))?;
        let den = parse_integer(den).ok_or_else(|| fail("bad denominator"))?;
        if den.is_zero() {
            return Err(fail("zero denominator"));
        }
        return Ok(Scalar::new(num, den));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(fail("no digits"));
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(fail("expected integer, p/q, or finite decimal"));
    }
    let digits = format!("{whole}{frac}");
    let mantissa: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| fail("bad digits"))?
    };
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let value = Scalar::new(mantissa, scale);
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical exact string: `p/q`, or `p` for integers.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn sum(v: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for x in v.iter().filter(|x| !x.is_zero()) {
        acc += x;
    }
    acc
}

pub fn is_probability_vector(v: &[Scalar]) -> bool {
    !v.is_empty() && v.iter().all(|x| !x.is_negative()) && sum(v).is_one()
}

/// Errors unless `v` is a probability vector of length `len`.
pub fn check_probability_vector(v: &[Scalar], len: usize, what: &str) -> Result<()> {
    if v.len() != len {
        return Err(Error::DimensionMismatch(format!(
            "{what} has length {}, expected {len}",
            v.len()
        )));
    }
    if let Some(i) = v.iter().position(|x| x.is_negative()) {
        return Err(Error::NotProbability(format!(
            "{what}[{i}] = {} is negative",
            v[i]
        )));
    }
    let total = sum(v);
    if !total.is_one() {
        return Err(Error::NotProbability(format!("{what} sums to {total}")));
    }
    Ok(())
}

pub fn format_vector(v: &[Scalar]) -> Vec<String> {
    v.iter().map(format_scalar).collect()
}

pub fn parse_vector<S: AsRef<str>>(v: &[S]) -> Result<Vec<Scalar>> {
    v.iter().map(|s| parse_scalar(s.as_ref())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_scalar("0.05").unwrap(), ratio(1, 20));
        assert_eq!(parse_scalar("0.0625").unwrap(), ratio(1, 16));
        assert_eq!(parse_scalar("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_scalar(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_scalar("3.").unwrap(), int(3));
        assert_eq!(parse_scalar("+7").unwrap(), int(7));
    }

    #[test]
    fn parses_fractions_in_lowest_terms() {
        let x = parse_scalar("6/-8").unwrap();
        assert_eq!(x, ratio(-3, 4));
        assert_eq!(format_scalar(&x), "-3/4");
        assert_eq!(format_scalar(&parse_scalar("10/5").unwrap()), "2");
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "", "abc", "1/0", "1e-3", "1.2.3", "-", ".", "1/", "0x10", "1/2/3",
        ] {
            assert!(parse_scalar(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn probability_checks() {
        assert!(is_probability_vector(&[ratio(1, 3), ratio(2, 3)]));
        assert!(!is_probability_vector(&[ratio(1, 3), ratio(1, 3)]));
        assert!(!is_probability_vector(&[ratio(-1, 3), ratio(4, 3)]));
        assert!(!is_probability_vector(&[]));
    }
}
