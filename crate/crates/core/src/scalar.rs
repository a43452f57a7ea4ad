//! Exact rational scalars.
//!
//! Everything in the crate is computed over `Q`; there is no floating point
//! anywhere. Text input accepts integers, fractions `a/b` and terminating
//! decimals. Anything else (`sqrt(2)`, `pi`, exponents) is rejected since it
//! cannot be represented exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{input, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `(-1)^e` as a scalar.
pub fn sign(e: i64) -> Q {
    if e.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

/// Parse `"a"`, `"a/b"` or a terminating decimal such as `"-1.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    if t.is_empty() {
        return input("empty scalar");
    }
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = parse_int(a)?;
        let den: BigInt = parse_int(b)?;
        if den.is_zero() {
            return input(format!("zero denominator in {t:?}"));
        }
        return Ok(Q::new(num, den));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return input(format!("not an exact rational: {t:?}"));
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip_abs.is_empty() { BigInt::zero() } else { parse_int(ip_abs)? };
        let frac: BigInt = parse_int(fp)?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let mut v = Q::new(whole * &den + frac, den);
        if neg {
            v = -v;
        }
        return Ok(v);
    }
    Ok(Q::from_integer(parse_int(t)?))
}

fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.trim_start_matches(['-', '+']);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return input(format!("not an exact rational: {s:?}"));
    }
    t.parse::<BigInt>().or_else(|_| input(format!("not an integer: {s:?}")))
}

/// Canonical `"num/den"` rendering (denominator always present).
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Short rendering: integers without a denominator.
pub fn fmt_q_short(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        fmt_q(x)
    }
}

pub fn is_pm_one(x: &Q) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("3/6").unwrap(), qf(1, 2));
        assert_eq!(parse_q("-1.25").unwrap(), qf(-5, 4));
        assert_eq!(parse_q("-0.5").unwrap(), qf(-1, 2));
        assert_eq!(parse_q("7").unwrap(), q(7));
    }

    #[test]
    fn rejects_irrational_spellings() {
        for s in ["sqrt(2)", "pi", "1e3", "1/0", "", "1.", "0x10"] {
            assert!(parse_q(s).is_err(), "{s}");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(fmt_q(&qf(2, -4)), "-1/2");
        assert_eq!(fmt_q(&q(3)), "3/1");
        assert_eq!(fmt_q_short(&q(3)), "3");
    }
}
