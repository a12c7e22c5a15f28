//! Exact rational scalars.
//!
//! `Q` is an arbitrary-precision rational. All arithmetic in this crate is
//! exact; nothing is ever rounded.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `num/den`. Panics if `den == 0`.
pub fn qr(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `(-1)^k` as a rational.
pub fn sign_pow(k: u32) -> Q {
    if k % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Render as `num/den` (denominator always explicit, in lowest terms,
/// denominator positive). Used for witnesses and serialized matrices so the
/// output is unambiguous and bit-stable.
pub fn fmt_frac(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Render compactly: integer values without a denominator, otherwise `num/den`.
pub fn fmt_short(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        fmt_frac(x)
    }
}

/// Parse `"-3/4"`, `"3"`, etc.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let d: BigInt = den
        .parse()
        .map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {t:?}"));
    }
    Ok(BigRational::new(n, d))
}

/// True if `x` is a (possibly negative) integer.
pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Absolute value.
pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["3/4", "-3/4", "0/1", "17/1", "-5/3"] {
            let x = parse_q(s).unwrap();
            assert_eq!(fmt_frac(&x), if s == "0/1" { "0/1".into() } else { s.to_string() });
        }
        assert_eq!(parse_q("6/8").unwrap(), qr(3, 4));
        assert_eq!(parse_q("3/-4").unwrap(), qr(-3, 4));
        assert_eq!(fmt_frac(&parse_q("3/-4").unwrap()), "-3/4");
        assert_eq!(parse_q("2").unwrap(), q(2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn short_format() {
        assert_eq!(fmt_short(&q(-7)), "-7");
        assert_eq!(fmt_short(&qr(1, 2)), "1/2");
    }

    #[test]
    fn signs() {
        assert_eq!(sign_pow(0), q(1));
        assert_eq!(sign_pow(3), q(-1));
    }
}
