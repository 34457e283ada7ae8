//! Helpers around [`BigRational`], the only number type used in the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses the canonical text form `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// The positive rational `s` such that `s * v` is a primitive integer vector
/// whose first nonzero entry is positive. Returns one for the zero vector.
pub fn primitive_scale<'a, I>(values: I) -> Rational
where
    I: IntoIterator<Item = &'a Rational>,
{
    let mut lcm_den = BigInt::one();
    let mut gcd_num = BigInt::zero();
    let mut first_sign: Option<bool> = None;
    for v in values {
        if v.is_zero() {
            continue;
        }
        if first_sign.is_none() {
            first_sign = Some(v.is_negative());
        }
        lcm_den = lcm_den.lcm(v.denom());
        gcd_num = gcd_num.gcd(v.numer());
    }
    match first_sign {
        None => Rational::one(),
        Some(neg) => {
            let s = Rational::new(lcm_den, gcd_num);
            if neg {
                -s
            } else {
                s
            }
        }
    }
}

/// Binomial coefficient with `C(n, k) = 0` for `k > n` or negative `n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Bit length of the numerator plus denominator; used as a pivot cost.
pub fn bit_size(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(parse_rational(" 4 / -8 ").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(5)), "5");
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![rat(0), ratio(-1, 2), ratio(3, 4)];
        let s = primitive_scale(&v);
        let w: Vec<_> = v.iter().map(|x| x * &s).collect();
        assert_eq!(w, vec![rat(0), rat(2), rat(-3)]);
        assert_eq!(primitive_scale(&[rat(0)]), rat(1));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(12, 7), BigInt::from(792));
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
