//! Exact rational scalars and their text form.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value reduced
//! with a positive denominator. Text form is `"p/q"`, or `"p"` when `q = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| rat(v)).collect()
}

/// Parses `"p/q"` or `"p"`; rejects a zero denominator.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses a comma-separated list such as `0,-2,3,0,5,5` or `1/2,3`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

/// Multiplies a rational row by the positive lcm of its denominators.
/// Signs and ratios between entries are preserved.
pub fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    integer_row_scaled(row).0
}

/// Like [`integer_row`], also returning the scale factor used.
pub fn integer_row_scaled(row: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints = row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    (ints, lcm)
}

/// Divides an integer vector by the gcd of its entries (no-op for zero).
pub fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_negative(value: &Rational) -> bool {
    value.is_negative()
}

/// Serde adapters for the string form.
pub mod serde_rational {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        format_rational(value).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            values: &[Rational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            values
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| parse_rational(t))
                .collect::<Result<_>>()
                .map_err(de::Error::custom)
        }
    }

    pub mod rows {
        use super::*;

        pub fn serialize<S: Serializer>(
            rows: &[Vec<Rational>],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            rows.iter()
                .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
            let texts = Vec::<Vec<String>>::deserialize(d)?;
            texts
                .iter()
                .map(|r| r.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()
                .map_err(de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert_eq!(parse_rational("-6/4").unwrap(), rat_frac(-3, 2));
        assert_eq!(parse_rational(" 2 / -4 ").unwrap(), rat_frac(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn format_is_reduced() {
        assert_eq!(format_rational(&rat_frac(4, 2)), "2");
        assert_eq!(format_rational(&rat_frac(3, -6)), "-1/2");
        assert_eq!(format_rational(&rat(0)), "0");
    }

    #[test]
    fn integer_rows_keep_ratios() {
        let row = vec![rat_frac(1, 2), rat_frac(-2, 3), rat(0)];
        let ints = integer_row(&row);
        assert_eq!(ints, vec![BigInt::from(3), BigInt::from(-4), BigInt::from(0)]);
    }

    #[test]
    fn list_parsing() {
        let v = parse_rational_list("0,-2,3,0,5,5").unwrap();
        assert_eq!(v, rat_vec(&[0, -2, 3, 0, 5, 5]));
    }
}
