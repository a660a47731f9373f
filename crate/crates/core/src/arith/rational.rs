use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Longest accepted textual rational. Keeps parsing linear-ish on hostile input.
pub const MAX_RATIONAL_LEN: usize = 4096;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p/q"` or `"p"`, with an optional sign on `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if s.len() > MAX_RATIONAL_LEN {
        return Err(Error::Parse(format!("rational longer than {MAX_RATIONAL_LEN} bytes")));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(num)?;
    let den = match den {
        Some(d) => {
            if d.starts_with(['+', '-']) {
                return Err(Error::Parse(format!("signed denominator in {s:?}")));
            }
            parse_int(d)?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {s:?}")));
    }
    BigInt::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` when `q = 1`.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

pub fn pow2(e: u32) -> Rational {
    from_big(BigInt::one() << e)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn max_abs<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Rational {
    xs.into_iter().map(|x| x.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn exact_sqrt(x: &Rational) -> Option<Rational> {
    exact_root(x, 2)
}

/// Exact `n`-th root of a non-negative rational, if one exists.
pub fn exact_root(x: &Rational, n: u32) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let p = x.numer().to_biguint()?;
    let q = x.denom().to_biguint()?;
    let rp = p.nth_root(n);
    let rq = q.nth_root(n);
    if rp.pow(n) == p && rq.pow(n) == q {
        Some(Rational::new(rp.into(), rq.into()))
    } else {
        None
    }
}

/// Smallest dyadic `k / 2^bits` that is `>= x`.
pub fn dyadic_ceil(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = (x * from_big(scale.clone())).ceil().to_integer();
    Rational::new(scaled, scale)
}

/// Largest dyadic `k / 2^bits` that is `<= x`.
pub fn dyadic_floor(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = (x * from_big(scale.clone())).floor().to_integer();
    Rational::new(scaled, scale)
}

/// Lossy conversion for reporting and Monte-Carlo sampling only.
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub mod serde_rational {
    //! `#[serde(with = ...)]` helpers that encode rationals as canonical strings.
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&fmt_rational(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| parse_rational(s).map_err(de::Error::custom)).collect()
        }
    }

    pub mod matrix {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(rows.len()))?;
            for row in rows {
                let row: Vec<String> = row.iter().map(fmt_rational).collect();
                seq.serialize_element(&row)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
            let v = Vec::<Vec<String>>::deserialize(d)?;
            v.iter()
                .map(|row| row.iter().map(|s| parse_rational(s).map_err(de::Error::custom)).collect())
                .collect()
        }
    }
}
