//! Rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Parses "p/q", "p" or "-p/q" (surrounding whitespace allowed).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let err = || Error::Parse(format!("bad rational {:?}", s));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = den.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(n, d))
}

/// Human form: "3", "-5/2".
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Interchange form: always "p/q" with q > 0.
pub fn json_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Truncated decimal expansion with `k` digits after the point.
pub fn to_decimal(r: &Rat, k: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = num_traits::pow(BigInt::from(10), k);
    let scaled = (a.numer() * &scale) / a.denom();
    let (ip, fp) = scaled.div_rem(&scale);
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&ip.to_string());
    if k > 0 {
        let f = fp.to_string();
        s.push('.');
        for _ in f.len()..k {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}

/// Least common multiple of the denominators.
pub fn lcm_den<'a, I: IntoIterator<Item = &'a Rat>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Rational gcd: the positive generator of the subgroup of Q spanned by the inputs.
pub fn rat_gcd<'a, I: IntoIterator<Item = &'a Rat>>(it: I) -> Rat {
    let v: Vec<&Rat> = it.into_iter().collect();
    let l = lcm_den(v.iter().copied());
    let g = v
        .iter()
        .fold(BigInt::zero(), |acc, r| acc.gcd(&(r.numer() * (&l / r.denom()))));
    Rat::new(g, l)
}

/// Floor of a rational as an integer.
pub fn floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&json_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_json(&v).map_err(serde::de::Error::custom)
    }

    /// Accepts "p/q" strings and plain JSON integers.
    pub fn from_json(v: &serde_json::Value) -> Result<Rat> {
        match v {
            serde_json::Value::String(s) => parse_rat(s),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(int)
                .ok_or_else(|| Error::Parse(format!("non-integer number {}", n))),
            other => Err(Error::Parse(format!("expected rational, got {}", other))),
        }
    }
}

pub mod serde_rat_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&json_rat(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter()
            .map(|x| serde_rat::from_json(x).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat(" 7 ").unwrap(), int(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a").is_err());
        assert_eq!(fmt_rat(&rat(10, 5)), "2");
        assert_eq!(json_rat(&int(2)), "2/1");
        assert_eq!(json_rat(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn decimal() {
        assert_eq!(to_decimal(&rat(59, 9), 4), "6.5555");
        assert_eq!(to_decimal(&rat(-1, 8), 3), "-0.125");
        assert_eq!(to_decimal(&rat(1, 100), 1), "0.0");
        assert_eq!(to_decimal(&int(3), 0), "3");
    }

    #[test]
    fn gcd_of_rationals() {
        assert_eq!(rat_gcd(&[int(1), rat(3, 2)]), rat(1, 2));
        assert_eq!(rat_gcd(&[int(2), int(3)]), int(1));
        assert_eq!(rat_gcd(&[rat(2, 3), rat(4, 9)]), rat(2, 9));
    }
}
