//! Serde adapters that keep arbitrary-precision values lossless in text formats.
//!
//! Integers travel as decimal strings and rationals as `{"num": "...", "den": "..."}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn parse_int<E: serde::de::Error>(s: &str) -> Result<BigInt, E> {
    s.parse::<BigInt>().map_err(|_| E::custom(format!("malformed integer {s:?}")))
}

/// `BigInt` as a decimal string.
pub mod dec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        parse_int(&s)
    }
}

/// `Vec<BigInt>` and `[BigInt; N]` as lists of decimal strings.
pub mod dec_seq {
    use super::*;

    pub fn serialize<S, T>(v: T, s: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        T: AsRef<[BigInt]>,
    {
        let strings: Vec<String> = v.as_ref().iter().map(ToString::to_string).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D, T>(d: D) -> Result<T, D::Error>
    where
        D: Deserializer<'de>,
        T: TryFrom<Vec<BigInt>>,
    {
        let strings = Vec::<String>::deserialize(d)?;
        let values = strings.iter().map(|s| parse_int(s)).collect::<Result<Vec<_>, D::Error>>()?;
        let len = values.len();
        T::try_from(values).map_err(|_| D::Error::custom(format!("unexpected length {len}")))
    }
}

#[derive(Serialize, Deserialize)]
struct RatRepr {
    num: String,
    den: String,
}

/// `BigRational` as `{"num": "...", "den": "..."}`.
pub mod rat {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        RatRepr { num: v.numer().to_string(), den: v.denom().to_string() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let repr = RatRepr::deserialize(d)?;
        let num = parse_int(&repr.num)?;
        let den: BigInt = parse_int(&repr.den)?;
        if den.sign() != num_bigint::Sign::Plus {
            return Err(D::Error::custom("denominator must be positive"));
        }
        Ok(BigRational::new(num, den))
    }
}

/// JSON value of a rational, in the same shape as [`rat`].
pub fn rational_json(v: &BigRational) -> serde_json::Value {
    serde_json::json!({"num": v.numer().to_string(), "den": v.denom().to_string()})
}
