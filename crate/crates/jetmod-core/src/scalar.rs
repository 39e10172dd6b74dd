//! Exact rational scalars.
//!
//! The whole crate computes over `Rat`, arbitrary-precision rationals kept in
//! lowest terms with a positive denominator. Scalars serialize as strings
//! `"p/q"`, with `/q` omitted when the denominator is 1, which is exactly the
//! `Display`/`FromStr` behaviour of the underlying type.

use crate::error::{Error, Result};
use num_bigint::BigInt;

pub type Rat = num_rational::BigRational;

/// The integer `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The fraction `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| Error::InvalidInput(format!("rational `{s}`: {e}")))
}

/// serde adapter: a single rational as a `"p/q"` string.
pub mod rat_serde {
    use super::Rat;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// serde adapter: a vector of rationals as `"p/q"` strings.
pub mod rat_vec_serde {
    use super::Rat;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| super::parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
