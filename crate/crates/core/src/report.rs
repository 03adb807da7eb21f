//! JSON helpers shared by the dataset and report schemas.
//!
//! Integers travel as JSON numbers of arbitrary length; rationals as strings
//! like `"-16/3"`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub(crate) fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub(crate) fn ser_rational_opt<S: Serializer>(
    q: &Option<BigRational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => ser_rational(q, s),
        None => s.serialize_none(),
    }
}

pub(crate) fn de_rational<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let text = String::deserialize(d)?;
    BigRational::from_str(&text).map_err(|_| {
        D::Error::custom(format!(
            "expected a rational like \"-16/3\", found {text:?}"
        ))
    })
}

pub(crate) fn de_rational_opt<'de, D: Deserializer<'de>>(
    d: D,
) -> Result<Option<BigRational>, D::Error> {
    match Option::<String>::deserialize(d)? {
        None => Ok(None),
        Some(text) => BigRational::from_str(&text)
            .map(Some)
            .map_err(|_| D::Error::custom(format!("expected a rational, found {text:?}"))),
    }
}

pub(crate) fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    let n = serde_json::Number::from_str(&x.to_string()).map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

pub(crate) fn ser_bigint_opt<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => ser_bigint(x, s),
        None => s.serialize_none(),
    }
}

pub(crate) fn de_bigint<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    number_to_bigint(&serde_json::Number::deserialize(d)?)
}

fn number_to_bigint<E: serde::de::Error>(n: &serde_json::Number) -> Result<BigInt, E> {
    BigInt::from_str(&n.to_string())
        .map_err(|_| E::custom(format!("expected an integer, found {n}")))
}

pub(crate) fn de_bigint_opt<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
    Option::<serde_json::Number>::deserialize(d)?
        .map(|n| number_to_bigint(&n))
        .transpose()
}

pub(crate) fn de_bigint_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    Vec::<serde_json::Number>::deserialize(d)?
        .iter()
        .map(number_to_bigint)
        .collect()
}

pub(crate) fn ser_bigint_vec<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(
            &serde_json::Number::from_str(&x.to_string()).map_err(serde::ser::Error::custom)?,
        )?;
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap {
        #[serde(serialize_with = "ser_bigint", deserialize_with = "de_bigint")]
        x: BigInt,
    }

    #[test]
    fn big_integers_round_trip() {
        let src = r#"{"x":-123456789012345678901234567890}"#;
        let w: Wrap = serde_json::from_str(src).unwrap();
        assert_eq!(w.x.to_string(), "-123456789012345678901234567890");
        assert_eq!(serde_json::to_string(&w).unwrap(), src);
        assert!(serde_json::from_str::<Wrap>(r#"{"x":1.5}"#).is_err());
        assert!(serde_json::from_str::<Wrap>(r#"{"x":"7"}"#).is_err());
    }

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Mixed {
        #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
        q: BigRational,
        #[serde(
            serialize_with = "ser_rational_opt",
            deserialize_with = "de_rational_opt"
        )]
        r: Option<BigRational>,
        #[serde(serialize_with = "ser_bigint_vec", deserialize_with = "de_bigint_vec")]
        v: Vec<BigInt>,
        #[serde(serialize_with = "ser_bigint_opt", deserialize_with = "de_bigint_opt")]
        w: Option<BigInt>,
    }

    #[test]
    fn mixed_round_trip() {
        let src = r#"{"q":"-16/3","r":null,"v":[2,0,-99999999999999999999],"w":7}"#;
        let m: Mixed = serde_json::from_str(src).unwrap();
        assert_eq!(m.q, BigRational::new((-16).into(), 3.into()));
        assert_eq!(serde_json::to_string(&m).unwrap(), src);
        assert!(serde_json::from_str::<Mixed>(r#"{"q":"x","r":null,"v":[],"w":null}"#).is_err());
    }
}
