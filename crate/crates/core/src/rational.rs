//! Exact fractions. Values are always kept in lowest terms with a positive
//! denominator; JSON carries them as `{"num": …, "den": …}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

/// `num / den` reduced.
pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i128) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: WireInt,
    den: WireInt,
}

/// Integers that fit in 64 bits are emitted as JSON numbers, anything
/// larger as a decimal string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(i64),
    Big(String),
}

impl WireInt {
    fn from_big(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(x) => WireInt::Small(x),
            None => WireInt::Big(v.to_string()),
        }
    }

    fn into_big<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            WireInt::Small(x) => Ok(BigInt::from(x)),
            WireInt::Big(s) => s.parse().map_err(E::custom),
        }
    }
}

pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
    Wire { num: WireInt::from_big(value.numer()), den: WireInt::from_big(value.denom()) }.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let wire = Wire::deserialize(d)?;
    let num = wire.num.into_big()?;
    let den = wire.den.into_big()?;
    if den == BigInt::from(0) {
        return Err(serde::de::Error::custom("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Holder(#[serde(with = "super")] Rational);

    #[test]
    fn reduced_on_construction() {
        let r = ratio(6, -4);
        assert_eq!(*r.numer(), BigInt::from(-3));
        assert_eq!(*r.denom(), BigInt::from(2));
    }

    #[test]
    fn json_shape() {
        let text = serde_json::to_string(&Holder(ratio(-2, 11))).unwrap();
        assert_eq!(text, r#"{"num":-2,"den":11}"#);
        let back: Holder = serde_json::from_str(&text).unwrap();
        assert_eq!(back.0, ratio(-2, 11));
        assert!(serde_json::from_str::<Holder>(r#"{"num":1,"den":0}"#).is_err());
    }
}
