use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Enclosure, IntPolynomial, NFElem, NumberField};

pub(crate) fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, String> {
    let parse = |t: &str| BigInt::from_str(t.trim()).map_err(|e| format!("{t:?}: {e}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d == BigInt::from(0) {
                return Err(format!("{s:?}: zero denominator"));
            }
            Ok(BigRational::new(parse(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse(s)?)),
    }
}

/// Integer vectors as arrays of decimal strings.
pub fn bigint_vecs<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    rows.serialize(s)
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs().iter().map(ToString::to_string).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| BigInt::from_str(s).map_err(D::Error::custom))
            .collect::<Result<_, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [rational_string(&self.lo), rational_string(&self.hi)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Enclosure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        Ok(Enclosure {
            lo: parse_rational(&lo).map_err(D::Error::custom)?,
            hi: parse_rational(&hi).map_err(D::Error::custom)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct NFElemRepr {
    minpoly: IntPolynomial,
    root_index: usize,
    coeffs: Vec<String>,
}

impl Serialize for NFElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NFElemRepr {
            minpoly: self.field().minpoly().clone(),
            root_index: self.field().root_index(),
            coeffs: self.coeffs().iter().map(rational_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NFElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = NFElemRepr::deserialize(d)?;
        let field = NumberField::new(r.minpoly, r.root_index).map_err(D::Error::custom)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|c| parse_rational(c).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() != field.degree() {
            return Err(D::Error::custom("coefficient count differs from field degree"));
        }
        Ok(NFElem::from_coeffs(&field, coeffs))
    }
}
