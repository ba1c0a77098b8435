//! Exact rationals that serialize as `"p/q"` strings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn new(numer: i64, denom: i64) -> Self {
        Exact(BigRational::new(numer.into(), denom.into()))
    }

    pub fn zero() -> Self {
        Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Exact(BigRational::one())
    }

    /// `2^{-exp}`.
    pub fn dyadic(exp: u32) -> Self {
        Exact(BigRational::new(BigInt::one(), BigInt::one() << exp))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Exact {
    fn from(r: BigRational) -> Self {
        Exact(r)
    }
}

/// Always prints `p/q`, including `1/1`, so the textual form is uniform.
impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Exact {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r = BigRational::from_str(s.trim()).map_err(|e| format!("bad rational `{s}`: {e}"))?;
        Ok(Exact(r))
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        assert_eq!(Exact::new(6, 70).to_string(), "3/35");
        assert_eq!(Exact::one().to_string(), "1/1");
        assert_eq!(Exact::dyadic(4).to_string(), "1/16");
        assert_eq!("3/35".parse::<Exact>().unwrap(), Exact::new(3, 35));
        assert_eq!("2".parse::<Exact>().unwrap(), Exact::new(2, 1));
        assert!("3/0".parse::<Exact>().is_err());
        assert!("x".parse::<Exact>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let v = vec![Exact::new(1, 10), Exact::dyadic(6)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/10","1/64"]"#);
        assert_eq!(serde_json::from_str::<Vec<Exact>>(&s).unwrap(), v);
    }
}
