use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An L^p exponent in (0, ∞].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p > 0.0 && p.is_finite() {
            Ok(Exponent::Finite(p))
        } else if p == f64::INFINITY {
            Ok(Exponent::Infinite)
        } else {
            Err(Error::Domain(format!("exponent {p} must lie in (0, ∞]")))
        }
    }

    /// 1/p, with 1/∞ = 0.
    pub fn reciprocal(&self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinite => 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Finite(p) => *p,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// Some(p/2) when p is a positive even integer.
    pub fn even_half(&self) -> Option<u32> {
        match self {
            Exponent::Finite(p) if *p <= 1e6 && (p / 2.0).fract() == 0.0 => Some((p / 2.0) as u32),
            _ => None,
        }
    }

    /// Conjugate exponent p′ with 1/p + 1/p′ = 1, defined for p ≥ 1.
    pub fn conjugate(&self) -> Result<Exponent> {
        match self {
            Exponent::Infinite => Ok(Exponent::Finite(1.0)),
            Exponent::Finite(p) if *p == 1.0 => Ok(Exponent::Infinite),
            Exponent::Finite(p) if *p > 1.0 => Ok(Exponent::Finite(p / (p - 1.0))),
            Exponent::Finite(p) => Err(Error::Domain(format!("conjugate exponent needs p ≥ 1, got {p}"))),
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.value().partial_cmp(&other.value())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "inf" | "Inf" | "INF" | "infinity" | "∞" => Ok(Exponent::Infinite),
            _ => {
                let p: f64 = if let Some((num, den)) = s.split_once('/') {
                    let num: f64 = num.trim().parse().map_err(|_| Error::Parse(format!("bad exponent {s:?}")))?;
                    let den: f64 = den.trim().parse().map_err(|_| Error::Parse(format!("bad exponent {s:?}")))?;
                    num / den
                } else {
                    s.parse().map_err(|_| Error::Parse(format!("bad exponent {s:?}")))?
                };
                if p.is_infinite() {
                    return Err(Error::Parse(format!("use `inf` for the infinite exponent, got {s:?}")));
                }
                Exponent::finite(p)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(p) => Exponent::finite(p).map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// p′ for p ∈ [1, ∞].
pub fn conjugate_exponent(p: Exponent) -> Result<Exponent> {
    p.conjugate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_exponent(Exponent::Finite(2.0)).unwrap(), Exponent::Finite(2.0));
        assert_eq!(conjugate_exponent(Exponent::Finite(1.0)).unwrap(), Exponent::Infinite);
        assert_eq!(conjugate_exponent(Exponent::Infinite).unwrap(), Exponent::Finite(1.0));
        let q = conjugate_exponent(Exponent::Finite(4.0 / 3.0)).unwrap().value();
        assert!((q - 4.0).abs() < 1e-14);
        assert!(conjugate_exponent(Exponent::Finite(0.5)).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinite);
        assert_eq!("2.5".parse::<Exponent>().unwrap(), Exponent::Finite(2.5));
        assert_eq!("4/3".parse::<Exponent>().unwrap().to_string(), (4.0f64 / 3.0).to_string());
        assert!("0".parse::<Exponent>().is_err());
        assert!("-1".parse::<Exponent>().is_err());
        assert!("NaN".parse::<Exponent>().is_err());
        assert!("1e999".parse::<Exponent>().is_err());
        assert_eq!(Exponent::Infinite.to_string(), "inf");
    }

    #[test]
    fn even_detection() {
        assert_eq!(Exponent::Finite(4.0).even_half(), Some(2));
        assert_eq!(Exponent::Finite(3.0).even_half(), None);
        assert_eq!(Exponent::Finite(2.5).even_half(), None);
        assert_eq!(Exponent::Infinite.even_half(), None);
    }

    #[test]
    fn serde_round_trip() {
        let json = serde_json::to_string(&[Exponent::Finite(1.5), Exponent::Infinite]).unwrap();
        assert_eq!(json, r#"[1.5,"inf"]"#);
        let back: Vec<Exponent> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Exponent::Finite(1.5), Exponent::Infinite]);
        assert!(serde_json::from_str::<Exponent>("-2").is_err());
    }
}
