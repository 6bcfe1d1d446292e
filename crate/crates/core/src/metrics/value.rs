use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const UNDEFINED_TOKEN: &str = "nan";

/// A metric value, or `Undefined` when a denominator is zero.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Metric {
    Value(f64),
    #[default]
    Undefined,
}

impl Metric {
    pub fn ratio(num: f64, den: f64) -> Self {
        if den == 0.0 {
            Metric::Undefined
        } else {
            Metric::Value(num / den)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Metric::Value(v) => Some(v),
            Metric::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Metric::Value(_))
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            Metric::Value(v) => Metric::Value(f(v)),
            Metric::Undefined => Metric::Undefined,
        }
    }

    pub fn zip(self, other: Self, f: impl FnOnce(f64, f64) -> f64) -> Self {
        match (self, other) {
            (Metric::Value(a), Metric::Value(b)) => Metric::Value(f(a, b)),
            _ => Metric::Undefined,
        }
    }

    /// Fixed 4-decimal rendering used in report tables.
    pub fn fmt4(self) -> String {
        match self {
            Metric::Value(v) => format!("{v:.4}"),
            Metric::Undefined => UNDEFINED_TOKEN.to_string(),
        }
    }
}

impl From<Option<f64>> for Metric {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Metric::Undefined, Metric::Value)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Value(v) => write!(f, "{v}"),
            Metric::Undefined => f.write_str(UNDEFINED_TOKEN),
        }
    }
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Metric::Value(v) => s.serialize_f64(*v),
            Metric::Undefined => s.serialize_str(UNDEFINED_TOKEN),
        }
    }
}

impl<'de> Deserialize<'de> for Metric {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Metric::Value(v)),
            Raw::Text(t) if t == UNDEFINED_TOKEN => Ok(Metric::Undefined),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad metric value {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let v = vec![Metric::Value(0.25), Metric::Undefined];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[0.25,"nan"]"#);
        let back: Vec<Metric> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn formatting() {
        assert_eq!(Metric::Value(0.19891).fmt4(), "0.1989");
        assert_eq!(Metric::Undefined.fmt4(), "nan");
        assert_eq!(Metric::ratio(1.0, 0.0), Metric::Undefined);
    }
}
