//! Logarithmic capacity: closed forms, a Fekete-point oracle, a discretized
//! equilibrium-measure solver and reciprocal-log union bounds.
//!
//! Everything is carried as `ln cap`, with `-inf` for polar sets.

mod closed_form;
mod curves;
mod equilibrium;
mod fekete;
mod union;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use closed_form::{
    arc_log_capacity, arc_log_capacity_from_logs, disc_log_capacity, piece_log_capacity_bounds,
    point_log_capacity, segment_log_capacity,
};
pub use equilibrium::{equilibrium_energy, EquilibriumResult};
pub use fekete::{fekete_log_capacity, fekete_raw, FeketeConfig, FeketeEstimate};
pub use union::{set_union_bounds, union_log_capacity, UnionBounds};

/// Natural log of a logarithmic capacity; `-inf` encodes a polar set.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogCapacity(f64);

impl LogCapacity {
    pub fn new(log_value: f64) -> Self {
        debug_assert!(!log_value.is_nan());
        LogCapacity(log_value)
    }

    pub fn polar() -> Self {
        LogCapacity(f64::NEG_INFINITY)
    }

    pub fn log_value(&self) -> f64 {
        self.0
    }

    pub fn is_polar(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `cap` in linear scale; underflows to 0 for the slit family's arcs.
    pub fn capacity(&self) -> f64 {
        self.0.exp()
    }

    /// `1 / (-ln cap)`, the Wiener integrand factor; 0 for polar sets.
    pub fn reciprocal_log(&self) -> f64 {
        if self.is_polar() {
            0.0
        } else {
            -1.0 / self.0
        }
    }

    /// `ln cap(s E) = ln s + ln cap(E)`.
    pub fn scaled(&self, s: f64) -> Self {
        LogCapacity(self.0 + s.ln())
    }
}

impl fmt::Display for LogCapacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polar() {
            f.write_str("-inf")
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

/// Finite values as JSON numbers (shortest round-trip form); `-inf` as the string `"-inf"`.
impl Serialize for LogCapacity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_log(self.0, serializer)
    }
}

impl<'de> Deserialize<'de> for LogCapacity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserialize_log(deserializer).map(LogCapacity)
    }
}

pub(crate) fn serialize_log<S: Serializer>(v: f64, serializer: S) -> Result<S::Ok, S::Error> {
    if v == f64::NEG_INFINITY {
        serializer.serialize_str("-inf")
    } else if v == f64::INFINITY {
        serializer.serialize_str("inf")
    } else {
        serializer.serialize_f64(v)
    }
}

pub(crate) fn deserialize_log<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(deserializer)? {
        Raw::Num(v) => Ok(v),
        Raw::Text(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        Raw::Text(s) if s == "inf" => Ok(f64::INFINITY),
        Raw::Text(s) => Err(serde::de::Error::custom(format!("bad log value `{s}`"))),
    }
}

/// `serde(with = ...)` helper for plain `f64` fields that may be infinite.
pub mod log_f64 {
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        super::serialize_log(*v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        super::deserialize_log(d)
    }
}

/// Weighted point masses on a compact set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub points: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn uniform(points: Vec<Complex64>) -> Self {
        let w = 1.0 / points.len() as f64;
        let weights = vec![w; points.len()];
        DiscreteMeasure { points, weights }
    }

    /// Weights are nonnegative and sum to one within `1e-12`.
    pub fn is_probability(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0.0) && (self.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12
    }

    /// `∑_{i≠j} w_i w_j ln|z_i - z_j|`.
    pub fn energy(&self) -> EnergyValue {
        let n = self.points.len();
        let mut e = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    e += self.weights[i] * self.weights[j] * (self.points[i] - self.points[j]).norm().ln();
                }
            }
        }
        EnergyValue { value: e }
    }
}

/// Logarithmic energy `I(μ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyValue {
    pub value: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_capacity_json() {
        let v = serde_json::to_string(&LogCapacity::polar()).unwrap();
        assert_eq!(v, "\"-inf\"");
        let back: LogCapacity = serde_json::from_str(&v).unwrap();
        assert!(back.is_polar());
        let x = LogCapacity::new(-34.07944154167984);
        let back: LogCapacity = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        assert_eq!(back.log_value().to_bits(), x.log_value().to_bits());
    }

    #[test]
    fn reciprocal_log_of_polar_is_zero() {
        assert_eq!(LogCapacity::polar().reciprocal_log(), 0.0);
        assert_eq!(LogCapacity::new(-4.0).reciprocal_log(), 0.25);
    }
}
