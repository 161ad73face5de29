//! Scalars that remember whether they were given as exact rationals.
//!
//! Threshold tests such as `t <= r^4` are decided in exact rational
//! arithmetic when both sides are exact, and in floating point with a
//! relative guard band of [`GUARD_BAND`] otherwise. Values inside the guard
//! band compare as equal and are flagged so callers can warn about them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative tolerance under which two floating-point thresholds are treated as equal.
pub const GUARD_BAND: f64 = 1e-15;

/// Largest exponent numerator/denominator raised exactly; beyond it we fall back to floats.
const MAX_EXACT_EXPONENT: i64 = 4096;

#[derive(Clone, Debug)]
pub struct Scalar {
    value: f64,
    exact: Option<BigRational>,
}

impl Scalar {
    pub fn from_f64(value: f64) -> Self {
        Scalar { value, exact: None }
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(v: i64) -> Self {
        Self::ratio(v, 1)
    }

    pub fn rational(q: BigRational) -> Self {
        Scalar {
            value: rational_to_f64(&q),
            exact: Some(q),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Exact when both operands are exact.
    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Scalar::rational(a * b),
            _ => Scalar::from_f64(self.value * other.value),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Scalar::rational(a - b),
            _ => Scalar::from_f64(self.value - other.value),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Scalar::rational(a + b),
            _ => Scalar::from_f64(self.value + other.value),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) if !b.is_zero() => Scalar::rational(a / b),
            _ => Scalar::from_f64(self.value / other.value),
        }
    }

    pub fn abs(&self) -> Scalar {
        match &self.exact {
            Some(q) => Scalar::rational(q.abs()),
            None => Scalar::from_f64(self.value.abs()),
        }
    }

    /// `self^exponent` for positive `self`. The result stays exact when the
    /// exponent is an exact rational `p/q` and `self^p` is a perfect `q`-th power.
    pub fn pow(&self, exponent: &Scalar) -> Scalar {
        if let (Some(base), Some((p, q))) = (&self.exact, exponent.small_ratio()) {
            if base.is_positive() {
                let raised = pow_int(base, p);
                if q == 1 {
                    return Scalar::rational(raised);
                }
                if let Some(root) = exact_root(&raised, q as u32) {
                    return Scalar::rational(root);
                }
            }
        }
        Scalar::from_f64(self.value.powf(exponent.value))
    }

    pub fn powi(&self, exponent: i32) -> Scalar {
        match &self.exact {
            Some(q) => Scalar::rational(pow_int(q, exponent as i64)),
            None => Scalar::from_f64(self.value.powi(exponent)),
        }
    }

    /// Numerator and denominator of an exact value, when both fit the exact-power budget.
    fn small_ratio(&self) -> Option<(i64, i64)> {
        let q = self.exact.as_ref()?;
        let p = q.numer().to_i64()?;
        let d = q.denom().to_i64()?;
        (p.abs() <= MAX_EXACT_EXPONENT && d <= MAX_EXACT_EXPONENT).then_some((p, d))
    }

    pub fn cmp_value(&self, other: &Scalar) -> Comparison {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Comparison::exact(a.cmp(b)),
            _ => Comparison::float(self.value, other.value),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.value == other.value,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Some(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            None => write!(f, "{:?}", self.value),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// `"1/8"` and `"3"` parse exactly; anything with a decimal point or
    /// exponent parses as a float.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
            let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            return Ok(Scalar::rational(BigRational::new(n, d)));
        }
        if let Ok(n) = s.parse::<BigInt>() {
            return Ok(Scalar::rational(BigRational::from_integer(n)));
        }
        let v: f64 = s.parse().map_err(|_| bad("not a number"))?;
        if !v.is_finite() {
            return Err(bad("not finite"));
        }
        Ok(Scalar::from_f64(v))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of a threshold comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    #[serde(with = "ordering_serde")]
    pub ordering: Ordering,
    /// Decided by exact rational arithmetic.
    pub exact: bool,
    /// Float comparison fell inside the guard band and was declared equal.
    pub near_boundary: bool,
}

mod ordering_serde {
    use std::cmp::Ordering;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(o: &Ordering, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match o {
            Ordering::Less => "less",
            Ordering::Equal => "equal",
            Ordering::Greater => "greater",
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ordering, D::Error> {
        match String::deserialize(d)?.as_str() {
            "less" => Ok(Ordering::Less),
            "equal" => Ok(Ordering::Equal),
            "greater" => Ok(Ordering::Greater),
            other => Err(serde::de::Error::custom(format!("bad ordering `{other}`"))),
        }
    }
}

impl Comparison {
    fn exact(ordering: Ordering) -> Self {
        Comparison {
            ordering,
            exact: true,
            near_boundary: false,
        }
    }

    fn float(a: f64, b: f64) -> Self {
        let scale = a.abs().max(b.abs());
        if (a - b).abs() <= GUARD_BAND * scale {
            Comparison {
                ordering: Ordering::Equal,
                exact: false,
                near_boundary: true,
            }
        } else {
            Comparison {
                ordering: a.partial_cmp(&b).unwrap_or(Ordering::Equal),
                exact: false,
                near_boundary: false,
            }
        }
    }

    pub fn is_le(&self) -> bool {
        self.ordering != Ordering::Greater
    }

    pub fn is_ge(&self) -> bool {
        self.ordering != Ordering::Less
    }

    pub fn is_eq(&self) -> bool {
        self.ordering == Ordering::Equal
    }
}

/// Compares `lhs` with `base^exponent` for positive `lhs` and `base`.
///
/// With exact inputs and exponent `p/q` (q > 0) the test `lhs^q <=> base^p`
/// is evaluated in big rationals, so boundary cases like `t = r^4` are decided
/// without rounding.
pub fn cmp_to_power(lhs: &Scalar, base: &Scalar, exponent: &Scalar) -> Comparison {
    if let (Some(l), Some(b), Some((p, q))) = (&lhs.exact, &base.exact, exponent.small_ratio()) {
        if l.is_positive() && b.is_positive() {
            let left = pow_int(l, q);
            let right = pow_int(b, p);
            return Comparison::exact(left.cmp(&right));
        }
    }
    let rhs = if exponent.value.fract() == 0.0 && exponent.value.abs() < 1e6 {
        base.value.powi(exponent.value as i32)
    } else {
        base.value.powf(exponent.value)
    };
    Comparison::float(lhs.value, rhs)
}

fn pow_int(q: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        Pow::pow(q, e as u64)
    } else {
        Pow::pow(q.recip(), (-e) as u64)
    }
}

fn exact_root(q: &BigRational, n: u32) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let num = q.numer().nth_root(n);
    let den = q.denom().nth_root(n);
    let ok = Pow::pow(&num, n) == *q.numer() && Pow::pow(&den, n) == *q.denom();
    ok.then(|| BigRational::new(num, den))
}

/// Correctly handles numerators and denominators beyond the f64 range by
/// scaling through their bit lengths.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 9.0e15 && d < 9.0e15 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift >= 0 {
        q / BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        q * BigRational::from_integer(BigInt::one() << (-shift) as usize)
    };
    let n = scaled.numer().to_f64().unwrap_or(f64::NAN);
    let d = scaled.denom().to_f64().unwrap_or(f64::NAN);
    (n / d) * 2f64.powi(shift as i32)
}
