//! Exact dyadic rationals `count / 2^denom_exp`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A probability of the form `count / 2^denom_exp`, kept unreduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dyadic {
    #[serde(with = "decimal_string")]
    pub count: BigUint,
    pub denom_exp: u32,
}

impl Dyadic {
    pub fn new(count: BigUint, denom_exp: u32) -> Self {
        Dyadic { count, denom_exp }
    }

    pub fn one() -> Self {
        Dyadic::new(BigUint::one(), 0)
    }

    /// Nearest double; stays finite for any `denom_exp`.
    pub fn to_f64(&self) -> f64 {
        if self.count.is_zero() {
            return 0.0;
        }
        let bits = self.count.bits();
        let (mantissa, shift) = if bits > 64 {
            ((&self.count >> (bits - 64)).to_f64().unwrap(), (bits - 64) as i64)
        } else {
            (self.count.to_f64().unwrap(), 0)
        };
        let exp = shift - self.denom_exp as i64;
        mantissa * 2f64.powi(exp.clamp(-2000, 2000) as i32)
    }

    /// Exact comparison of values.
    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        let e = self.denom_exp.max(other.denom_exp);
        let a = &self.count << (e - self.denom_exp);
        let b = &other.count << (e - other.denom_exp);
        a.cmp(&b)
    }

    /// `self >= 1/s`, exactly.
    pub fn ge_reciprocal(&self, s: u64) -> bool {
        &self.count * BigUint::from(s) >= BigUint::one() << self.denom_exp
    }

    /// `self <= c * max(1/s, 1/sqrt(n))`, exactly, for integer `c`.
    pub fn le_scaled_max_bound(&self, c: u64, s: u64, n: u64) -> bool {
        let two_pow = BigUint::one() << self.denom_exp;
        if (s as u128) * (s as u128) <= n as u128 {
            // max is 1/s
            &self.count * BigUint::from(s) <= BigUint::from(c) * two_pow
        } else {
            let lhs = &self.count * &self.count * BigUint::from(n);
            let rhs = BigUint::from(c) * BigUint::from(c) * &two_pow * &two_pow;
            lhs <= rhs
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.count, self.denom_exp)
    }
}

pub(crate) mod decimal_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_and_comparisons() {
        let half = Dyadic::new(BigUint::from(2u32), 2);
        assert_eq!(half.to_f64(), 0.5);
        assert_eq!(half.cmp_value(&Dyadic::new(BigUint::one(), 1)), Ordering::Equal);
        assert!(half.ge_reciprocal(2));
        assert!(!half.ge_reciprocal(1));
        let tiny = Dyadic::new(BigUint::one() << 4000u32, 4001);
        assert_eq!(tiny.to_f64(), 0.5);
        // 0.94 bound with s = 150, n = 256: max is 1/16, so c/16
        assert!(half.le_scaled_max_bound(141, 150, 256));
        assert!(!Dyadic::one().le_scaled_max_bound(1, 4, 100));
    }

    #[test]
    fn serializes_count_as_decimal_string() {
        let d = Dyadic::new(BigUint::from(126u32), 9);
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"count":"126","denom_exp":9}"#);
        assert_eq!(serde_json::from_str::<Dyadic>(&json).unwrap(), d);
    }
}
