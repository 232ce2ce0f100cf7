//! Square matrices with exact rational entries.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    m: usize,
    entries: Vec<BigRational>,
}

/// Parses `"a"`, `"a/b"`, or a JSON integer.
pub fn parse_rational(value: &serde_json::Value) -> Result<BigRational> {
    let bad = || Error::InvalidElement(format!("not a rational entry: {value}"));
    match value {
        serde_json::Value::Number(n) => {
            let i = n.as_i64().ok_or_else(bad)?;
            Ok(BigRational::from_integer(BigInt::from(i)))
        }
        serde_json::Value::String(s) => {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s, "1"),
            };
            let num = BigInt::from_str(num).map_err(|_| bad())?;
            let den = BigInt::from_str(den).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(bad()),
    }
}

/// `"num/den"`, or `"num"` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("rational matrix must be square and non-empty".into()));
        }
        Ok(RationalMatrix { m, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect(),
        )
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::InvalidElement("matrix must be a list of rows".into()))?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::InvalidElement("row must be a list".into()))?
                    .iter()
                    .map(parse_rational)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.m)
                .map(|i| {
                    serde_json::Value::Array(
                        (0..self.m).map(|j| serde_json::Value::String(format_rational(self.get(i, j)))).collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn identity(m: usize) -> Self {
        let mut entries = vec![BigRational::zero(); m * m];
        for i in 0..m {
            entries[i * m + i] = BigRational::one();
        }
        RationalMatrix { m, entries }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.m + j]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        (0..self.m).all(|i| (0..self.m).all(|j| self.get(i, j) == &BigRational::from_integer((i == j).into())))
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.m, other.m);
        let m = self.m;
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = BigRational::zero();
                for k in 0..m {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                entries.push(acc);
            }
        }
        RationalMatrix { m, entries }
    }

    /// Exact determinant by fraction-field elimination.
    pub fn determinant(&self) -> BigRational {
        let m = self.m;
        let mut a = self.entries.clone();
        let mut det = BigRational::one();
        for c in 0..m {
            let Some(p) = (c..m).find(|&r| !a[r * m + c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                for k in 0..m {
                    a.swap(c * m + k, p * m + k);
                }
                det = -det;
            }
            let pivot = a[c * m + c].clone();
            det *= &pivot;
            for r in c + 1..m {
                if a[r * m + c].is_zero() {
                    continue;
                }
                let f = &a[r * m + c] / &pivot;
                for k in c..m {
                    let v = &f * &a[c * m + k];
                    a[r * m + k] -= v;
                }
            }
        }
        det
    }

    /// Least common multiple of the entry denominators.
    pub fn denominator_lcm(&self) -> BigUint {
        self.entries
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
            .magnitude()
            .clone()
    }

    /// `sum_{k != l} F_kl^2 + sum_k (F_kk - 1)^2`, zero exactly for the identity.
    pub fn identity_defect(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.m {
            for j in 0..self.m {
                let mut x = self.get(i, j).clone();
                if i == j {
                    x -= BigRational::one();
                }
                acc += &x * &x;
            }
        }
        acc
    }

    /// Entry-wise image in `F_p`: `num * den^{-1} mod p`. `None` when `p`
    /// divides a denominator.
    pub fn reduce_mod(&self, p: u64) -> Option<Vec<Vec<i64>>> {
        let bp = BigInt::from(p);
        let mut rows = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let mut row = Vec::with_capacity(self.m);
            for j in 0..self.m {
                let q = self.get(i, j);
                let num = q.numer().mod_floor(&bp).to_u64().unwrap();
                let den = q.denom().mod_floor(&bp).to_u64().unwrap();
                if den == 0 {
                    return None;
                }
                let inv = crate::group::element::pow_mod(den, p - 2, p);
                row.push(((num as u128 * inv as u128) % p as u128) as i64);
            }
            rows.push(row);
        }
        Some(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parse_and_format() {
        let m = RationalMatrix::from_json(&json!([["1/2", 3], ["-4/6", "0"]])).unwrap();
        assert_eq!(format_rational(m.get(1, 0)), "-2/3");
        assert_eq!(m.to_json(), json!([["1/2", "3"], ["-2/3", "0"]]));
        assert!(RationalMatrix::from_json(&json!([["1/0"]])).is_err());
        assert!(RationalMatrix::from_json(&json!([[1, 2]])).is_err());
    }

    #[test]
    fn determinant_and_defect() {
        let m = RationalMatrix::from_json(&json!([["1/2", 3], ["-2/3", "0"]])).unwrap();
        assert_eq!(m.determinant(), BigRational::from_integer(2.into()));
        let minus = RationalMatrix::from_integers(&[vec![-1, 0], vec![0, -1]]).unwrap();
        assert_eq!(minus.identity_defect(), BigRational::from_integer(8.into()));
        assert!(minus.mul(&minus).is_identity());
        assert_eq!(m.denominator_lcm(), BigUint::from(6u32));
    }

    #[test]
    fn reduction_is_multiplicative() {
        let a = RationalMatrix::from_json(&json!([["1/2", 3], ["-2/3", "5/7"]])).unwrap();
        let b = RationalMatrix::from_json(&json!([["3", "-1/5"], ["1/3", "2"]])).unwrap();
        let p = 11u64;
        let (ra, rb, rab) = (a.reduce_mod(p).unwrap(), b.reduce_mod(p).unwrap(), a.mul(&b).reduce_mod(p).unwrap());
        for i in 0..2 {
            for j in 0..2 {
                let v: i64 = (0..2).map(|k| ra[i][k] * rb[k][j]).sum::<i64>() % p as i64;
                assert_eq!(v, rab[i][j]);
            }
        }
        assert!(a.reduce_mod(7).is_none());
    }
}
