//! Character tables as complex class functions, with the orthogonality checks.

use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::io::element_to_json;
use crate::group::{exponent, ConjugacyClasses, FiniteGroup};

/// Row orthogonality tolerance.
pub const ROW_TOL: f64 = 1e-8;
/// Column orthogonality tolerance.
pub const COLUMN_TOL: f64 = 1e-6;
/// Largest allowed distance of a degree from an integer before rounding.
pub const DEGREE_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct CharacterTable {
    order: usize,
    exponent: u64,
    representatives: Vec<usize>,
    sizes: Vec<usize>,
    element_orders: Vec<u64>,
    /// `power_map[j][t]` is the class of `g_j^t` for `0 <= t < ord(g_j)`.
    power_map: Vec<Vec<u32>>,
    /// `values[i][j] = chi_i(g_j)`.
    values: Vec<Vec<Complex64>>,
    degrees: Vec<u64>,
}

impl CharacterTable {
    /// Builds and validates a table from class functions given on `classes`.
    /// Characters are sorted by degree, then by their values, so the result
    /// does not depend on how they were found.
    pub fn from_class_functions(
        group: &FiniteGroup,
        classes: &ConjugacyClasses,
        mut values: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        let r = classes.len();
        if values.len() != r || values.iter().any(|row| row.len() != r) {
            return Err(Error::CharacterTable(format!(
                "expected a {r}x{r} table, found {} characters",
                values.len()
            )));
        }
        let element_orders = classes.orders(group);
        let power_map = classes
            .representatives()
            .iter()
            .zip(&element_orders)
            .map(|(&g, &o)| {
                let mut x = group.identity();
                (0..o)
                    .map(|_| {
                        let c = classes.class_of(x) as u32;
                        x = group.mul(x, g);
                        c
                    })
                    .collect()
            })
            .collect();

        let key = |row: &Vec<Complex64>| -> Vec<(i64, i64)> {
            row.iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect()
        };
        values.sort_by(|a, b| {
            let (da, db) = (a[0].re.round() as i64, b[0].re.round() as i64);
            da.cmp(&db).then_with(|| key(b).cmp(&key(a)))
        });

        let mut degrees = Vec::with_capacity(r);
        for row in &values {
            let d = row[0];
            let rounded = d.re.round();
            if (d - Complex64::new(rounded, 0.0)).norm() >= DEGREE_TOL || rounded < 1.0 {
                return Err(Error::CharacterTable(format!("degree {d} is not a positive integer")));
            }
            degrees.push(rounded as u64);
        }
        let table = CharacterTable {
            order: group.order(),
            exponent: exponent(&element_orders),
            representatives: classes.representatives().to_vec(),
            sizes: classes.sizes(),
            element_orders,
            power_map,
            values,
            degrees,
        };
        table.validate()?;
        Ok(table)
    }

    /// Both orthogonality relations and `sum chi(1)^2 = |G|`.
    pub fn validate(&self) -> Result<()> {
        let r = self.len();
        let g = self.order as f64;
        for a in 0..r {
            for b in a..r {
                let ip = self.inner_product(&self.values[a], &self.values[b]);
                let want = if a == b { 1.0 } else { 0.0 };
                if (ip - Complex64::new(want, 0.0)).norm() > ROW_TOL {
                    return Err(Error::CharacterTable(format!("rows {a}, {b}: inner product {ip}")));
                }
            }
        }
        for j in 0..r {
            for k in j..r {
                let s: Complex64 = self.values.iter().map(|row| row[j] * row[k].conj()).sum();
                let want = if j == k { g / self.sizes[j] as f64 } else { 0.0 };
                if (s - Complex64::new(want, 0.0)).norm() > COLUMN_TOL * want.max(1.0) {
                    return Err(Error::CharacterTable(format!("columns {j}, {k}: sum {s}, expected {want}")));
                }
            }
        }
        let sum: u128 = self.degrees.iter().map(|&d| (d as u128) * (d as u128)).sum();
        if sum != self.order as u128 {
            return Err(Error::CharacterTable(format!("sum of squared degrees {sum} != {}", self.order)));
        }
        Ok(())
    }

    /// `[a, b]_G = (1/|G|) sum_j |C_j| a_j conj(b_j)` for class functions.
    pub fn inner_product(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let s: Complex64 = (0..self.len()).map(|j| a[j] * b[j].conj() * self.sizes[j] as f64).sum();
        s / self.order as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn element_orders(&self) -> &[u64] {
        &self.element_orders
    }

    pub fn power_map(&self, class: usize) -> &[u32] {
        &self.power_map[class]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn character(&self, i: usize) -> &[Complex64] {
        &self.values[i]
    }

    pub fn characters(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    pub fn is_central(&self, class: usize) -> bool {
        self.sizes[class] == 1
    }

    /// `k_1`: the order of `g Z(G)` in `G/Z(G)` for `g` in `class`.
    pub fn central_order(&self, class: usize) -> u64 {
        let powers = &self.power_map[class];
        (1..powers.len()).find(|&t| self.is_central(powers[t] as usize)).unwrap_or(powers.len()) as u64
    }

    /// `chi_i(g^t)` for `0 <= t < ord(g)`, `g` representing `class`.
    pub fn values_on_powers(&self, i: usize, class: usize) -> Vec<Complex64> {
        self.power_map[class].iter().map(|&c| self.values[i][c as usize]).collect()
    }

    /// True when `other` has the same characters up to order, within `tol`.
    /// Both tables must list classes in the same order.
    pub fn same_characters(&self, other: &CharacterTable, tol: f64) -> bool {
        if self.len() != other.len() || self.representatives != other.representatives {
            return false;
        }
        let mut used = vec![false; other.len()];
        self.values.iter().all(|row| {
            let hit = other.values.iter().enumerate().find(|(k, o)| {
                !used[*k] && row.iter().zip(o.iter()).all(|(a, b)| (a - b).norm() <= tol)
            });
            match hit {
                Some((k, _)) => {
                    used[k] = true;
                    true
                }
                None => false,
            }
        })
    }

    /// JSON dump; values are `[re, im]` pairs.
    pub fn to_json(&self, group: &FiniteGroup) -> serde_json::Value {
        let classes: Vec<_> = (0..self.len())
            .map(|j| {
                json!({
                    "index": self.representatives[j],
                    "representative": element_to_json(&group.element(self.representatives[j])),
                    "size": self.sizes[j],
                    "order": self.element_orders[j],
                })
            })
            .collect();
        let characters: Vec<Vec<[f64; 2]>> =
            self.values.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect();
        json!({
            "group_order": self.order,
            "exponent": self.exponent,
            "classes": classes,
            "degrees": self.degrees,
            "characters": characters,
        })
    }
}
