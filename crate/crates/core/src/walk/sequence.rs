//! The sequence `V = (A_1, .., A_n)` of non-trivial group elements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::io::parse_inline_element;
use crate::group::{Ambient, FiniteGroup, GroupElement};

/// Exact computations support sequences up to this length.
pub const MAX_SEQUENCE_LENGTH: usize = 4096;

/// Element orders above this many multiplications are rejected.
pub const ORDER_CAP: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct SignedSequence {
    ambient: Ambient,
    elements: Vec<GroupElement>,
    orders: Vec<u64>,
    height: Option<u64>,
}

impl SignedSequence {
    pub fn new(elements: Vec<GroupElement>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidSequence("sequence is empty".into()))?;
        if elements.len() > MAX_SEQUENCE_LENGTH {
            return Err(Error::InvalidSequence(format!(
                "length {} exceeds the cap {MAX_SEQUENCE_LENGTH}",
                elements.len()
            )));
        }
        let ambient = first.ambient();
        if elements.iter().any(|g| g.ambient() != ambient) {
            return Err(Error::MixedVariants);
        }
        let mut orders = Vec::with_capacity(elements.len());
        for (i, g) in elements.iter().enumerate() {
            if g.is_identity() {
                return Err(Error::InvalidSequence(format!("element {i} is the identity")));
            }
            let order = g
                .order_capped(ORDER_CAP)
                .ok_or_else(|| Error::InvalidSequence(format!("order of element {i} exceeds {ORDER_CAP}")))?;
            orders.push(order);
        }
        Ok(SignedSequence { ambient, elements, orders, height: None })
    }

    /// `n` copies of one element.
    pub fn repeated(element: GroupElement, n: usize) -> Result<Self> {
        Self::new(vec![element; n])
    }

    /// Elements of a finite group given by index.
    pub fn from_indices(group: &FiniteGroup, indices: &[usize]) -> Result<Self> {
        let elements = indices
            .iter()
            .map(|&i| {
                if i < group.order() {
                    Ok(group.element(i))
                } else {
                    Err(Error::NotInGroup)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements)
    }

    /// The unipotent sequence `[[1, a_i], [0, 1]]` mod `p`, recording `K = max |a_i|`.
    pub fn unipotent(p: u32, shifts: &[i64]) -> Result<Self> {
        if shifts.iter().any(|&a| a.rem_euclid(p as i64) == 0) {
            return Err(Error::InvalidSequence("shift divisible by p gives the identity".into()));
        }
        let elements = shifts
            .iter()
            .map(|&a| GroupElement::matrix(p, &[vec![1, a], vec![0, 1]]))
            .collect::<Result<Vec<_>>>()?;
        let mut seq = Self::new(elements)?;
        seq.height = shifts.iter().map(|a| a.unsigned_abs()).max();
        Ok(seq)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// `s`, the smallest element order (always at least 2).
    pub fn min_order(&self) -> u64 {
        *self.orders.iter().min().expect("non-empty")
    }

    /// `N(sigma)`: how many elements have order at least `sigma`.
    pub fn count_order_at_least(&self, sigma: u64) -> usize {
        self.orders.iter().filter(|&&k| k >= sigma).count()
    }

    /// `K`, when the sequence was built from integer shifts.
    pub fn height(&self) -> Option<u64> {
        self.height
    }

    pub fn reversed(&self) -> Self {
        let mut r = self.clone();
        r.elements.reverse();
        r.orders.reverse();
        r
    }

    /// Element indices in `group`.
    pub fn indices_in(&self, group: &FiniteGroup) -> Result<Vec<usize>> {
        self.elements.iter().map(|g| group.require_index(g)).collect()
    }
}

/// On-disk sequence description: `{"elements": [...], "repeat": k}`.
///
/// Each entry is either an element index of the enumerated group or an inline
/// element (matrix rows, permutation images). The list is repeated `repeat`
/// times (default 1).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub elements: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repeat: Option<usize>,
}

impl SequenceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// True when some entry is an index and therefore needs the enumerated group.
    pub fn uses_indices(&self, ambient: &Ambient) -> bool {
        !matches!(ambient, Ambient::Table(_)) && self.elements.iter().any(|v| v.is_u64())
    }

    pub fn resolve(&self, ambient: &Ambient, group: Option<&FiniteGroup>) -> Result<SignedSequence> {
        let mut base = Vec::with_capacity(self.elements.len());
        for v in &self.elements {
            let element = match (v.as_u64(), ambient) {
                (Some(i), Ambient::Table(_)) => parse_inline_element(ambient, &serde_json::json!(i))?,
                (Some(i), _) => {
                    let group = group.ok_or_else(|| {
                        Error::InvalidSequence("index entries need the enumerated group".into())
                    })?;
                    if i as usize >= group.order() {
                        return Err(Error::NotInGroup);
                    }
                    group.element(i as usize)
                }
                (None, _) => parse_inline_element(ambient, v)?,
            };
            base.push(element);
        }
        let repeat = self.repeat.unwrap_or(1);
        if repeat == 0 {
            return Err(Error::InvalidSequence("repeat must be positive".into()));
        }
        let total = base.len().saturating_mul(repeat);
        if total > MAX_SEQUENCE_LENGTH {
            return Err(Error::InvalidSequence(format!("length {total} exceeds the cap {MAX_SEQUENCE_LENGTH}")));
        }
        let elements = (0..repeat).flat_map(|_| base.iter().cloned()).collect();
        SignedSequence::new(elements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    #[test]
    fn derived_statistics() {
        let g = catalog::symmetric(4).unwrap();
        let t = GroupElement::from_cycles(4, &[&[0, 1]]).unwrap();
        let c = GroupElement::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let seq = SignedSequence::new(vec![t.clone(), c.clone(), c]).unwrap();
        assert_eq!(seq.orders(), &[2, 4, 4]);
        assert_eq!(seq.min_order(), 2);
        assert_eq!(seq.count_order_at_least(3), 2);
        assert_eq!(seq.reversed().orders(), &[4, 4, 2]);
        assert_eq!(seq.indices_in(&g).unwrap().len(), 3);
    }

    #[test]
    fn rejects_identity_and_empty() {
        let id = GroupElement::permutation(vec![0, 1, 2]).unwrap();
        assert!(SignedSequence::new(vec![id]).is_err());
        assert!(SignedSequence::new(vec![]).is_err());
        assert!(SignedSequence::unipotent(7, &[1, 7]).is_err());
        assert_eq!(SignedSequence::unipotent(101, &[1, -3, 2]).unwrap().height(), Some(3));
    }

    #[test]
    fn sequence_file_with_indices_and_inline_elements() {
        let g = catalog::sl2(5).unwrap();
        let file = SequenceFile::from_json(r#"{"elements":[3,[[1,1],[0,1]]],"repeat":2}"#).unwrap();
        assert!(file.uses_indices(g.ambient()));
        let seq = file.resolve(g.ambient(), Some(&g)).unwrap();
        assert_eq!(seq.len(), 4);
        assert_eq!(seq.elements()[0], g.element(3));
        assert!(file.resolve(g.ambient(), None).is_err());
        assert!(SequenceFile::from_json(r#"{"elements":[1],"other":0}"#).is_err());
    }
}
