//! JSON group description files.
//!
//! ```json
//! {"kind":"matrix_mod_p","p":5,"m":2,"generators":[[[1,1],[0,1]],[[0,-1],[1,0]]]}
//! {"kind":"permutation","degree":4,"generators":[[1,0,2,3],[1,2,3,0]]}
//! {"kind":"table","size":2,"table":[[0,1],[1,0]]}
//! {"kind":"named","name":"SL2(49)"}
//! ```
//!
//! Matrix entries may be any integers; they are reduced mod `p`. A table group
//! is generated by all of its elements unless `generators` lists table indices.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::catalog;
use super::element::{Ambient, CayleyTable, GroupElement};
use super::finite::FiniteGroup;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupFile {
    MatrixModP {
        p: u32,
        m: usize,
        generators: Vec<Vec<Vec<i64>>>,
    },
    Permutation {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
    Table {
        size: usize,
        table: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<u32>>,
    },
    Named {
        name: String,
    },
}

/// Group generators together with their ambient parameters.
#[derive(Clone, Debug)]
pub struct Generators {
    pub ambient: Ambient,
    pub elements: Vec<GroupElement>,
}

impl GroupFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Validated generators without enumerating the group.
    pub fn generators(&self) -> Result<Generators> {
        match self {
            GroupFile::MatrixModP { p, m, generators } => {
                let elements = generators
                    .iter()
                    .map(|rows| {
                        if rows.len() != *m {
                            return Err(Error::InvalidGroupSpec(format!("generator is not {m}x{m}")));
                        }
                        GroupElement::matrix(*p, rows)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Generators { ambient: Ambient::MatrixModP { p: *p, m: *m }, elements })
            }
            GroupFile::Permutation { degree, generators } => {
                let elements = generators
                    .iter()
                    .map(|images| {
                        if images.len() != *degree {
                            return Err(Error::InvalidGroupSpec(format!("generator is not of degree {degree}")));
                        }
                        GroupElement::permutation(images.clone())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Generators { ambient: Ambient::Permutation { degree: *degree }, elements })
            }
            GroupFile::Table { size, table, generators } => {
                if table.len() != *size {
                    return Err(Error::InvalidGroupSpec(format!("table has {} rows, size is {size}", table.len())));
                }
                let table = Arc::new(CayleyTable::new(table.clone())?);
                let indices: Vec<u32> = match generators {
                    Some(g) => g.clone(),
                    None => (0..*size as u32).collect(),
                };
                let elements = indices
                    .iter()
                    .map(|&i| GroupElement::table_element(Arc::clone(&table), i))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Generators { ambient: Ambient::Table(table), elements })
            }
            GroupFile::Named { name } => {
                let group = catalog::named(name)?;
                let elements = group.generators().iter().map(|&i| group.element(i)).collect();
                Ok(Generators { ambient: group.ambient().clone(), elements })
            }
        }
    }

    pub fn build(&self, cap: usize) -> Result<FiniteGroup> {
        let gens = self.generators()?;
        FiniteGroup::close_generators(&gens.elements, cap)
    }
}

/// Parses an inline element: nested rows for matrices, an image list for
/// permutations, a bare index for table elements.
pub fn parse_inline_element(ambient: &Ambient, value: &serde_json::Value) -> Result<GroupElement> {
    match ambient {
        Ambient::MatrixModP { p, m } => {
            let rows: Vec<Vec<i64>> = serde_json::from_value(value.clone())?;
            if rows.len() != *m {
                return Err(Error::InvalidElement(format!("expected a {m}x{m} matrix")));
            }
            GroupElement::matrix(*p, &rows)
        }
        Ambient::Permutation { degree } => {
            let images: Vec<u32> = serde_json::from_value(value.clone())?;
            if images.len() != *degree {
                return Err(Error::InvalidElement(format!("expected {degree} images")));
            }
            GroupElement::permutation(images)
        }
        Ambient::Table(t) => {
            let index: u32 = serde_json::from_value(value.clone())?;
            GroupElement::table_element(Arc::clone(t), index)
        }
    }
}

/// JSON form of an element's canonical words: rows for matrices, images for
/// permutations, the table index otherwise.
pub fn element_to_json(g: &GroupElement) -> serde_json::Value {
    match g {
        GroupElement::Matrix { m, entries, .. } => {
            serde_json::json!(entries.chunks(*m).map(|r| r.to_vec()).collect::<Vec<_>>())
        }
        GroupElement::Permutation { images } => serde_json::json!(images),
        GroupElement::Table { index, .. } => serde_json::json!(index),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let m = GroupFile::from_json(r#"{"kind":"matrix_mod_p","p":5,"m":2,"generators":[[[1,1],[0,1]],[[0,-1],[1,0]]]}"#)
            .unwrap();
        assert_eq!(m.build(1000).unwrap().order(), 120);
        let p = GroupFile::from_json(r#"{"kind":"permutation","degree":4,"generators":[[1,0,2,3],[1,2,3,0]]}"#).unwrap();
        assert_eq!(p.build(1000).unwrap().order(), 24);
        let t = GroupFile::from_json(r#"{"kind":"table","size":3,"table":[[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
        let g = t.build(10).unwrap();
        assert_eq!(g.order(), 3);
        // table order is preserved when index 0 is the identity
        assert_eq!(g.words(1), &[1]);
        let n = GroupFile::from_json(r#"{"kind":"named","name":"Q8"}"#).unwrap();
        assert_eq!(n.build(100).unwrap().order(), 8);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_tables() {
        assert!(GroupFile::from_json(r#"{"kind":"named","name":"S3","extra":1}"#).is_err());
        let not_group = GroupFile::from_json(r#"{"kind":"table","size":2,"table":[[0,1],[1,1]]}"#).unwrap();
        assert!(not_group.build(10).is_err());
        let wrong_shape =
            GroupFile::from_json(r#"{"kind":"matrix_mod_p","p":5,"m":2,"generators":[[[1,1,0],[0,1,0],[0,0,1]]]}"#)
                .unwrap();
        assert!(wrong_shape.build(10).is_err());
    }

    #[test]
    fn inline_elements_round_trip_through_json() {
        let ambient = Ambient::MatrixModP { p: 7, m: 2 };
        let g = parse_inline_element(&ambient, &serde_json::json!([[1, -1], [0, 1]])).unwrap();
        assert_eq!(element_to_json(&g), serde_json::json!([[1, 6], [0, 1]]));
    }
}
