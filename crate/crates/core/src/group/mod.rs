//! Concrete finite groups: elements, enumeration, conjugacy classes.

pub mod catalog;
pub mod classes;
pub mod element;
pub mod finite;
pub mod io;

pub use classes::{exponent, ConjugacyClasses};
pub use element::{Ambient, CayleyTable, GroupElement};
pub use finite::{FiniteGroup, DEFAULT_CLOSURE_CAP, DENSE_TABLE_MAX};
pub use io::GroupFile;

/// Free-function form of [`FiniteGroup::close_generators`].
pub fn close_generators(generators: &[GroupElement], cap: usize) -> crate::Result<FiniteGroup> {
    FiniteGroup::close_generators(generators, cap)
}
