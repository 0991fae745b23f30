//! Mertens sums and products over prime ideals, ideal counting, and explicit
//! residue bounds for the Dedekind zeta function of a number field.

pub mod bounds;
pub mod error;
pub mod field;
pub mod idealcount;
pub mod mertens;
pub mod numeric;
pub mod polyfield;
pub mod splitting;

pub use error::{Error, Result};
pub use field::{kappa_exact, load_field, FieldDescriptor, Residue, ResidueProvenance};
