//! Factorizations of the long cycle `(1,2,…,n)` into `k` factors, and the chain
//! of bijections relating colored cacti, tree-rooted constellations, nebulas and
//! biddings. Every object is small and finite, so each identity is checked by
//! exhaustive enumeration.
//!
//! Internally all elements, types and labels are 0-based; JSON and `Display`
//! output are 1-based.

pub mod bidding;
pub mod catalog;
pub mod enumerate;
pub mod error;
pub mod maps;
pub mod nebula;
pub mod perm;
pub mod phi;
pub mod puzzle;
pub mod registry;
pub mod report;
pub mod subset;
pub mod symmetry;

pub use error::{Error, Result};
pub use perm::{Composition, Permutation};
pub use subset::TypeSet;
