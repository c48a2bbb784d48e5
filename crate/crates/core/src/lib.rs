//! Exact valuations on k[x, y]: value groups, residue towers, key polynomials,
//! value semigroups and quadratic transforms.

pub mod bipoly;
pub mod birat;
pub mod error;
pub mod genseq;
pub mod rat;
pub mod series;
pub mod subring;
pub mod tower;
pub mod valuation;
pub mod values;

pub use error::{Error, Result};
