//! Branching multiplicities for symmetric pairs by localization on the
//! critical set of a Hamiltonian action.

pub mod abelian;
pub mod error;
pub mod hreps;
pub mod localize;
pub mod oracle;
pub mod pairs;
pub mod rootdata;
pub mod series;

pub use error::{Error, Result};
