//! Schematic finite spaces made executable: ringed posets with presented ℚ-algebra
//! stalks, validators for the schematic axioms, constructions, sheaf cohomology and
//! properness criteria.

pub mod cli;
pub mod cohomology;
pub mod constructions;
pub mod criteria;
pub mod error;
pub mod io;
pub mod polyalg;
pub mod poset;
pub mod rings;
pub mod spaces;

pub use error::{Result, WorkbenchError};
