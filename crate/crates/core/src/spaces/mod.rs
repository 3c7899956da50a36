//! Ringed posets, their validators and the standard example spaces.

pub mod builders;
pub mod centre;
pub mod morphism;
pub mod ringed;
pub mod validate;

pub use centre::{centre, check_central, CentralReport, CentralVerdict, CentreResult, PrimePoint};
pub use morphism::SchematicMorphism;
pub use ringed::RingedSpace;
pub use validate::{
    check_schematic, validate_space, EdgeReport, EdgeStatus, SchematicReport, TripleVerdict, ValidationReport,
};
