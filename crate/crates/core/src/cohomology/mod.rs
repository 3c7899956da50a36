//! Sheaf cohomology of finite diagrams over posets, twists on the projective model and
//! higher direct images.

mod complex;
mod diagram;
mod direct_image;
mod matrix;
mod twist;

pub use complex::{cohomology, diagram_cohomology, diagram_complex, ChainComplex, CohomologyTable};
pub use diagram::FiniteDiagram;
pub use direct_image::higher_direct_image;
pub use matrix::Matrix;
pub use twist::{
    monomial_count, pattern_diagram, pn_poset, twist_diagram, twist_slice_diagram, twist_tables, TwistEngine,
};
