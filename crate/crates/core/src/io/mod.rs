//! Parsing and emitting polynomials, spaces, morphisms, data, diagrams and suites.

mod files;
mod poly;
mod report;

pub use files::{
    emit_diagram, emit_space, load_covers, load_datum, load_diagram, load_morphism, load_space, load_suite,
    parse_diagram, parse_space, parse_suite, write_space, CoversDoc,
};
pub use poly::{parse_polynomial, parse_polynomial_list};
pub use report::{Format, Report};
