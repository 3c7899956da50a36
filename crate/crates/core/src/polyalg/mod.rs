//! Exact polynomial arithmetic over ℚ and a Gröbner basis kernel.

pub mod groebner;
pub mod ideal;
pub mod monomial;
pub mod polynomial;

pub type Q = num::BigRational;

pub use groebner::{normal_form, s_poly, GroebnerBasis};
pub use ideal::{elimination_ideal, ideal_membership, radical_membership, Ideal};
pub use monomial::{Monomial, TermOrder};
pub use polynomial::{fmt_rational, Polynomial};
