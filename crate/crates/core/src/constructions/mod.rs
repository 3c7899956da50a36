//! Fibered products, cylinders of data, nerves of flat immersion families.

mod datum;
mod nerve;
mod product;

pub use datum::{collapse_affine, cylinder, Cylinder, Datum};
pub use nerve::{is_covering, nerve, CoverPoint, CoveringReport, FlatImmersionFamily, Nerve};
pub use product::{fibered_product, multi_product, product_of_morphisms, ProductPoint, ProductSpace};
