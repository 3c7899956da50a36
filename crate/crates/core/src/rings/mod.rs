//! Finitely presented ℚ-algebras, ring maps and localization certificates.

pub mod certificate;
pub mod map;
pub mod ops;
pub mod presented;

pub use certificate::{compose_certificates, find_certificate, LocalizationCertificate, Section};
pub use map::{compose_chain, RingMap};
pub use ops::{is_surjective, localize, localized_ring, map_kernel, prime_preimage, tensor_product};
pub use presented::PresentedRing;
