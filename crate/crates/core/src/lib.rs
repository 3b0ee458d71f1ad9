//! Exact computations with integer-valued polynomials over Z and over the
//! extension rings built from it.

pub mod error;
pub mod exact;
pub mod findiff;
pub mod idealization;
pub mod lattice;
pub mod membership;
pub mod partition;
pub mod random;
pub mod ringext;
pub mod torsion;
pub mod verify;
pub mod poly;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/membership.md")]
    mod membership {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/finite-differences.md")]
    mod finite_differences {}
    #[doc = include_str!("../../../book/src/ring-extensions.md")]
    mod ring_extensions {}
    #[doc = include_str!("../../../book/src/idealization.md")]
    mod idealization {}
    #[doc = include_str!("../../../book/src/torsion.md")]
    mod torsion {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
