//! Numerical verification of explicit formulas linking prime powers to the
//! nontrivial zeros of the Riemann zeta function.
//!
//! The arithmetic side comes from a sieved table of Λ(n)
//! ([`arithmetic::MangoldtTable`]); the spectral side from a catalog of zero
//! ordinates ([`zeros::ZeroCatalog`]). Each identity is evaluated from both
//! sides and reported as a [`report::VerificationReport`].

pub mod arithmetic;
pub mod emit;
pub mod density;
pub mod error;
pub mod explicit;
pub mod quadrature;
pub mod reduce;
pub mod report;
pub mod special;
pub mod suites;
pub mod system;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
