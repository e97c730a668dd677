//! Exact computations around the tensor-product Markov chain on the irreducible
//! characters of a finite classical group, driven by a Weil character.
//!
//! The crate is layered bottom-up:
//!
//! * [`ffield`]: `GF(q)` and `GF(q^2)` with deterministic moduli and generators.
//! * [`clgroups`]: matrices, forms, transvections, enumeration and uniform sampling
//!   for `GL_n(q)`, `GU_n(q)` and `Sp_2n(q)`.
//! * [`fixdist`]: fixed-space dimension distributions of uniform elements.
//! * [`transprod`]: distributions of products of two random transvections.
//! * [`weilchar`]: Weil character values, including the quadratic irrationalities.
//! * [`mixbounds`]: upper and lower total variation bounds.
//! * [`mcengine`]: Monte-Carlo estimators, brute-force oracles and the verification suite.
//! * [`cli`]: the `weilmix` command-line front end.

pub mod error;
pub mod ffield;
pub mod clgroups;
pub mod exact;
pub mod fixdist;
pub mod transprod;
pub mod weilchar;
pub mod mixbounds;
pub mod mcengine;
pub mod cli;

pub use error::{Error, Result};

/// Library version, embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
