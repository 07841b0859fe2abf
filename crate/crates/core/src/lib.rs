//! Exact arithmetic for strongly commutative DG rings concentrated in
//! nonpositive degrees, with divided-power families, integer window
//! complexes, and a verified factorization of DG ring maps into a
//! semi-free extension followed by a surjective quasi-isomorphism.

pub mod cli;
pub mod complexes;
pub mod dg_ring;
pub mod error;
pub mod factorization;
pub mod graded;
pub mod io;
pub mod matrix;
pub mod pd;
pub mod report;
pub mod standard_rings;
pub mod util;

pub use error::{Error, Result};
