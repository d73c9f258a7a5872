//! skewrank: exact symbolic machinery for skew invariants of finite complex
//! reflection groups and their Waring decompositions.
//!
//! The crate builds reflection groups (shipped monomial families or arbitrary
//! generator sets), constructs the fundamental skew invariant f_W as a product
//! of hyperplane forms, produces explicit power-sum decompositions of f_W by
//! coset-reduced skew-symmetrization of powers of a regular eigenform, and
//! certifies rank lower bounds through the apolar ideal (catalecticant ranks,
//! Hilbert functions, the Ranestad-Schreyer bound).
//!
//! All arithmetic is exact, over cyclotomic fields with rational coefficients.
//! There are no floating-point code paths in any decision; floats appear only
//! in diagnostic output.

pub mod apolar;
pub mod cli;
pub mod comb;
pub mod cyclo;
pub mod error;
pub mod groups;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod selftest;
pub mod skew;
pub mod waring;

pub use error::{Error, Result};
