//! Exact computation of the alternating matrix of quadratic forms attached to
//! a genus one normal curve, its invariants `c4` and `c6`, and the Jacobian
//! elliptic curve `y^2 = x^3 - 27 c4 x - 54 c6`.

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod exactmath;
pub mod explicit;
pub mod invariants;
pub mod linalg;
pub mod omega;
pub mod secant;

pub use error::{Error, Result};
