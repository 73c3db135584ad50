//! Exact computations for characteristic-2 reflection groups `G = N x| H`
//! with `H` isomorphic to SL2(GF(2^n)) acting on a 3-dimensional space.
//!
//! The crate builds the groups by closure, constructs explicit invariants
//! (kernel invariants, Dickson invariants and their lifts), and checks that
//! they freely generate the invariant ring by the degree/Jacobian criterion,
//! with an independent fixed-space oracle computed by exact linear algebra.

pub mod error;
pub mod ffield;
pub mod grouplift;
pub mod invariants;
pub mod linalg;
pub mod mvpoly;
pub mod verify;

pub use error::{Error, Result};
pub use ffield::{Fel, Field};
pub use grouplift::{GroupSet, LambdaSpace, Mat3, Variant};
pub use mvpoly::{Monomial, MultiPoly, Var};
