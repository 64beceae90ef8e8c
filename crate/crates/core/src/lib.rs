//! Exact computations with integral and fractional models of Harish-Chandra
//! modules for the finite covers of `PU(1,1)`, and with `SL_2` lattices.

pub mod borelweil;
pub mod contraction;
pub mod error;
pub mod hcmod;
pub mod hecke;
pub mod lattice;
pub mod linalg;
pub mod pbw;
pub mod scalar;
pub mod table;
pub mod verify;
pub mod zform;

pub use error::{Error, Result};
