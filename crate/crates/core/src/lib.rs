//! Random coprime colourings of lattices.
//!
//! For every prime `p` a coset `B_p` of `p Γ` is drawn uniformly; a lattice
//! point is white when it avoids all of them. The crate samples these
//! colourings, bounds their crossing probabilities, labels their clusters and
//! builds the lattices (D_d, E_8, Leech) on which the model is studied.

pub mod arith;
pub mod cli;
pub mod colouring;
pub mod error;
pub mod fmt;
pub mod lattice;
pub mod perco;
pub mod rng;

pub use error::{Error, Result};
