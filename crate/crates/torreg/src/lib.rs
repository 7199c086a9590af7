//! Exact computation of multigraded Castelnuovo–Mumford regularity regions
//! for monomial ideals and modules over Cox rings of smooth projective toric
//! varieties, plus verified bounds for regularity of ideal powers.

pub mod error;
pub mod matrix;
pub mod scalar;

pub mod cohomology;
pub mod lattice;
pub mod rees;
pub mod regularity;
pub mod ring;
pub mod toric;

pub use error::{Error, Result};
pub use scalar::{Field, Fp, Rat};
