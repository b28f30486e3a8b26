//! Randomized discretization of prime-density templates into Beurling
//! generalized prime systems, plus analytics and verification over the
//! resulting systems.

pub mod discretizer;
pub mod error;
pub mod fmath;
pub mod numsys;
pub mod rng;
pub mod special;
pub mod templates;
pub mod verify;

pub use discretizer::{discretize, PrimeSystem};
pub use error::{Error, Result};
pub use templates::Template;
