//! Finite relative categories, their subdivisions, homotopy theory and nerves.

pub mod bisimplicial;
pub mod dwyer;
pub mod enumerate;
pub mod error;
pub mod exponential;
pub mod homology;
pub mod homotopy;
pub mod io;
pub mod kxi;
pub mod random;
pub mod relcat;
pub mod subdiv;
pub mod verify;

pub use error::{Error, Result};
pub use relcat::{RelCategory, RelFunctor};
