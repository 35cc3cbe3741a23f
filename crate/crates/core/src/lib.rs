//! Homological Conley index, emitter and receiver homomorphisms, and the
//! connection map of an attractor-repeller decomposition, computed exactly
//! over rational or prime-field coefficients on cubical sets.

pub mod algebra;
pub mod connection;
pub mod cubical;
pub mod dynamics;
pub mod emit_receive;
pub mod error;
pub mod homology;
pub mod index;
pub mod linalg;
pub mod system;

pub use error::{Error, Result};
pub use linalg::{Field, Matrix, Scalar};
