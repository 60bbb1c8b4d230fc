pub mod error;
pub mod geometry;
pub mod tol;

pub use crate::error::{Error, Result};
pub use crate::geometry::{GeneralizedPolyhedron, Halfspace, Norm, Polyhedron, Vector};
