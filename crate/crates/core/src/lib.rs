//! Numerical workbench for Tadmor--Ritt operators.
//!
//! Profiles finite-dimensional operators (resolvent constants, power bounds,
//! square-function constants), evaluates holomorphic functions of them via
//! contour quadrature over keyhole domains, and verifies the explicit
//! resolvent-based inequalities on concrete operator families.

pub mod error;
pub mod fcalc;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod operators;
pub mod profile;
pub mod report;
pub mod special;
pub mod sqfe;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
