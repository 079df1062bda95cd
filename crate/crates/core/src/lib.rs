//! Numerical workbench for minimal surfaces in Euclidean space.
//!
//! The crate is organised bottom-up:
//!
//! * [`numeric`] holds the shared substrate: small linear algebra, masked
//!   grids, Gauss–Legendre quadrature (real, contour and area) and scalar
//!   root finding.
//! * [`expr`] parses, evaluates and differentiates closed-form holomorphic
//!   expressions in the variable `z`.
//! * [`surface`] defines parametric immersions ([`SurfaceMap`]) and their
//!   parameter domains.
//! * [`curvature`] computes signed, principal, mean and Gaussian curvature.
//! * [`graph`] covers the area functional of graphs, the minimal graph
//!   equation and a Dirichlet solver for it.
//! * [`weierstrass`] certifies conformality/harmonicity, computes periods
//!   and flux, integrates null data and evaluates Gauss maps and total
//!   curvature.
//! * [`catalog`] builds the classical example surfaces.
//! * [`mesh`] samples surfaces into triangle meshes and writes OBJ files.

// `!(x > tol)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod catalog;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod graph;
pub mod mesh;
pub mod numeric;
pub mod surface;
pub mod weierstrass;

pub use error::{Error, ParseError, Result};
pub use expr::{ComplexExpr, ComplexExprVec};
pub use numeric::grid::GridField;
pub use numeric::linalg::{SymMat2, VecN};
pub use numeric::quad::{Loop, Region};
pub use surface::{Domain, SurfaceMap};

pub use num_complex::Complex64;
