//! Shared numerical substrate.

pub mod banded;
pub mod grid;
pub mod linalg;
pub mod quad;
pub mod roots;

pub use grid::GridField;
pub use linalg::{eig_sym2, Eigen2, SymMat2, VecN};
pub use quad::{quad_1d, quad_area, quad_contour, Estimate, Loop, QuadOptions, Region};
pub use roots::{find_roots_1d, Root, RootKind, RootOptions};
