//! Holomorphic data and the surfaces it generates: certification checks,
//! periods and flux, integration of primitives, Gauss maps and total
//! curvature.
//!
//! Convention: a surface is `X = c + Re Z` with `Z' = Φ = 2∂X/∂z`.

pub mod checks;
pub mod data;
pub mod gauss;
pub mod integrate;
pub mod periods;

pub use checks::{
    conformality_check, derivative_round_trip, harmonicity_check, harmonicity_check_fd, laplace_orthogonality_check,
    mean_curvature_vector_check, sample_points, MeanCurvatureReport,
};
pub use data::{gauss_map_expr, WeierstrassDataR3, WeierstrassInput};
pub use gauss::{
    classical_gauss_map, complex_gauss_map, stereographic, total_curvature_degree, total_curvature_intrinsic,
    total_curvature_spherical, TotalCurvature,
};
pub use integrate::{associated_family, integrate_path, integrate_primitive, NullCurve, Path, Primitive};
pub use periods::{check_periods, periods, Period, PrimitiveKind};
