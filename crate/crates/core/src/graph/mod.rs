//! Area and energy functionals of graphs and maps, the minimal graph
//! equation, and a Dirichlet solver for it.

pub mod functionals;
pub mod problem;
pub mod solver;

pub use functionals::{
    area_graph, area_of_map, area_parametric, dirichlet_energy, dirichlet_energy_of_map, euler_lagrange_residual,
    first_variation_analytic, first_variation_fd, mge_residual, nodal_jet, VariationField, FD_VARIATION_STEP,
};
pub use problem::GraphProblem;
pub use solver::{harmonic_extension, solve_minimal_graph, Scheme, SolveReport, SolverOptions};
