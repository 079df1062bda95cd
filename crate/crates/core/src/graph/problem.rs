//! JSON form of a Dirichlet problem for the minimal graph equation.
//!
//! ```json
//! {
//!   "grid": {"origin": [1.2, 1.2], "spacing": 0.05, "dims": [17, 17]},
//!   "mask": [18, 15, 2, 15, ...],
//!   "boundary": [[0, 0, 0.5], [1, 0, 0.51], ...],
//!   "solver": {"tol": 1e-9, "max_iter": 60}
//! }
//! ```
//!
//! `mask` is run-length encoded (alternating runs, starting with `false`);
//! `boundary` lists `[i, j, value]` for every boundary node.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::solver::{solve_minimal_graph, SolveReport, SolverOptions};
use crate::error::{Error, Result};
use crate::numeric::grid::{mask_from_rle, mask_to_rle, GridField, GridSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemJson {
    grid: GridSpec,
    mask: Vec<usize>,
    boundary: Vec<(usize, usize, f64)>,
    #[serde(default)]
    solver: SolverOptions,
}

/// Grid with Dirichlet data on its boundary nodes plus solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphProblem {
    pub data: GridField<f64>,
    pub options: SolverOptions,
}

impl GraphProblem {
    pub fn new(data: GridField<f64>, options: SolverOptions) -> Self {
        Self { data, options }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: ProblemJson = serde_json::from_str(text)?;
        let [nx, ny] = p.grid.dims;
        let mask = mask_from_rle(&p.mask, nx * ny)?;
        let mut data = GridField::new(
            (p.grid.origin[0], p.grid.origin[1]),
            p.grid.spacing,
            (nx, ny),
            mask,
            vec![f64::NAN; nx * ny],
        )?;
        for &(i, j, value) in &p.boundary {
            if i >= nx || j >= ny {
                return Err(Error::InvalidInput(format!("boundary node ({i}, {j}) is off the grid")));
            }
            if !value.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "boundary value at ({i}, {j}) is not finite"
                )));
            }
            data.set(i, j, value);
        }
        if let Some((i, j)) = data.boundary_nodes().find(|&(i, j)| data.get(i, j).is_nan()) {
            return Err(Error::InvalidInput(format!(
                "missing boundary value at node ({i}, {j})"
            )));
        }
        for k in 0..nx * ny {
            if data.values()[k].is_nan() {
                data.values_mut()[k] = 0.0;
            }
        }
        if !(p.solver.tol > 0.0) || p.solver.max_iter == 0 {
            return Err(Error::InvalidInput(
                "solver tol must be positive and max_iter nonzero".into(),
            ));
        }
        Ok(Self {
            data,
            options: p.solver,
        })
    }

    pub fn to_json(&self) -> String {
        let (x0, y0) = self.data.origin();
        let (nx, ny) = self.data.dims();
        let p = ProblemJson {
            grid: GridSpec {
                origin: [x0, y0],
                spacing: self.data.spacing(),
                dims: [nx, ny],
            },
            mask: mask_to_rle(self.data.mask()),
            boundary: self
                .data
                .boundary_nodes()
                .map(|(i, j)| (i, j, *self.data.get(i, j)))
                .collect(),
            solver: self.options,
        };
        serde_json::to_string_pretty(&p).expect("problem serialises")
    }

    pub fn solve(&self) -> Result<(GridField<f64>, SolveReport)> {
        solve_minimal_graph(&self.data, &self.options)
    }
}

/// Writes `x,y,f` rows for the active nodes of `f`.
pub fn write_csv<W: Write>(f: &GridField<f64>, mut out: W) -> Result<()> {
    writeln!(out, "x,y,f")?;
    for (i, j) in f.nodes() {
        if f.is_active(i, j) {
            let (x, y) = f.xy(i, j);
            writeln!(out, "{x:.17e},{y:.17e},{:.17e}", f.get(i, j))?;
        }
    }
    Ok(())
}
