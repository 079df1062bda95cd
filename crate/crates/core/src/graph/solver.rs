//! Dirichlet solver for the minimal graph equation.

use serde::{Deserialize, Serialize};

use super::functionals::{
    area_graph, cell_gradient, corners, euler_lagrange_residual, mge_residual, nodal_jet, AX, AY,
};
use crate::curvature::mge_operator;
use crate::error::{Error, Result};
use crate::numeric::banded::BandedMatrix;
use crate::numeric::grid::GridField;

/// Which discretisation of the minimal graph equation is driven to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Newton on the gradient of the discrete area (the residual is
    /// [`euler_lagrange_residual`]); the discrete solution is then an exact
    /// critical point of [`area_graph`].
    #[default]
    Variational,
    /// Newton on the nodal quasilinear form `𝒢(f) = 0`.
    Nondivergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Bound on the max-norm of the scheme's residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Leading iterations that freeze the quasilinear coefficients.
    pub picard_iters: usize,
    /// Step halvings allowed per line search.
    pub max_halvings: usize,
    pub scheme: Scheme,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 60,
            picard_iters: 3,
            max_halvings: 40,
            scheme: Scheme::Variational,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub scheme: Scheme,
    pub iterations: usize,
    /// Max-norm of the scheme's residual at the returned solution.
    pub residual: f64,
    /// Max-norm of the nodal `𝒢(f)` at the returned solution.
    pub mge_max: f64,
    pub area: f64,
    /// Area after the initial guess and after each accepted step.
    pub area_history: Vec<f64>,
    /// The mask is not orthogonally convex, so solvability is not guaranteed.
    pub nonconvex_mask: bool,
}

/// Interior nodes numbered in storage order.
struct Numbering {
    index: Vec<Option<usize>>,
    nodes: Vec<(usize, usize)>,
    band: usize,
}

impl Numbering {
    fn new(f: &GridField<f64>) -> Self {
        let mut index = vec![None; f.values().len()];
        let nodes: Vec<_> = f.interior_nodes().collect();
        for (k, &(i, j)) in nodes.iter().enumerate() {
            index[f.index(i, j)] = Some(k);
        }
        Self {
            index,
            nodes,
            band: f.dims().0 + 1,
        }
    }

    fn of(&self, f: &GridField<f64>, i: usize, j: usize) -> Option<usize> {
        self.index[f.index(i, j)]
    }

    fn matrix(&self) -> BandedMatrix {
        BandedMatrix::zeros(self.nodes.len(), self.band, self.band)
    }

    fn gather(&self, field: &GridField<f64>) -> Vec<f64> {
        self.nodes.iter().map(|&(i, j)| *field.get(i, j)).collect()
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Assembles `Σ_cells h²·w·(a_x a_xᵀ + a_y a_yᵀ)` (optionally minus the
/// Newton term) and the right-hand side moving boundary values across.
/// With `newton = false` and `w = 1/W` this is the Picard operator; with
/// `w ≡ 1` it is the discrete Laplacian used for the harmonic extension.
fn assemble_cells(
    f: &GridField<f64>,
    num: &Numbering,
    weight: impl Fn(f64, f64) -> f64,
    newton: bool,
) -> (BandedMatrix, Vec<f64>) {
    let mut a = num.matrix();
    let mut rhs = vec![0.0; num.nodes.len()];
    for (i, j) in f.active_cells() {
        let (fx, fy) = cell_gradient(f, i, j);
        let w = weight(fx, fy);
        let cs = corners(i, j);
        // the 1/h² of the stencils cancels the h² of the cell measure
        let g: [f64; 4] = std::array::from_fn(|k| fx * AX[k] + fy * AY[k]);
        let big_w = (1.0 + fx * fx + fy * fy).sqrt();
        for r in 0..4 {
            let Some(row) = num.of(f, cs[r].0, cs[r].1) else {
                continue;
            };
            for c in 0..4 {
                let mut m = w * (AX[r] * AX[c] + AY[r] * AY[c]);
                if newton {
                    m -= g[r] * g[c] / (big_w * big_w * big_w);
                }
                match num.of(f, cs[c].0, cs[c].1) {
                    Some(col) => a.add(row, col, m),
                    None => rhs[row] -= m * *f.get(cs[c].0, cs[c].1),
                }
            }
        }
    }
    (a, rhs)
}

fn scatter(f: &mut GridField<f64>, num: &Numbering, x: &[f64]) {
    for (&(i, j), &v) in num.nodes.iter().zip(x) {
        f.set(i, j, v);
    }
}

fn add_step(f: &GridField<f64>, num: &Numbering, d: &[f64], t: f64) -> GridField<f64> {
    let mut g = f.clone();
    for (&(i, j), &dk) in num.nodes.iter().zip(d) {
        let v = *g.get(i, j) + t * dk;
        g.set(i, j, v);
    }
    g
}

/// Overwrites interior values with the discrete harmonic extension of the
/// boundary data.
pub fn harmonic_extension(f: &GridField<f64>) -> Result<GridField<f64>> {
    let num = Numbering::new(f);
    let (a, rhs) = assemble_cells(f, &num, |_, _| 1.0, false);
    let x = a.solve(&rhs)?;
    let mut out = f.clone();
    scatter(&mut out, &num, &x);
    Ok(out)
}

fn validate(f: &GridField<f64>) -> Result<bool> {
    let comps = f.interior_components();
    if comps == 0 {
        return Err(Error::InvalidInput("mask has no interior nodes".into()));
    }
    if comps > 1 {
        return Err(Error::MaskNotConnected { components: comps });
    }
    for (i, j) in f.boundary_nodes() {
        if !f.get(i, j).is_finite() {
            return Err(Error::InvalidInput(format!(
                "boundary value at ({i}, {j}) is not finite"
            )));
        }
    }
    let nonconvex = !f.is_convex();
    if nonconvex {
        log::warn!("mask is not convex; the Dirichlet problem may have no solution");
    }
    Ok(nonconvex)
}

/// Solves `𝒢(f) = 0` in the interior with the boundary values of `data`
/// (interior values of `data` are ignored).
pub fn solve_minimal_graph(data: &GridField<f64>, opts: &SolverOptions) -> Result<(GridField<f64>, SolveReport)> {
    let nonconvex = validate(data)?;
    let mut f = harmonic_extension(data)?;
    let num = Numbering::new(&f);
    let residual = |f: &GridField<f64>| -> Vec<f64> {
        match opts.scheme {
            Scheme::Variational => num.gather(&euler_lagrange_residual(f)),
            Scheme::Nondivergence => num
                .nodes
                .iter()
                .map(|&(i, j)| mge_operator(&nodal_jet(f, i, j)))
                .collect(),
        }
    };

    let mut area = area_graph(&f);
    let mut area_history = vec![area];
    let mut r = residual(&f);
    let mut iterations = 0;
    while max_abs(&r) >= opts.tol {
        if iterations == opts.max_iter {
            return Err(Error::NonConvergence {
                what: "minimal graph solver",
                estimate: area,
                residual: max_abs(&r),
            });
        }
        let picard = iterations < opts.picard_iters;
        let d = match opts.scheme {
            Scheme::Variational => variational_direction(&f, &num, picard)?,
            Scheme::Nondivergence => nondivergence_direction(&f, &num, &r, picard)?,
        };

        // halve until the merit decreases (area for the variational scheme,
        // which is convex in f; residual norm otherwise)
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let g = add_step(&f, &num, &d, t);
            let ga = area_graph(&g);
            let gr = residual(&g);
            let ok = match opts.scheme {
                Scheme::Variational => ga <= area + 4.0 * f64::EPSILON * area.abs() && (ga < area || l2(&gr) < l2(&r)),
                Scheme::Nondivergence => l2(&gr) < l2(&r),
            };
            if ok {
                accepted = Some((g, ga, gr));
                break;
            }
            t *= 0.5;
        }
        let Some((g, ga, gr)) = accepted else {
            return Err(Error::NonConvergence {
                what: "minimal graph solver (line search)",
                estimate: area,
                residual: max_abs(&r),
            });
        };
        log::debug!(
            "iteration {}: step {t}, area {ga:.15}, residual {:e}",
            iterations + 1,
            max_abs(&gr)
        );
        f = g;
        area = ga;
        r = gr;
        area_history.push(area);
        iterations += 1;
    }

    let mge = mge_residual(&f);
    let report = SolveReport {
        scheme: opts.scheme,
        iterations,
        residual: max_abs(&r),
        mge_max: max_abs(mge.values()),
        area,
        area_history,
        nonconvex_mask: nonconvex,
    };
    Ok((f, report))
}

/// Newton (or Picard) direction for the gradient of the discrete area.
fn variational_direction(f: &GridField<f64>, num: &Numbering, picard: bool) -> Result<Vec<f64>> {
    let weight = |fx: f64, fy: f64| 1.0 / (1.0 + fx * fx + fy * fy).sqrt();
    if picard {
        // solve the frozen-coefficient problem outright, step towards it
        let (a, rhs) = assemble_cells(f, num, weight, false);
        let target = a.solve(&rhs)?;
        return Ok(num
            .nodes
            .iter()
            .zip(&target)
            .map(|(&(i, j), x)| x - f.get(i, j))
            .collect());
    }
    // the assembled matrix is the exact Hessian of the discrete area, whose
    // gradient is h²·(Euler–Lagrange residual)
    let (hess, _) = assemble_cells(f, num, weight, true);
    let h2 = f.spacing() * f.spacing();
    let rhs: Vec<f64> = num
        .gather(&euler_lagrange_residual(f))
        .into_iter()
        .map(|g| -g * h2)
        .collect();
    hess.solve(&rhs)
}

/// Newton (or Picard) direction for the nodal `𝒢(f) = 0`.
fn nondivergence_direction(f: &GridField<f64>, num: &Numbering, r: &[f64], picard: bool) -> Result<Vec<f64>> {
    let h = f.spacing();
    let mut a = num.matrix();
    let mut rhs = vec![0.0; num.nodes.len()];
    for (row, &(i, j)) in num.nodes.iter().enumerate() {
        let jet = nodal_jet(f, i, j);
        let [fx, fy] = jet.gradient;
        let (fxx, fxy, fyy) = (jet.hessian.a, jet.hessian.b, jet.hessian.c);
        let (ca, cb, cc) = (1.0 + fy * fy, -2.0 * fx * fy, 1.0 + fx * fx);
        // derivative of 𝒢 with respect to f_x and f_y
        let (gx, gy) = if picard {
            (0.0, 0.0)
        } else {
            (-2.0 * fy * fxy + 2.0 * fx * fyy, 2.0 * fy * fxx - 2.0 * fx * fxy)
        };
        let h2 = h * h;
        let stencil: [(i64, i64, f64); 9] = [
            (0, 0, -2.0 * ca / h2 - 2.0 * cc / h2),
            (1, 0, ca / h2 + gx / (2.0 * h)),
            (-1, 0, ca / h2 - gx / (2.0 * h)),
            (0, 1, cc / h2 + gy / (2.0 * h)),
            (0, -1, cc / h2 - gy / (2.0 * h)),
            (1, 1, cb / (4.0 * h2)),
            (-1, -1, cb / (4.0 * h2)),
            (1, -1, -cb / (4.0 * h2)),
            (-1, 1, -cb / (4.0 * h2)),
        ];
        for (di, dj, w) in stencil {
            let (p, q) = ((i as i64 + di) as usize, (j as i64 + dj) as usize);
            match num.of(f, p, q) {
                Some(col) => a.add(row, col, w),
                None if picard => rhs[row] -= w * *f.get(p, q),
                None => {}
            }
        }
        if !picard {
            rhs[row] = -r[row];
        }
    }
    let x = a.solve(&rhs)?;
    if picard {
        Ok(num.nodes.iter().zip(&x).map(|(&(i, j), v)| v - f.get(i, j)).collect())
    } else {
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::graph::functionals::{first_variation_analytic, VariationField};
    use crate::numeric::grid::{disc_grid, square_grid};

    fn catenoid(x: f64, y: f64) -> f64 {
        x.hypot(y).acosh()
    }

    fn max_error(f: &GridField<f64>, exact: impl Fn(f64, f64) -> f64) -> f64 {
        f.interior_nodes()
            .map(|(i, j)| {
                let (x, y) = f.xy(i, j);
                (f.get(i, j) - exact(x, y)).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_data_on_disc_gives_zero() {
        let g = disc_grid((0.0, 0.0), 1.0, 21);
        let (f, rep) = solve_minimal_graph(&g, &SolverOptions::default()).unwrap();
        assert!(f.values().iter().all(|v| *v == 0.0));
        assert_eq!(rep.iterations, 0);
        assert!(!rep.nonconvex_mask);
    }

    #[test]
    fn affine_data_is_reproduced() {
        let aff = |x: f64, y: f64| 0.7 * x - 1.3 * y + 0.25;
        for scheme in [Scheme::Variational, Scheme::Nondivergence] {
            let g = disc_grid((0.2, -0.1), 1.0, 25).with_values(|x, y| {
                // garbage in the interior must not matter
                aff(x, y) + 10.0 * x.sin()
            });
            let mut g = g;
            for (i, j) in g.boundary_nodes().collect::<Vec<_>>() {
                let (x, y) = g.xy(i, j);
                g.set(i, j, aff(x, y));
            }
            let opts = SolverOptions {
                scheme,
                ..Default::default()
            };
            let (f, _) = solve_minimal_graph(&g, &opts).unwrap();
            assert!(max_error(&f, aff) < 1e-10, "{scheme:?}");
        }
    }

    #[test]
    fn catenoid_patch_second_order() {
        let err = |n| {
            let g = square_grid(1.2, 2.0, 1.2, n).with_values(catenoid);
            let (f, rep) = solve_minimal_graph(&g, &SolverOptions::default()).unwrap();
            assert!(rep.residual < 1e-9);
            for w in rep.area_history.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 4.0 * f64::EPSILON));
            }
            max_error(&f, catenoid)
        };
        let (e1, e2) = (err(17), err(33));
        assert!((3.5..4.5).contains(&(e1 / e2)), "{e1:e} {e2:e}");
    }

    #[test]
    fn nondivergence_scheme_is_also_second_order() {
        let err = |n| {
            let g = square_grid(1.2, 2.0, 1.2, n).with_values(catenoid);
            let opts = SolverOptions {
                scheme: Scheme::Nondivergence,
                ..Default::default()
            };
            let (f, rep) = solve_minimal_graph(&g, &opts).unwrap();
            assert!(rep.mge_max < 1e-9);
            max_error(&f, catenoid)
        };
        let (e1, e2) = (err(17), err(33));
        assert!((3.0..5.0).contains(&(e1 / e2)), "{e1:e} {e2:e}");
    }

    #[test]
    fn steep_data_needs_damping_but_converges() {
        let g = square_grid(-1.0, 1.0, -1.0, 21).with_values(|x, y| 3.0 * (2.0 * x).sin() * y.cosh());
        let (f, rep) = solve_minimal_graph(&g, &SolverOptions::default()).unwrap();
        assert!(rep.residual < 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let c: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
            let h = VariationField::from_fn(&f, |x, y| (c[0] * x + c[1] * y + c[2]).sin());
            let dv = first_variation_analytic(&f, &h).unwrap();
            assert!(dv.abs() < 1e-9 * h.l2_norm().max(1.0));
        }
    }

    #[test]
    fn disconnected_mask_is_rejected() {
        let mut mask = vec![false; 49];
        for &(i, j) in &[(1, 1), (1, 2), (5, 5), (5, 4)] {
            mask[j * 7 + i] = true;
        }
        let g = GridField::new((0.0, 0.0), 0.1, (7, 7), mask, vec![0.0; 49]).unwrap();
        assert!(matches!(
            solve_minimal_graph(&g, &SolverOptions::default()),
            Err(Error::MaskNotConnected { components: 2 })
        ));
    }

    #[test]
    fn nonconvex_mask_is_flagged() {
        // an L-shaped interior
        let n = 12;
        let mask: Vec<bool> = (0..n * n)
            .map(|k| {
                let (i, j) = (k % n, k / n);
                (1..n - 1).contains(&i) && (1..n - 1).contains(&j) && (i < 6 || j < 6)
            })
            .collect();
        let g = GridField::new((0.0, 0.0), 0.1, (n, n), mask, vec![0.0; n * n])
            .unwrap()
            .with_values(|x, y| x * y);
        let (_, rep) = solve_minimal_graph(&g, &SolverOptions::default()).unwrap();
        assert!(rep.nonconvex_mask);
    }

    #[test]
    fn iteration_cap_reports_nonconvergence() {
        let g = square_grid(1.2, 2.0, 1.2, 17).with_values(catenoid);
        let opts = SolverOptions {
            max_iter: 1,
            ..Default::default()
        };
        assert!(matches!(
            solve_minimal_graph(&g, &opts),
            Err(Error::NonConvergence { .. })
        ));
    }
}
