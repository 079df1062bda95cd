//! Area, energy and first-variation functionals on grids.
//!
//! Gradients are taken per active cell with the cell-centred stencil
//! `f_x = ((f₁₀ + f₁₁) − (f₀₀ + f₀₁)) / 2h` (and likewise `f_y`), and each
//! cell contributes `h²` times the integrand at its centre. Nodal second
//! derivatives use 3-point central differences and the 4-corner mixed
//! stencil.

use crate::curvature::{mge_operator, GraphJet2};
use crate::error::{Error, Result};
use crate::numeric::grid::GridField;
use crate::numeric::linalg::{SymMat2, VecN};
use crate::numeric::quad::{quad_area, Estimate, QuadOptions, Region};
use crate::surface::{jet, SurfaceMap};

/// Cell-centred stencil weights for corners `[f₀₀, f₁₀, f₀₁, f₁₁]`.
pub(crate) const AX: [f64; 4] = [-0.5, 0.5, -0.5, 0.5];
pub(crate) const AY: [f64; 4] = [-0.5, -0.5, 0.5, 0.5];

#[inline]
pub(crate) fn corners(i: usize, j: usize) -> [(usize, usize); 4] {
    [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
}

/// `(f_x, f_y)` at the centre of cell `(i, j)`.
#[inline]
pub fn cell_gradient(f: &GridField<f64>, i: usize, j: usize) -> (f64, f64) {
    let h = f.spacing();
    let c = corners(i, j).map(|(p, q)| *f.get(p, q));
    let gx: f64 = (0..4).map(|k| AX[k] * c[k]).sum();
    let gy: f64 = (0..4).map(|k| AY[k] * c[k]).sum();
    (gx / h, gy / h)
}

fn cell_gradient_vec(f: &GridField<VecN>, i: usize, j: usize) -> (VecN, VecN) {
    let h = f.spacing();
    let c = corners(i, j).map(|(p, q)| f.get(p, q));
    let mut gu = VecN::zeros(c[0].len());
    let mut gv = gu.clone();
    for k in 0..4 {
        gu += c[k] * (AX[k] / h);
        gv += c[k] * (AY[k] / h);
    }
    (gu, gv)
}

/// `Area(f) = ∫ √(1 + |∇f|²)` over the active cells.
pub fn area_graph(f: &GridField<f64>) -> f64 {
    let h2 = f.spacing() * f.spacing();
    f.active_cells()
        .map(|(i, j)| {
            let (fx, fy) = cell_gradient(f, i, j);
            h2 * (1.0 + fx * fx + fy * fy).sqrt()
        })
        .sum()
}

/// Central-difference jet at an interior node.
pub fn nodal_jet(f: &GridField<f64>, i: usize, j: usize) -> GraphJet2 {
    let h = f.spacing();
    let v = |p: usize, q: usize| *f.get(p, q);
    let c = v(i, j);
    let fx = (v(i + 1, j) - v(i - 1, j)) / (2.0 * h);
    let fy = (v(i, j + 1) - v(i, j - 1)) / (2.0 * h);
    let fxx = (v(i + 1, j) - 2.0 * c + v(i - 1, j)) / (h * h);
    let fyy = (v(i, j + 1) - 2.0 * c + v(i, j - 1)) / (h * h);
    let fxy = (v(i + 1, j + 1) - v(i + 1, j - 1) - v(i - 1, j + 1) + v(i - 1, j - 1)) / (4.0 * h * h);
    let (x, y) = f.xy(i, j);
    GraphJet2 {
        point: [x, y],
        value: c,
        gradient: [fx, fy],
        hessian: SymMat2::new(fxx, fxy, fyy),
    }
}

/// Nodewise `𝒢(f)` at interior nodes; zero elsewhere.
pub fn mge_residual(f: &GridField<f64>) -> GridField<f64> {
    let mut out = f.map(|_| 0.0);
    for (i, j) in f.interior_nodes() {
        out.set(i, j, mge_operator(&nodal_jet(f, i, j)));
    }
    out
}

/// `∂Area/∂f_k / h²` at interior nodes (the discrete Euler–Lagrange
/// residual, a consistent approximation of `−div(∇f / √(1+|∇f|²))`);
/// zero elsewhere.
pub fn euler_lagrange_residual(f: &GridField<f64>) -> GridField<f64> {
    let h = f.spacing();
    let mut out = f.map(|_| 0.0);
    for (i, j) in f.active_cells() {
        let (fx, fy) = cell_gradient(f, i, j);
        let w = (1.0 + fx * fx + fy * fy).sqrt();
        for (k, (p, q)) in corners(i, j).into_iter().enumerate() {
            if f.is_interior(p, q) {
                let g = (fx * AX[k] + fy * AY[k]) / (h * w);
                let cur = *out.get(p, q);
                out.set(p, q, cur + g);
            }
        }
    }
    out
}

/// Admissible variation: a grid function vanishing off the interior.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationField(GridField<f64>);

impl VariationField {
    pub fn new(h: GridField<f64>) -> Result<Self> {
        for (i, j) in h.nodes() {
            if !h.is_interior(i, j) && *h.get(i, j) != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "variation is nonzero at non-interior node ({i}, {j})"
                )));
            }
        }
        Ok(Self(h))
    }

    /// Samples `g` on the interior of `like`'s grid and zeroes the rest.
    pub fn from_fn(like: &GridField<f64>, g: impl Fn(f64, f64) -> f64) -> Self {
        let mut h = like.with_values(&g);
        for (i, j) in like.nodes() {
            if !like.is_interior(i, j) {
                h.set(i, j, 0.0);
            }
        }
        Self(h)
    }

    pub fn field(&self) -> &GridField<f64> {
        &self.0
    }

    /// Discrete L² norm `(Σ h² hₖ²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let h2 = self.0.spacing() * self.0.spacing();
        (self.0.values().iter().map(|x| x * x).sum::<f64>() * h2).sqrt()
    }
}

fn same_grid<A, B>(a: &GridField<A>, b: &GridField<B>) -> Result<()> {
    if a.dims() != b.dims() || a.spacing() != b.spacing() || a.origin() != b.origin() || a.mask() != b.mask() {
        return Err(Error::InvalidInput("fields live on different grids".into()));
    }
    Ok(())
}

/// `d/ds Area(f + s·h)` at `s = 0`: the exact derivative of [`area_graph`].
pub fn first_variation_analytic(f: &GridField<f64>, h: &VariationField) -> Result<f64> {
    same_grid(f, &h.0)?;
    let h2 = f.spacing() * f.spacing();
    Ok(f.active_cells()
        .map(|(i, j)| {
            let (fx, fy) = cell_gradient(f, i, j);
            let (hx, hy) = cell_gradient(&h.0, i, j);
            h2 * (fx * hx + fy * hy) / (1.0 + fx * fx + fy * fy).sqrt()
        })
        .sum())
}

/// Default step of [`first_variation_fd`].
pub const FD_VARIATION_STEP: f64 = 1e-5;

/// `(Area(f + s·h) − Area(f − s·h)) / 2s`.
pub fn first_variation_fd(f: &GridField<f64>, h: &VariationField, s: f64) -> Result<f64> {
    same_grid(f, &h.0)?;
    let shifted = |sign: f64| {
        let mut g = f.clone();
        for (x, dh) in g.values_mut().iter_mut().zip(h.0.values()) {
            *x += sign * s * dh;
        }
        area_graph(&g)
    };
    Ok((shifted(1.0) - shifted(-1.0)) / (2.0 * s))
}

/// `𝒟(F) = ∫ |F_u|² + |F_v|²` over the active cells.
pub fn dirichlet_energy(f: &GridField<VecN>) -> f64 {
    let h2 = f.spacing() * f.spacing();
    f.active_cells()
        .map(|(i, j)| {
            let (gu, gv) = cell_gradient_vec(f, i, j);
            h2 * (gu.norm_squared() + gv.norm_squared())
        })
        .sum()
}

/// `Area(F) = ∫ √(|F_u|²|F_v|² − (F_u·F_v)²)` over the active cells.
pub fn area_parametric(f: &GridField<VecN>) -> f64 {
    let h2 = f.spacing() * f.spacing();
    f.active_cells()
        .map(|(i, j)| {
            let (gu, gv) = cell_gradient_vec(f, i, j);
            let (e, m, g) = (gu.norm_squared(), gu.dot(&gv), gv.norm_squared());
            h2 * (e * g - m * m).max(0.0).sqrt()
        })
        .sum()
}

/// Dirichlet energy of a surface over a parameter region, by quadrature.
pub fn dirichlet_energy_of_map<S: SurfaceMap + ?Sized>(
    s: &S,
    region: &Region,
    opts: &QuadOptions,
) -> Result<Estimate<f64>> {
    quad_area(
        |u, v| {
            let j = jet(s, u, v)?;
            Ok(j.fu.norm_squared() + j.fv.norm_squared())
        },
        region,
        opts,
    )
}

/// Area of a surface over a parameter region, by quadrature.
pub fn area_of_map<S: SurfaceMap + ?Sized>(s: &S, region: &Region, opts: &QuadOptions) -> Result<Estimate<f64>> {
    quad_area(|u, v| Ok(jet(s, u, v)?.area_element_sq().sqrt()), region, opts)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_abs_diff_eq;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::numeric::grid::{disc_grid, square_grid};
    use crate::surface::{ClosedForm, Domain};

    fn unit_square(n: usize, f: impl Fn(f64, f64) -> f64) -> GridField<f64> {
        square_grid(0.0, 1.0, 0.0, n).with_values(f)
    }

    #[test]
    fn area_examples() {
        assert_abs_diff_eq!(area_graph(&unit_square(17, |_, _| 0.0)), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(area_graph(&unit_square(17, |x, _| x)), 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn catenoid_zone_area_converges_at_second_order() {
        // f = arccosh r over [1.2, 2]², against a fine Gauss–Legendre oracle
        let f = |x: f64, y: f64| x.hypot(y).acosh();
        let density = |x: f64, y: f64| {
            let r2 = x * x + y * y;
            Ok((r2 / (r2 - 1.0)).sqrt())
        };
        let exact = quad_area(
            density,
            &Region::rectangle(1.2, 2.0, 1.2, 2.0),
            &QuadOptions::with_tol(1e-13),
        )
        .unwrap()
        .value;
        let err = |n| (area_graph(&square_grid(1.2, 2.0, 1.2, n).with_values(f)) - exact).abs();
        let (e1, e2) = (err(33), err(65));
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "errors {e1:e} {e2:e}");
    }

    #[test]
    fn mge_examples() {
        let g = square_grid(-1.0, 1.0, -1.0, 21);
        let r = mge_residual(&g.with_values(|x, y| 2.0 * x + 3.0 * y + 1.0));
        assert!(r.values().iter().all(|v| v.abs() < 1e-10));

        // 𝒢(x² + y²) = 4 + 8x² + 8y² is reproduced exactly by the stencils
        let p = g.with_values(|x, y| x * x + y * y);
        let r = mge_residual(&p);
        for (i, j) in g.interior_nodes() {
            let (x, y) = g.xy(i, j);
            assert_abs_diff_eq!(*r.get(i, j), 4.0 + 8.0 * x * x + 8.0 * y * y, epsilon = 1e-9);
        }

        let cat = |n| {
            let c = square_grid(1.2, 2.0, 1.2, n).with_values(|x, y| x.hypot(y).acosh());
            mge_residual(&c).values().iter().fold(0.0f64, |m, v| m.max(v.abs()))
        };
        let ratio = cat(33) / cat(65);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    fn bump(like: &GridField<f64>) -> VariationField {
        VariationField::from_fn(like, |x, y| (PI * x).sin().powi(2) * (PI * y).sin().powi(2))
    }

    #[test]
    fn first_variation_examples() {
        let zero = unit_square(21, |_, _| 0.0);
        let h = bump(&zero);
        assert_eq!(first_variation_analytic(&zero, &h).unwrap(), 0.0);

        let tilted = unit_square(21, |x, _| x);
        let a = first_variation_analytic(&tilted, &h).unwrap();
        let fd = first_variation_fd(&tilted, &h, FD_VARIATION_STEP).unwrap();
        assert!((a - fd).abs() / fd.abs().max(1.0) < 1e-5);
        // ∫ h_x / √2 vanishes for a compactly supported h
        assert!(a.abs() < 1e-12);
    }

    #[test]
    fn analytic_variation_matches_differences_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = square_grid(-1.0, 1.0, -1.0, 15);
        for _ in 0..20 {
            let c: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let f = g.with_values(|x, y| c[0] * x * x + c[1] * x * y + c[2] * (c[3] * y).sin());
            let h = VariationField::from_fn(&g, |x, y| (c[4] * x + c[5] * y).cos());
            let a = first_variation_analytic(&f, &h).unwrap();
            let fd = first_variation_fd(&f, &h, FD_VARIATION_STEP).unwrap();
            assert!((a - fd).abs() / fd.abs().max(1.0) < 1e-8, "{a} vs {fd}");
        }
    }

    #[test]
    fn euler_lagrange_residual_is_the_scaled_gradient() {
        let g = square_grid(0.0, 1.0, 0.0, 9);
        let f = g.with_values(|x, y| x * y + x.sin());
        let r = euler_lagrange_residual(&f);
        let (i, j) = (3, 5);
        let mut h = g.map(|_| 0.0);
        h.set(i, j, 1.0);
        let h = VariationField::new(h).unwrap();
        let grad = first_variation_analytic(&f, &h).unwrap();
        let hs = g.spacing();
        assert_abs_diff_eq!(*r.get(i, j), grad / (hs * hs), epsilon = 1e-12);
    }

    #[test]
    fn variation_must_vanish_off_interior() {
        let g = square_grid(0.0, 1.0, 0.0, 5);
        assert!(VariationField::new(g.with_values(|_, _| 1.0)).is_err());
    }

    #[test]
    fn energy_and_area_of_linear_maps() {
        let g = square_grid(0.0, 1.0, 0.0, 11);
        let f = g.with_values(|u, v| VecN::from_vec(vec![u, 2.0 * v]));
        assert_abs_diff_eq!(dirichlet_energy(&f), 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(area_parametric(&f), 2.0, epsilon = 1e-12);
        let id = g.with_values(|u, v| VecN::from_vec(vec![u, v]));
        assert_abs_diff_eq!(area_parametric(&id), 0.5 * dirichlet_energy(&id), epsilon = 1e-12);
    }

    #[test]
    fn identity_on_the_disc() {
        let id = ClosedForm::linear(
            "identity",
            VecN::from_vec(vec![1.0, 0.0]),
            VecN::from_vec(vec![0.0, 1.0]),
            Domain::Plane,
        );
        let opts = QuadOptions::default();
        let d = dirichlet_energy_of_map(&id, &Region::disc(1.0), &opts).unwrap();
        let a = area_of_map(&id, &Region::disc(1.0), &opts).unwrap();
        assert_abs_diff_eq!(d.value, 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(a.value, PI, epsilon = 1e-12);

        // the masked grid converges too, at the first order of a staircase boundary
        let grid = disc_grid((0.0, 0.0), 1.0, 203).with_values(|u, v| VecN::from_vec(vec![u, v]));
        assert!((dirichlet_energy(&grid) - 2.0 * PI).abs() < 0.1);
    }
}
