//! Curvature of plane curves, graphs and parametric surfaces.

use nalgebra::{DMatrix, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::linalg::{adapted_frame, cross3, eig_sym2, SymMat2, VecN};
use crate::surface::{jet, Jet, SurfaceMap};

/// Tolerance on `|∇f|` for jets that must be tangent-plane adapted.
pub const GRADIENT_TOL: f64 = 1e-9;
/// Minimum `|F_u × F_v|` of an immersion.
pub const IMMERSION_TOL: f64 = 1e-10;

/// Radius of the osculating circle; a zero curvature gives a line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Radius {
    Finite(f64),
    Infinite,
}

impl Radius {
    pub fn as_f64(self) -> f64 {
        match self {
            Radius::Finite(r) => r,
            Radius::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveCurvature {
    pub kappa: f64,
    pub radius: Radius,
    /// Centre of the osculating circle, `(0, 1/κ)`; `None` for a line.
    pub center: Option<[f64; 2]>,
}

/// Curvature at the origin of `y = f(x)` with `f(0) = f'(0) = 0`.
pub fn signed_curvature_1d(f_second: f64) -> CurveCurvature {
    if f_second == 0.0 {
        CurveCurvature {
            kappa: 0.0,
            radius: Radius::Infinite,
            center: None,
        }
    } else {
        CurveCurvature {
            kappa: f_second,
            radius: Radius::Finite(1.0 / f_second),
            center: Some([0.0, 1.0 / f_second]),
        }
    }
}

/// Second-order Taylor data of a graph `z = f(x, y)` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphJet2 {
    pub point: [f64; 2],
    pub value: f64,
    pub gradient: [f64; 2],
    pub hessian: SymMat2,
}

impl GraphJet2 {
    /// Jet with zero value and gradient.
    pub fn adapted(hessian: SymMat2) -> Self {
        Self {
            point: [0.0, 0.0],
            value: 0.0,
            gradient: [0.0, 0.0],
            hessian,
        }
    }

    fn require_adapted(&self) -> Result<()> {
        let norm = self.gradient[0].hypot(self.gradient[1]);
        if norm > GRADIENT_TOL {
            return Err(Error::GradientNotZero { norm });
        }
        if !self.hessian.is_finite() {
            return Err(Error::InvalidInput("hessian is not finite".into()));
        }
        Ok(())
    }
}

/// Principal curvature data, `κ₁ ≥ κ₂`, `H = κ₁ + κ₂`, `K = κ₁κ₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvaturePacket {
    pub k1: f64,
    pub k2: f64,
    pub h: f64,
    pub k: f64,
    pub dir1: VecN,
    pub dir2: VecN,
}

/// `κ_v = Av·v` for a unit vector `v` and an adapted jet.
pub fn directional_curvature(jet: &GraphJet2, v: [f64; 2]) -> Result<f64> {
    jet.require_adapted()?;
    let n = v[0].hypot(v[1]);
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("direction has length {n}, not 1")));
    }
    Ok(jet.hessian.quad_form(&Vector2::new(v[0], v[1])))
}

/// Eigen-decomposition of the Hessian of an adapted jet. The normal form
/// of the graph is `z = ½(κ₁x² + κ₂y²)` in the returned directions.
pub fn principal_curvatures(jet: &GraphJet2) -> Result<CurvaturePacket> {
    jet.require_adapted()?;
    Ok(packet_from_hessian(
        jet.hessian,
        &[VecN::from_vec(vec![1.0, 0.0]), VecN::from_vec(vec![0.0, 1.0])],
    ))
}

/// Packet for a shape operator `a` written in the orthonormal tangent
/// basis `tangent = [e₁, e₂]`; directions are returned in that ambient space.
fn packet_from_hessian(a: SymMat2, tangent: &[VecN]) -> CurvaturePacket {
    let eig = eig_sym2(a);
    let dir = |w: Vector2<f64>| &tangent[0] * w.x + &tangent[1] * w.y;
    CurvaturePacket {
        k1: eig.values[0],
        k2: eig.values[1],
        h: a.trace(),
        k: a.det(),
        dir1: dir(eig.vectors[0]),
        dir2: dir(eig.vectors[1]),
    }
}

/// The minimal graph operator `𝒢(f) = (1+f_y²)f_xx − 2f_xf_yf_xy + (1+f_x²)f_yy`.
pub fn mge_operator(jet: &GraphJet2) -> f64 {
    let [fx, fy] = jet.gradient;
    let SymMat2 { a: fxx, b: fxy, c: fyy } = jet.hessian;
    (1.0 + fy * fy) * fxx - 2.0 * fx * fy * fxy + (1.0 + fx * fx) * fyy
}

/// Mean curvature of a graph with respect to the upward normal:
/// `H = 𝒢(f) / (1+|∇f|²)^{3/2}`.
pub fn graph_mean_curvature(jet: &GraphJet2) -> f64 {
    let [fx, fy] = jet.gradient;
    mge_operator(jet) / (1.0 + fx * fx + fy * fy).powf(1.5)
}

/// Second fundamental form of `F` along `normal`, expressed in an
/// orthonormal tangent basis: `A = J⁻ᵀ II J⁻¹`, where `J` maps parameter
/// increments to tangent-frame coordinates.
fn shape_operator(j: &Jet, tangent: &[VecN], normal: &VecN) -> SymMat2 {
    let jm = Matrix2::new(
        tangent[0].dot(&j.fu),
        tangent[0].dot(&j.fv),
        tangent[1].dot(&j.fu),
        tangent[1].dot(&j.fv),
    );
    let ii = Matrix2::new(
        normal.dot(&j.fuu),
        normal.dot(&j.fuv),
        normal.dot(&j.fuv),
        normal.dot(&j.fvv),
    );
    let inv = jm.try_inverse().unwrap_or_else(Matrix2::zeros);
    let a = inv.transpose() * ii * inv;
    SymMat2::new(a[(0, 0)], 0.5 * (a[(0, 1)] + a[(1, 0)]), a[(1, 1)])
}

fn immersed_frame(j: &Jet, u: f64, v: f64) -> Result<Vec<VecN>> {
    let area = j.area_element_sq().sqrt();
    if !(area > IMMERSION_TOL) {
        return Err(Error::NotImmersed { u, v, area });
    }
    adapted_frame(&j.fu, &j.fv).ok_or(Error::NotImmersed { u, v, area })
}

/// Unit normal `𝐍 = F_u × F_v / |F_u × F_v|` of a surface in R³.
pub fn unit_normal(j: &Jet, u: f64, v: f64) -> Result<VecN> {
    if j.fu.len() != 3 {
        return Err(Error::InvalidInput("unit normal needs a surface in R³".into()));
    }
    let n = cross3(&j.fu, &j.fv);
    let area = n.norm();
    if !(area > IMMERSION_TOL) {
        return Err(Error::NotImmersed { u, v, area });
    }
    Ok(n / area)
}

/// Principal curvatures of a surface in R³ at `(u, v)`, after rotating the
/// tangent plane to the horizontal and viewing the surface as a graph over
/// it. The sign of `H` follows `𝐍 = F_u × F_v / |F_u × F_v|`.
pub fn parametric_curvature<S: SurfaceMap + ?Sized>(s: &S, u: f64, v: f64) -> Result<(CurvaturePacket, VecN)> {
    let j = jet(s, u, v)?;
    parametric_curvature_from_jet(&j, u, v)
}

pub fn parametric_curvature_from_jet(j: &Jet, u: f64, v: f64) -> Result<(CurvaturePacket, VecN)> {
    let normal = unit_normal(j, u, v)?;
    let frame = immersed_frame(j, u, v)?;
    let a = shape_operator(j, &frame[..2], &normal);
    Ok((packet_from_hessian(a, &frame[..2]), normal))
}

/// Mean curvature vector `𝐇 = Σ Hᵢ 𝐞ᵢ` in any codimension: for each unit
/// normal `𝐞ᵢ` of an adapted frame, `Hᵢ` is the Laplacian at the origin of
/// the graph of the `i`-th normal coordinate over the tangent plane.
pub fn mean_curvature_vector(j: &Jet, u: f64, v: f64) -> Result<VecN> {
    let frame = immersed_frame(j, u, v)?;
    let mut h = VecN::zeros(j.fu.len());
    for e in &frame[2..] {
        h += e * shape_operator(j, &frame[..2], e).trace();
    }
    Ok(h)
}

/// Gaussian curvature in any codimension via the Gauss equation,
/// `K = Σᵢ det Aᵢ` over an orthonormal normal frame.
pub fn gaussian_curvature(j: &Jet, u: f64, v: f64) -> Result<f64> {
    let frame = immersed_frame(j, u, v)?;
    Ok(frame[2..].iter().map(|e| shape_operator(j, &frame[..2], e).det()).sum())
}

/// Re-graphs a surface in R³ over its tangent plane at `(u, v)` and returns
/// the adapted Hessian (for inspection and tests).
pub fn tangent_plane_jet(j: &Jet, u: f64, v: f64) -> Result<GraphJet2> {
    let normal = unit_normal(j, u, v)?;
    let frame = immersed_frame(j, u, v)?;
    Ok(GraphJet2::adapted(shape_operator(j, &frame[..2], &normal)))
}

/// Rotation matrix with columns `e₁, e₂, …` of the adapted frame.
pub fn adapted_rotation(j: &Jet, u: f64, v: f64) -> Result<DMatrix<f64>> {
    let frame = immersed_frame(j, u, v)?;
    Ok(DMatrix::from_columns(&frame))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;
    use crate::surface::{unit_sphere, ClosedForm, Domain, RigidMotion};

    #[test]
    fn plane_curves() {
        let c = signed_curvature_1d(2.0);
        assert_eq!((c.kappa, c.radius), (2.0, Radius::Finite(0.5)));
        let c = signed_curvature_1d(0.0);
        assert_eq!(c.radius, Radius::Infinite);
        assert!(c.radius.as_f64().is_infinite());
        assert!(c.center.is_none());
        // lower arc of the unit circle, y = 1 − √(1 − x²), has f''(0) = 1
        let h = 1e-4;
        let y = |x: f64| 1.0 - (1.0 - x * x).sqrt();
        let f2 = (y(h) - 2.0 * y(0.0) + y(-h)) / (h * h);
        let c = signed_curvature_1d(f2);
        assert_abs_diff_eq!(c.kappa, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(c.center.unwrap()[1], 1.0, epsilon = 1e-6);
    }

    #[test]
    fn directional_examples() {
        let d = GraphJet2::adapted(SymMat2::diag(3.0, 1.0));
        assert_eq!(directional_curvature(&d, [1.0, 0.0]).unwrap(), 3.0);
        let diag = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
        assert_abs_diff_eq!(directional_curvature(&d, diag).unwrap(), 2.0, epsilon = 1e-15);
        let off = GraphJet2::adapted(SymMat2::new(0.0, 1.0, 0.0));
        assert_abs_diff_eq!(directional_curvature(&off, diag).unwrap(), 1.0, epsilon = 1e-15);
        let mut tilted = d;
        tilted.gradient = [1e-3, 0.0];
        assert!(matches!(
            directional_curvature(&tilted, [1.0, 0.0]),
            Err(Error::GradientNotZero { .. })
        ));
        assert!(directional_curvature(&d, [1.0, 1.0]).is_err());
    }

    #[test]
    fn principal_examples() {
        let p = principal_curvatures(&GraphJet2::adapted(SymMat2::diag(1.0, 1.0))).unwrap();
        assert_eq!((p.k1, p.k2, p.h, p.k), (1.0, 1.0, 2.0, 1.0));
        let p = principal_curvatures(&GraphJet2::adapted(SymMat2::diag(1.0, -1.0))).unwrap();
        assert_eq!((p.k1, p.k2, p.h, p.k), (1.0, -1.0, 0.0, -1.0));
        assert_eq!(p.dir1.as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn graph_mean_curvature_examples() {
        let plane = GraphJet2 {
            point: [0.3, 0.1],
            value: 1.0,
            gradient: [2.0, 3.0],
            hessian: SymMat2::diag(0.0, 0.0),
        };
        assert_eq!(graph_mean_curvature(&plane), 0.0);

        // catenoid graph f = arccosh r at (2, 0): f_r = 1/√(r²−1), f_rr = −r/(r²−1)^{3/2}
        let r: f64 = 2.0;
        let fr = 1.0 / (r * r - 1.0).sqrt();
        let frr = -r / (r * r - 1.0).powf(1.5);
        let cat = GraphJet2 {
            point: [2.0, 0.0],
            value: r.acosh(),
            gradient: [fr, 0.0],
            hessian: SymMat2::diag(frr, fr / r),
        };
        assert_abs_diff_eq!(graph_mean_curvature(&cat), 0.0, epsilon = 1e-15);

        // upper hemisphere f = √(1 − x² − y²) at (0.3, 0)
        let x: f64 = 0.3;
        let w = (1.0 - x * x).sqrt();
        let hemi = GraphJet2 {
            point: [x, 0.0],
            value: w,
            gradient: [-x / w, 0.0],
            hessian: SymMat2::diag(-1.0 / (w * w * w), -1.0 / w),
        };
        assert_abs_diff_eq!(graph_mean_curvature(&hemi), -2.0, epsilon = 1e-14);
    }

    fn cylinder() -> ClosedForm {
        ClosedForm::new("cylinder", 3, Domain::Plane, |u, v| Jet {
            p: VecN::from_vec(vec![u.cos(), u.sin(), v]),
            fu: VecN::from_vec(vec![-u.sin(), u.cos(), 0.0]),
            fv: VecN::from_vec(vec![0.0, 0.0, 1.0]),
            fuu: VecN::from_vec(vec![-u.cos(), -u.sin(), 0.0]),
            fuv: VecN::zeros(3),
            fvv: VecN::zeros(3),
        })
    }

    #[test]
    fn cylinder_and_sphere() {
        let (p, n) = parametric_curvature(&cylinder(), 0.4, 1.0).unwrap();
        // F_u × F_v points outward, so the cylinder bends away from 𝐍
        assert_abs_diff_eq!(p.k1, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.k2, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.h, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.k, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n[0], 0.4f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.dir1[2].abs(), 1.0, epsilon = 1e-15);

        let s = unit_sphere();
        let (p, _) = parametric_curvature(&s, 0.3, -0.8).unwrap();
        assert_abs_diff_eq!(p.h.abs(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.k, 1.0, epsilon = 1e-12);
        let j = jet(&s, 0.3, -0.8).unwrap();
        assert_abs_diff_eq!(
            mean_curvature_vector(&j, 0.3, -0.8).unwrap().norm(),
            2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(gaussian_curvature(&j, 0.3, -0.8).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_map_is_not_immersed() {
        let s = ClosedForm::linear(
            "line",
            VecN::from_vec(vec![1.0, 0.0, 0.0]),
            VecN::from_vec(vec![2.0, 0.0, 0.0]),
            Domain::Plane,
        );
        assert!(matches!(
            parametric_curvature(&s, 0.0, 0.0),
            Err(Error::NotImmersed { .. })
        ));
    }

    fn rotation(a: f64, b: f64, c: f64, flip: bool) -> DMatrix<f64> {
        let rz =
            |t: f64| DMatrix::from_row_slice(3, 3, &[t.cos(), -t.sin(), 0.0, t.sin(), t.cos(), 0.0, 0.0, 0.0, 1.0]);
        let rx =
            |t: f64| DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, t.cos(), -t.sin(), 0.0, t.sin(), t.cos()]);
        let mut r = rz(a) * rx(b) * rz(c);
        if flip {
            r.column_mut(0).neg_mut();
        }
        r
    }

    proptest! {
        #[test]
        fn rigid_motion_invariance(
            a in 0.0..6.3f64, b in 0.0..3.2f64, c in 0.0..6.3f64, flip: bool,
            shift in proptest::array::uniform3(-5.0..5.0f64),
            u in -1.5..1.5f64, v in -1.5..1.5f64,
        ) {
            let s = unit_sphere();
            let m = RigidMotion::new(s.clone(), rotation(a, b, c, flip), VecN::from_row_slice(&shift)).unwrap();
            let (p0, _) = parametric_curvature(&s, u, v).unwrap();
            let (p1, _) = parametric_curvature(&m, u, v).unwrap();
            // a reflection flips 𝐍 and hence the signs of the curvatures
            let sgn = if flip { -1.0 } else { 1.0 };
            let (k1, k2) = if flip { (-p1.k2, -p1.k1) } else { (p1.k1, p1.k2) };
            prop_assert!((p0.k1 - k1).abs() < 1e-8 && (p0.k2 - k2).abs() < 1e-8, "{:?} vs {:?} (sgn {})", p0, p1, sgn);
        }

        #[test]
        fn trace_identity(a in -5.0..5.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64) {
            let jet = GraphJet2::adapted(SymMat2::new(a, b, c));
            let p = principal_curvatures(&jet).unwrap();
            prop_assert!((p.h - (a + c)).abs() < 1e-12);
            prop_assert!((p.h - (p.k1 + p.k2)).abs() < 1e-12);
            prop_assert!((p.k - p.k1 * p.k2).abs() < 1e-10 * (1.0 + p.k.abs()));
            prop_assert_eq!(graph_mean_curvature(&jet), a + c);
        }
    }
}
