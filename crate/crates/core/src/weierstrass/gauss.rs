//! Gauss maps and total curvature.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvature::{gaussian_curvature, unit_normal};
use crate::error::{Error, Result};
use crate::expr::rational::to_rational;
use crate::expr::ComplexExpr;
use crate::numeric::linalg::VecN;
use crate::numeric::quad::{quad_area, QuadOptions, Region};
use crate::surface::{jet, SurfaceMap};

/// Unit normal `X_u × X_v / |X_u × X_v|`.
pub fn classical_gauss_map<S: SurfaceMap + ?Sized>(s: &S, u: f64, v: f64) -> Result<VecN> {
    unit_normal(&jet(s, u, v)?, u, v)
}

/// Stereographic projection from the north pole `(0, 0, 1)`; `∞` maps to a
/// non-finite value.
pub fn stereographic(n: &VecN) -> Complex64 {
    Complex64::new(n[0], n[1]) / (1.0 - n[2])
}

/// `𝔤 = Φ₃ / (Φ₁ − iΦ₂)` from `Φ = 2∂X/∂z`.
pub fn gauss_map_from_phi(phi: &[Complex64], z: Complex64) -> Result<Complex64> {
    let den = phi[0] - Complex64::i() * phi[1];
    let scale = phi.iter().map(|w| w.norm()).fold(0.0, f64::max);
    if den.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateDenominator { z });
    }
    Ok(phi[2] / den)
}

/// Complex Gauss map of a conformal surface in R³ at `z = u + iv`, from
/// its partials `Φ = X_u − iX_v`.
pub fn complex_gauss_map<S: SurfaceMap + ?Sized>(s: &S, u: f64, v: f64) -> Result<Complex64> {
    if s.dim() != 3 {
        return Err(Error::InvalidInput("complex Gauss map needs a surface in R³".into()));
    }
    let j = jet(s, u, v)?;
    let phi: Vec<Complex64> = (0..3).map(|k| Complex64::new(j.fu[k], -j.fv[k])).collect();
    gauss_map_from_phi(&phi, Complex64::new(u, v))
}

/// `−∫∫ 4|𝔤′|²/(1 + |𝔤|²)² du dv`: minus the spherical area swept by `𝔤`
/// over `region`, with multiplicity.
pub fn total_curvature_spherical(g: &ComplexExpr, region: &Region, opts: &QuadOptions) -> Result<f64> {
    let dg = g.differentiate();
    let est = quad_area(
        |u, v| {
            let z = Complex64::new(u, v);
            let (w, dw) = (g.eval(z)?, dg.eval(z)?);
            Ok(-4.0 * dw.norm_sqr() / (1.0 + w.norm_sqr()).powi(2))
        },
        region,
        opts,
    )?;
    Ok(est.value)
}

/// Total curvature from the degree of a rational Gauss map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TotalCurvature {
    Finite { value: f64, degree: usize },
    NegativeInfinity,
}

impl TotalCurvature {
    pub fn value(&self) -> f64 {
        match *self {
            TotalCurvature::Finite { value, .. } => value,
            TotalCurvature::NegativeInfinity => f64::NEG_INFINITY,
        }
    }
}

/// `−4π·deg 𝔤` for rational `𝔤`. A transcendental `𝔤` gives `−∞` when the
/// caller asserts the surface is complete, and `NotRational` otherwise.
pub fn total_curvature_degree(g: &ComplexExpr, complete: bool) -> Result<TotalCurvature> {
    match to_rational(g.node()) {
        Ok(r) => {
            let degree = r.degree();
            Ok(TotalCurvature::Finite {
                value: -4.0 * PI * degree as f64,
                degree,
            })
        }
        Err(Error::NotRational { .. }) if complete => Ok(TotalCurvature::NegativeInfinity),
        Err(e) => Err(e),
    }
}

/// `∫∫ K dA` over `region` from the intrinsic Gaussian curvature, in any
/// codimension.
pub fn total_curvature_intrinsic<S: SurfaceMap + ?Sized>(s: &S, region: &Region, opts: &QuadOptions) -> Result<f64> {
    let est = quad_area(
        |u, v| {
            let j = jet(s, u, v)?;
            Ok(gaussian_curvature(&j, u, v)? * j.area_element_sq().sqrt())
        },
        region,
        opts,
    )?;
    Ok(est.value)
}
