//! Parametric surfaces `F: D → Rⁿ` and their parameter domains.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::ComplexExprVec;
use crate::numeric::linalg::VecN;
use crate::numeric::quad::{Loop, Region};

/// Parameter domain of a surface. Points are `(u, v)`, identified with
/// `z = u + iv` for holomorphic data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain {
    Plane,
    Rectangle {
        u: [f64; 2],
        v: [f64; 2],
    },
    Disc {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    Annulus {
        #[serde(default)]
        center: [f64; 2],
        inner: f64,
        outer: f64,
    },
    PuncturedPlane {
        punctures: Vec<[f64; 2]>,
    },
}

fn cpx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl Domain {
    pub fn rectangle(u0: f64, u1: f64, v0: f64, v1: f64) -> Self {
        Domain::Rectangle {
            u: [u0, u1],
            v: [v0, v1],
        }
    }

    pub fn punctured(punctures: &[Complex64]) -> Self {
        Domain::PuncturedPlane {
            punctures: punctures.iter().map(|p| [p.re, p.im]).collect(),
        }
    }

    /// The punctured plane `ℂ ∖ {0}`.
    pub fn c_star() -> Self {
        Self::punctured(&[Complex64::new(0.0, 0.0)])
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Domain::Plane => true,
            Domain::Rectangle { u, v } => u[0] < u[1] && v[0] < v[1],
            Domain::Disc { radius, .. } => *radius > 0.0,
            Domain::Annulus { inner, outer, .. } => 0.0 < *inner && inner < outer,
            Domain::PuncturedPlane { punctures } => punctures.iter().all(|p| p[0].is_finite() && p[1].is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("degenerate domain {self:?}")))
        }
    }

    /// Holes of the domain: the annulus centre or the punctures.
    pub fn holes(&self) -> Vec<Complex64> {
        match self {
            Domain::Annulus { center, .. } => vec![cpx(*center)],
            Domain::PuncturedPlane { punctures } => punctures.iter().map(|p| cpx(*p)).collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(self, Domain::Plane | Domain::Rectangle { .. } | Domain::Disc { .. })
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        let z = Complex64::new(u, v);
        match self {
            Domain::Plane => true,
            Domain::Rectangle { u: ur, v: vr } => (ur[0]..=ur[1]).contains(&u) && (vr[0]..=vr[1]).contains(&v),
            Domain::Disc { center, radius } => (z - cpx(*center)).norm() <= *radius,
            Domain::Annulus { center, inner, outer } => (*inner..=*outer).contains(&(z - cpx(*center)).norm()),
            Domain::PuncturedPlane { punctures } => punctures.iter().all(|p| z != cpx(*p)),
        }
    }

    /// Distance from `(u, v)` to the nearest hole, or `∞` for simply
    /// connected domains.
    pub fn hole_distance(&self, u: f64, v: f64) -> f64 {
        let z = Complex64::new(u, v);
        self.holes()
            .iter()
            .map(|h| (z - h).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// One loop per generator of the first homology group.
    ///
    /// Annuli get the concentric circle at the geometric-mean radius;
    /// a puncture gets a circle of radius half the distance to the nearest
    /// other singular point (capped at 1). All loops are counterclockwise.
    pub fn homology_generators(&self, singularities: &[Complex64]) -> Vec<Loop> {
        match self {
            Domain::Annulus { center, inner, outer } => vec![Loop::circle(cpx(*center), (inner * outer).sqrt())],
            Domain::PuncturedPlane { punctures } => {
                let holes: Vec<Complex64> = punctures.iter().map(|p| cpx(*p)).collect();
                holes
                    .iter()
                    .map(|&p| {
                        let nearest = holes
                            .iter()
                            .chain(singularities)
                            .filter(|&&q| (q - p).norm() > 1e-12)
                            .map(|q| (q - p).norm())
                            .fold(f64::INFINITY, f64::min);
                        Loop::circle(p, (0.5 * nearest).min(1.0))
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// A bounded region inside the domain, used for default sampling.
    pub fn sample_region(&self) -> Region {
        match self {
            Domain::Plane => Region::rectangle(-2.0, 2.0, -2.0, 2.0),
            Domain::Rectangle { u, v } => Region::rectangle(u[0], u[1], v[0], v[1]),
            Domain::Disc { center, radius } => Region::Disc {
                center: *center,
                radius: *radius,
            },
            Domain::Annulus { center, inner, outer } => Region::Annulus {
                center: *center,
                inner: *inner,
                outer: *outer,
            },
            Domain::PuncturedPlane { punctures } => match punctures.as_slice() {
                [c] => Region::Annulus {
                    center: *c,
                    inner: 0.2,
                    outer: 3.0,
                },
                _ => Region::rectangle(-3.0, 3.0, -3.0, 3.0),
            },
        }
    }
}

/// Where a surface's values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    IntegratedFromWeierstrass,
    Grid,
}

/// Position and first and second partials at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub p: VecN,
    pub fu: VecN,
    pub fv: VecN,
    pub fuu: VecN,
    pub fuv: VecN,
    pub fvv: VecN,
}

impl Jet {
    pub fn laplacian(&self) -> VecN {
        &self.fuu + &self.fvv
    }

    /// `|F_u|²|F_v|² − (F_u·F_v)²`, the squared area element.
    pub fn area_element_sq(&self) -> f64 {
        let (e, f, g) = (self.fu.norm_squared(), self.fu.dot(&self.fv), self.fv.norm_squared());
        (e * g - f * f).max(0.0)
    }
}

/// A parametric immersion `D → Rⁿ`.
pub trait SurfaceMap: Send + Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn domain(&self) -> &Domain;
    fn provenance(&self) -> Provenance;
    fn position(&self, u: f64, v: f64) -> Result<VecN>;

    /// Exact first and second partials, if the surface knows them.
    fn analytic_jet(&self, _u: f64, _v: f64) -> Option<Result<Jet>> {
        None
    }
}

impl<S: SurfaceMap + ?Sized> SurfaceMap for Arc<S> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn domain(&self) -> &Domain {
        (**self).domain()
    }
    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }
    fn position(&self, u: f64, v: f64) -> Result<VecN> {
        (**self).position(u, v)
    }
    fn analytic_jet(&self, u: f64, v: f64) -> Option<Result<Jet>> {
        (**self).analytic_jet(u, v)
    }
}

/// Relative step of the finite-difference fallback.
pub const FD_STEP: f64 = 1e-3;

/// Partials at `(u, v)`: analytic when available, otherwise fourth-order
/// central differences with step `FD_STEP` times the local scale (the
/// distance to the nearest hole, capped at 1).
pub fn jet<S: SurfaceMap + ?Sized>(s: &S, u: f64, v: f64) -> Result<Jet> {
    if let Some(j) = s.analytic_jet(u, v) {
        return j;
    }
    fd_jet(s, u, v)
}

/// Finite-difference jet regardless of analytic availability.
pub fn fd_jet<S: SurfaceMap + ?Sized>(s: &S, u: f64, v: f64) -> Result<Jet> {
    let scale = s.domain().hole_distance(u, v).min(1.0);
    let h = FD_STEP * scale;
    let f = |a: f64, b: f64| s.position(u + a * h, v + b * h);
    let p = s.position(u, v)?;
    let (up1, um1, up2, um2) = (f(1.0, 0.0)?, f(-1.0, 0.0)?, f(2.0, 0.0)?, f(-2.0, 0.0)?);
    let (vp1, vm1, vp2, vm2) = (f(0.0, 1.0)?, f(0.0, -1.0)?, f(0.0, 2.0)?, f(0.0, -2.0)?);
    let d1 = |p1: &VecN, m1: &VecN, p2: &VecN, m2: &VecN| (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
    let d2 = |p1: &VecN, m1: &VecN, p2: &VecN, m2: &VecN| (16.0 * (p1 + m1) - (p2 + m2) - 30.0 * &p) / (12.0 * h * h);
    // mixed partial: fourth-order combination of two diagonal stencils
    let mixed =
        |k: f64| -> Result<VecN> { Ok((f(k, k)? - f(k, -k)? - f(-k, k)? + f(-k, -k)?) / (4.0 * k * k * h * h)) };
    let (m1, m2) = (mixed(1.0)?, mixed(2.0)?);
    Ok(Jet {
        fu: d1(&up1, &um1, &up2, &um2),
        fv: d1(&vp1, &vm1, &vp2, &vm2),
        fuu: d2(&up1, &um1, &up2, &um2),
        fvv: d2(&vp1, &vm1, &vp2, &vm2),
        fuv: (4.0 * m1 - m2) / 3.0,
        p,
    })
}

type JetFn = dyn Fn(f64, f64) -> Jet + Send + Sync;

/// Surface given by a hand-differentiated closed form.
#[derive(Clone)]
pub struct ClosedForm {
    name: String,
    dim: usize,
    domain: Domain,
    eval: Arc<JetFn>,
}

impl ClosedForm {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        domain: Domain,
        eval: impl Fn(f64, f64) -> Jet + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            dim,
            domain,
            eval: Arc::new(eval),
        }
    }

    /// Linear map `(u, v) ↦ u·a + v·b`.
    pub fn linear(name: impl Into<String>, a: VecN, b: VecN, domain: Domain) -> Self {
        let n = a.len();
        Self::new(name, n, domain, move |u, v| Jet {
            p: &a * u + &b * v,
            fu: a.clone(),
            fv: b.clone(),
            fuu: VecN::zeros(n),
            fuv: VecN::zeros(n),
            fvv: VecN::zeros(n),
        })
    }
}

impl std::fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosedForm")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .finish()
    }
}

fn check_finite(p: &VecN, u: f64, v: f64) -> Result<()> {
    if p.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite {
            z: Complex64::new(u, v),
        })
    }
}

impl SurfaceMap for ClosedForm {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn provenance(&self) -> Provenance {
        Provenance::ClosedForm
    }
    fn position(&self, u: f64, v: f64) -> Result<VecN> {
        let p = (self.eval)(u, v).p;
        check_finite(&p, u, v)?;
        Ok(p)
    }
    fn analytic_jet(&self, u: f64, v: f64) -> Option<Result<Jet>> {
        let j = (self.eval)(u, v);
        Some(check_finite(&j.p, u, v).map(|_| j))
    }
}

/// Holomorphic curve `Z: D → ℂⁿ` with its first two derivatives.
pub trait HoloCurve: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, z: Complex64) -> Result<Vec<Complex64>>;
    fn deriv(&self, z: Complex64) -> Result<Vec<Complex64>>;
    fn deriv2(&self, z: Complex64) -> Result<Vec<Complex64>>;
}

/// Holomorphic curve given by closed-form expressions.
#[derive(Debug, Clone)]
pub struct ExprCurve {
    z: ComplexExprVec,
    dz: ComplexExprVec,
    d2z: ComplexExprVec,
}

impl ExprCurve {
    pub fn new(z: ComplexExprVec) -> Self {
        let dz = z.differentiate();
        let d2z = dz.differentiate();
        Self { z, dz, d2z }
    }

    pub fn expr(&self) -> &ComplexExprVec {
        &self.z
    }

    pub fn derivative_expr(&self) -> &ComplexExprVec {
        &self.dz
    }
}

impl HoloCurve for ExprCurve {
    fn dim(&self) -> usize {
        self.z.dim()
    }
    fn value(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.z.eval(z)
    }
    fn deriv(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.dz.eval(z)
    }
    fn deriv2(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.d2z.eval(z)
    }
}

/// `X(z) = offset + Re(e^{it}·Z(z))`, a conformal harmonic map whenever
/// `Z` is a null curve.
#[derive(Clone)]
pub struct HoloSurface {
    name: String,
    curve: Arc<dyn HoloCurve>,
    phase: Complex64,
    offset: VecN,
    domain: Domain,
    provenance: Provenance,
}

impl HoloSurface {
    pub fn new(name: impl Into<String>, curve: Arc<dyn HoloCurve>, domain: Domain, provenance: Provenance) -> Self {
        let n = curve.dim();
        Self {
            name: name.into(),
            curve,
            phase: Complex64::new(1.0, 0.0),
            offset: VecN::zeros(n),
            domain,
            provenance,
        }
    }

    /// Rotates the curve by `e^{it}` (the associated-family parameter).
    pub fn with_phase(mut self, t: f64) -> Self {
        self.phase = Complex64::from_polar(1.0, t);
        self
    }

    pub fn with_offset(mut self, offset: VecN) -> Self {
        self.offset = offset;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn curve(&self) -> &Arc<dyn HoloCurve> {
        &self.curve
    }

    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    /// `Φ = 2∂X/∂z = e^{it}·Z'(z)`.
    pub fn phi(&self, z: Complex64) -> Result<Vec<Complex64>> {
        Ok(self.curve.deriv(z)?.into_iter().map(|w| self.phase * w).collect())
    }

    fn re_of(&self, w: &[Complex64], factor: Complex64) -> VecN {
        VecN::from_iterator(w.len(), w.iter().map(|x| (factor * self.phase * x).re))
    }
}

impl std::fmt::Debug for HoloSurface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HoloSurface")
            .field("name", &self.name)
            .field("phase", &self.phase)
            .field("domain", &self.domain)
            .finish()
    }
}

impl SurfaceMap for HoloSurface {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.curve.dim()
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn provenance(&self) -> Provenance {
        self.provenance
    }
    fn position(&self, u: f64, v: f64) -> Result<VecN> {
        let w = self.curve.value(Complex64::new(u, v))?;
        Ok(&self.offset + self.re_of(&w, Complex64::new(1.0, 0.0)))
    }
    fn analytic_jet(&self, u: f64, v: f64) -> Option<Result<Jet>> {
        let z = Complex64::new(u, v);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        Some((|| {
            let (d1, d2) = (self.curve.deriv(z)?, self.curve.deriv2(z)?);
            Ok(Jet {
                p: self.position(u, v)?,
                fu: self.re_of(&d1, one),
                fv: self.re_of(&d1, i),
                fuu: self.re_of(&d2, one),
                fuv: self.re_of(&d2, i),
                fvv: self.re_of(&d2, -one),
            })
        })())
    }
}

/// `x ↦ R·F(u, v) + b` for an orthogonal `R`.
#[derive(Clone)]
pub struct RigidMotion<S> {
    inner: S,
    rotation: DMatrix<f64>,
    shift: VecN,
    name: String,
}

impl<S: SurfaceMap> RigidMotion<S> {
    pub fn new(inner: S, rotation: DMatrix<f64>, shift: VecN) -> Result<Self> {
        let n = inner.dim();
        if rotation.shape() != (n, n) || shift.len() != n {
            return Err(Error::InvalidInput("rigid motion has wrong dimension".into()));
        }
        let defect = (rotation.transpose() * &rotation - DMatrix::identity(n, n)).norm();
        if defect > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "matrix is not orthogonal (|RᵀR − I| = {defect:e})"
            )));
        }
        let name = format!("rigid({})", inner.name());
        Ok(Self {
            inner,
            rotation,
            shift,
            name,
        })
    }
}

impl<S: SurfaceMap> SurfaceMap for RigidMotion<S> {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn domain(&self) -> &Domain {
        self.inner.domain()
    }
    fn provenance(&self) -> Provenance {
        self.inner.provenance()
    }
    fn position(&self, u: f64, v: f64) -> Result<VecN> {
        Ok(&self.rotation * self.inner.position(u, v)? + &self.shift)
    }
    fn analytic_jet(&self, u: f64, v: f64) -> Option<Result<Jet>> {
        let r = &self.rotation;
        self.inner.analytic_jet(u, v).map(|j| {
            j.map(|j| Jet {
                p: r * j.p + &self.shift,
                fu: r * j.fu,
                fv: r * j.fv,
                fuu: r * j.fuu,
                fuv: r * j.fuv,
                fvv: r * j.fvv,
            })
        })
    }
}

/// Inverse stereographic projection `R² → S² ⊂ R³`: conformal, not minimal.
pub fn unit_sphere() -> ClosedForm {
    ClosedForm::new("sphere", 3, Domain::Plane, |u, v| {
        // F = (2u, 2v, s − 1)/(1 + s), s = u² + v²
        let s = u * u + v * v;
        let d = 1.0 + s;
        let (d2, d3) = (d * d, d * d * d);
        let p = VecN::from_vec(vec![2.0 * u / d, 2.0 * v / d, (s - 1.0) / d]);
        let fu = VecN::from_vec(vec![2.0 * (d - 2.0 * u * u) / d2, -4.0 * u * v / d2, 4.0 * u / d2]);
        let fv = VecN::from_vec(vec![-4.0 * u * v / d2, 2.0 * (d - 2.0 * v * v) / d2, 4.0 * v / d2]);
        let fuu = VecN::from_vec(vec![
            4.0 * u * (u * u - 3.0 * (1.0 + v * v)) / d3,
            4.0 * v * (3.0 * u * u - 1.0 - v * v) / d3,
            4.0 * (1.0 + v * v - 3.0 * u * u) / d3,
        ]);
        let fvv = VecN::from_vec(vec![
            4.0 * u * (3.0 * v * v - 1.0 - u * u) / d3,
            4.0 * v * (v * v - 3.0 * (1.0 + u * u)) / d3,
            4.0 * (1.0 + u * u - 3.0 * v * v) / d3,
        ]);
        let fuv = VecN::from_vec(vec![
            4.0 * v * (3.0 * u * u - 1.0 - v * v) / d3,
            4.0 * u * (3.0 * v * v - 1.0 - u * u) / d3,
            -16.0 * u * v / d3,
        ]);
        Jet {
            p,
            fu,
            fv,
            fuu,
            fuv,
            fvv,
        }
    })
}

/// Full turn, for parameter rectangles of rotational surfaces.
pub const TWO_PI: f64 = 2.0 * PI;
