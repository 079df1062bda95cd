//! Primitives `Z(z) = c + ∫_{z₀}^{z} f dζ` along canonical paths, and the
//! surfaces `F = c + Re Z` they define.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use super::periods::{check_periods, periods, PrimitiveKind};
use crate::error::{Error, Result};
use crate::expr::ComplexExprVec;
use crate::numeric::linalg::VecN;
use crate::numeric::quad::{quad_1d, QuadOptions};
use crate::surface::{Domain, HoloCurve, HoloSurface, Provenance};

/// Relative tolerance of the path quadrature.
pub const PATH_TOL: f64 = 1e-13;

/// Piece of an integration path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Leg {
    Segment {
        from: Complex64,
        to: Complex64,
    },
    /// `center + radius·e^{iθ}` for `θ` from `start` to `start + sweep`.
    Arc {
        center: Complex64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Leg {
    fn point(&self, s: f64) -> Complex64 {
        match *self {
            Leg::Segment { from, to } => from + (to - from) * s,
            Leg::Arc {
                center,
                radius,
                start,
                sweep,
            } => center + Complex64::from_polar(radius, start + sweep * s),
        }
    }

    fn velocity(&self, s: f64) -> Complex64 {
        match *self {
            Leg::Segment { from, to } => to - from,
            Leg::Arc {
                radius, start, sweep, ..
            } => Complex64::i() * sweep * Complex64::from_polar(radius, start + sweep * s),
        }
    }
}

/// Piecewise smooth path in the parameter plane.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Path {
    pub legs: Vec<Leg>,
}

impl Path {
    pub fn polyline(points: &[Complex64]) -> Self {
        Self {
            legs: points
                .windows(2)
                .filter(|w| w[0] != w[1])
                .map(|w| Leg::Segment { from: w[0], to: w[1] })
                .collect(),
        }
    }

    /// Radially from `a` to `|b − center|`, then along the circle to `b`
    /// through the shorter arc.
    pub fn radial_angular(center: Complex64, a: Complex64, b: Complex64) -> Self {
        let (ra, rb) = ((a - center).norm(), (b - center).norm());
        let (ta, tb) = ((a - center).arg(), (b - center).arg());
        let mid = center + Complex64::from_polar(rb, ta);
        let mut sweep = tb - ta;
        if sweep > PI {
            sweep -= 2.0 * PI;
        } else if sweep <= -PI {
            sweep += 2.0 * PI;
        }
        let mut legs = Vec::new();
        if ra != rb {
            legs.push(Leg::Segment { from: a, to: mid });
        }
        if sweep != 0.0 {
            legs.push(Leg::Arc {
                center,
                radius: rb,
                start: ta,
                sweep,
            });
        }
        Self { legs }
    }
}

/// `∫_path f dζ`, componentwise.
pub fn integrate_path(f: &ComplexExprVec, path: &Path, opts: &QuadOptions) -> Result<Vec<Complex64>> {
    let mut total = vec![Complex64::new(0.0, 0.0); f.dim()];
    for leg in &path.legs {
        for (k, comp) in f.components().iter().enumerate() {
            let est = quad_1d(|s| Ok(comp.eval(leg.point(s))? * leg.velocity(s)), 0.0, 1.0, opts)?;
            total[k] += est.value;
        }
    }
    Ok(total)
}

/// Deterministic path from `a` to `b` that keeps away from `avoid`.
///
/// Straight when nothing is in the way, radial-then-angular around a single
/// obstacle, otherwise a polyline detouring sideways around each obstacle.
pub fn canonical_path(domain: &Domain, avoid: &[Complex64], a: Complex64, b: Complex64) -> Path {
    let mut pts: Vec<Complex64> = domain.holes();
    for s in avoid {
        if !pts.iter().any(|p| (p - s).norm() < 1e-12) {
            pts.push(*s);
        }
    }
    if pts.is_empty() {
        return Path::polyline(&[a, b]);
    }
    if let [s] = pts.as_slice() {
        if matches!(domain, Domain::Annulus { .. }) || near_segment(*s, a, b, 0.5 * (b - a).norm().max(1e-300)) {
            return Path::radial_angular(*s, a, b);
        }
        return Path::polyline(&[a, b]);
    }
    let rho = pairwise_min(&pts).min(2.0) * 0.5;
    let mut out = vec![a];
    detour(a, b, &pts, rho, 0, &mut out);
    Path::polyline(&out)
}

fn pairwise_min(pts: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.min((p - q).norm());
        }
    }
    best
}

/// Whether `s` lies within `r` of the interior of segment `[a, b]`.
fn near_segment(s: Complex64, a: Complex64, b: Complex64, r: f64) -> bool {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return false;
    }
    let t = ((s - a) * d.conj()).re / len2;
    (0.0..=1.0).contains(&t) && (a + d * t - s).norm() < r
}

fn detour(a: Complex64, b: Complex64, pts: &[Complex64], rho: f64, depth: usize, out: &mut Vec<Complex64>) {
    let blocker = pts
        .iter()
        .copied()
        .find(|&s| (s - a).norm() > 0.5 * rho && (s - b).norm() > 0.5 * rho && near_segment(s, a, b, 0.5 * rho));
    match blocker {
        Some(s) if depth < 8 => {
            let d = (b - a) / (b - a).norm();
            let n = Complex64::i() * d;
            let side = if ((s - a) * d.conj()).im > 0.0 { -1.0 } else { 1.0 };
            let w = s + n * (side * rho);
            detour(a, w, pts, rho, depth + 1, out);
            detour(w, b, pts, rho, depth + 1, out);
        }
        _ => out.push(b),
    }
}

/// `z ↦ c + ∫_{z₀}^{z} f dζ` with memoised values.
pub struct IntegratedCurve {
    f: ComplexExprVec,
    df: ComplexExprVec,
    z0: Complex64,
    c: Vec<Complex64>,
    domain: Domain,
    opts: QuadOptions,
    cache: RwLock<HashMap<(u64, u64), Vec<Complex64>>>,
}

impl std::fmt::Debug for IntegratedCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntegratedCurve")
            .field("f", &self.f.to_sources())
            .field("z0", &self.z0)
            .finish()
    }
}

impl IntegratedCurve {
    pub fn new(f: ComplexExprVec, z0: Complex64, c: Vec<Complex64>, domain: Domain) -> Result<Self> {
        if c.len() != f.dim() {
            return Err(Error::InvalidInput(format!(
                "base value has {} components, data has {}",
                c.len(),
                f.dim()
            )));
        }
        let df = f.differentiate();
        Ok(Self {
            f,
            df,
            z0,
            c,
            domain,
            opts: QuadOptions::with_tol(PATH_TOL),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn data(&self) -> &ComplexExprVec {
        &self.f
    }

    pub fn base_point(&self) -> Complex64 {
        self.z0
    }

    pub fn base_value(&self) -> &[Complex64] {
        &self.c
    }

    pub fn path_to(&self, z: Complex64) -> Path {
        canonical_path(&self.domain, self.f.singularities(), self.z0, z)
    }
}

impl HoloCurve for IntegratedCurve {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn value(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let key = (z.re.to_bits(), z.im.to_bits());
        if let Some(v) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let w = integrate_path(&self.f, &self.path_to(z), &self.opts)?;
        let v: Vec<Complex64> = w.iter().zip(&self.c).map(|(a, b)| a + b).collect();
        self.cache.write().expect("cache lock").insert(key, v.clone());
        Ok(v)
    }

    fn deriv(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.f.eval(z)
    }

    fn deriv2(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.df.eval(z)
    }
}

/// Holomorphic null curve `Z` with its derivative data.
#[derive(Clone)]
pub struct NullCurve {
    pub name: String,
    pub curve: Arc<dyn HoloCurve>,
    pub derivative: ComplexExprVec,
    pub domain: Domain,
}

impl std::fmt::Debug for NullCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NullCurve")
            .field("name", &self.name)
            .field("derivative", &self.derivative.to_sources())
            .finish()
    }
}

impl NullCurve {
    pub fn value(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.curve.value(z)
    }

    /// `X^t = Re(e^{it} Z)`.
    pub fn associated_family(&self, t: f64) -> HoloSurface {
        associated_family(self, t)
    }
}

pub fn associated_family(z: &NullCurve, t: f64) -> HoloSurface {
    HoloSurface::new(
        format!("{} (t = {t})", z.name),
        z.curve.clone(),
        z.domain.clone(),
        Provenance::ClosedForm,
    )
    .with_phase(t)
}

/// Result of [`integrate_primitive`].
#[derive(Debug, Clone)]
pub enum Primitive {
    Surface(HoloSurface),
    Null(NullCurve),
}

impl Primitive {
    pub fn into_surface(self) -> HoloSurface {
        match self {
            Primitive::Surface(s) => s,
            Primitive::Null(z) => HoloSurface::new(z.name, z.curve, z.domain, Provenance::IntegratedFromWeierstrass),
        }
    }

    pub fn into_null_curve(self) -> Option<NullCurve> {
        match self {
            Primitive::Null(z) => Some(z),
            Primitive::Surface(_) => None,
        }
    }
}

/// Points where `f` is sampled for a common zero.
fn zero_probe(domain: &Domain, z0: Complex64) -> Vec<Complex64> {
    let mut pts = vec![z0];
    let region = domain.sample_region();
    let holes = domain.holes();
    let n = 12;
    for j in 0..n {
        for k in 0..n {
            let (u, v) = ((j as f64 + 0.5) / n as f64, (k as f64 + 0.5) / n as f64);
            let z = match region {
                crate::numeric::quad::Region::Rectangle { u: ur, v: vr } => {
                    Complex64::new(ur[0] + u * (ur[1] - ur[0]), vr[0] + v * (vr[1] - vr[0]))
                }
                crate::numeric::quad::Region::Disc { center, radius } => {
                    Complex64::new(center[0], center[1]) + Complex64::from_polar(radius * u, 2.0 * PI * v)
                }
                crate::numeric::quad::Region::Annulus { center, inner, outer } => {
                    Complex64::new(center[0], center[1])
                        + Complex64::from_polar(inner + u * (outer - inner), 2.0 * PI * v)
                }
            };
            if holes.iter().all(|h| (z - h).norm() > 1e-3) {
                pts.push(z);
            }
        }
    }
    pts
}

/// Integrates holomorphic data `f` from `z₀`.
///
/// `RealPart` yields the surface `F = c + Re∫ f dz` (`c` real, imaginary
/// parts ignored); `FullComplex` yields the null curve `Z = c + ∫ f dz`.
pub fn integrate_primitive(
    f: &ComplexExprVec,
    domain: &Domain,
    z0: Complex64,
    c: &[Complex64],
    kind: PrimitiveKind,
) -> Result<Primitive> {
    domain.validate()?;
    if !domain.contains(z0.re, z0.im) || domain.hole_distance(z0.re, z0.im) == 0.0 {
        return Err(Error::DomainViolation(format!("base point {z0} is outside the domain")));
    }
    let loops = domain.homology_generators(f.singularities());
    let ps = periods(f, &loops, &QuadOptions::default())?;
    check_periods(&ps, kind)?;
    for z in zero_probe(domain, z0) {
        match f.eval(z) {
            Ok(w) => {
                let scale = 1.0 + (z0 - z).norm();
                if w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() < 1e-12 * scale {
                    return Err(Error::CommonZero { z });
                }
            }
            Err(Error::SingularityHit { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let base: Vec<Complex64> = match kind {
        PrimitiveKind::RealPart => vec![Complex64::new(0.0, 0.0); f.dim()],
        PrimitiveKind::FullComplex => c.to_vec(),
    };
    if c.len() != f.dim() {
        return Err(Error::InvalidInput(format!(
            "base value has {} components, data has {}",
            c.len(),
            f.dim()
        )));
    }
    let curve = Arc::new(IntegratedCurve::new(f.clone(), z0, base, domain.clone())?);
    Ok(match kind {
        PrimitiveKind::RealPart => {
            let offset = VecN::from_iterator(c.len(), c.iter().map(|w| w.re));
            Primitive::Surface(
                HoloSurface::new(
                    "integrated",
                    curve,
                    domain.clone(),
                    Provenance::IntegratedFromWeierstrass,
                )
                .with_offset(offset),
            )
        }
        PrimitiveKind::FullComplex => Primitive::Null(NullCurve {
            name: "integrated".into(),
            curve,
            derivative: f.clone(),
            domain: domain.clone(),
        }),
    })
}
