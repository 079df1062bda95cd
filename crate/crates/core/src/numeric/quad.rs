//! Composite Gauss–Legendre quadrature with panel doubling.
//!
//! Every integral is evaluated with order-8 Gauss–Legendre panels; the
//! panel count doubles until two successive estimates agree to
//! `tol · max(1, |I|)`.

use std::f64::consts::TAU;
use std::ops::{Add, Mul};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::ComplexExpr;

pub const GL_ORDER: usize = 8;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for m in 2..=n {
                let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    (nodes, weights)
}

fn gl8() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub tol: f64,
    /// Initial number of panels.
    pub min_panels: usize,
    /// Maximum number of doublings after the initial estimate.
    pub max_doublings: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            min_panels: 2,
            max_doublings: 14,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub panels: usize,
}

/// Anything that can be accumulated by a quadrature rule.
pub trait Integrand: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Panel layout along an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Uniform,
    /// Panel edges in geometric progression; requires `0 < a < b`.
    Geometric,
}

fn panel_edges(a: f64, b: f64, n: usize, spacing: Spacing) -> impl Iterator<Item = (f64, f64)> {
    let ratio = if spacing == Spacing::Geometric {
        (b / a).powf(1.0 / n as f64)
    } else {
        1.0
    };
    let edge = move |k: usize| match spacing {
        _ if k == 0 => a,
        _ if k == n => b,
        Spacing::Uniform => a + (b - a) * k as f64 / n as f64,
        Spacing::Geometric => a * ratio.powi(k as i32),
    };
    (0..n).map(move |k| (edge(k), edge(k + 1)))
}

fn composite<T, F>(f: &mut F, a: f64, b: f64, n: usize, spacing: Spacing) -> Result<T>
where
    T: Integrand,
    F: FnMut(f64) -> Result<T>,
{
    let (xs, ws) = gl8();
    let mut total = T::zero();
    for (lo, hi) in panel_edges(a, b, n, spacing) {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut panel = T::zero();
        for (x, w) in xs.iter().zip(ws) {
            panel = panel + f(mid + half * x)? * *w;
        }
        total = total + panel * half;
    }
    Ok(total)
}

/// `∫ₐᵇ f(x) dx` with the given panel spacing.
pub fn quad_1d_spaced<T, F>(mut f: F, a: f64, b: f64, spacing: Spacing, opts: &QuadOptions) -> Result<Estimate<T>>
where
    T: Integrand,
    F: FnMut(f64) -> Result<T>,
{
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: 0.0,
            panels: 0,
        });
    }
    let mut n = opts.min_panels.max(1);
    let mut prev = composite(&mut f, a, b, n, spacing)?;
    for _ in 0..opts.max_doublings {
        n *= 2;
        let next = composite(&mut f, a, b, n, spacing)?;
        let diff = (next + prev * -1.0).magnitude();
        if diff <= opts.tol * next.magnitude().max(1.0) {
            return Ok(Estimate {
                value: next,
                error: diff,
                panels: n,
            });
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        what: "quadrature",
        estimate: prev.magnitude(),
        residual: f64::NAN,
    })
}

/// `∫ₐᵇ f(x) dx` on uniform panels.
pub fn quad_1d<T, F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Estimate<T>>
where
    T: Integrand,
    F: FnMut(f64) -> Result<T>,
{
    quad_1d_spaced(f, a, b, Spacing::Uniform, opts)
}

#[derive(Debug, Clone, PartialEq)]
enum LoopShape {
    Circle { center: Complex64, radius: f64 },
    Polyline(Vec<Complex64>),
    Expr { gamma: ComplexExpr, dgamma: ComplexExpr },
}

/// Closed curve `γ: [0, 1] → ℂ` for contour integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct Loop {
    shape: LoopShape,
    reversed: bool,
    samples: usize,
}

impl Loop {
    /// Counterclockwise circle.
    pub fn circle(center: Complex64, radius: f64) -> Self {
        Self {
            shape: LoopShape::Circle { center, radius },
            reversed: false,
            samples: 64,
        }
    }

    /// Closed polyline through `points`; the closing segment back to the
    /// first point is implied unless the last point repeats it.
    pub fn polyline(mut points: Vec<Complex64>) -> Result<Self> {
        if points.len() >= 2 && points.first() == points.last() {
            points.pop();
        }
        if points.len() < 3 {
            return Err(Error::InvalidInput("polyline loop needs ≥ 3 points".into()));
        }
        Ok(Self {
            samples: points.len().max(16),
            shape: LoopShape::Polyline(points),
            reversed: false,
        })
    }

    /// Curve given by an expression in the real parameter `z = t ∈ [0, 1]`.
    pub fn from_expr(gamma: ComplexExpr) -> Result<Self> {
        let dgamma = gamma.differentiate();
        let lp = Self {
            shape: LoopShape::Expr { gamma, dgamma },
            reversed: false,
            samples: 64,
        };
        let gap = (lp.point(0.0)? - lp.point(1.0)?).norm();
        if gap > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "expression loop is not closed: |γ(0) − γ(1)| = {gap:e}"
            )));
        }
        Ok(lp)
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples.max(16);
        self
    }

    pub fn reversed(mut self) -> Self {
        self.reversed = !self.reversed;
        self
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Center and radius, for circles.
    pub fn as_circle(&self) -> Option<(Complex64, f64)> {
        match self.shape {
            LoopShape::Circle { center, radius } => Some((center, radius)),
            _ => None,
        }
    }

    /// Whether the loop winds counterclockwise (positive signed area).
    pub fn is_ccw(&self) -> bool {
        let n = self.samples.max(64);
        let pts: Vec<Complex64> = (0..n).filter_map(|k| self.point(k as f64 / n as f64).ok()).collect();
        let area: f64 = (0..pts.len())
            .map(|k| {
                let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
                a.re * b.im - a.im * b.re
            })
            .sum();
        area > 0.0
    }

    pub fn point(&self, t: f64) -> Result<Complex64> {
        let t = if self.reversed { 1.0 - t } else { t };
        match &self.shape {
            LoopShape::Circle { center, radius } => Ok(center + Complex64::from_polar(*radius, TAU * t)),
            LoopShape::Polyline(pts) => {
                let m = pts.len();
                let s = (t * m as f64).clamp(0.0, m as f64);
                let k = (s.floor() as usize).min(m - 1);
                let frac = s - k as f64;
                Ok(pts[k] + (pts[(k + 1) % m] - pts[k]) * frac)
            }
            LoopShape::Expr { gamma, .. } => gamma.eval(Complex64::new(t, 0.0)),
        }
    }

    /// Minimum distance from sampled loop points to `points`.
    pub fn clearance(&self, points: &[Complex64]) -> Result<f64> {
        let n = self.samples * 16;
        let mut best = f64::INFINITY;
        for k in 0..n {
            let z = self.point(k as f64 / n as f64)?;
            for p in points {
                best = best.min((z - p).norm());
            }
        }
        Ok(best)
    }

    /// Errors when the loop passes within `margin` of any of `points`.
    pub fn check_clearance(&self, points: &[Complex64], margin: f64) -> Result<()> {
        let c = self.clearance(points)?;
        if c > margin {
            Ok(())
        } else {
            Err(Error::DomainViolation(format!(
                "loop passes within {c:e} of a singularity"
            )))
        }
    }

    /// Pieces `(segment parameterisation)` over which the integrand is smooth.
    fn segments(&self) -> Vec<(Complex64, Complex64)> {
        match &self.shape {
            LoopShape::Polyline(pts) => {
                let m = pts.len();
                let segs = (0..m).map(|k| (pts[k], pts[(k + 1) % m]));
                if self.reversed {
                    segs.map(|(a, b)| (b, a)).rev().collect()
                } else {
                    segs.collect()
                }
            }
            _ => Vec::new(),
        }
    }

    fn tangent(&self, t: f64) -> Result<Complex64> {
        let (tt, sign) = if self.reversed { (1.0 - t, -1.0) } else { (t, 1.0) };
        let d = match &self.shape {
            LoopShape::Circle { radius, .. } => Complex64::i() * TAU * Complex64::from_polar(*radius, TAU * tt),
            LoopShape::Expr { dgamma, .. } => dgamma.eval(Complex64::new(tt, 0.0))?,
            LoopShape::Polyline(_) => unreachable!("polylines integrate per segment"),
        };
        Ok(d * sign)
    }
}

/// `∮_C g(z) dz`.
pub fn quad_contour<G>(g: G, c: &Loop, opts: &QuadOptions) -> Result<Estimate<Complex64>>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    let opts = QuadOptions {
        min_panels: opts.min_panels.max(c.samples / GL_ORDER).max(1),
        ..*opts
    };
    if let LoopShape::Polyline(_) = c.shape {
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        let mut panels = 0;
        let seg_opts = QuadOptions { min_panels: 1, ..opts };
        for (a, b) in c.segments() {
            let d = b - a;
            let est = quad_1d(|t| Ok(g(a + d * t)? * d), 0.0, 1.0, &seg_opts)?;
            value += est.value;
            error += est.error;
            panels += est.panels;
        }
        return Ok(Estimate { value, error, panels });
    }
    quad_1d(|t| Ok(g(c.point(t)?)? * c.tangent(t)?), 0.0, 1.0, &opts)
}

/// Plane integration region.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    Rectangle { u: [f64; 2], v: [f64; 2] },
    Disc { center: [f64; 2], radius: f64 },
    Annulus { center: [f64; 2], inner: f64, outer: f64 },
}

impl Region {
    pub fn rectangle(u0: f64, u1: f64, v0: f64, v1: f64) -> Self {
        Region::Rectangle {
            u: [u0, u1],
            v: [v0, v1],
        }
    }

    pub fn disc(radius: f64) -> Self {
        Region::Disc {
            center: [0.0, 0.0],
            radius,
        }
    }

    pub fn annulus(inner: f64, outer: f64) -> Self {
        Region::Annulus {
            center: [0.0, 0.0],
            inner,
            outer,
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            Region::Rectangle { u, v } => (u[1] - u[0]) * (v[1] - v[0]),
            Region::Disc { radius, .. } => std::f64::consts::PI * radius * radius,
            Region::Annulus { inner, outer, .. } => std::f64::consts::PI * (outer * outer - inner * inner),
        }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        match *self {
            Region::Rectangle { u: ur, v: vr } => (ur[0]..=ur[1]).contains(&u) && (vr[0]..=vr[1]).contains(&v),
            Region::Disc { center, radius } => (u - center[0]).hypot(v - center[1]) <= radius,
            Region::Annulus { center, inner, outer } => (inner..=outer).contains(&(u - center[0]).hypot(v - center[1])),
        }
    }
}

/// `∫∫_region g(u, v) du dv` as an iterated composite Gauss–Legendre
/// integral (polar coordinates for discs and annuli).
pub fn quad_area<G>(g: G, region: &Region, opts: &QuadOptions) -> Result<Estimate<f64>>
where
    G: Fn(f64, f64) -> Result<f64>,
{
    let inner_opts = QuadOptions {
        max_doublings: opts.max_doublings.min(12),
        ..*opts
    };
    let mut inner_err: f64 = 0.0;
    let outer = match *region {
        Region::Rectangle { u, v } => quad_1d(
            |x| {
                let est = quad_1d(|y| g(x, y), v[0], v[1], &inner_opts)?;
                inner_err = inner_err.max(est.error);
                Ok(est.value)
            },
            u[0],
            u[1],
            opts,
        )?,
        Region::Disc { center, radius } => polar(&g, center, 0.0, radius, opts, &inner_opts, &mut inner_err)?,
        Region::Annulus { center, inner, outer } => polar(&g, center, inner, outer, opts, &inner_opts, &mut inner_err)?,
    };
    Ok(Estimate {
        value: outer.value,
        error: outer.error + inner_err * region.area().sqrt().max(1.0),
        panels: outer.panels,
    })
}

fn polar<G>(
    g: &G,
    center: [f64; 2],
    r0: f64,
    r1: f64,
    opts: &QuadOptions,
    inner_opts: &QuadOptions,
    inner_err: &mut f64,
) -> Result<Estimate<f64>>
where
    G: Fn(f64, f64) -> Result<f64>,
{
    if !(r0 >= 0.0 && r1 > r0) {
        return Err(Error::InvalidInput(format!("radial range [{r0}, {r1}]")));
    }
    let spacing = if r0 > 0.0 && r1 / r0 > 10.0 {
        Spacing::Geometric
    } else {
        Spacing::Uniform
    };
    let outer_opts = QuadOptions {
        min_panels: if spacing == Spacing::Geometric {
            opts.min_panels.max(2 * (r1 / r0).log10().ceil() as usize)
        } else {
            opts.min_panels
        },
        ..*opts
    };
    quad_1d_spaced(
        |r| {
            let est = quad_1d(
                |t| g(center[0] + r * t.cos(), center[1] + r * t.sin()),
                0.0,
                TAU,
                inner_opts,
            )?;
            *inner_err = inner_err.max(est.error * r);
            Ok(est.value * r)
        },
        r0,
        r1,
        spacing,
        &outer_opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gl8_matches_tabulated_rule() {
        let (x, w) = gauss_legendre(8);
        assert_abs_diff_eq!(x[7], 0.960_289_856_497_536_2, epsilon = 1e-15);
        assert_abs_diff_eq!(w[7], 0.101_228_536_290_376_3, epsilon = 1e-15);
        assert_abs_diff_eq!(x[4], 0.183_434_642_495_649_8, epsilon = 1e-15);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn residue_of_one_over_z() {
        let est = quad_contour(
            |z| Ok(1.0 / z),
            &Loop::circle(c(0.0, 0.0), 1.0),
            &QuadOptions::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(est.value.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(est.value.im, TAU, epsilon = 1e-10);
    }

    #[test]
    fn holomorphic_and_exact_integrands_vanish() {
        let unit = Loop::circle(c(0.0, 0.0), 1.0);
        let opts = QuadOptions::default();
        let a = quad_contour(Ok, &unit, &opts).unwrap();
        assert!(a.value.norm() < 1e-12);
        let b = quad_contour(|z| Ok(1.0 / (z * z)), &unit, &opts).unwrap();
        assert!(b.value.norm() < 1e-12);
    }

    #[test]
    fn clockwise_circle_flips_sign() {
        let cw = Loop::circle(c(0.0, 0.0), 2.0).reversed();
        assert!(!cw.is_ccw());
        let est = quad_contour(|z| Ok(1.0 / z), &cw, &QuadOptions::default()).unwrap();
        assert_abs_diff_eq!(est.value.im, -TAU, epsilon = 1e-10);
    }

    #[test]
    fn polyline_square_around_pole() {
        let sq = Loop::polyline(vec![c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)]).unwrap();
        assert!(sq.is_ccw());
        let est = quad_contour(|z| Ok(1.0 / z), &sq, &QuadOptions::default()).unwrap();
        assert_abs_diff_eq!(est.value.im, TAU, epsilon = 1e-10);
        assert_abs_diff_eq!(est.value.re, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn expression_loop() {
        let gamma = ComplexExpr::parse("0.5 + 2*exp(2*pi*i*z)").unwrap();
        let lp = Loop::from_expr(gamma).unwrap();
        let est = quad_contour(|z| Ok(1.0 / (z - 0.5)), &lp, &QuadOptions::default()).unwrap();
        assert_abs_diff_eq!(est.value.im, TAU, epsilon = 1e-10);
        assert!(Loop::from_expr(ComplexExpr::parse("z").unwrap()).is_err());
    }

    #[test]
    fn clearance_check() {
        let lp = Loop::circle(c(0.0, 0.0), 1.0);
        assert!(lp.check_clearance(&[c(0.0, 0.0)], 0.5).is_ok());
        assert!(lp.check_clearance(&[c(1.0, 0.0)], 1e-3).is_err());
    }

    #[test]
    fn unit_areas() {
        let opts = QuadOptions::default();
        let disc = quad_area(|_, _| Ok(1.0), &Region::disc(1.0), &opts).unwrap();
        assert_abs_diff_eq!(disc.value, PI, epsilon = 1e-12);
        let sq = quad_area(|_, _| Ok(1.0), &Region::rectangle(0.0, 1.0, 0.0, 1.0), &opts).unwrap();
        assert_abs_diff_eq!(sq.value, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn spherical_density_over_large_disc() {
        // ∫₀^R 4r/(1+r²)² dr · 2π = 4π (1 − 1/(1+R²))
        let r = 1e4;
        let exact = 4.0 * PI * (1.0 - 1.0 / (1.0 + r * r));
        let est = quad_area(
            |u, v| Ok(4.0 / (1.0 + u * u + v * v).powi(2)),
            &Region::annulus(1e-8, r),
            &QuadOptions::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(est.value, exact, epsilon = 1e-8);
        assert!((est.value - 4.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn tiling_invariance() {
        let g = |u: f64, v: f64| Ok((u * v).sin() + u.exp() * v);
        let opts = QuadOptions::default();
        let whole = quad_area(g, &Region::rectangle(0.0, 2.0, -1.0, 1.0), &opts).unwrap();
        let left = quad_area(g, &Region::rectangle(0.0, 0.7, -1.0, 1.0), &opts).unwrap();
        let right = quad_area(g, &Region::rectangle(0.7, 2.0, -1.0, 1.0), &opts).unwrap();
        assert!((whole.value - left.value - right.value).abs() < 2.0 * opts.tol * whole.value.abs().max(1.0));
    }

    #[test]
    fn nonconvergence_reported() {
        let opts = QuadOptions {
            max_doublings: 2,
            ..QuadOptions::default()
        };
        let r = quad_1d(|x: f64| Ok((1.0 / x).sin()), 1e-6, 1.0, &opts);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
