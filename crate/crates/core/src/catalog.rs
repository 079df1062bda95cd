//! The classical example surfaces, a non-minimal sphere control, and the
//! catenoid Plateau problem.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{ComplexExpr, ComplexExprVec};
use crate::numeric::linalg::VecN;
use crate::numeric::roots::{find_roots_1d, RootKind, RootOptions};
use crate::surface::{unit_sphere, ClosedForm, Domain, ExprCurve, HoloSurface, Jet, Provenance, SurfaceMap, TWO_PI};
use crate::weierstrass::checks::sample_points;
use crate::weierstrass::{NullCurve, WeierstrassDataR3};

/// Margin kept from singular points by default sample sets.
pub const SAMPLE_MARGIN: f64 = 1e-3;

/// Antiholomorphic deck transformation of a double cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Involution {
    /// `z ↦ −1/z̄`.
    AntipodalInversion,
}

impl Involution {
    pub fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Involution::AntipodalInversion => -1.0 / z.conj(),
        }
    }
}

/// What an entry claims about itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectations {
    pub conformal: bool,
    pub harmonic: bool,
    pub minimal: bool,
    /// `|𝐇|` for non-minimal controls.
    pub mean_curvature_norm: Option<f64>,
    /// Total curvature of the parameterised surface (`−∞` allowed).
    pub total_curvature: Option<f64>,
    /// Total curvature of the quotient by the involution.
    pub quotient_total_curvature: Option<f64>,
    /// Whether the surface is complete (lets a transcendental Gauss map
    /// report `−∞`).
    pub complete: bool,
}

impl Expectations {
    fn minimal(tc: Option<f64>) -> Self {
        Self {
            conformal: true,
            harmonic: true,
            minimal: true,
            mean_curvature_norm: None,
            total_curvature: tc,
            quotient_total_curvature: None,
            complete: true,
        }
    }
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub summary: String,
    pub surface: Arc<dyn SurfaceMap>,
    pub null_curve: Option<NullCurve>,
    pub weierstrass: Option<WeierstrassDataR3>,
    /// `Φ = 2∂X/∂z`, null for conformal harmonic entries.
    pub derivative: Option<ComplexExprVec>,
    pub gauss_map: Option<ComplexExpr>,
    pub expect: Expectations,
    pub involution: Option<Involution>,
    /// Points (besides domain holes) kept away from in samples.
    pub singularities: Vec<Complex64>,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry").field("name", &self.name).finish()
    }
}

/// Serializable description of an entry.
#[derive(Debug, Clone, Serialize)]
pub struct EntryInfo {
    pub name: String,
    pub summary: String,
    pub dim: usize,
    pub domain: Domain,
    pub provenance: Provenance,
    pub derivative: Option<Vec<String>>,
    pub gauss_map: Option<String>,
    pub expectations: Expectations,
    pub involution: Option<Involution>,
}

impl CatalogEntry {
    /// Seeded samples of the domain away from holes and singularities.
    pub fn samples(&self, count: usize, seed: u64) -> Vec<(f64, f64)> {
        sample_points(self.surface.domain(), count, seed, &self.singularities, SAMPLE_MARGIN)
    }

    /// `max |X(ℑz) − X(z)|` over the samples, relative to `max(1, |X(z)|)`.
    pub fn involution_residual(&self, samples: &[(f64, f64)]) -> Result<Option<f64>> {
        let Some(inv) = self.involution else {
            return Ok(None);
        };
        let mut worst: f64 = 0.0;
        for &(u, v) in samples {
            let w = inv.apply(Complex64::new(u, v));
            let (a, b) = (self.surface.position(u, v)?, self.surface.position(w.re, w.im)?);
            worst = worst.max((a - &b).norm() / b.norm().max(1.0));
        }
        Ok(Some(worst))
    }

    pub fn info(&self) -> EntryInfo {
        EntryInfo {
            name: self.name.clone(),
            summary: self.summary.clone(),
            dim: self.surface.dim(),
            domain: self.surface.domain().clone(),
            provenance: self.surface.provenance(),
            derivative: self.derivative.as_ref().map(|d| d.to_sources()),
            gauss_map: self.gauss_map.as_ref().map(|g| g.to_source()),
            expectations: self.expect,
            involution: self.involution,
        }
    }
}

fn v3(a: f64, b: f64, c: f64) -> VecN {
    VecN::from_vec(vec![a, b, c])
}

fn cpx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn exprs(src: &[&str], sing: &[Complex64]) -> ComplexExprVec {
    ComplexExprVec::parse(src, sing).expect("catalog expressions parse")
}

fn expr(src: &str) -> ComplexExpr {
    ComplexExpr::parse(src).expect("catalog expression parses")
}

fn strip() -> Domain {
    Domain::rectangle(0.0, TWO_PI, -2.0, 2.0)
}

/// `(cos u·cosh v, sin u·cosh v, v)/c`, the catenoid `x² + y² = c⁻²cosh²(cz)`.
pub fn catenoid(c: f64) -> Result<CatalogEntry> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::NonPositiveScale(c));
    }
    let k = 1.0 / c;
    let surface = ClosedForm::new("catenoid", 3, strip(), move |u, v| {
        let (cu, su, ch, sh) = (u.cos(), u.sin(), v.cosh(), v.sinh());
        Jet {
            p: k * v3(cu * ch, su * ch, v),
            fu: k * v3(-su * ch, cu * ch, 0.0),
            fv: k * v3(cu * sh, su * sh, 1.0),
            fuu: k * v3(-cu * ch, -su * ch, 0.0),
            fuv: k * v3(-su * sh, cu * sh, 0.0),
            fvv: k * v3(cu * ch, su * ch, 0.0),
        }
    });
    let kk = format!("{k}");
    let derivative = exprs(
        &[
            &format!("{kk}*(0 - sin(z))"),
            &format!("{kk}*cos(z)"),
            &format!("{kk}*(0 - i)"),
        ],
        &[],
    );
    // single sheet over ℂ*: η = e^{iz}
    let weierstrass = WeierstrassDataR3::parse("z", &format!("0 - {kk}/z"), Domain::c_star(), &[cpx(0.0, 0.0)])?
        .with_base(cpx(1.0, 0.0), [k, 0.0, 0.0]);
    Ok(CatalogEntry {
        name: "catenoid".into(),
        summary: format!("catenoid x² + y² = cosh²({c}·z)/{c}², conformal strip parameterisation"),
        surface: Arc::new(surface),
        null_curve: None,
        weierstrass: Some(weierstrass),
        derivative: Some(derivative),
        gauss_map: Some(expr("z")),
        expect: Expectations::minimal(Some(-4.0 * PI)),
        involution: None,
        singularities: Vec::new(),
    })
}

/// `(sin u·sinh v, −cos u·sinh v, u)`.
pub fn helicoid() -> CatalogEntry {
    let surface = ClosedForm::new("helicoid", 3, strip(), |u, v| {
        let (cu, su, ch, sh) = (u.cos(), u.sin(), v.cosh(), v.sinh());
        Jet {
            p: v3(su * sh, -cu * sh, u),
            fu: v3(cu * sh, su * sh, 1.0),
            fv: v3(su * ch, -cu * ch, 0.0),
            fuu: v3(-su * sh, cu * sh, 0.0),
            fuv: v3(cu * ch, su * ch, 0.0),
            fvv: v3(su * sh, -cu * sh, 0.0),
        }
    });
    CatalogEntry {
        name: "helicoid".into(),
        summary: "helicoid, the conjugate of the catenoid".into(),
        surface: Arc::new(surface),
        null_curve: None,
        weierstrass: None,
        derivative: Some(exprs(&["0 - i*sin(z)", "i*cos(z)", "1"], &[])),
        gauss_map: Some(expr("exp(i*z)")),
        expect: Expectations::minimal(Some(f64::NEG_INFINITY)),
        involution: None,
        singularities: Vec::new(),
    }
}

/// The null curve `Z = (cos z, sin z, −iz)`; its surface is `Re Z`.
pub fn helicatenoid() -> CatalogEntry {
    let curve = ExprCurve::new(exprs(&["cos(z)", "sin(z)", "0 - i*z"], &[]));
    let derivative = curve.derivative_expr().clone();
    let z = NullCurve {
        name: "helicatenoid".into(),
        curve: Arc::new(curve),
        derivative: derivative.clone(),
        domain: strip(),
    };
    CatalogEntry {
        name: "helicatenoid".into(),
        summary: "null curve whose associated family turns the catenoid into the helicoid".into(),
        surface: Arc::new(z.associated_family(0.0).with_name("helicatenoid")),
        null_curve: Some(z),
        weierstrass: None,
        derivative: Some(derivative),
        gauss_map: Some(expr("exp(i*z)")),
        expect: Expectations::minimal(None),
        involution: None,
        singularities: Vec::new(),
    }
}

/// Enneper's surface `(u(3(1+v²)−u²)/3, v(v²−3(1+u²))/3, u²−v²)`.
pub fn enneper() -> CatalogEntry {
    let surface = ClosedForm::new("enneper", 3, Domain::Plane, |u, v| Jet {
        p: v3(
            u / 3.0 * (3.0 * (1.0 + v * v) - u * u),
            v / 3.0 * (v * v - 3.0 * (1.0 + u * u)),
            u * u - v * v,
        ),
        fu: v3(1.0 + v * v - u * u, -2.0 * u * v, 2.0 * u),
        fv: v3(2.0 * u * v, v * v - 1.0 - u * u, -2.0 * v),
        fuu: v3(-2.0 * u, -2.0 * v, 2.0),
        fuv: v3(2.0 * v, -2.0 * u, 0.0),
        fvv: v3(2.0 * u, 2.0 * v, -2.0),
    });
    let curve = ExprCurve::new(exprs(&["z - z^3/3", "i*(z + z^3/3)", "z^2"], &[]));
    let derivative = exprs(&["1 - z^2", "i*(1 + z^2)", "2*z"], &[]);
    CatalogEntry {
        name: "enneper".into(),
        summary: "Enneper's surface, conjugate to itself".into(),
        surface: Arc::new(surface),
        null_curve: Some(NullCurve {
            name: "enneper".into(),
            curve: Arc::new(curve),
            derivative: derivative.clone(),
            domain: Domain::Plane,
        }),
        weierstrass: Some(
            WeierstrassDataR3::parse("z", "2*z", Domain::Plane, &[])
                .expect("parses")
                .with_base(cpx(0.0, 0.0), [0.0; 3]),
        ),
        derivative: Some(derivative),
        gauss_map: Some(expr("z")),
        expect: Expectations::minimal(Some(-4.0 * PI)),
        involution: None,
        singularities: Vec::new(),
    }
}

/// Orientable double cover `ℂ* → R³` of Meeks's minimal Möbius strip,
/// `X = Re(Z(ζ) − Z(1))` with a closed-form primitive `Z`.
pub fn meeks_mobius() -> CatalogEntry {
    let sing = [cpx(0.0, 0.0), cpx(1.0, 0.0), cpx(-1.0, 0.0)];
    let zero = [cpx(0.0, 0.0)];
    let primitive = exprs(
        &[
            "(i/2)*(1/z^2 - 1/z - 1/(3*z^3)) - i*(z + 1)^3/6",
            "(0 - (z + 1)^3)/6 - (1/z^2 - 1/z - 1/(3*z^3))/2",
            "i*(z + 1/z)",
        ],
        &zero,
    );
    let curve = ExprCurve::new(primitive);
    let derivative = curve.derivative_expr().clone();
    let z1 = curve.expr().eval(cpx(1.0, 0.0)).expect("finite at 1");
    let offset = VecN::from_iterator(3, z1.iter().map(|w| -w.re));
    let surface =
        HoloSurface::new("meeks", Arc::new(curve), Domain::c_star(), Provenance::ClosedForm).with_offset(offset);
    let weierstrass = WeierstrassDataR3::parse("(z + 1)*z^2/(z - 1)", "i*(z^2 - 1)/z^2", Domain::c_star(), &sing)
        .expect("parses")
        .with_base(cpx(1.0, 0.0), [0.0; 3]);
    CatalogEntry {
        name: "meeks".into(),
        summary: "double cover of Meeks's minimal Möbius strip in R³".into(),
        surface: Arc::new(surface),
        null_curve: None,
        gauss_map: Some(weierstrass.g.clone()),
        weierstrass: Some(weierstrass),
        derivative: Some(derivative),
        expect: Expectations {
            quotient_total_curvature: Some(-6.0 * PI),
            ..Expectations::minimal(Some(-12.0 * PI))
        },
        involution: Some(Involution::AntipodalInversion),
        singularities: sing[1..].to_vec(),
    }
}

/// Double cover `ℂ* → R⁴` of the properly embedded minimal Möbius strip
/// `Re(i(ζ+1/ζ), ζ−1/ζ, (i/2)(ζ²−1/ζ²), (ζ²+1/ζ²)/2)`.
pub fn afl_mobius_r4() -> CatalogEntry {
    let curve = ExprCurve::new(exprs(
        &["i*(z + 1/z)", "z - 1/z", "(i/2)*(z^2 - 1/z^2)", "(z^2 + 1/z^2)/2"],
        &[cpx(0.0, 0.0)],
    ));
    let derivative = curve.derivative_expr().clone();
    let surface = HoloSurface::new("afl", Arc::new(curve), Domain::c_star(), Provenance::ClosedForm);
    CatalogEntry {
        name: "afl".into(),
        summary: "double cover of a properly embedded minimal Möbius strip in R⁴".into(),
        surface: Arc::new(surface),
        null_curve: None,
        weierstrass: None,
        derivative: Some(derivative),
        gauss_map: None,
        expect: Expectations {
            quotient_total_curvature: Some(-4.0 * PI),
            ..Expectations::minimal(Some(-8.0 * PI))
        },
        involution: Some(Involution::AntipodalInversion),
        singularities: Vec::new(),
    }
}

/// Unit sphere by inverse stereographic projection: conformal, `|𝐇| = 2`.
pub fn sphere_control() -> CatalogEntry {
    CatalogEntry {
        name: "sphere".into(),
        summary: "unit sphere (non-minimal control, |H| = 2)".into(),
        surface: Arc::new(unit_sphere()),
        null_curve: None,
        weierstrass: None,
        derivative: None,
        gauss_map: None,
        expect: Expectations {
            conformal: true,
            harmonic: false,
            minimal: false,
            mean_curvature_norm: Some(2.0),
            total_curvature: None,
            quotient_total_curvature: None,
            complete: false,
        },
        involution: None,
        singularities: Vec::new(),
    }
}

/// Names accepted by [`lookup`]; the minimal entries come first.
pub const NAMES: [&str; 7] = [
    "catenoid",
    "helicoid",
    "helicatenoid",
    "enneper",
    "meeks",
    "afl",
    "sphere",
];

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    Some(match name {
        "catenoid" => catenoid(1.0).expect("unit scale"),
        "helicoid" => helicoid(),
        "helicatenoid" => helicatenoid(),
        "enneper" => enneper(),
        "meeks" => meeks_mobius(),
        "afl" => afl_mobius_r4(),
        "sphere" => sphere_control(),
        _ => return None,
    })
}

/// Every minimal entry (the sphere control excluded).
pub fn minimal_entries() -> Vec<CatalogEntry> {
    NAMES
        .iter()
        .filter_map(|n| lookup(n))
        .filter(|e| e.expect.minimal)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlateauClass {
    Two,
    Tangent,
    None,
}

/// Catenoids spanning the circles `x² + y² = r²`, `z = ±1`: the positive
/// roots of `cosh c = r c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateauReport {
    pub radius: f64,
    pub solutions: Vec<f64>,
    pub classification: PlateauClass,
    /// Threshold radius `min cosh(c)/c`.
    pub r0: f64,
    /// Minimiser `c*` of `cosh(c)/c`, the root of `c·tanh c = 1`.
    pub c_star: f64,
}

/// `(c*, r₀)` with `c*·tanh c* = 1` and `r₀ = cosh(c*)/c*`.
pub fn plateau_threshold() -> (f64, f64) {
    let opts = RootOptions {
        scan: 64,
        xtol: 1e-15,
        ..RootOptions::default()
    };
    let roots = find_roots_1d(|c| c * c.tanh() - 1.0, (0.5, 2.0), &opts).expect("valid bracket");
    let c = roots[0].x;
    (c, c.cosh() / c)
}

pub fn catenoid_plateau(r: f64) -> Result<PlateauReport> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::NonPositiveRadius(r));
    }
    let (c_star, r0) = plateau_threshold();
    // cosh c > e^c/2 > r c beyond this bound
    let c_max = 2.0 * (4.0 * r).ln().max(1.0) + 2.0;
    let opts = RootOptions {
        scan: 4000,
        xtol: 1e-14,
        tangency_tol: 1e-12,
    };
    let roots = find_roots_1d(|c| c.cosh() - r * c, (1e-6, c_max), &opts)?;
    let (solutions, classification) = if (r - r0).abs() <= 1e-12 * r0 {
        (vec![c_star], PlateauClass::Tangent)
    } else {
        match roots.as_slice() {
            [] => (Vec::new(), PlateauClass::None),
            [x] if x.kind == RootKind::Double => (vec![x.x], PlateauClass::Tangent),
            rs => (rs.iter().map(|x| x.x).collect(), PlateauClass::Two),
        }
    };
    Ok(PlateauReport {
        radius: r,
        solutions,
        classification,
        r0,
        c_star,
    })
}
