//! Weierstrass data in R³ and the JSON input format for holomorphic data.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::integrate::{integrate_primitive, Primitive};
use super::periods::PrimitiveKind;
use crate::error::{Error, Result};
use crate::expr::build::{add, c, div, mul, sub};
use crate::expr::rational::to_rational;
use crate::expr::{ComplexExpr, ComplexExprVec, Node};
use crate::surface::{Domain, HoloSurface, SurfaceMap};

fn half() -> Node {
    c(Complex64::new(0.5, 0.0))
}

fn half_i() -> Node {
    c(Complex64::new(0.0, 0.5))
}

/// Gauss map `𝔤` and height differential coefficient `φ₃` of a minimal
/// surface `X = c + Re∫_{z₀} Φ dz` in R³ with
/// `Φ = (½(1/𝔤 − 𝔤), (i/2)(1/𝔤 + 𝔤), 1)·φ₃`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassDataR3 {
    pub g: ComplexExpr,
    pub phi3: ComplexExpr,
    pub z0: Complex64,
    pub c: [f64; 3],
    pub domain: Domain,
    pub singularities: Vec<Complex64>,
}

impl WeierstrassDataR3 {
    pub fn parse(g: &str, phi3: &str, domain: Domain, singularities: &[Complex64]) -> Result<Self> {
        Ok(Self {
            g: ComplexExpr::parse_with_singularities(g, singularities)?,
            phi3: ComplexExpr::parse_with_singularities(phi3, singularities)?,
            z0: Complex64::new(1.0, 0.0),
            c: [0.0; 3],
            domain,
            singularities: singularities.to_vec(),
        })
    }

    pub fn with_base(mut self, z0: Complex64, c: [f64; 3]) -> Self {
        self.z0 = z0;
        self.c = c;
        self
    }

    /// The assembled data `Φ`, symbolically. Rational components are put
    /// in lowest terms so removable singularities of the product formula
    /// (zeros of `𝔤` cancelled by zeros of `φ₃`) evaluate cleanly.
    pub fn phi(&self) -> ComplexExprVec {
        let (g, p) = (self.g.node().clone(), self.phi3.node().clone());
        let inv = div(c(Complex64::new(1.0, 0.0)), g.clone());
        let comps = [
            mul(mul(half(), sub(inv.clone(), g.clone())), p.clone()),
            mul(mul(half_i(), add(inv, g)), p.clone()),
            p,
        ];
        let comps = comps.into_iter().map(|n| match to_rational(&n) {
            Ok(r) => ComplexExpr::from_node(r.to_node()),
            Err(_) => ComplexExpr::from_node(n),
        });
        ComplexExprVec::new(comps.collect(), &self.singularities).expect("three components")
    }

    /// Checks that `Φ` is finite and nonzero at `count` seeded samples of the
    /// domain, away from declared singularities.
    pub fn validate(&self, count: usize, seed: u64) -> Result<()> {
        let phi = self.phi();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = super::checks::sample_points(&self.domain, count, rng.random(), &self.singularities, 1e-3);
        for (u, v) in pts {
            let z = Complex64::new(u, v);
            let w = phi.eval(z)?;
            if w.iter().any(|x| !(x.re.is_finite() && x.im.is_finite())) {
                return Err(Error::NonFinite { z });
            }
            if w.iter().all(|x| x.norm() < 1e-14) {
                return Err(Error::CommonZero { z });
            }
        }
        Ok(())
    }

    pub fn surface(&self) -> Result<HoloSurface> {
        let base: Vec<Complex64> = self.c.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Ok(integrate_primitive(&self.phi(), &self.domain, self.z0, &base, PrimitiveKind::RealPart)?.into_surface())
    }
}

/// `𝔤 = Φ₃ / (Φ₁ − iΦ₂)` assembled symbolically from data in C³.
pub fn gauss_map_expr(phi: &ComplexExprVec) -> Result<ComplexExpr> {
    if phi.dim() != 3 {
        return Err(Error::InvalidInput("complex Gauss map needs data in C³".into()));
    }
    let f = phi.components();
    let den = sub(f[0].node().clone(), mul(c(Complex64::i()), f[1].node().clone()));
    Ok(ComplexExpr::from_node(div(f[2].node().clone(), den)))
}

/// Real number or `[re, im]` pair in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonComplex {
    Real(f64),
    Pair([f64; 2]),
}

impl From<JsonComplex> for Complex64 {
    fn from(v: JsonComplex) -> Self {
        match v {
            JsonComplex::Real(x) => Complex64::new(x, 0.0),
            JsonComplex::Pair([a, b]) => Complex64::new(a, b),
        }
    }
}

/// Data section of a Weierstrass input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeierstrassData {
    NullData { components: Vec<String> },
    WeierstrassR3 { g: String, phi3: String },
}

/// JSON description of holomorphic data on a planar domain.
///
/// ```json
/// {"kind": "weierstrass-r3", "g": "z", "phi3": "0 - 1/z",
///  "domain": {"kind": "punctured-plane", "punctures": [[0, 0]]},
///  "base_point": [1, 0], "base_value": [0, 0, 0]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassInput {
    #[serde(flatten)]
    pub data: WeierstrassData,
    pub domain: Domain,
    #[serde(default = "default_base_point")]
    pub base_point: [f64; 2],
    #[serde(default)]
    pub base_value: Vec<JsonComplex>,
    /// Extra singular points beyond the domain's holes.
    #[serde(default)]
    pub singularities: Vec<[f64; 2]>,
    #[serde(default)]
    pub primitive: Option<PrimitiveKind>,
}

fn default_base_point() -> [f64; 2] {
    [1.0, 0.0]
}

impl WeierstrassInput {
    pub fn from_json(text: &str) -> Result<Self> {
        let w: Self = serde_json::from_str(text)?;
        w.domain.validate()?;
        Ok(w)
    }

    pub fn singular_points(&self) -> Vec<Complex64> {
        let mut s = self.domain.holes();
        for p in &self.singularities {
            let z = Complex64::new(p[0], p[1]);
            if !s.contains(&z) {
                s.push(z);
            }
        }
        s
    }

    /// The holomorphic data `f`.
    pub fn phi(&self) -> Result<ComplexExprVec> {
        let sing = self.singular_points();
        match &self.data {
            WeierstrassData::NullData { components } => {
                let refs: Vec<&str> = components.iter().map(String::as_str).collect();
                ComplexExprVec::parse(&refs, &sing)
            }
            WeierstrassData::WeierstrassR3 { g, phi3 } => {
                Ok(WeierstrassDataR3::parse(g, phi3, self.domain.clone(), &sing)?.phi())
            }
        }
    }

    /// `𝔤` as given, or assembled from three-component null data.
    pub fn gauss_map(&self) -> Result<ComplexExpr> {
        match &self.data {
            WeierstrassData::WeierstrassR3 { g, .. } => {
                ComplexExpr::parse_with_singularities(g, &self.singular_points())
            }
            WeierstrassData::NullData { .. } => gauss_map_expr(&self.phi()?),
        }
    }

    pub fn base_point(&self) -> Complex64 {
        Complex64::new(self.base_point[0], self.base_point[1])
    }

    pub fn kind(&self) -> PrimitiveKind {
        self.primitive.unwrap_or(PrimitiveKind::RealPart)
    }

    pub fn integrate(&self) -> Result<Primitive> {
        let f = self.phi()?;
        let mut c: Vec<Complex64> = self.base_value.iter().map(|&v| v.into()).collect();
        if c.is_empty() {
            c = vec![Complex64::new(0.0, 0.0); f.dim()];
        }
        integrate_primitive(&f, &self.domain, self.base_point(), &c, self.kind())
    }

    pub fn surface(&self) -> Result<Box<dyn SurfaceMap>> {
        Ok(Box::new(self.integrate()?.into_surface()))
    }
}
