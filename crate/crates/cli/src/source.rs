//! Surfaces named on the command line: `catalog:<name>` or a Weierstrass
//! JSON file, plus the small `kind:numbers` syntax for regions and patches.

use std::fs;
use std::sync::Arc;

use minsurf::catalog::{self, CatalogEntry};
use minsurf::mesh::Patch;
use minsurf::surface::Domain;
use minsurf::weierstrass::{sample_points, WeierstrassInput};
use minsurf::{Complex64, ComplexExpr, ComplexExprVec, Region, SurfaceMap};

use crate::report::sha256_hex;
use crate::Failure;

/// Keeps samples this far from holes and singular points.
const SAMPLE_MARGIN: f64 = 1e-3;

pub enum Source {
    Catalog(Box<CatalogEntry>),
    Data(Box<WeierstrassInput>),
}

/// A loaded source and the hash of what was read.
pub struct Loaded {
    pub source: Source,
    pub hash: String,
}

pub fn read_file(path: &str) -> Result<(String, String), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?;
    let hash = sha256_hex(&bytes);
    let text = String::from_utf8(bytes).map_err(|_| Failure::input(format!("{path} is not UTF-8")))?;
    Ok((text, hash))
}

pub fn load(target: &str) -> Result<Loaded, Failure> {
    if let Some(name) = target.strip_prefix("catalog:") {
        let entry = catalog::lookup(name).ok_or_else(|| {
            Failure::input(format!(
                "unknown catalog entry {name:?}; known: {}",
                catalog::NAMES.join(", ")
            ))
        })?;
        return Ok(Loaded {
            source: Source::Catalog(Box::new(entry)),
            hash: sha256_hex(target.as_bytes()),
        });
    }
    let (text, hash) = read_file(target)?;
    let data = WeierstrassInput::from_json(&text)?;
    Ok(Loaded {
        source: Source::Data(Box::new(data)),
        hash,
    })
}

impl Source {
    pub fn name(&self) -> String {
        match self {
            Source::Catalog(e) => e.name.clone(),
            Source::Data(_) => "data".into(),
        }
    }

    pub fn surface(&self) -> Result<Arc<dyn SurfaceMap>, Failure> {
        match self {
            Source::Catalog(e) => Ok(e.surface.clone()),
            Source::Data(d) => Ok(Arc::from(d.surface()?)),
        }
    }

    pub fn domain(&self) -> Result<Domain, Failure> {
        match self {
            Source::Catalog(e) => Ok(e.surface.domain().clone()),
            Source::Data(d) => Ok(d.domain.clone()),
        }
    }

    /// Points to keep away from, besides the domain's holes.
    pub fn singular_points(&self) -> Vec<Complex64> {
        match self {
            Source::Catalog(e) => e.singularities.clone(),
            Source::Data(d) => d.singular_points(),
        }
    }

    /// `Φ = 2∂X/∂z`.
    pub fn derivative(&self) -> Result<Option<ComplexExprVec>, Failure> {
        match self {
            Source::Catalog(e) => Ok(e.derivative.clone()),
            Source::Data(d) => Ok(Some(d.phi()?)),
        }
    }

    pub fn gauss_map(&self) -> Result<ComplexExpr, Failure> {
        match self {
            Source::Catalog(e) => e
                .gauss_map
                .clone()
                .ok_or_else(|| Failure::input(format!("{} has no complex Gauss map", e.name))),
            Source::Data(d) => Ok(d.gauss_map()?),
        }
    }

    pub fn samples(&self, count: usize, seed: u64) -> Result<Vec<(f64, f64)>, Failure> {
        match self {
            Source::Catalog(e) => Ok(e.samples(count, seed)),
            Source::Data(d) => Ok(sample_points(
                &d.domain,
                count,
                seed,
                &d.singular_points(),
                SAMPLE_MARGIN,
            )),
        }
    }
}

fn numbers(body: &str, count: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let xs: Vec<f64> = body
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            Failure::input(format!(
                "{what}: expected {count} comma-separated numbers, got {body:?}"
            ))
        })?;
    if xs.len() != count || xs.iter().any(|x| !x.is_finite()) {
        return Err(Failure::input(format!(
            "{what}: expected {count} finite numbers, got {body:?}"
        )));
    }
    Ok(xs)
}

/// `rect:u0,u1,v0,v1`, `disc:r` or `annulus:inner,outer`, centred at 0.
pub fn parse_region(s: &str) -> Result<Region, Failure> {
    let (kind, body) = s
        .split_once(':')
        .ok_or_else(|| Failure::input(format!("region {s:?}: expected kind:numbers")))?;
    let region = match kind {
        "rect" => {
            let x = numbers(body, 4, "rect")?;
            Region::rectangle(x[0], x[1], x[2], x[3])
        }
        "disc" => Region::disc(numbers(body, 1, "disc")?[0]),
        "annulus" => {
            let x = numbers(body, 2, "annulus")?;
            Region::annulus(x[0], x[1])
        }
        _ => return Err(Failure::input(format!("unknown region kind {kind:?}"))),
    };
    let ok = match region {
        Region::Rectangle { u, v } => u[0] < u[1] && v[0] < v[1],
        Region::Disc { radius, .. } => radius > 0.0,
        Region::Annulus { inner, outer, .. } => 0.0 <= inner && inner < outer,
    };
    if !ok {
        return Err(Failure::input(format!("region {s:?} is empty")));
    }
    Ok(region)
}

/// Mesh patch from a region. Discs become annuli with a small inner
/// radius, since a polar grid collapses at its centre.
pub fn patch_of(region: &Region) -> Patch {
    match *region {
        Region::Rectangle { u, v } => Patch::Rectangle { u, v },
        Region::Disc { center, radius } => Patch::Annulus {
            center,
            inner: 1e-3 * radius,
            outer: radius,
        },
        Region::Annulus { center, inner, outer } => Patch::Annulus {
            center,
            inner: if inner > 0.0 { inner } else { 1e-3 * outer },
            outer,
        },
    }
}

/// `NUxNV`, both at least 2.
pub fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NUxNV, got {s:?}"))?;
    let nu: usize = a.trim().parse().map_err(|_| format!("bad NU in {s:?}"))?;
    let nv: usize = b.trim().parse().map_err(|_| format!("bad NV in {s:?}"))?;
    Ok((nu, nv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regions_parse() {
        assert_eq!(parse_region("disc:100").unwrap(), Region::disc(100.0));
        assert_eq!(parse_region("annulus:0.01,100").unwrap(), Region::annulus(0.01, 100.0));
        assert_eq!(
            parse_region("rect:0,1,-1,1").unwrap(),
            Region::rectangle(0.0, 1.0, -1.0, 1.0)
        );
        for bad in ["disc", "disc:-1", "annulus:2,1", "rect:0,1", "blob:1", "disc:nan"] {
            assert!(parse_region(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn resolutions_parse() {
        assert_eq!(parse_resolution("64x32"), Ok((64, 32)));
        assert_eq!(parse_resolution("8X8"), Ok((8, 8)));
        assert!(parse_resolution("64").is_err());
        assert!(parse_resolution("ax2").is_err());
    }

    #[test]
    fn disc_patch_avoids_the_centre() {
        match patch_of(&Region::disc(2.0)) {
            Patch::Annulus { inner, outer, .. } => assert!(inner > 0.0 && outer == 2.0),
            p => panic!("{p:?}"),
        }
    }

    #[test]
    fn unknown_catalog_name_is_an_input_error() {
        let Err(f) = load("catalog:torus") else { panic!() };
        assert_eq!(f.code(), 2);
    }
}
