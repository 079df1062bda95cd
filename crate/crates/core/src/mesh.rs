//! Triangle meshes sampled from surfaces, and Wavefront OBJ text.

use std::io::{BufRead, Write};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvature::{parametric_curvature_from_jet, unit_normal};
use crate::error::{Error, Result};
use crate::numeric::linalg::VecN;
use crate::surface::{jet, Jet, SurfaceMap};

/// Coordinate 3-plane used to draw a surface in R⁴.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    Xyz,
    Xyw,
    Xzw,
    Yzw,
}

impl Projection {
    pub fn axes(self) -> [usize; 3] {
        match self {
            Projection::Xyz => [0, 1, 2],
            Projection::Xyw => [0, 1, 3],
            Projection::Xzw => [0, 2, 3],
            Projection::Yzw => [1, 2, 3],
        }
    }
}

impl FromStr for Projection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xyz" => Ok(Projection::Xyz),
            "xyw" => Ok(Projection::Xyw),
            "xzw" => Ok(Projection::Xzw),
            "yzw" => Ok(Projection::Yzw),
            _ => Err(Error::InvalidInput(format!("unknown projection {s:?}"))),
        }
    }
}

/// Parameter patch to sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Patch {
    Rectangle {
        u: [f64; 2],
        v: [f64; 2],
    },
    /// Polar grid `center + r e^{iθ}`, `r ∈ [inner, outer]`, `θ ∈ [0, 2π]`.
    Annulus {
        center: [f64; 2],
        inner: f64,
        outer: f64,
    },
}

impl Patch {
    fn point(&self, s: f64, t: f64) -> (f64, f64) {
        match *self {
            Patch::Rectangle { u, v } => (u[0] + s * (u[1] - u[0]), v[0] + t * (v[1] - v[0])),
            Patch::Annulus { center, inner, outer } => {
                let z = Complex64::new(center[0], center[1])
                    + Complex64::from_polar(inner + s * (outer - inner), std::f64::consts::TAU * t);
                (z.re, z.im)
            }
        }
    }

    fn contains_hole(&self, holes: &[Complex64]) -> bool {
        match *self {
            Patch::Rectangle { u, v } => holes
                .iter()
                .any(|h| (u[0]..=u[1]).contains(&h.re) && (v[0]..=v[1]).contains(&h.im)),
            Patch::Annulus { center, inner, outer } => holes.iter().any(|h| {
                let r = (h - Complex64::new(center[0], center[1])).norm();
                (inner..=outer).contains(&r)
            }),
        }
    }
}

/// Regular triangulated grid of surface samples in R³.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    pub normals: Option<Vec<[f64; 3]>>,
    /// Sample grid `(nu, nv)`; vertex `(i, j)` has index `j·nu + i`.
    pub grid: Option<(usize, usize)>,
}

const MIN_TRIANGLE_AREA: f64 = 1e-14;

fn tri_area(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let d1 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let d2 = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let x = [
        d1[1] * d2[2] - d1[2] * d2[1],
        d1[2] * d2[0] - d1[0] * d2[2],
        d1[0] * d2[1] - d1[1] * d2[0],
    ];
    0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

impl Mesh {
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        for (k, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&i| i >= n) {
                return Err(Error::InvalidInput(format!("triangle {k} has an index out of range")));
            }
            let area = tri_area(&self.vertices[t[0]], &self.vertices[t[1]], &self.vertices[t[2]]);
            if !(area > MIN_TRIANGLE_AREA) {
                return Err(Error::InvalidInput(format!(
                    "triangle {k} is degenerate (area {area:e})"
                )));
            }
        }
        if let Some(nm) = &self.normals {
            if nm.len() != n {
                return Err(Error::InvalidInput("normal count differs from vertex count".into()));
            }
        }
        Ok(())
    }
}

/// Samples `s` on an `nu × nv` grid over `patch`. Surfaces in R⁴ need a
/// projection; R³ surfaces get unit normals.
pub fn sample_mesh<S: SurfaceMap + ?Sized>(
    s: &S,
    resolution: (usize, usize),
    patch: &Patch,
    projection: Option<Projection>,
) -> Result<Mesh> {
    let (nu, nv) = resolution;
    if nu < 2 || nv < 2 {
        return Err(Error::DomainViolation(format!("resolution {nu}x{nv} is below 2x2")));
    }
    let holes = s.domain().holes();
    if patch.contains_hole(&holes) {
        return Err(Error::DomainViolation("patch contains a puncture of the domain".into()));
    }
    let axes = match (s.dim(), projection) {
        (3, None | Some(Projection::Xyz)) => [0, 1, 2],
        (3, Some(p)) => return Err(Error::InvalidInput(format!("projection {p:?} needs a surface in R⁴"))),
        (4, Some(p)) => p.axes(),
        (4, None) => return Err(Error::InvalidInput("surfaces in R⁴ need a projection".into())),
        (n, _) => return Err(Error::InvalidInput(format!("cannot mesh a surface in R^{n}"))),
    };
    let mut vertices = Vec::with_capacity(nu * nv);
    let mut normals = Vec::new();
    for j in 0..nv {
        for i in 0..nu {
            let (u, v) = patch.point(i as f64 / (nu - 1) as f64, j as f64 / (nv - 1) as f64);
            if !s.domain().contains(u, v) {
                return Err(Error::DomainViolation(format!(
                    "sample ({u}, {v}) is outside the domain"
                )));
            }
            let p = s
                .position(u, v)
                .map_err(|e| Error::DomainViolation(format!("cannot evaluate at ({u}, {v}): {e}")))?;
            vertices.push(axes.map(|a| p[a]));
            if s.dim() == 3 {
                let n = unit_normal(&jet(s, u, v)?, u, v)?;
                normals.push([n[0], n[1], n[2]]);
            }
        }
    }
    let mut triangles = Vec::with_capacity(2 * (nu - 1) * (nv - 1));
    for j in 0..nv - 1 {
        for i in 0..nu - 1 {
            let a = j * nu + i;
            let (b, c, d) = (a + 1, a + nu, a + nu + 1);
            triangles.push([a, b, d]);
            triangles.push([a, d, c]);
        }
    }
    let mesh = Mesh {
        vertices,
        triangles,
        normals: (s.dim() == 3).then_some(normals),
        grid: Some((nu, nv)),
    };
    mesh.validate()?;
    Ok(mesh)
}

/// Writes `v`, optional `vn` and `f` records; coordinates carry 17
/// significant digits and indices are 1-based.
pub fn write_obj<W: Write>(m: &Mesh, mut out: W) -> Result<()> {
    m.validate()?;
    for v in &m.vertices {
        writeln!(out, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
    }
    if let Some(ns) = &m.normals {
        for n in ns {
            writeln!(out, "vn {:.16e} {:.16e} {:.16e}", n[0], n[1], n[2])?;
        }
    }
    for t in &m.triangles {
        let [a, b, c] = t.map(|i| i + 1);
        if m.normals.is_some() {
            writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}")?;
        } else {
            writeln!(out, "f {a} {b} {c}")?;
        }
    }
    Ok(())
}

pub fn export_obj(m: &Mesh, path: &std::path::Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_obj(m, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Reads the `v`, `vn` and `f` records of an OBJ file (triangles only).
pub fn parse_obj<R: BufRead>(input: R) -> Result<Mesh> {
    let bad = |n: usize, what: &str| Error::InvalidInput(format!("OBJ line {n}: {what}"));
    let (mut vertices, mut normals, mut triangles) = (Vec::new(), Vec::new(), Vec::new());
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        let mut it = line.split_whitespace();
        match it.next() {
            Some(tag @ ("v" | "vn")) => {
                let xs: Vec<f64> = it
                    .map(|t| t.parse::<f64>().map_err(|_| bad(k + 1, "bad number")))
                    .collect::<Result<_>>()?;
                if xs.len() != 3 {
                    return Err(bad(k + 1, "expected three coordinates"));
                }
                let p = [xs[0], xs[1], xs[2]];
                if tag == "v" {
                    vertices.push(p);
                } else {
                    normals.push(p);
                }
            }
            Some("f") => {
                let idx: Vec<usize> = it
                    .map(|t| {
                        t.split('/')
                            .next()
                            .and_then(|i| i.parse::<usize>().ok())
                            .filter(|&i| i > 0)
                            .map(|i| i - 1)
                            .ok_or_else(|| bad(k + 1, "bad face index"))
                    })
                    .collect::<Result<_>>()?;
                if idx.len() != 3 {
                    return Err(bad(k + 1, "only triangles are supported"));
                }
                triangles.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    Ok(Mesh {
        normals: (!normals.is_empty()).then_some(normals),
        vertices,
        triangles,
        grid: None,
    })
}

/// Mean curvature at grid vertices at least two steps from the border,
/// from fourth-order central differences of the vertex positions alone.
pub fn grid_mean_curvature(m: &Mesh, h: (f64, f64)) -> Result<Vec<f64>> {
    let (nu, nv) = m
        .grid
        .ok_or_else(|| Error::InvalidInput("mesh carries no sample grid".into()))?;
    let p = |i: usize, j: usize| VecN::from_row_slice(&m.vertices[j * nu + i]);
    let (hu, hv) = h;
    let d1 = |m2: VecN, m1: VecN, p1: VecN, p2: VecN, h: f64| (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
    let d2 = |m2: VecN, m1: VecN, c: &VecN, p1: VecN, p2: VecN, h: f64| {
        (16.0 * (p1 + m1) - (p2 + m2) - 30.0 * c) / (12.0 * h * h)
    };
    let mut out = Vec::new();
    for j in 2..nv.saturating_sub(2) {
        for i in 2..nu.saturating_sub(2) {
            let c = p(i, j);
            let mixed = |k: usize| {
                (p(i + k, j + k) - p(i + k, j - k) - p(i - k, j + k) + p(i - k, j - k))
                    / (4.0 * (k * k) as f64 * hu * hv)
            };
            let jt = Jet {
                fu: d1(p(i - 2, j), p(i - 1, j), p(i + 1, j), p(i + 2, j), hu),
                fv: d1(p(i, j - 2), p(i, j - 1), p(i, j + 1), p(i, j + 2), hv),
                fuu: d2(p(i - 2, j), p(i - 1, j), &c, p(i + 1, j), p(i + 2, j), hu),
                fvv: d2(p(i, j - 2), p(i, j - 1), &c, p(i, j + 1), p(i, j + 2), hv),
                fuv: (4.0 * mixed(1) - mixed(2)) / 3.0,
                p: c,
            };
            out.push(parametric_curvature_from_jet(&jt, i as f64, j as f64)?.0.h);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{afl_mobius_r4, catenoid, enneper, meeks_mobius};
    use crate::surface::TWO_PI;

    #[test]
    fn catenoid_counts() {
        let e = catenoid(1.0).unwrap();
        let patch = Patch::Rectangle {
            u: [0.0, TWO_PI],
            v: [-1.0, 1.0],
        };
        let m = sample_mesh(&*e.surface, (64, 64), &patch, None).unwrap();
        assert_eq!(m.vertices.len(), 4096);
        assert_eq!(m.triangles.len(), 2 * 63 * 63);
        assert_eq!(m.normals.as_ref().unwrap().len(), 4096);
    }

    #[test]
    fn degenerate_resolution_and_punctures() {
        let e = catenoid(1.0).unwrap();
        let patch = Patch::Rectangle {
            u: [0.0, 1.0],
            v: [0.0, 1.0],
        };
        assert!(matches!(
            sample_mesh(&*e.surface, (1, 8), &patch, None),
            Err(Error::DomainViolation(_))
        ));
        let meeks = meeks_mobius();
        let around_zero = Patch::Rectangle {
            u: [-1.0, 1.0],
            v: [-1.0, 1.0],
        };
        assert!(matches!(
            sample_mesh(&*meeks.surface, (8, 8), &around_zero, None),
            Err(Error::DomainViolation(_))
        ));
        let ring = Patch::Annulus {
            center: [0.0, 0.0],
            inner: 0.5,
            outer: 2.0,
        };
        assert!(sample_mesh(&*meeks.surface, (16, 33), &ring, None).is_ok());
        let outside = Patch::Rectangle {
            u: [0.0, 10.0],
            v: [0.0, 1.0],
        };
        assert!(matches!(
            sample_mesh(&*e.surface, (4, 4), &outside, None),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn r4_needs_projection() {
        let e = afl_mobius_r4();
        let ring = Patch::Annulus {
            center: [0.0, 0.0],
            inner: 0.5,
            outer: 2.0,
        };
        assert!(sample_mesh(&*e.surface, (8, 8), &ring, None).is_err());
        let m = sample_mesh(&*e.surface, (8, 9), &ring, Some(Projection::Xzw)).unwrap();
        assert!(m.normals.is_none());
        let p = e.surface.position(0.5, 0.0).unwrap();
        assert_eq!(m.vertices[0], [p[0], p[2], p[3]]);
    }

    #[test]
    fn single_triangle_obj() {
        let m = Mesh {
            vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            triangles: vec![[0, 1, 2]],
            normals: None,
            grid: None,
        };
        let mut buf = Vec::new();
        write_obj(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines.iter().filter(|l| l.starts_with("v ")).count(), 3);
        assert_eq!(lines[3], "f 1 2 3");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn obj_round_trip_is_bit_exact() {
        let e = enneper();
        let patch = Patch::Rectangle {
            u: [-1.3, 1.1],
            v: [-0.7, 1.9],
        };
        let m = sample_mesh(&*e.surface, (9, 7), &patch, None).unwrap();
        let mut buf = Vec::new();
        write_obj(&m, &mut buf).unwrap();
        let back = parse_obj(&buf[..]).unwrap();
        assert_eq!(back.vertices, m.vertices);
        assert_eq!(back.normals, m.normals);
        assert_eq!(back.triangles, m.triangles);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.obj");
        export_obj(&m, &path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), buf);
    }

    #[test]
    fn enneper_mesh_is_nearly_minimal() {
        let e = enneper();
        let (a, n) = (2.0, 32);
        let patch = Patch::Rectangle { u: [-a, a], v: [-a, a] };
        let m = sample_mesh(&*e.surface, (n, n), &patch, None).unwrap();
        let h = 2.0 * a / (n - 1) as f64;
        let hs = grid_mean_curvature(&m, (h, h)).unwrap();
        assert_eq!(hs.len(), (n - 4) * (n - 4));
        let worst = hs.iter().fold(0.0f64, |w, x| w.max(x.abs()));
        assert!(worst < 1e-3, "{worst}");
    }
}
