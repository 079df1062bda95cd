//! Uniform masked grids over plane domains.
//!
//! Node `(i, j)` sits at `origin + (i·h, j·h)`; `i` runs along x and is the
//! fastest-varying index in storage. A node is *interior* when its mask bit
//! is set; interior nodes must have all four axis neighbours inside the
//! grid. Non-interior nodes within the 8-neighbourhood of an interior node
//! are *boundary* nodes and carry Dirichlet data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T> {
    origin: (f64, f64),
    spacing: f64,
    dims: (usize, usize),
    mask: Vec<bool>,
    kinds: Vec<NodeKind>,
    values: Vec<T>,
}

impl<T: Clone> GridField<T> {
    /// Builds a field from a mask and initial values (both row-major, x fastest).
    pub fn new(
        origin: (f64, f64),
        spacing: f64,
        dims: (usize, usize),
        mask: Vec<bool>,
        values: Vec<T>,
    ) -> Result<Self> {
        let (nx, ny) = dims;
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidInput(format!("grid spacing {spacing}")));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidInput(format!("grid dims {nx}x{ny}")));
        }
        if mask.len() != nx * ny || values.len() != nx * ny {
            return Err(Error::InvalidInput(
                "mask/values length does not match grid dims".into(),
            ));
        }
        for j in 0..ny {
            for i in 0..nx {
                if mask[j * nx + i] && (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny) {
                    return Err(Error::InvalidInput(format!(
                        "interior node ({i}, {j}) lies on the grid edge"
                    )));
                }
            }
        }
        let kinds = classify(nx, ny, &mask);
        Ok(Self {
            origin,
            spacing,
            dims,
            mask,
            kinds,
            values,
        })
    }

    /// Field sampled from `f(x, y)` with the given mask.
    pub fn from_fn(
        origin: (f64, f64),
        spacing: f64,
        dims: (usize, usize),
        mask: Vec<bool>,
        mut f: impl FnMut(f64, f64) -> T,
    ) -> Result<Self> {
        let (nx, ny) = dims;
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(f(origin.0 + i as f64 * spacing, origin.1 + j as f64 * spacing));
            }
        }
        Self::new(origin, spacing, dims, mask, values)
    }

    /// Same grid and mask, new values.
    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> GridField<U> {
        GridField {
            origin: self.origin,
            spacing: self.spacing,
            dims: self.dims,
            mask: self.mask.clone(),
            kinds: self.kinds.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Same grid and mask, values from node coordinates.
    pub fn with_values<U: Clone>(&self, f: impl Fn(f64, f64) -> U) -> GridField<U> {
        let (nx, ny) = self.dims;
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let (x, y) = self.xy(i, j);
                values.push(f(x, y));
            }
        }
        GridField {
            origin: self.origin,
            spacing: self.spacing,
            dims: self.dims,
            mask: self.mask.clone(),
            kinds: self.kinds.clone(),
            values,
        }
    }
}

impl<T> GridField<T> {
    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.dims.0 + i
    }

    #[inline]
    pub fn xy(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.origin.0 + i as f64 * self.spacing,
            self.origin.1 + j as f64 * self.spacing,
        )
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.values[self.index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let k = self.index(i, j);
        self.values[k] = v;
    }

    #[inline]
    pub fn kind(&self, i: usize, j: usize) -> NodeKind {
        self.kinds[self.index(i, j)]
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        self.kind(i, j) == NodeKind::Interior
    }

    pub fn is_active(&self, i: usize, j: usize) -> bool {
        self.kind(i, j) != NodeKind::Exterior
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (nx, ny) = self.dims;
        (0..ny).flat_map(move |j| (0..nx).map(move |i| (i, j)))
    }

    pub fn interior_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes().filter(|&(i, j)| self.is_interior(i, j))
    }

    pub fn boundary_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes().filter(|&(i, j)| self.kind(i, j) == NodeKind::Boundary)
    }

    /// Cells `(i, j)`–`(i+1, j+1)` whose four corners are all active.
    pub fn active_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (nx, ny) = self.dims;
        (0..ny - 1)
            .flat_map(move |j| (0..nx - 1).map(move |i| (i, j)))
            .filter(|&(i, j)| {
                self.is_active(i, j)
                    && self.is_active(i + 1, j)
                    && self.is_active(i, j + 1)
                    && self.is_active(i + 1, j + 1)
            })
    }

    pub fn interior_count(&self) -> usize {
        self.kinds.iter().filter(|k| **k == NodeKind::Interior).count()
    }

    /// Number of 4-connected components of the interior.
    pub fn interior_components(&self) -> usize {
        let (nx, ny) = self.dims;
        let mut seen = vec![false; nx * ny];
        let mut components = 0;
        let mut stack = Vec::new();
        for (i, j) in self.interior_nodes().collect::<Vec<_>>() {
            if seen[self.index(i, j)] {
                continue;
            }
            components += 1;
            stack.push((i, j));
            seen[self.index(i, j)] = true;
            while let Some((a, b)) = stack.pop() {
                let nbrs = [(a + 1, b), (a - 1, b), (a, b + 1), (a, b - 1)];
                for (p, q) in nbrs {
                    let k = self.index(p, q);
                    if self.mask[k] && !seen[k] {
                        seen[k] = true;
                        stack.push((p, q));
                    }
                }
            }
        }
        components
    }

    /// True when every grid row and column meets the interior in one run.
    pub fn is_orthogonally_convex(&self) -> bool {
        let (nx, ny) = self.dims;
        let runs = |it: &mut dyn Iterator<Item = bool>| {
            let mut count = 0;
            let mut prev = false;
            for b in it {
                if b && !prev {
                    count += 1;
                }
                prev = b;
            }
            count <= 1
        };
        (0..ny).all(|j| runs(&mut (0..nx).map(|i| self.mask[j * nx + i])))
            && (0..nx).all(|i| runs(&mut (0..ny).map(|j| self.mask[j * nx + i])))
    }

    /// Digital convexity: every grid node inside the convex hull of the
    /// interior nodes is itself interior.
    pub fn is_convex(&self) -> bool {
        let pts: Vec<(i64, i64)> = self.interior_nodes().map(|(i, j)| (i as i64, j as i64)).collect();
        let hull = convex_hull(pts);
        if hull.len() < 3 {
            return true;
        }
        let inside = |p: (i64, i64)| {
            (0..hull.len()).all(|k| {
                let (a, b) = (hull[k], hull[(k + 1) % hull.len()]);
                (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0
            })
        };
        self.nodes()
            .all(|(i, j)| self.is_interior(i, j) || !inside((i as i64, j as i64)))
    }
}

/// Counterclockwise convex hull (Andrew's monotone chain), collinear points dropped.
fn convex_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let chain = |it: &mut dyn Iterator<Item = (i64, i64)>| {
        let mut h: Vec<(i64, i64)> = Vec::new();
        for p in it {
            while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], p) <= 0 {
                h.pop();
            }
            h.push(p);
        }
        h.pop();
        h
    };
    let mut hull = chain(&mut pts.iter().copied());
    hull.extend(chain(&mut pts.iter().rev().copied()));
    hull
}

impl GridField<f64> {
    /// Second-order cell quadrature: each active cell contributes `h²` times
    /// the mean of its corner values.
    pub fn integrate(&self) -> f64 {
        let h2 = self.spacing * self.spacing;
        self.active_cells()
            .map(|(i, j)| {
                0.25 * h2 * (self.get(i, j) + self.get(i + 1, j) + self.get(i, j + 1) + self.get(i + 1, j + 1))
            })
            .sum()
    }
}

fn classify(nx: usize, ny: usize, mask: &[bool]) -> Vec<NodeKind> {
    let mut kinds = vec![NodeKind::Exterior; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            if !mask[j * nx + i] {
                continue;
            }
            kinds[j * nx + i] = NodeKind::Interior;
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    let (p, q) = ((i as i64 + di) as usize, (j as i64 + dj) as usize);
                    if !mask[q * nx + p] {
                        kinds[q * nx + p] = NodeKind::Boundary;
                    }
                }
            }
        }
    }
    kinds
}

/// Mask with every node off the outer edge interior.
pub fn rectangle_mask(dims: (usize, usize)) -> Vec<bool> {
    let (nx, ny) = dims;
    (0..ny)
        .flat_map(|j| (0..nx).map(move |i| i > 0 && j > 0 && i + 1 < nx && j + 1 < ny))
        .collect()
}

/// Square grid on `[x0, x1] × [y0, y0 + (x1 − x0)]` with `n` nodes per side.
pub fn square_grid(x0: f64, x1: f64, y0: f64, n: usize) -> GridField<f64> {
    let h = (x1 - x0) / (n - 1) as f64;
    GridField::new((x0, y0), h, (n, n), rectangle_mask((n, n)), vec![0.0; n * n]).expect("valid square grid")
}

/// Grid over the bounding box of a disc; nodes strictly inside the disc
/// (and off the outer edge) are interior.
pub fn disc_grid(center: (f64, f64), radius: f64, n: usize) -> GridField<f64> {
    // one padding node on each side so boundary nodes exist
    let h = 2.0 * radius / (n - 3) as f64;
    let origin = (center.0 - radius - h, center.1 - radius - h);
    let mut mask = vec![false; n * n];
    for j in 1..n - 1 {
        for i in 1..n - 1 {
            let (x, y) = (origin.0 + i as f64 * h, origin.1 + j as f64 * h);
            mask[j * n + i] = (x - center.0).hypot(y - center.1) < radius;
        }
    }
    GridField::new(origin, h, (n, n), mask, vec![0.0; n * n]).expect("valid disc grid")
}

/// Run-length encoding of a mask: alternating run lengths, starting with a
/// (possibly empty) run of `false`.
pub fn mask_to_rle(mask: &[bool]) -> Vec<usize> {
    let mut runs = Vec::new();
    let mut current = false;
    let mut len = 0;
    for &b in mask {
        if b == current {
            len += 1;
        } else {
            runs.push(len);
            current = b;
            len = 1;
        }
    }
    runs.push(len);
    runs
}

pub fn mask_from_rle(runs: &[usize], len: usize) -> Result<Vec<bool>> {
    let mut mask = Vec::with_capacity(len);
    let mut value = false;
    for &r in runs {
        mask.extend(std::iter::repeat_n(value, r));
        value = !value;
    }
    if mask.len() != len {
        return Err(Error::InvalidInput(format!(
            "mask run lengths sum to {}, grid has {len} nodes",
            mask.len()
        )));
    }
    Ok(mask)
}

/// Serialised grid header.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: [f64; 2],
    pub spacing: f64,
    pub dims: [usize; 2],
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn boundary_ring_of_square() {
        let g = square_grid(0.0, 1.0, 0.0, 5);
        assert_eq!(g.interior_count(), 9);
        assert_eq!(g.boundary_nodes().count(), 16);
        assert_eq!(g.active_cells().count(), 16);
        assert_eq!(g.interior_components(), 1);
        assert!(g.is_orthogonally_convex());
        assert!(g.is_convex());
    }

    #[test]
    fn interior_on_edge_rejected() {
        let mut mask = vec![false; 9];
        mask[0] = true;
        assert!(GridField::new((0.0, 0.0), 1.0, (3, 3), mask, vec![0.0; 9]).is_err());
    }

    #[test]
    fn cell_quadrature_is_exact_for_bilinear() {
        let g = square_grid(0.0, 1.0, 0.0, 11).with_values(|x, y| 1.0 + x + 2.0 * y + x * y);
        // ∫∫ (1 + x + 2y + xy) over unit square = 1 + 1/2 + 1 + 1/4
        assert!((g.integrate() - 2.75).abs() < 1e-13);
    }

    #[test]
    fn disconnected_mask_detected() {
        let n = 7;
        let mut mask = vec![false; n * n];
        mask[n + 1] = true;
        mask[5 * n + 5] = true;
        let g = GridField::new((0.0, 0.0), 1.0, (n, n), mask, vec![0.0; n * n]).unwrap();
        assert_eq!(g.interior_components(), 2);
    }

    #[test]
    fn disc_mask_is_convex() {
        let g = disc_grid((0.0, 0.0), 1.0, 41);
        assert!(g.is_orthogonally_convex());
        assert!(g.is_convex());
        assert_eq!(g.interior_components(), 1);
    }

    proptest! {
        #[test]
        fn rle_roundtrip(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let rle = mask_to_rle(&bits);
            prop_assert_eq!(mask_from_rle(&rle, bits.len()).unwrap(), bits);
        }
    }
}
