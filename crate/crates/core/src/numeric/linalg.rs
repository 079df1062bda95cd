//! Low-dimensional real linear algebra.

use nalgebra::{DVector, Vector2, Vector3};

/// Real vector of runtime length (points and tangent vectors in Rⁿ).
pub type VecN = DVector<f64>;

/// Symmetric 2×2 matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SymMat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SymMat2 {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub const fn diag(a: f64, c: f64) -> Self {
        Self { a, b: 0.0, c }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.c
    }

    pub fn det(&self) -> f64 {
        self.a * self.c - self.b * self.b
    }

    pub fn mul_vec(&self, v: &Vector2<f64>) -> Vector2<f64> {
        Vector2::new(self.a * v.x + self.b * v.y, self.b * v.x + self.c * v.y)
    }

    /// Quadratic form `vᵀ M v`.
    pub fn quad_form(&self, v: &Vector2<f64>) -> f64 {
        self.a * v.x * v.x + 2.0 * self.b * v.x * v.y + self.c * v.y * v.y
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }
}

/// Eigen-decomposition of a [`SymMat2`], `values[0] >= values[1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen2 {
    pub values: [f64; 2],
    pub vectors: [Vector2<f64>; 2],
}

/// Closed-form eigen-decomposition of a symmetric 2×2 matrix.
///
/// Eigenvalues are ordered `λ₁ ≥ λ₂`. Each eigenvector is normalised and
/// signed so that its first non-negligible component is positive; for a
/// repeated eigenvalue the coordinate axes are returned.
pub fn eig_sym2(m: SymMat2) -> Eigen2 {
    let mean = 0.5 * (m.a + m.c);
    let half_diff = 0.5 * (m.a - m.c);
    let radius = half_diff.hypot(m.b);
    let (l1, l2) = (mean + radius, mean - radius);

    let scale = m.a.abs().max(m.b.abs()).max(m.c.abs());
    if radius <= f64::EPSILON * scale || radius == 0.0 {
        return Eigen2 {
            values: [l1, l2],
            vectors: [Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0)],
        };
    }

    // pick the better-conditioned row of (M − λ₁I)
    let v1 = if m.a >= m.c {
        Vector2::new(l1 - m.c, m.b)
    } else {
        Vector2::new(m.b, l1 - m.a)
    }
    .normalize();
    let v2 = Vector2::new(v1.y, -v1.x);
    Eigen2 {
        values: [l1, l2],
        vectors: [canonical_sign(v1), canonical_sign(v2)],
    }
}

fn canonical_sign(v: Vector2<f64>) -> Vector2<f64> {
    let lead = if v.x.abs() > 1e-14 { v.x } else { v.y };
    if lead < 0.0 {
        -v
    } else {
        v
    }
}

pub fn cross3(a: &VecN, b: &VecN) -> VecN {
    let a = Vector3::new(a[0], a[1], a[2]);
    let b = Vector3::new(b[0], b[1], b[2]);
    let c = a.cross(&b);
    VecN::from_column_slice(c.as_slice())
}

/// Orthonormal frame whose first two vectors span `span(u, v)` (Gram–Schmidt)
/// and whose remaining `n − 2` vectors complete it to a basis of Rⁿ.
///
/// Returns `None` when `u` and `v` are (numerically) dependent.
pub fn adapted_frame(u: &VecN, v: &VecN) -> Option<Vec<VecN>> {
    let n = u.len();
    let b1 = u.normalize();
    let w = v - &b1 * b1.dot(v);
    let wn = w.norm();
    if !(wn > 1e-14 * v.norm().max(1e-300)) {
        return None;
    }
    let mut frame = vec![b1, w / wn];
    if n == 3 {
        frame.push(cross3(&frame[0], &frame[1]));
        return Some(frame);
    }
    for k in 0..n {
        if frame.len() == n {
            break;
        }
        let mut e = VecN::zeros(n);
        e[k] = 1.0;
        // two passes of Gram–Schmidt for stability
        for _ in 0..2 {
            for b in &frame {
                let p = b.dot(&e);
                e -= b * p;
            }
        }
        let en = e.norm();
        if en > 1e-8 {
            frame.push(e / en);
        }
    }
    Some(frame)
}
