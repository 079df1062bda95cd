//! Banded LU factorisation without pivoting.
//!
//! The elliptic systems assembled by the graph solver are diagonally
//! dominant or symmetric positive definite, so no pivoting is performed;
//! a vanishing pivot is reported as an error.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        let width = lower + upper + 1;
        Self {
            n,
            lower,
            upper,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if j + self.lower < i || j > i + self.upper {
            None
        } else {
            Some(i * self.width + (j + self.lower - i))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Adds `value` to entry `(i, j)`.
    ///
    /// # Panics
    /// If `(i, j)` lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let k = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside band"));
        self.data[k] += value;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let j0 = i.saturating_sub(self.lower);
                let j1 = (i + self.upper).min(self.n - 1);
                (j0..=j1).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Solves `A x = b`, consuming the matrix.
    pub fn solve(mut self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let scale = self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let pivot = self.data[k * self.width + self.lower];
            if !(pivot.abs() > 1e-300_f64.max(1e-15 * scale)) {
                return Err(Error::InvalidInput(format!(
                    "singular banded system: pivot {pivot:e} at row {k}"
                )));
            }
            let i_end = (k + self.lower).min(n - 1);
            let j_end = (k + self.upper).min(n - 1);
            for i in k + 1..=i_end {
                let ik = i * self.width + (k + self.lower - i);
                let l = self.data[ik] / pivot;
                self.data[ik] = l;
                if l == 0.0 {
                    continue;
                }
                for j in k + 1..=j_end {
                    let kj = k * self.width + (j + self.lower - k);
                    let ij = i * self.width + (j + self.lower - i);
                    self.data[ij] -= l * self.data[kj];
                }
            }
        }
        let mut x = b.to_vec();
        for i in 0..n {
            let j0 = i.saturating_sub(self.lower);
            let mut s = x[i];
            for j in j0..i {
                s -= self.data[i * self.width + (j + self.lower - i)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let j1 = (i + self.upper).min(n - 1);
            let mut s = x[i];
            for j in i + 1..=j1 {
                s -= self.data[i * self.width + (j + self.lower - i)] * x[j];
            }
            x[i] = s / self.data[i * self.width + self.lower];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_poisson() {
        // −u'' = 1 on (0,1), u(0)=u(1)=0, exact u = x(1−x)/2 (reproduced exactly by 3-point stencil)
        let n = 49;
        let h = 1.0 / (n + 1) as f64;
        let mut a = BandedMatrix::zeros(n, 1, 1);
        for i in 0..n {
            a.add(i, i, 2.0 / (h * h));
            if i > 0 {
                a.add(i, i - 1, -1.0 / (h * h));
            }
            if i + 1 < n {
                a.add(i, i + 1, -1.0 / (h * h));
            }
        }
        let x = a.solve(&vec![1.0; n]).unwrap();
        for (i, xi) in x.iter().enumerate() {
            let t = (i + 1) as f64 * h;
            assert!((xi - 0.5 * t * (1.0 - t)).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_dense_solve_for_wide_band() {
        let n = 30;
        let (kl, ku) = (4, 6);
        let mut a = BandedMatrix::zeros(n, kl, ku);
        let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let v = if i == j {
                    20.0
                } else {
                    ((i * 7 + j * 3) % 5) as f64 - 2.0
                };
                a.add(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let y = a.mul_vec(&b);
        let x = a.solve(&y).unwrap();
        for i in 0..n {
            assert!((x[i] - b[i]).abs() < 1e-12);
        }
        let xd = dense.lu().solve(&nalgebra::DVector::from_vec(y)).unwrap();
        assert!((xd - nalgebra::DVector::from_vec(x)).norm() < 1e-12);
    }

    #[test]
    fn zero_pivot_is_an_error() {
        let a = BandedMatrix::zeros(3, 1, 1);
        assert!(a.solve(&[1.0, 1.0, 1.0]).is_err());
    }
}
