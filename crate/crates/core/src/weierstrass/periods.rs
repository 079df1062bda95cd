//! Periods `∮_C f dz` of holomorphic data and the flux `Im ∮_C f dz`.
//!
//! Loops are counterclockwise unless reversed explicitly; the flux of a
//! clockwise loop is the negative of the counterclockwise one.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::ComplexExprVec;
use crate::numeric::quad::{quad_contour, Loop, QuadOptions};

/// Minimum distance between a loop and a declared singularity.
pub const LOOP_CLEARANCE: f64 = 1e-6;

/// Period vector of one loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Period {
    pub integral: Vec<Complex64>,
    /// `Re ∮ f dz`; must vanish for `F = c + Re∫ f dz` to be well defined.
    pub real: Vec<f64>,
    /// `𝔭(C) = Im ∮ f dz`.
    pub flux: Vec<f64>,
    /// Quadrature error estimate (max over components).
    pub error: f64,
}

impl Period {
    pub fn real_norm(&self) -> f64 {
        self.real.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn flux_norm(&self) -> f64 {
        self.flux.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub fn periods(f: &ComplexExprVec, loops: &[Loop], opts: &QuadOptions) -> Result<Vec<Period>> {
    loops
        .iter()
        .map(|c| {
            c.check_clearance(f.singularities(), LOOP_CLEARANCE)?;
            let mut integral = Vec::with_capacity(f.dim());
            let mut error: f64 = 0.0;
            for comp in f.components() {
                let est = quad_contour(|z| comp.eval(z), c, opts)?;
                integral.push(est.value);
                error = error.max(est.error);
            }
            Ok(Period {
                real: integral.iter().map(|w| w.re).collect(),
                flux: integral.iter().map(|w| w.im).collect(),
                integral,
                error,
            })
        })
        .collect()
}

/// Which periods must vanish before integrating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimitiveKind {
    /// `F = c + Re∫ f dz`: only the real periods must vanish.
    RealPart,
    /// `Z = c + ∫ f dz`: the full complex periods must vanish.
    FullComplex,
}

/// Tolerance on periods that must vanish.
pub const PERIOD_TOL: f64 = 1e-9;

/// Errors with `PeriodObstruction` on the first generator whose relevant
/// periods do not vanish.
pub fn check_periods(ps: &[Period], kind: PrimitiveKind) -> Result<()> {
    for (k, p) in ps.iter().enumerate() {
        let (re, im) = (p.real_norm(), p.flux_norm());
        let bad = match kind {
            PrimitiveKind::RealPart => re >= PERIOD_TOL,
            PrimitiveKind::FullComplex => re.hypot(im) >= PERIOD_TOL,
        };
        if bad {
            return Err(Error::PeriodObstruction { generator: k, re, im });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn catenoid_phi() -> ComplexExprVec {
        ComplexExprVec::parse(
            &["(0 - 1/z)*(1/2)*(1/z - z)", "(0 - 1/z)*(i/2)*(1/z + z)", "0 - 1/z"],
            &[c(0.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn catenoid_flux() {
        let p = &periods(
            &catenoid_phi(),
            &[Loop::circle(c(0.0, 0.0), 1.0)],
            &QuadOptions::default(),
        )
        .unwrap()[0];
        assert!(p.real_norm() < 1e-10);
        let expected = [0.0, 0.0, -2.0 * PI];
        for (a, b) in p.flux.iter().zip(expected) {
            assert!((a - b).abs() < 1e-8);
        }
        let rev = &periods(
            &catenoid_phi(),
            &[Loop::circle(c(0.0, 0.0), 1.0).reversed()],
            &QuadOptions::default(),
        )
        .unwrap()[0];
        assert!((rev.flux[2] - 2.0 * PI).abs() < 1e-8);
        assert!(check_periods(std::slice::from_ref(p), PrimitiveKind::RealPart).is_ok());
        assert!(matches!(
            check_periods(std::slice::from_ref(p), PrimitiveKind::FullComplex),
            Err(Error::PeriodObstruction { generator: 0, .. })
        ));
    }

    #[test]
    fn toy_residues() {
        let f = ComplexExprVec::parse(&["1/z", "i/z", "0*z"], &[c(0.0, 0.0)]).unwrap();
        let p = &periods(&f, &[Loop::circle(c(0.0, 0.0), 0.5)], &QuadOptions::default()).unwrap()[0];
        let expected = [c(0.0, 2.0 * PI), c(-2.0 * PI, 0.0), c(0.0, 0.0)];
        for (a, b) in p.integral.iter().zip(expected) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn enneper_periods_vanish() {
        let f = ComplexExprVec::parse(&["1 - z^2", "i*(1 + z^2)", "2*z"], &[]).unwrap();
        let loops = [
            Loop::circle(c(0.3, -0.2), 2.0),
            Loop::polyline(vec![c(-1.0, -1.0), c(2.0, -1.0), c(0.0, 3.0)]).unwrap(),
        ];
        for p in periods(&f, &loops, &QuadOptions::default()).unwrap() {
            assert!(p.integral.iter().all(|w| w.norm() < 1e-12));
        }
    }

    #[test]
    fn homology_invariance_and_flux_homomorphism() {
        let f = ComplexExprVec::parse(
            &["1/(z + 1) + z", "i/(z - 1)", "1/(z + 1)^2 + 3/(z - 1)"],
            &[c(-1.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let opts = QuadOptions::default();
        let small = Loop::circle(c(-1.0, 0.0), 0.3);
        let wobbly = Loop::polyline(vec![c(-1.5, -0.4), c(-0.4, -0.7), c(-0.2, 0.5), c(-1.3, 0.9)]).unwrap();
        let (p1, p2) = (
            &periods(&f, &[small], &opts).unwrap()[0],
            &periods(&f, &[wobbly], &opts).unwrap()[0],
        );
        for (a, b) in p1.integral.iter().zip(&p2.integral) {
            assert!((a - b).norm() < 1e-9);
        }

        // a figure eight through 0 is the concatenation of the two circles
        let n = 64;
        let circle = |center: f64, sign: f64| {
            (0..n).map(move |k| {
                let t = PI + sign * 2.0 * PI * k as f64 / n as f64;
                c(center, 0.0) + Complex64::from_polar(1.0, if center > 0.0 { t } else { t - PI })
            })
        };
        let mut eight: Vec<Complex64> = circle(-1.0, 1.0).collect();
        eight.extend(circle(1.0, 1.0));
        let eight = Loop::polyline(eight).unwrap();
        let c1 = Loop::circle(c(-1.0, 0.0), 1.0);
        let c2 = Loop::circle(c(1.0, 0.0), 1.0);
        let ps = periods(&f, &[eight, c1, c2], &opts).unwrap();
        for k in 0..3 {
            assert!((ps[0].flux[k] - ps[1].flux[k] - ps[2].flux[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn loop_through_singularity_is_rejected() {
        let f = ComplexExprVec::parse(&["1/z", "0", "0"], &[c(1.0, 0.0)]).unwrap();
        assert!(periods(&f, &[Loop::circle(c(0.0, 0.0), 1.0)], &QuadOptions::default()).is_err());
    }
}
