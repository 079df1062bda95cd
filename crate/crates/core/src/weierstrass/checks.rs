//! Numerical certificates for conformal, harmonic and minimal immersions.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curvature::mean_curvature_vector;
use crate::error::{Error, Result};
use crate::expr::ComplexExprVec;
use crate::numeric::quad::Region;
use crate::surface::{fd_jet, jet, Domain, Jet, SurfaceMap};

/// Conformality violation above which orthogonality and mean-curvature
/// checks refuse to run.
pub const CONFORMAL_PRECONDITION: f64 = 1e-6;

/// `count` pseudo-random points of the domain's sample region that stay at
/// least `margin` away from the holes and from `avoid`.
pub fn sample_points(domain: &Domain, count: usize, seed: u64, avoid: &[Complex64], margin: f64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let region = domain.sample_region();
    let mut bad: Vec<Complex64> = domain.holes();
    bad.extend_from_slice(avoid);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (u, v) = match region {
            Region::Rectangle { u, v } => (rng.random_range(u[0]..=u[1]), rng.random_range(v[0]..=v[1])),
            Region::Disc { center, radius } => {
                let r = radius * rng.random_range(0.0..1.0f64).sqrt();
                let t = rng.random_range(0.0..std::f64::consts::TAU);
                (center[0] + r * t.cos(), center[1] + r * t.sin())
            }
            Region::Annulus { center, inner, outer } => {
                let r2 = rng.random_range(inner * inner..=outer * outer);
                let t = rng.random_range(0.0..std::f64::consts::TAU);
                (center[0] + r2.sqrt() * t.cos(), center[1] + r2.sqrt() * t.sin())
            }
        };
        let z = Complex64::new(u, v);
        if domain.contains(u, v) && bad.iter().all(|b| (z - b).norm() >= margin) {
            out.push((u, v));
        }
    }
    out
}

/// `(|E − G| + |F|) / E` at one jet.
pub fn conformality_violation(j: &Jet, u: f64, v: f64) -> Result<f64> {
    let area = j.area_element_sq().sqrt();
    if !(area > crate::curvature::IMMERSION_TOL) {
        return Err(Error::NotImmersed { u, v, area });
    }
    let (e, f, g) = (j.fu.norm_squared(), j.fu.dot(&j.fv), j.fv.norm_squared());
    Ok(((e - g).abs() + f.abs()) / e)
}

fn max_over<S, F>(s: &S, samples: &[(f64, f64)], mut f: F) -> Result<f64>
where
    S: SurfaceMap + ?Sized,
    F: FnMut(&Jet, f64, f64) -> Result<f64>,
{
    let mut worst: f64 = 0.0;
    for &(u, v) in samples {
        let j = jet(s, u, v)?;
        worst = worst.max(f(&j, u, v)?);
    }
    Ok(worst)
}

/// Max normalised violation of `F_u·F_u = F_v·F_v`, `F_u·F_v = 0`.
pub fn conformality_check<S: SurfaceMap + ?Sized>(s: &S, samples: &[(f64, f64)]) -> Result<f64> {
    max_over(s, samples, conformality_violation)
}

/// Max `|F_uu + F_vv|`.
pub fn harmonicity_check<S: SurfaceMap + ?Sized>(s: &S, samples: &[(f64, f64)]) -> Result<f64> {
    max_over(s, samples, |j, u, v| {
        conformality_violation(j, u, v)?;
        Ok(j.laplacian().norm())
    })
}

/// Max `|F_uu + F_vv|` from finite differences of positions only, ignoring
/// any analytic jet.
pub fn harmonicity_check_fd<S: SurfaceMap + ?Sized>(s: &S, samples: &[(f64, f64)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(u, v) in samples {
        worst = worst.max(fd_jet(s, u, v)?.laplacian().norm());
    }
    Ok(worst)
}

fn require_conformal(j: &Jet, u: f64, v: f64) -> Result<()> {
    let violation = conformality_violation(j, u, v)?;
    if violation > CONFORMAL_PRECONDITION {
        return Err(Error::NotConformal { violation });
    }
    Ok(())
}

/// Max of `(|ΔF·F_u| + |ΔF·F_v|) / (|F_u|·max(|ΔF|, |F_u|))`.
pub fn laplace_orthogonality_check<S: SurfaceMap + ?Sized>(s: &S, samples: &[(f64, f64)]) -> Result<f64> {
    max_over(s, samples, |j, u, v| {
        require_conformal(j, u, v)?;
        let lap = j.laplacian();
        let mu = j.fu.norm();
        Ok((lap.dot(&j.fu).abs() + lap.dot(&j.fv).abs()) / (mu * lap.norm().max(mu)))
    })
}

/// Outcome of [`mean_curvature_vector_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanCurvatureReport {
    /// `max |ΔF − ½|∇F|²𝐇|`.
    pub residual: f64,
    pub max_h: f64,
    pub min_h: f64,
    /// Largest `|ΔF|` seen, for scale.
    pub max_laplacian: f64,
}

/// Compares `ΔF` with `½|∇F|²𝐇`, where `𝐇` comes from re-graphing the
/// surface over its tangent plane.
pub fn mean_curvature_vector_check<S: SurfaceMap + ?Sized>(
    s: &S,
    samples: &[(f64, f64)],
) -> Result<MeanCurvatureReport> {
    let mut rep = MeanCurvatureReport {
        residual: 0.0,
        max_h: 0.0,
        min_h: f64::INFINITY,
        max_laplacian: 0.0,
    };
    for &(u, v) in samples {
        let j = jet(s, u, v)?;
        require_conformal(&j, u, v)?;
        let h = mean_curvature_vector(&j, u, v)?;
        let grad2 = j.fu.norm_squared() + j.fv.norm_squared();
        let lap = j.laplacian();
        rep.residual = rep.residual.max((&lap - 0.5 * grad2 * &h).norm());
        rep.max_h = rep.max_h.max(h.norm());
        rep.min_h = rep.min_h.min(h.norm());
        rep.max_laplacian = rep.max_laplacian.max(lap.norm());
    }
    if samples.is_empty() {
        rep.min_h = 0.0;
    }
    Ok(rep)
}

/// Max `|2∂F/∂z − f|` with `∂F/∂z` from finite differences, relative to
/// `max(1, |f|)`.
pub fn derivative_round_trip<S: SurfaceMap + ?Sized>(s: &S, f: &ComplexExprVec, samples: &[(f64, f64)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(u, v) in samples {
        let j = fd_jet(s, u, v)?;
        let want = f.eval(Complex64::new(u, v))?;
        let scale = want.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt().max(1.0);
        let err = want
            .iter()
            .enumerate()
            .map(|(k, w)| (Complex64::new(j.fu[k], -j.fv[k]) - w).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(err / scale);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linalg::VecN;
    use crate::surface::{unit_sphere, ClosedForm};

    fn catenoid() -> ClosedForm {
        ClosedForm::new("catenoid", 3, Domain::rectangle(-3.0, 3.0, -1.5, 1.5), |u, v| {
            let (cu, su, ch, sh) = (u.cos(), u.sin(), v.cosh(), v.sinh());
            Jet {
                p: VecN::from_vec(vec![cu * ch, su * ch, v]),
                fu: VecN::from_vec(vec![-su * ch, cu * ch, 0.0]),
                fv: VecN::from_vec(vec![cu * sh, su * sh, 1.0]),
                fuu: VecN::from_vec(vec![-cu * ch, -su * ch, 0.0]),
                fuv: VecN::from_vec(vec![-su * sh, cu * sh, 0.0]),
                fvv: VecN::from_vec(vec![cu * ch, su * ch, 0.0]),
            }
        })
    }

    fn pts(d: &Domain) -> Vec<(f64, f64)> {
        sample_points(d, 40, 42, &[], 1e-3)
    }

    #[test]
    fn catenoid_is_conformal_and_harmonic() {
        let s = catenoid();
        let p = pts(s.domain());
        assert!(conformality_check(&s, &p).unwrap() < 1e-12);
        assert!(harmonicity_check(&s, &p).unwrap() < 1e-12);
        assert!(laplace_orthogonality_check(&s, &p).unwrap() < 1e-10);
        let m = mean_curvature_vector_check(&s, &p).unwrap();
        assert!(m.residual < 1e-10 && m.max_h < 1e-10);
        assert!(harmonicity_check_fd(&s, &p).unwrap() < 1e-6);
    }

    #[test]
    fn anisotropic_linear_map() {
        let s = ClosedForm::linear(
            "stretch",
            VecN::from_vec(vec![1.0, 0.0, 0.0]),
            VecN::from_vec(vec![0.0, 2.0, 0.0]),
            Domain::Plane,
        );
        assert!((conformality_check(&s, &[(0.3, 0.1)]).unwrap() - 3.0).abs() < 1e-14);
        assert!(matches!(
            laplace_orthogonality_check(&s, &[(0.3, 0.1)]),
            Err(Error::NotConformal { .. })
        ));
    }

    #[test]
    fn non_harmonic_quadratic() {
        let s = ClosedForm::new("u2", 3, Domain::Plane, |u, v| Jet {
            p: VecN::from_vec(vec![u * u, v, 0.0]),
            fu: VecN::from_vec(vec![2.0 * u, 0.0, 0.0]),
            fv: VecN::from_vec(vec![0.0, 1.0, 0.0]),
            fuu: VecN::from_vec(vec![2.0, 0.0, 0.0]),
            fuv: VecN::zeros(3),
            fvv: VecN::zeros(3),
        });
        assert_eq!(harmonicity_check(&s, &[(0.7, 0.2)]).unwrap(), 2.0);
        assert!((harmonicity_check_fd(&s, &[(0.7, 0.2)]).unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn sphere_control() {
        let s = unit_sphere();
        let p = pts(s.domain());
        assert!(laplace_orthogonality_check(&s, &p).unwrap() < 1e-6);
        let m = mean_curvature_vector_check(&s, &p).unwrap();
        assert!(m.residual < 1e-5 * m.max_laplacian.max(1.0));
        assert!((m.max_h - 2.0).abs() < 1e-4 && (m.min_h - 2.0).abs() < 1e-4);
    }

    #[test]
    fn sampling_is_seeded_and_avoids_holes() {
        let d = Domain::punctured(&[Complex64::new(0.0, 0.0)]);
        let a = sample_points(&d, 50, 3, &[Complex64::new(1.0, 0.0)], 0.1);
        assert_eq!(a, sample_points(&d, 50, 3, &[Complex64::new(1.0, 0.0)], 0.1));
        assert!(a.iter().all(|&(u, v)| (u - 1.0).hypot(v) >= 0.1 && u.hypot(v) >= 0.1));
    }
}
