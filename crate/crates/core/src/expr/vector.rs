use num_complex::Complex64;

use super::ComplexExpr;
use crate::error::{Error, Result};

/// ℂⁿ-valued expression (n ≥ 3) sharing one singularity declaration.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexExprVec {
    components: Vec<ComplexExpr>,
    singularities: Vec<Complex64>,
}

/// Outcome of a nullity check `Σ fⱼ² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullityReport {
    pub max_residual: f64,
    pub worst_point: Option<Complex64>,
    pub null: bool,
}

pub const NULLITY_TOL: f64 = 1e-10;

impl ComplexExprVec {
    pub fn new(components: Vec<ComplexExpr>, singularities: &[Complex64]) -> Result<Self> {
        if components.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "need at least 3 components, got {}",
                components.len()
            )));
        }
        Ok(Self {
            components: components
                .into_iter()
                .map(|c| c.with_singularities(singularities))
                .collect(),
            singularities: singularities.to_vec(),
        })
    }

    pub fn parse(sources: &[&str], singularities: &[Complex64]) -> Result<Self> {
        let comps = sources
            .iter()
            .map(|s| ComplexExpr::parse(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps, singularities)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ComplexExpr] {
        &self.components
    }

    pub fn singularities(&self) -> &[Complex64] {
        &self.singularities
    }

    pub fn eval(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    pub fn differentiate(&self) -> Self {
        Self {
            components: self.components.iter().map(|c| c.differentiate()).collect(),
            singularities: self.singularities.clone(),
        }
    }

    /// `max |Σ fⱼ(z)²|` over the samples; null iff below [`NULLITY_TOL`].
    pub fn nullity_check(&self, samples: &[Complex64]) -> Result<NullityReport> {
        let mut worst = (0.0, None);
        for &z in samples {
            let r = self.eval(z)?.iter().map(|f| f * f).sum::<Complex64>().norm();
            if r > worst.0 || worst.1.is_none() {
                worst = (r, Some(z));
            }
        }
        Ok(NullityReport {
            max_residual: worst.0,
            worst_point: worst.1,
            null: worst.0 < NULLITY_TOL,
        })
    }

    pub fn to_sources(&self) -> Vec<String> {
        self.components.iter().map(|c| c.to_source()).collect()
    }
}
