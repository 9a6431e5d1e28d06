//! Target moment vectors `b = E[phi(X)]`.

use std::fmt::Write as _;
use std::path::Path;

use crate::basis::{MultiIndex, TestFunctionBasis};
use crate::error::{Error, Result};
use crate::sampler::SampleBatch;

/// Loaded moment files may deviate from 1 in the constant component by at most this.
pub const CONSTANT_COMPONENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MomentProvenance {
    Analytic,
    UserSupplied,
    Empirical { samples: usize, seed: Option<u64> },
}

/// Moment vector whose first component is exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    values: Vec<f64>,
    provenance: MomentProvenance,
}

impl MomentVector {
    /// Rejects vectors whose first entry is not exactly 1 or that contain non-finite values.
    pub fn new(values: Vec<f64>, provenance: MomentProvenance) -> Result<Self> {
        if values.first() != Some(&1.0) {
            return Err(Error::InvalidInput(
                "the first moment (the constant test function) must equal 1".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("moment vector"));
        }
        Ok(MomentVector { values, provenance })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn provenance(&self) -> &MomentProvenance {
        &self.provenance
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// One value per line with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.values {
            writeln!(out, "{v:.16e}").unwrap();
        }
        out
    }
}

/// `E[X^alpha]` for `X` uniform on `[0, 1)^s`: `prod_i 1/(alpha_i + 1)`.
pub fn uniform_cube_moment(alpha: &MultiIndex) -> f64 {
    alpha
        .exponents()
        .iter()
        .map(|&a| 1.0 / (f64::from(a) + 1.0))
        .product()
}

pub fn analytic_moment_vector(basis: &TestFunctionBasis) -> Result<MomentVector> {
    if !basis.is_monomial() {
        return Err(Error::Unsupported(
            "analytic moments are only available for monomial bases".into(),
        ));
    }
    let values = basis.members().iter().map(uniform_cube_moment).collect();
    MomentVector::new(values, MomentProvenance::Analytic)
}

/// `(1/N) sum_i phi(X_i)`, with the constant component set to exactly 1.
pub fn empirical_moments(samples: &SampleBatch, basis: &TestFunctionBasis) -> Result<MomentVector> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if samples.dim() != basis.input_dim() {
        return Err(Error::DimensionMismatch {
            context: "sample dimension vs basis",
            expected: basis.input_dim(),
            found: samples.dim(),
        });
    }
    let d = basis.len();
    let mut sum = vec![0.0; d];
    let mut lifted = vec![0.0; d];
    for point in samples.points.rows() {
        basis.evaluate_into(point, &mut lifted)?;
        for (acc, v) in sum.iter_mut().zip(&lifted) {
            *acc += v;
        }
    }
    let n = samples.len() as f64;
    let mut values: Vec<f64> = sum.into_iter().map(|v| v / n).collect();
    values[0] = 1.0;
    MomentVector::new(
        values,
        MomentProvenance::Empirical {
            samples: samples.len(),
            seed: samples.seed(),
        },
    )
}

/// Row-average of a column-major `d x n` lifted matrix.
pub fn empirical_moments_lifted(d: usize, lifted: &[f64]) -> Result<MomentVector> {
    if d == 0 || !lifted.len().is_multiple_of(d) {
        return Err(Error::InvalidInput("lifted matrix has inconsistent shape".into()));
    }
    let n = lifted.len() / d;
    if n == 0 {
        return Err(Error::EmptySamples);
    }
    let mut values = vec![0.0; d];
    for col in lifted.chunks_exact(d) {
        for (acc, v) in values.iter_mut().zip(col) {
            *acc += v;
        }
    }
    for v in values.iter_mut() {
        *v /= n as f64;
    }
    values[0] = 1.0;
    MomentVector::new(
        values,
        MomentProvenance::Empirical {
            samples: n,
            seed: None,
        },
    )
}

pub fn load_moment_vector(path: &Path, basis: &TestFunctionBasis) -> Result<MomentVector> {
    let text = std::fs::read_to_string(path)?;
    parse_moment_vector(&text, basis)
}

/// One decimal per line; `#` starts a comment; blank lines are ignored.
pub fn parse_moment_vector(text: &str, basis: &TestFunctionBasis) -> Result<MomentVector> {
    let mut values = Vec::with_capacity(basis.len());
    for (idx, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let value: f64 = content
            .parse()
            .map_err(|_| Error::parse(idx + 1, format!("not a number: {content:?}")))?;
        if !value.is_finite() {
            return Err(Error::parse(idx + 1, "non-finite moment"));
        }
        values.push(value);
    }
    if values.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            context: "moment file length vs basis size",
            expected: basis.len(),
            found: values.len(),
        });
    }
    if (values[0] - 1.0).abs() > CONSTANT_COMPONENT_TOL {
        return Err(Error::InvalidInput(format!(
            "first moment {} deviates from 1 by more than {CONSTANT_COMPONENT_TOL:e}",
            values[0]
        )));
    }
    values[0] = 1.0;
    MomentVector::new(values, MomentProvenance::UserSupplied)
}
