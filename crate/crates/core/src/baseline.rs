//! Smallest-magnitude generalized eigenvalue of a pencil, used as the
//! reference indicator `1/|lambda_min(k)|` that spikes at transmission
//! eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{vector_norm, ComplexMatrix, LuFactorization};
use crate::probe::random_vector;

/// How the reference eigenvalue is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineMethod {
    /// Every eigenvalue of `B^-1 A` from a complex Schur decomposition.
    #[default]
    FullSpectrum,
    /// Inverse power iteration towards the eigenvalue closest to zero.
    InverseIteration,
}

impl std::str::FromStr for BaselineMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full-spectrum" => Ok(BaselineMethod::FullSpectrum),
            "inverse-iteration" => Ok(BaselineMethod::InverseIteration),
            other => Err(Error::config(format!(
                "unknown baseline {other:?} (expected full-spectrum or inverse-iteration)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineConfig {
    pub method: BaselineMethod,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            method: BaselineMethod::FullSpectrum,
            tol: 1e-10,
            max_iter: 500,
        }
    }
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::config(format!(
                "baseline tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::config("baseline needs at least one iteration"));
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
        match self.method {
            BaselineMethod::FullSpectrum => spectrum_min_eig(a, b),
            BaselineMethod::InverseIteration => baseline_min_eig(a, b, self.tol, self.max_iter),
        }
    }
}

fn check(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "pencil {}x{} / {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Inverse iteration `y <- A^-1 B y` with the Rayleigh quotient
/// `lambda = <By, Ay> / <By, By>`, stopped once successive estimates agree
/// to `tol` relatively.
pub fn baseline_min_eig(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64, max_iter: usize) -> Result<Complex64> {
    check(a, b)?;
    let lu = LuFactorization::new(a.clone()).ok_or(Error::SolveFailure {
        z: Complex64::new(0.0, 0.0),
    })?;
    let mut y = random_vector(a.rows(), 0x5eed);
    let mut prev: Option<Complex64> = None;
    for _ in 0..max_iter {
        let mut w = b.matvec(&y);
        lu.solve_in_place(&mut w);
        let norm = vector_norm(&w);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NoConvergence { iterations: max_iter });
        }
        w.iter_mut().for_each(|v| *v /= norm);
        y = w;
        let by = b.matvec(&y);
        let ay = a.matvec(&y);
        let lambda = dot(&by, &ay) / dot(&by, &by);
        if let Some(p) = prev {
            if (lambda - p).norm() <= tol * lambda.norm() {
                return Ok(lambda);
            }
        }
        prev = Some(lambda);
    }
    Err(Error::NoConvergence { iterations: max_iter })
}

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// All eigenvalues of the pencil, as eigenvalues of `B^-1 A`.
pub fn generalized_eigenvalues(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<Complex64>> {
    check(a, b)?;
    let b_lu = LuFactorization::new(b.clone()).ok_or(Error::SolveFailure {
        z: Complex64::new(0.0, 0.0),
    })?;
    let values = to_nalgebra(&b_lu.solve_matrix(a))
        .eigenvalues()
        .ok_or(Error::NoConvergence { iterations: 0 })?;
    Ok(values.iter().copied().collect())
}

/// Smallest-magnitude eigenvalue from the full spectrum.
pub fn spectrum_min_eig(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    generalized_eigenvalues(a, b)?
        .into_iter()
        .min_by(|x, y| x.norm().total_cmp(&y.norm()))
        .ok_or_else(|| Error::Dimension("empty pencil".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&values.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn diagonal_pencils() {
        let b = ComplexMatrix::identity(2);
        let l = baseline_min_eig(&diag(&[0.01, 1.0]), &b, 1e-14, 100).unwrap();
        assert!((l - Complex64::new(0.01, 0.0)).norm() < 1e-10);
        let l = baseline_min_eig(&diag(&[2.0, 3.0]), &diag(&[1.0, 1.0]), 1e-14, 200).unwrap();
        assert!((l - Complex64::new(2.0, 0.0)).norm() < 1e-10);
        let l = spectrum_min_eig(&diag(&[0.01, 1.0]), &b).unwrap();
        assert!((l - Complex64::new(0.01, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_a_is_reported() {
        let err = baseline_min_eig(&diag(&[0.0, 1.0]), &ComplexMatrix::identity(2), 1e-10, 10);
        assert!(matches!(err, Err(Error::SolveFailure { .. })));
    }
}
