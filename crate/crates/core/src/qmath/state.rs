use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::herm_eig;
use super::matrix::{self, ComplexMatrix};
use crate::config::{HERMITIAN_TOL, NORM_TOL, PSD_TOL, TRACE_TOL};
use crate::error::{Error, Result};

/// State vector. Unit norm unless `subnormalized` is set, in which case it
/// is a component of a larger state (for example a branch of a measurement
/// before renormalisation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    subnormalized: bool,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sq = matrix::norm_sqr(&amplitudes);
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes, subnormalized: false })
    }

    /// Rescales to unit norm; fails on a (numerically) zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = matrix::norm_sqr(&amplitudes).sqrt();
        if norm <= 1e-12 {
            return Err(Error::NotNormalized { norm_sq: norm * norm });
        }
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(), subnormalized: false })
    }

    pub fn subnormalized(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes, subnormalized: true }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        Self { amplitudes: matrix::basis(dim, index), subnormalized: false }
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn is_subnormalized(&self) -> bool {
        self.subnormalized
    }

    pub fn norm_sqr(&self) -> f64 {
        matrix::norm_sqr(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        matrix::inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.projector())
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensity(format!("{}x{} matrix is not square", matrix.rows(), matrix.cols())));
        }
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace} differs from 1")));
        }
        let smallest = herm_eig(&matrix)?.values.last().copied().unwrap_or(0.0);
        if smallest < -PSD_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {smallest:e}")));
        }
        Ok(Self { matrix })
    }

    /// Diagonal density matrix from real probabilities.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(probabilities))
    }

    /// `M M^dagger / Tr(M M^dagger)`; surjective onto density matrices.
    pub fn from_factor(m: &ComplexMatrix) -> Result<Self> {
        let g = m * &m.adjoint();
        let tr = g.trace().re;
        if tr <= 1e-300 {
            return Err(Error::InvalidDensity("zero factor".into()));
        }
        Self::new(g.scale_real(1.0 / tr).hermitian_part())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `<psi| rho |psi>`.
    pub fn expectation(&self, psi: &PureState) -> f64 {
        let v = self.matrix.mul_vec(psi.amplitudes());
        matrix::inner(psi.amplitudes(), &v).re
    }
}
