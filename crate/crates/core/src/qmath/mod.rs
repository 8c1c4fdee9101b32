//! Dense complex linear algebra for registers of dimension up to a few dozen.

mod eigen;
mod layout;
mod matrix;
mod state;

pub use eigen::{herm_eig, HermEig};
pub use layout::{Register, RegisterLayout};
pub use matrix::{basis, inner, kron_vec, norm_sqr, ComplexMatrix, ONE, ZERO};
pub use state::{DensityMatrix, PureState};

use crate::config::{HERMITIAN_TOL, ISOMETRY_TOL, PSD_TOL, ZERO_PROBABILITY};
use crate::error::{Error, Result};

/// Kronecker product under the most-significant-left convention.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for ComplexMatrix {
    fn tensor(&self, other: &Self) -> Self {
        self.kron(other)
    }
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> Self {
        let v = kron_vec(self.amplitudes(), other.amplitudes());
        if self.is_subnormalized() || other.is_subnormalized() {
            PureState::subnormalized(v)
        } else {
            PureState::new(v).expect("product of unit vectors is a unit vector")
        }
    }
}

impl Tensor for DensityMatrix {
    fn tensor(&self, other: &Self) -> Self {
        DensityMatrix::new(self.matrix().kron(other.matrix())).expect("product of density matrices is a density matrix")
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Reduced density matrix over the kept registers, in layout order.
pub fn partial_trace(rho: &DensityMatrix, layout: &RegisterLayout, keep: &[&str]) -> Result<DensityMatrix> {
    let reduced = layout.partial_trace_matrix(rho.matrix(), keep)?;
    DensityMatrix::new(reduced.hermitian_part())
}

/// Square root of a PSD matrix, clipping eigenvalues in `[-PSD_TOL, 0)` to zero.
pub fn sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    if let Some(&smallest) = eig.values.last() {
        if smallest < -PSD_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {smallest:e}")));
        }
    }
    Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
}

/// Fidelity in the squared convention, `F = (Tr |sqrt(rho) sqrt(sigma)|)^2`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    let sr = sqrt_psd(rho.matrix())?;
    let inner = (&(&sr * sigma.matrix()) * &sr).hermitian_part();
    let eig = herm_eig(&inner)?;
    // rounding noise in the null space would otherwise survive the square root
    let cutoff = 64.0 * f64::EPSILON * inner.rows() as f64 * eig.values.first().copied().unwrap_or(0.0).max(1.0);
    let root_trace: f64 = eig.values.iter().filter(|&&l| l > cutoff).map(|&l| l.sqrt()).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(a)?.values.iter().map(|l| l.abs()).sum())
}

/// Outcome of a projective test on a pure state.
#[derive(Debug, Clone)]
pub struct Projection {
    pub probability: f64,
    pub post_state: Option<PureState>,
}

/// `p = <psi|P|psi>` and the renormalised `P|psi>` when `p` is non-negligible.
pub fn project_and_renormalize(state: &PureState, projector: &ComplexMatrix) -> Result<Projection> {
    if projector.rows() != state.dim() || !projector.is_square() {
        return Err(Error::DimensionMismatch { expected: state.dim(), got: projector.rows() });
    }
    let defect = projector.projector_defect();
    if defect > ISOMETRY_TOL.max(HERMITIAN_TOL) {
        return Err(Error::NotProjector { defect });
    }
    let projected = projector.mul_vec(state.amplitudes());
    let probability = norm_sqr(&projected).min(1.0);
    let post_state = if probability > ZERO_PROBABILITY { Some(PureState::normalized(projected)?) } else { None };
    Ok(Projection { probability, post_state })
}
