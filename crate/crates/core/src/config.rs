//! Numerical tolerances shared by every module.

/// Maximum Hermiticity defect `max |A[i][j] - conj(A[j][i])|`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of a squared norm from one.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance for `V^dagger V = I` and `P^2 = P`.
pub const ISOMETRY_TOL: f64 = 1e-10;
/// Probabilities at or below this are treated as zero when renormalising.
pub const ZERO_PROBABILITY: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius mass drops below this
/// (relative to the Frobenius norm when that exceeds one).
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-14;
/// Sweep limit for the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues with absolute value at or below this count as zero when a
/// spectrum is split into positive, negative and null parts.
pub const SPECTRAL_ZERO: f64 = 1e-12;
/// Bisection tolerance on the equalization difference.
pub const BISECTION_TOL: f64 = 1e-12;
/// Exact-mode outcome probabilities must sum to one within this.
pub const DISTRIBUTION_TOL: f64 = 1e-9;
