//! Cyclic Jacobi eigensolver for small Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `A[p][q]` with a
//! diagonal unitary and then applies an ordinary real Jacobi rotation, so the
//! accumulated transform stays unitary and the diagonal stays real.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::config::{HERMITIAN_TOL, JACOBI_MAX_SWEEPS, JACOBI_OFF_DIAGONAL};
use crate::error::{Error, Result};

/// Spectral decomposition `H = V diag(values) V^dagger`.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * self.values[k]).sum())
    }

    /// `sum_k f(lambda_k) |v_k><v_k|`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * mapped[k]).sum())
    }

    /// Projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn spectral_projector(&self, keep: impl Fn(f64) -> bool) -> ComplexMatrix {
        self.map_spectrum(|l| if keep(l) { 1.0 } else { 0.0 })
    }
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEig> {
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_DIAGONAL * a.frobenius_norm().max(1.0);

    let mut converged = off_diagonal_mass(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_mass(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermEig { values, vectors })
}

/// Annihilates `a[p][q]` with `a <- G^dagger a G`, `v <- v G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let magnitude = apq.norm();
    if magnitude < f64::MIN_POSITIVE {
        return;
    }
    // Phase that makes the pivot real and positive: d_q = exp(-i arg a_pq).
    let phase = (apq / magnitude).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * magnitude);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G restricted to (p, q): [[c, s], [-s d_q, c d_q]].
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    let n = a.rows();
    // a <- a G (columns p, q)
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * g_pp + aiq * g_qp;
        a[(i, q)] = aip * g_pq + aiq * g_qq;
    }
    // a <- G^dagger a (rows p, q)
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = g_pp.conj() * apj + g_qp.conj() * aqj;
        a[(q, j)] = g_pq.conj() * apj + g_qq.conj() * aqj;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * g_pp + viq * g_qp;
        v[(i, q)] = vip * g_pq + viq * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::ONE;

    #[test]
    fn diagonal_input_sorted_descending() {
        let d = ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let eig = herm_eig(&d).unwrap();
        assert_eq!(eig.values, vec![3.0, 2.0, 1.0]);
        // permutation eigenvectors
        assert_eq!(eig.vectors[(0, 0)], ONE);
        assert_eq!(eig.vectors[(2, 1)], ONE);
        assert_eq!(eig.vectors[(1, 2)], ONE);
    }

    #[test]
    fn identity_spectrum() {
        let eig = herm_eig(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(eig.values, vec![1.0; 3]);
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 2 and 0.
        let h =
            ComplexMatrix::from_row_major(2, 2, vec![ONE, Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), ONE])
                .unwrap();
        let eig = herm_eig(&h).unwrap();
        assert!((eig.values[0] - 2.0).abs() < 1e-14);
        assert!(eig.values[1].abs() < 1e-14);
        assert!(eig.reconstruct().max_abs_diff(&h) < 1e-14);
        assert!(eig.vectors.isometry_defect() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = ONE;
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }
}
