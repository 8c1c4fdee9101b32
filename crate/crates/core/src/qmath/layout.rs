//! Labeled tensor-product registers.
//!
//! The leftmost register is the most significant digit of a composite basis
//! index: for registers of dimensions `d_1, ..., d_k` the basis state
//! `|i_1 ... i_k>` has index `sum_r i_r * prod_{s > r} d_s`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub label: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

impl RegisterLayout {
    pub fn new<S: Into<String>>(registers: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let registers: Vec<Register> =
            registers.into_iter().map(|(label, dim)| Register { label: label.into(), dim }).collect();
        for (i, r) in registers.iter().enumerate() {
            if r.dim == 0 {
                return Err(Error::OutOfRange(format!("register `{}` has dimension 0", r.label)));
            }
            if registers[..i].iter().any(|o| o.label == r.label) {
                return Err(Error::OutOfRange(format!("duplicate register label `{}`", r.label)));
            }
        }
        Ok(Self { registers })
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn total_dim(&self) -> usize {
        self.registers.iter().map(|r| r.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.registers.iter().position(|r| r.label == label).ok_or_else(|| Error::UnknownRegister(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.registers[self.position(label)?].dim)
    }

    /// Per-register digits of a composite index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.registers.len()];
        for (k, r) in self.registers.iter().enumerate().rev() {
            out[k] = index % r.dim;
            index /= r.dim;
        }
        out
    }

    /// For every composite index, its index within the sub-register product
    /// given by `positions` (in that order) and within the complement.
    fn split_indices(&self, positions: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let total = self.total_dim();
        let rest: Vec<usize> = (0..self.registers.len()).filter(|k| !positions.contains(k)).collect();
        let mut local = Vec::with_capacity(total);
        let mut other = Vec::with_capacity(total);
        for idx in 0..total {
            let d = self.digits(idx);
            local.push(positions.iter().fold(0, |acc, &k| acc * self.registers[k].dim + d[k]));
            other.push(rest.iter().fold(0, |acc, &k| acc * self.registers[k].dim + d[k]));
        }
        (local, other)
    }

    fn resolve(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut positions = Vec::with_capacity(labels.len());
        for l in labels {
            let p = self.position(l)?;
            if positions.contains(&p) {
                return Err(Error::OutOfRange(format!("register `{l}` listed twice")));
            }
            positions.push(p);
        }
        Ok(positions)
    }

    /// Dimension of the product of the listed registers.
    pub fn sub_dim(&self, labels: &[&str]) -> Result<usize> {
        Ok(self.resolve(labels)?.iter().map(|&k| self.registers[k].dim).product())
    }

    /// Applies `op` to the listed registers of `state` (operator indices follow
    /// the order of `labels`), acting as the identity elsewhere.
    pub fn apply_local(&self, state: &[Complex64], labels: &[&str], op: &ComplexMatrix) -> Result<Vec<Complex64>> {
        if state.len() != self.total_dim() {
            return Err(Error::DimensionMismatch { expected: self.total_dim(), got: state.len() });
        }
        let positions = self.resolve(labels)?;
        let local_dim: usize = positions.iter().map(|&k| self.registers[k].dim).product();
        if op.rows() != local_dim || op.cols() != local_dim {
            return Err(Error::DimensionMismatch { expected: local_dim, got: op.rows().max(op.cols()) });
        }
        let (local, other) = self.split_indices(&positions);
        let rest_dim = self.total_dim() / local_dim;
        // composite index for each (rest, local) pair
        let mut lookup = vec![0usize; self.total_dim()];
        for idx in 0..self.total_dim() {
            lookup[other[idx] * local_dim + local[idx]] = idx;
        }
        let mut out = vec![ZERO; state.len()];
        for r in 0..rest_dim {
            for i in 0..local_dim {
                let mut acc = ZERO;
                for j in 0..local_dim {
                    let a = op[(i, j)];
                    if a != ZERO {
                        acc += a * state[lookup[r * local_dim + j]];
                    }
                }
                out[lookup[r * local_dim + i]] = acc;
            }
        }
        Ok(out)
    }

    /// Partial trace of an arbitrary square operator, keeping the listed
    /// registers in layout order.
    pub fn partial_trace_matrix(&self, rho: &ComplexMatrix, keep: &[&str]) -> Result<ComplexMatrix> {
        let total = self.total_dim();
        if rho.rows() != total || rho.cols() != total {
            return Err(Error::DimensionMismatch { expected: total, got: rho.rows() });
        }
        let mut positions = self.resolve(keep)?;
        positions.sort_unstable();
        let keep_dim: usize = positions.iter().map(|&k| self.registers[k].dim).product();
        let (local, other) = self.split_indices(&positions);
        let mut out = ComplexMatrix::zeros(keep_dim, keep_dim);
        for i in 0..total {
            for j in 0..total {
                if other[i] == other[j] {
                    out[(local[i], local[j])] += rho[(i, j)];
                }
            }
        }
        Ok(out)
    }

    /// Reduced operator `Tr_rest |psi><psi|` of a (possibly subnormalised)
    /// vector, keeping the listed registers in layout order.
    pub fn reduce_vector(&self, psi: &[Complex64], keep: &[&str]) -> Result<ComplexMatrix> {
        if psi.len() != self.total_dim() {
            return Err(Error::DimensionMismatch { expected: self.total_dim(), got: psi.len() });
        }
        let mut positions = self.resolve(keep)?;
        positions.sort_unstable();
        let keep_dim: usize = positions.iter().map(|&k| self.registers[k].dim).product();
        let (local, other) = self.split_indices(&positions);
        let mut out = ComplexMatrix::zeros(keep_dim, keep_dim);
        for i in 0..psi.len() {
            if psi[i] == ZERO {
                continue;
            }
            for j in 0..psi.len() {
                if other[i] == other[j] {
                    out[(local[i], local[j])] += psi[i] * psi[j].conj();
                }
            }
        }
        Ok(out)
    }
}
