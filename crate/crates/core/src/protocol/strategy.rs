//! Strategies as data: isometries, declared measurements and decision tables.
//!
//! Alice holds `ancillas (x) sign` and prepares a state on
//! `ancillas (x) sign (x) qutrit` before sending the qutrit. Bob receives the
//! qutrit, applies an isometry `qutrit -> qutrit (x) ancillas`, measures, and
//! replies with the bit his table assigns to the outcome.

use serde::{Deserialize, Serialize};

use crate::config::{ISOMETRY_TOL, NORM_TOL};
use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
}

/// Complete set of orthogonal projectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    projectors: Vec<ComplexMatrix>,
}

impl Measurement {
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = projectors
            .first()
            .map(|p| p.rows())
            .ok_or_else(|| Error::InvalidStrategy { name: "measurement".into(), reason: "no projectors".into() })?;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for p in &projectors {
            if p.rows() != dim || p.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.rows() });
            }
            let defect = p.projector_defect();
            if defect > ISOMETRY_TOL {
                return Err(Error::NotProjector { defect });
            }
            sum = &sum + p;
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if defect > ISOMETRY_TOL {
            return Err(Error::InvalidStrategy {
                name: "measurement".into(),
                reason: format!("projectors do not sum to the identity (defect {defect:e})"),
            });
        }
        Ok(Self { projectors })
    }

    /// One outcome: the identity on a space of dimension `dim`.
    pub fn trivial(dim: usize) -> Self {
        Self { projectors: vec![ComplexMatrix::identity(dim)] }
    }

    /// Computational-basis measurement of the first factor of `outer (x) inner`,
    /// identity on the rest.
    pub fn leading_factor(outer: usize, inner: usize) -> Self {
        let projectors = (0..outer)
            .map(|k| {
                let mut e = ComplexMatrix::zeros(outer, outer);
                e[(k, k)] = crate::qmath::ONE;
                e.kron(&ComplexMatrix::identity(inner))
            })
            .collect();
        Self { projectors }
    }

    /// Computational-basis measurement of the last factor of `outer (x) inner`.
    pub fn trailing_factor(outer: usize, inner: usize) -> Self {
        let projectors = (0..inner)
            .map(|k| {
                let mut e = ComplexMatrix::zeros(inner, inner);
                e[(k, k)] = crate::qmath::ONE;
                ComplexMatrix::identity(outer).kron(&e)
            })
            .collect();
        Self { projectors }
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AliceStrategy {
    pub name: String,
    /// Private registers, most significant first, ahead of the sign qubit.
    pub ancilla_dims: Vec<usize>,
    /// State on `ancillas (x) sign (x) qutrit`.
    pub initial_state: PureState,
    /// Unitaries on `ancillas (x) sign`, indexed by Bob's bit.
    pub reply_unitaries: Option<[ComplexMatrix; 2]>,
    /// Measurement on `ancillas (x) sign` whose outcome selects the reveal.
    pub reveal_measurement: Measurement,
    /// `a = reveal_table[b][outcome]`.
    pub reveal_table: [Vec<u8>; 2],
    /// Whether Alice tests the returned qutrit when Bob wins the weak game.
    pub checks: bool,
}

impl AliceStrategy {
    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dims.iter().product()
    }

    /// Dimension of the registers Alice keeps after sending the qutrit.
    pub fn held_dim(&self) -> usize {
        self.ancilla_dim() * 2
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidStrategy { name: self.name.clone(), reason };
        if self.ancilla_dims.contains(&0) {
            return Err(invalid("zero-dimensional ancilla".into()));
        }
        let held = self.held_dim();
        if self.initial_state.dim() != held * 3 {
            return Err(Error::DimensionMismatch { expected: held * 3, got: self.initial_state.dim() });
        }
        let norm_sq = self.initial_state.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        if let Some(us) = &self.reply_unitaries {
            for u in us {
                if u.rows() != held || u.cols() != held {
                    return Err(Error::DimensionMismatch { expected: held, got: u.rows() });
                }
                let defect = u.isometry_defect();
                if defect > ISOMETRY_TOL {
                    return Err(Error::NotIsometry { defect });
                }
            }
        }
        if self.reveal_measurement.dim() != held {
            return Err(Error::DimensionMismatch { expected: held, got: self.reveal_measurement.dim() });
        }
        check_table(&self.reveal_table[0], self.reveal_measurement.outcomes()).map_err(invalid)?;
        check_table(&self.reveal_table[1], self.reveal_measurement.outcomes()).map_err(invalid)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BobStrategy {
    pub name: String,
    /// Private registers placed after the qutrit, most significant first.
    pub ancilla_dims: Vec<usize>,
    /// Isometry `qutrit -> qutrit (x) ancillas`, shape `3 * ancilla_dim x 3`.
    pub extraction: ComplexMatrix,
    /// Measurement on `qutrit (x) ancillas` after the extraction.
    pub measurement: Measurement,
    /// `b = reply_table[outcome]`.
    pub reply_table: Vec<u8>,
    /// Unitary on `qutrit (x) ancillas` applied before returning the qutrit.
    pub return_unitary: Option<ComplexMatrix>,
    /// Whether Bob tests Alice's pair; a conceding Bob accepts whatever he gets.
    pub checks: bool,
}

impl BobStrategy {
    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dims.iter().product()
    }

    pub fn held_dim(&self) -> usize {
        3 * self.ancilla_dim()
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidStrategy { name: self.name.clone(), reason };
        if self.ancilla_dims.contains(&0) {
            return Err(invalid("zero-dimensional ancilla".into()));
        }
        let held = self.held_dim();
        if self.extraction.rows() != held || self.extraction.cols() != 3 {
            return Err(Error::DimensionMismatch { expected: held, got: self.extraction.rows() });
        }
        let defect = self.extraction.isometry_defect();
        if defect > ISOMETRY_TOL {
            return Err(Error::NotIsometry { defect });
        }
        if self.measurement.dim() != held {
            return Err(Error::DimensionMismatch { expected: held, got: self.measurement.dim() });
        }
        check_table(&self.reply_table, self.measurement.outcomes()).map_err(invalid)?;
        if let Some(u) = &self.return_unitary {
            if u.rows() != held || u.cols() != held {
                return Err(Error::DimensionMismatch { expected: held, got: u.rows() });
            }
            let defect = u.isometry_defect();
            if defect > ISOMETRY_TOL {
                return Err(Error::NotIsometry { defect });
            }
        }
        Ok(())
    }

    /// The extraction as a square operator on `qutrit (x) ancillas`, acting
    /// on ancillas initialised to `|0...0>`.
    pub(crate) fn extraction_operator(&self) -> ComplexMatrix {
        let d = self.ancilla_dim();
        let held = self.held_dim();
        let mut w = ComplexMatrix::zeros(held, held);
        for i in 0..3 {
            for r in 0..held {
                w[(r, i * d)] = self.extraction[(r, i)];
            }
        }
        w
    }
}

fn check_table(table: &[u8], outcomes: usize) -> std::result::Result<(), String> {
    if table.len() != outcomes {
        return Err(format!("decision table has {} entries for {} outcomes", table.len(), outcomes));
    }
    if let Some(bad) = table.iter().find(|&&v| v > 1) {
        return Err(format!("decision table entry {bad} is not a bit"));
    }
    Ok(())
}

/// A party's complete behaviour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Strategy {
    Alice(AliceStrategy),
    Bob(BobStrategy),
}

impl Strategy {
    pub fn party(&self) -> Party {
        match self {
            Strategy::Alice(_) => Party::Alice,
            Strategy::Bob(_) => Party::Bob,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Strategy::Alice(a) => &a.name,
            Strategy::Bob(b) => &b.name,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Strategy::Alice(a) => a.validate(),
            Strategy::Bob(b) => b.validate(),
        }
    }

    pub fn as_alice(&self) -> Result<&AliceStrategy> {
        match self {
            Strategy::Alice(a) => Ok(a),
            other => Err(Error::WrongSeat { name: other.name().to_string(), seat: "Alice" }),
        }
    }

    pub fn as_bob(&self) -> Result<&BobStrategy> {
        match self {
            Strategy::Bob(b) => Ok(b),
            other => Err(Error::WrongSeat { name: other.name().to_string(), seat: "Bob" }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measurement_must_be_complete() {
        let m = Measurement::leading_factor(2, 3);
        assert_eq!(m.outcomes(), 2);
        assert_eq!(m.dim(), 6);
        let partial = vec![m.projectors()[0].clone()];
        assert!(Measurement::new(partial).is_err());
        assert!(Measurement::new(m.projectors().to_vec()).is_ok());
        assert!(Measurement::new(Measurement::trailing_factor(3, 2).projectors().to_vec()).is_ok());
    }

    #[test]
    fn tables_hold_bits() {
        assert!(check_table(&[0, 1], 2).is_ok());
        assert!(check_table(&[0, 2], 2).is_err());
        assert!(check_table(&[0], 2).is_err());
    }
}
