//! Protocol states.
//!
//! The message register is a qutrit with basis `{|0>, |1>, |2>}`; the bit
//! `x` is encoded on basis index `x + 1`. Alice's committed state lives on
//! `sign (x) qutrit`, with the sign qubit as the most significant register,
//! so `|s>|t>` has index `3s + t`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, DensityMatrix, PureState, RegisterLayout};

pub const SIGN: &str = "sign";
pub const QUTRIT: &str = "qutrit";

/// The game parameter `alpha`, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    alpha: f64,
}

impl ProtocolParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&alpha) {
            return Err(Error::OutOfRange(format!("alpha = {alpha} is outside [0, pi]")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `cos(alpha / 2)`
    pub fn cos_half(&self) -> f64 {
        (self.alpha / 2.0).cos()
    }

    /// `sin(alpha / 2)`
    pub fn sin_half(&self) -> f64 {
        (self.alpha / 2.0).sin()
    }
}

pub(crate) fn check_bit(name: &str, value: u8) -> Result<()> {
    if value > 1 {
        return Err(Error::OutOfRange(format!("{name} = {value} is not a bit")));
    }
    Ok(())
}

/// Layout of Alice's committed pair.
pub fn pair_layout() -> RegisterLayout {
    RegisterLayout::new([(SIGN, 2), (QUTRIT, 3)]).expect("static layout")
}

/// `cos(alpha/2)|0> + (-1)^s sin(alpha/2)|x+1>`.
pub fn psi_trit(x: u8, s: u8, params: ProtocolParams) -> Result<PureState> {
    check_bit("x", x)?;
    check_bit("s", s)?;
    let sign = if s == 0 { 1.0 } else { -1.0 };
    let mut amps = [0.0; 3];
    amps[0] = params.cos_half();
    amps[usize::from(x) + 1] = sign * params.sin_half();
    PureState::from_real(&amps)
}

/// `(|0>|psi_{x,0}> + |1>|psi_{x,1}>) / sqrt 2` on `sign (x) qutrit`.
pub fn psi(x: u8, params: ProtocolParams) -> Result<PureState> {
    let plus = psi_trit(x, 0, params)?;
    let minus = psi_trit(x, 1, params)?;
    let amps: Vec<Complex64> = plus.amplitudes().iter().chain(minus.amplitudes()).map(|&z| z * FRAC_1_SQRT_2).collect();
    PureState::new(amps)
}

/// Bob's qutrit after an honest first round:
/// `cos^2(alpha/2)|0><0| + sin^2(alpha/2)|a+1><a+1|`.
pub fn rho_honest(a: u8, params: ProtocolParams) -> Result<DensityMatrix> {
    check_bit("a", a)?;
    let mut diag = [0.0; 3];
    diag[0] = params.cos_half().powi(2);
    diag[usize::from(a) + 1] = params.sin_half().powi(2);
    DensityMatrix::diagonal(&diag)
}

/// `|psi_a><psi_a|` on `sign (x) qutrit`, the projector both parties test with.
pub fn check_projector(a: u8, params: ProtocolParams) -> Result<ComplexMatrix> {
    Ok(psi(a, params)?.projector())
}

/// `rho_0 - rho_1`, the operator behind the optimal discrimination of `a`.
pub fn rho_difference(params: ProtocolParams) -> Result<ComplexMatrix> {
    Ok(rho_honest(0, params)?.matrix() - rho_honest(1, params)?.matrix())
}
