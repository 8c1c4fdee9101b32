//! Closed-form cheating bounds and the angle that balances them.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::config::BISECTION_TOL;
use crate::error::{Error, Result};
use crate::qmath::{fidelity, trace_norm};
use crate::states::{rho_difference, rho_honest, ProtocolParams};

fn half_angle(alpha: f64) -> Result<(f64, f64)> {
    let p = ProtocolParams::new(alpha)?;
    Ok((p.cos_half().powi(2), p.sin_half().powi(2)))
}

/// Best weak-game win probability of a cheating Alice: `(1 + cos^2(alpha/2)) / 2`.
pub fn alice_weak_bound(alpha: f64) -> Result<f64> {
    let (c2, _) = half_angle(alpha)?;
    Ok(0.5 * (1.0 + c2))
}

/// Best weak-game win probability of a cheating Bob:
/// `(cos^2(alpha/2) / sqrt 2 + sin^2(alpha/2))^2`.
pub fn bob_weak_bound(alpha: f64) -> Result<f64> {
    let (c2, s2) = half_angle(alpha)?;
    Ok((c2 * FRAC_1_SQRT_2 + s2).powi(2))
}

/// Alice's strong-game bound, identical to the weak one.
pub fn alice_strong_bound(alpha: f64) -> Result<f64> {
    alice_weak_bound(alpha)
}

/// Bob's strong-game bound `(1 + sin^2(alpha/2)) / 2`.
pub fn bob_strong_bound(alpha: f64) -> Result<f64> {
    let (_, s2) = half_angle(alpha)?;
    Ok(0.5 * (1.0 + s2))
}

/// Product of the two strong-game bounds; never below 1/2.
pub fn kitaev_product(alpha: f64) -> Result<f64> {
    Ok(alice_strong_bound(alpha)? * bob_strong_bound(alpha)?)
}

/// Bias of the coin obtained by letting the winner of a weak game flip it:
/// `p_w + (p_l - 1) / 2`.
pub fn weak_to_strong_bias(p_w: f64, p_l: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&p_w) {
        return Err(Error::OutOfRange(format!("p_w = {p_w} is outside [1/2, 1]")));
    }
    if !(0.0..=1.0).contains(&p_l) {
        return Err(Error::OutOfRange(format!("p_l = {p_l} is outside [0, 1]")));
    }
    Ok(p_w + (p_l - 1.0) / 2.0)
}

/// Root of a function with `f(lo) > 0 > f(hi)` (or the reverse), stopping
/// once `|f| <= tol` or the bracket stops shrinking.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid.abs() <= tol || mid <= lo || mid >= hi {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equalization {
    pub alpha: f64,
    /// Common value of the two balanced bounds.
    pub probability: f64,
}

impl Equalization {
    pub fn bias(&self) -> f64 {
        self.probability - 0.5
    }
}

/// Angle at which Alice's and Bob's weak-game bounds coincide. The difference
/// is `+1/2` at `0` and `-1/2` at `pi` and monotone in between.
pub fn solve_weak_equalization(tolerance: f64) -> Result<Equalization> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::OutOfRange(format!("tolerance = {tolerance} must be positive")));
    }
    let diff = |a: f64| alice_weak_bound(a).unwrap() - bob_weak_bound(a).unwrap();
    let alpha = bisect(diff, 0.0, PI, tolerance);
    Ok(Equalization { alpha, probability: alice_weak_bound(alpha)? })
}

/// Strong-game counterpart; the balance point is `pi/2`.
pub fn solve_strong_equalization() -> Equalization {
    let diff = |a: f64| alice_strong_bound(a).unwrap() - bob_strong_bound(a).unwrap();
    let alpha = bisect(diff, 0.0, PI, BISECTION_TOL);
    Equalization { alpha, probability: alice_strong_bound(alpha).expect("alpha within range") }
}

/// Closed-form bounds at one angle, with both distance measures of the
/// honest qutrit states side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub alpha: f64,
    pub alice_weak: f64,
    pub bob_weak: f64,
    pub alice_strong: f64,
    pub bob_strong: f64,
    /// `F(rho_0, rho_1)` in the squared convention.
    pub fidelity_rho: f64,
    /// `||rho_0 - rho_1||_tr / 2`.
    pub trace_dist_rho: f64,
    pub weak_bias: f64,
    pub strong_bias: f64,
}

impl BoundReport {
    pub fn at(alpha: f64) -> Result<Self> {
        let params = ProtocolParams::new(alpha)?;
        let alice_weak = alice_weak_bound(alpha)?;
        let bob_weak = bob_weak_bound(alpha)?;
        let alice_strong = alice_strong_bound(alpha)?;
        let bob_strong = bob_strong_bound(alpha)?;
        let fidelity_rho = fidelity(&rho_honest(0, params)?, &rho_honest(1, params)?)?;
        let trace_dist_rho = trace_norm(&rho_difference(params)?)? / 2.0;
        Ok(Self {
            alpha,
            alice_weak,
            bob_weak,
            alice_strong,
            bob_strong,
            fidelity_rho,
            trace_dist_rho,
            weak_bias: alice_weak.max(bob_weak) - 0.5,
            strong_bias: alice_strong.max(bob_strong) - 0.5,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn endpoint_values() {
        assert_eq!(alice_weak_bound(0.0).unwrap(), 1.0);
        assert!((alice_weak_bound(PI).unwrap() - 0.5).abs() < 1e-15);
        assert!((alice_weak_bound(FRAC_PI_2).unwrap() - 0.75).abs() < 1e-15);
        assert!((bob_weak_bound(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((bob_weak_bound(PI).unwrap() - 1.0).abs() < 1e-15);
        let expected = (1.0 / (2.0 * 2f64.sqrt()) + 0.5).powi(2);
        assert!((bob_weak_bound(FRAC_PI_2).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.7285533906).abs() < 1e-10);
        assert!((bob_strong_bound(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(alice_strong_bound(0.0).unwrap(), 1.0);
        assert!((alice_strong_bound(FRAC_PI_2).unwrap() - 0.75).abs() < 1e-15);
        assert!((bob_strong_bound(FRAC_PI_2).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn range_errors() {
        assert!(alice_weak_bound(-0.1).is_err());
        assert!(bob_weak_bound(4.0).is_err());
        assert!(kitaev_product(f64::NAN).is_err());
        assert!(weak_to_strong_bias(0.4, 0.5).is_err());
        assert!(weak_to_strong_bias(0.6, 1.5).is_err());
        assert!(solve_weak_equalization(0.0).is_err());
    }

    #[test]
    fn composition_bias() {
        assert!((weak_to_strong_bias(0.5, 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(weak_to_strong_bias(1.0, 1.0).unwrap(), 1.0);
        assert!((weak_to_strong_bias(0.739, 0.739).unwrap() - 0.6085).abs() < 1e-12);
    }

    #[test]
    fn kitaev_examples() {
        assert!((kitaev_product(FRAC_PI_2).unwrap() - 0.5625).abs() < 1e-15);
        assert!((kitaev_product(0.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn strong_equalization_is_quarter_turn() {
        let eq = solve_strong_equalization();
        assert!((eq.alpha - FRAC_PI_2).abs() < 1e-9);
        assert!((eq.probability - 0.75).abs() < 1e-9);
        let (c2, s2) = half_angle(eq.alpha).unwrap();
        assert!((c2 - 0.5).abs() < 1e-9 && (s2 - 0.5).abs() < 1e-9);
    }

    #[test]
    fn bisect_handles_either_orientation() {
        let r = bisect(|x| x - 1.0, 0.0, 3.0, 1e-14);
        assert!((r - 1.0).abs() < 1e-13);
        let r = bisect(|x| 1.0 - x, 0.0, 3.0, 1e-14);
        assert!((r - 1.0).abs() < 1e-13);
    }

    #[test]
    fn report_at_quarter_turn() {
        let r = BoundReport::at(FRAC_PI_2).unwrap();
        assert!((r.strong_bias - 0.25).abs() < 1e-12);
        assert!((r.fidelity_rho - 0.25).abs() < 1e-12);
        assert!((r.trace_dist_rho - 0.5).abs() < 1e-12);
    }
}
