use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::protocol::{run_exact, Game, OutcomeKind};
use crate::states::ProtocolParams;
use crate::strategies::{
    cheating_alice_optimal, cheating_bob_strong_helstrom, cheating_bob_weak_optimal, honest_alice, honest_bob,
};

/// Bounds and exactly evaluated win probabilities of the optimal cheaters
/// at one angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub alice_weak_bound: f64,
    pub bob_weak_bound: f64,
    /// `alice-opt` against honest Bob, weak game.
    pub alice_weak_achieved: f64,
    /// `bob-opt-weak` against honest Alice.
    pub bob_weak_achieved: f64,
    pub alice_strong_bound: f64,
    pub bob_strong_bound: f64,
    /// `alice-opt` against honest Bob, strong game, coin 0.
    pub alice_strong_achieved: f64,
    /// `bob-helstrom-1` against honest Alice, coin 1.
    pub bob_strong_achieved: f64,
    pub fidelity: f64,
    /// `||rho_0 - rho_1||_tr / 2`.
    pub trace_distance: f64,
}

impl SweepRow {
    pub fn at(alpha: f64) -> Result<Self> {
        let params = ProtocolParams::new(alpha)?;
        let report = BoundReport::at(alpha)?;
        let alice = cheating_alice_optimal(params);
        let weak = |a, b, k| run_exact(Game::Weak, a, b, params).map(|r| r.probability(k));
        let strong = |a, b, k| run_exact(Game::Strong, a, b, params).map(|r| r.probability(k));
        Ok(Self {
            alpha,
            alice_weak_bound: report.alice_weak,
            bob_weak_bound: report.bob_weak,
            alice_weak_achieved: weak(&alice, &honest_bob(), OutcomeKind::AliceWins)?,
            bob_weak_achieved: weak(&honest_alice(params), &cheating_bob_weak_optimal(), OutcomeKind::BobWins)?,
            alice_strong_bound: report.alice_strong,
            bob_strong_bound: report.bob_strong,
            alice_strong_achieved: strong(&alice, &honest_bob(), OutcomeKind::Coin0)?,
            bob_strong_achieved: strong(
                &honest_alice(params),
                &cheating_bob_strong_helstrom(params, 1)?,
                OutcomeKind::Coin1,
            )?,
            fidelity: report.fidelity_rho,
            trace_distance: report.trace_dist_rho,
        })
    }

    /// `bound - achieved` for each of the four cheaters, in field order.
    pub fn gaps(&self) -> [f64; 4] {
        [
            self.alice_weak_bound - self.alice_weak_achieved,
            self.bob_weak_bound - self.bob_weak_achieved,
            self.alice_strong_bound - self.alice_strong_achieved,
            self.bob_strong_bound - self.bob_strong_achieved,
        ]
    }
}

/// One row per grid angle, in grid order.
pub fn sweep(alpha_grid: &[f64]) -> Result<Vec<SweepRow>> {
    if let Some(bad) = alpha_grid.iter().find(|a| !(0.0..=PI).contains(*a)) {
        return Err(Error::OutOfRange(format!("grid angle {bad} is outside [0, pi]")));
    }
    alpha_grid.par_iter().map(|&a| SweepRow::at(a)).collect()
}

/// `points` evenly spaced angles from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![start],
        _ => (0..points)
            .map(|k| if k == points - 1 { stop } else { start + (stop - start) * k as f64 / (points - 1) as f64 })
            .collect(),
    }
}
