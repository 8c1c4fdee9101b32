//! Numerical checks of the cheating bounds: exact win probabilities,
//! adversary search over the strategy charts, the average-fidelity
//! maximisation behind Alice's bound, and angle sweeps.

mod nelder_mead;
mod sweep;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use nelder_mead::{maximize, LocalOptimum, SimplexOptions};
pub use sweep::{linspace, sweep, SweepRow};

use crate::bounds::{alice_weak_bound, bob_strong_bound, bob_weak_bound};
use crate::error::{Error, Result};
use crate::protocol::{run_exact, Game, OutcomeKind, Party, ProtocolOutcome, Strategy};
use crate::qmath::{fidelity, ComplexMatrix, DensityMatrix};
use crate::states::{rho_honest, ProtocolParams};
use crate::strategies::{decode_adversary, AdversaryKind, AdversaryParams};

/// Random-restart configuration shared by the searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub step_tolerance: f64,
    pub objective_tolerance: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { restarts: 16, max_iterations: 2000, step_tolerance: 1e-8, objective_tolerance: 1e-12, seed: 0 }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::OutOfRange("restarts must be at least 1".into()));
        }
        if !(self.step_tolerance > 0.0 && self.objective_tolerance > 0.0) {
            return Err(Error::OutOfRange("search tolerances must be positive".into()));
        }
        Ok(())
    }

    fn options(&self) -> SimplexOptions {
        SimplexOptions {
            max_iterations: self.max_iterations,
            step_tolerance: self.step_tolerance,
            objective_tolerance: self.objective_tolerance,
            initial_step: 0.5,
        }
    }

    /// Independent generator per restart: same seed, one stream per index.
    fn restart_rng(&self, restart: usize) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        rng
    }
}

/// Best point over all restarts plus bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    /// Largest objective value at any evaluated point of any restart.
    pub max_seen: f64,
    /// Whether the winning restart met the convergence test.
    pub converged: bool,
    pub best_restart: usize,
    pub evaluations: usize,
}

/// Runs the restarts in parallel and keeps the best; ties go to the lowest
/// restart index, so the result does not depend on scheduling.
pub fn multistart(
    dim: usize,
    config: &SearchConfig,
    objective: impl Fn(&[f64]) -> f64 + Sync,
) -> Result<SearchOutcome> {
    config.validate()?;
    let results: Vec<LocalOptimum> = (0..config.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = config.restart_rng(k);
            let x0: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            maximize(&objective, &x0, config.options())
        })
        .collect();
    let (best_restart, best) = results
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(j.cmp(i)))
        .expect("at least one restart");
    Ok(SearchOutcome {
        point: best.point.clone(),
        value: best.value,
        max_seen: results.iter().map(|r| r.max_seen).fold(f64::NEG_INFINITY, f64::max),
        converged: best.converged,
        best_restart,
        evaluations: results.iter().map(|r| r.evaluations).sum(),
    })
}

/// Exact probability of `event` when `alice` plays `bob`.
pub fn achieved_probability(
    game: Game,
    alice: &Strategy,
    bob: &Strategy,
    params: ProtocolParams,
    event: impl Fn(&ProtocolOutcome) -> bool,
) -> Result<f64> {
    Ok(run_exact(game, alice, bob, params)?.probability_where(event))
}

/// Outcome an adversary in `seat` is trying to produce.
pub fn winning_outcome(game: Game, seat: Party) -> OutcomeKind {
    match (game, seat) {
        (Game::Weak, Party::Alice) => OutcomeKind::AliceWins,
        (Game::Weak, Party::Bob) => OutcomeKind::BobWins,
        (Game::Strong, Party::Alice) => OutcomeKind::Coin0,
        (Game::Strong, Party::Bob) => OutcomeKind::Coin1,
    }
}

/// Closed-form bound on what an adversary in `seat` can achieve.
pub fn lemma_bound(game: Game, seat: Party, alpha: f64) -> Result<f64> {
    match (game, seat) {
        (_, Party::Alice) => alice_weak_bound(alpha),
        (Game::Weak, Party::Bob) => bob_weak_bound(alpha),
        (Game::Strong, Party::Bob) => bob_strong_bound(alpha),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelitySearch {
    pub sigma: DensityMatrix,
    pub value: f64,
    pub max_seen: f64,
    pub converged: bool,
}

fn factor_from(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |i, j| {
        let k = 2 * (3 * i + j);
        num_complex::Complex64::new(values[k], values[k + 1])
    })
}

/// `(F(sigma, rho_0) + F(sigma, rho_1)) / 2`.
pub fn average_fidelity(sigma: &DensityMatrix, params: ProtocolParams) -> Result<f64> {
    let f0 = fidelity(&rho_honest(0, params)?, sigma)?;
    let f1 = fidelity(&rho_honest(1, params)?, sigma)?;
    Ok(0.5 * (f0 + f1))
}

/// Maximises the average fidelity over qutrit density matrices written as
/// `sigma = M M^dagger / Tr(M M^dagger)`.
pub fn max_avg_fidelity(params: ProtocolParams, config: &SearchConfig) -> Result<FidelitySearch> {
    let rho = [rho_honest(0, params)?, rho_honest(1, params)?];
    let objective = |x: &[f64]| -> f64 {
        let Ok(sigma) = DensityMatrix::from_factor(&factor_from(x)) else { return 0.0 };
        let f0 = fidelity(&rho[0], &sigma).unwrap_or(0.0);
        let f1 = fidelity(&rho[1], &sigma).unwrap_or(0.0);
        0.5 * (f0 + f1)
    };
    let found = multistart(18, config, objective)?;
    Ok(FidelitySearch {
        sigma: DensityMatrix::from_factor(&factor_from(&found.point))?,
        value: found.value,
        max_seen: found.max_seen,
        converged: found.converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseSearch {
    pub best: Strategy,
    pub params: AdversaryParams,
    pub value: f64,
    pub max_seen: f64,
    pub converged: bool,
}

/// Searches an adversary chart for the best response to a fixed honest
/// opponent, maximising the adversary's winning outcome.
pub fn best_response_search(
    game: Game,
    fixed: &Strategy,
    kind: AdversaryKind,
    params: ProtocolParams,
    config: &SearchConfig,
) -> Result<ResponseSearch> {
    let seat = kind.party();
    if fixed.party() == seat {
        return Err(Error::WrongSeat {
            name: fixed.name().into(),
            seat: if seat == Party::Alice { "Bob" } else { "Alice" },
        });
    }
    let target = winning_outcome(game, seat);
    let objective = |x: &[f64]| -> f64 {
        let Ok(point) = AdversaryParams::new(kind, x.to_vec()) else { return 0.0 };
        let Ok(adversary) = decode_adversary(&point) else { return 0.0 };
        let (alice, bob) = match seat {
            Party::Alice => (&adversary, fixed),
            Party::Bob => (fixed, &adversary),
        };
        run_exact(game, alice, bob, params).map(|r| r.probability(target)).unwrap_or(0.0)
    };
    let found = multistart(kind.len(), config, objective)?;
    let point = AdversaryParams::new(kind, found.point)?;
    Ok(ResponseSearch {
        best: decode_adversary(&point)?,
        params: point,
        value: found.value,
        max_seen: found.max_seen,
        converged: found.converged,
    })
}
