//! Verification suites run by `qcoin verify`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

use qcoin::bounds::{
    alice_strong_bound, alice_weak_bound, bob_strong_bound, bob_weak_bound, kitaev_product, solve_strong_equalization,
    solve_weak_equalization,
};
use qcoin::protocol::{run_exact, run_sampled, Game, OutcomeKind, Party};
use qcoin::qmath::{fidelity, trace_norm};
use qcoin::states::{rho_difference, rho_honest, ProtocolParams};
use qcoin::strategies::{cheating_bob_weak_literal, honest_alice, honest_bob, AdversaryKind};
use qcoin::verify::{best_response_search, lemma_bound, linspace, max_avg_fidelity, sweep, SearchConfig};

use crate::output::sig12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bounds,
    Tightness,
    Fidelity,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Tightness => "tightness",
            Suite::Fidelity => "fidelity",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|got - expected| <= tolerance`
    Within,
    /// `got >= expected - tolerance`
    AtLeast,
    /// `got <= expected + tolerance`
    AtMost,
    /// `got > expected`
    Above,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub comparison: Comparison,
    pub expected: f64,
    pub got: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, comparison: Comparison, expected: f64, got: f64, tolerance: f64) -> Self {
        let pass = match comparison {
            Comparison::Within => (got - expected).abs() <= tolerance,
            Comparison::AtLeast => got >= expected - tolerance,
            Comparison::AtMost => got <= expected + tolerance,
            Comparison::Above => got > expected,
        };
        Self { name: name.into(), comparison, expected: sig12(expected), got: sig12(got), tolerance, pass }
    }
}

fn max_over(grid: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    grid.iter().try_fold(f64::NEG_INFINITY, |m, &a| Ok(m.max(f(a)?)))
}

fn params(alpha: f64) -> Result<ProtocolParams> {
    Ok(ProtocolParams::new(alpha)?)
}

/// Balance probability from the quadratic in `t = cos^2(alpha/2)`.
fn weak_balance_closed_form() -> f64 {
    let k = 1.0 - FRAC_1_SQRT_2;
    let (a, b, c) = (k * k, -(2.0 * k + 0.5), 0.5);
    let t = (-b - (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
    0.5 * (1.0 + t)
}

pub fn bounds_checks() -> Result<Vec<Check>> {
    use Comparison::*;
    let grid = linspace(0.0, PI, 21);
    let fine = linspace(0.0, PI, 1001);
    let weak = solve_weak_equalization(1e-12)?;
    let strong = solve_strong_equalization();
    let min_product = fine.iter().try_fold(f64::INFINITY, |m, &a| kitaev_product(a).map(|v| m.min(v)))?;

    let fidelity_dev = max_over(&grid, |a| {
        let p = params(a)?;
        let f = fidelity(&rho_honest(0, p)?, &rho_honest(1, p)?)?;
        Ok((f - (a / 2.0).cos().powi(4)).abs())
    })?;
    let trace_dev =
        max_over(&grid, |a| Ok((trace_norm(&rho_difference(params(a)?)?)? - 2.0 * (a / 2.0).sin().powi(2)).abs()))?;
    let bob_formula_dev =
        max_over(
            &grid,
            |a| Ok((bob_strong_bound(a)? - (0.5 + trace_norm(&rho_difference(params(a)?)?)? / 4.0)).abs()),
        )?;
    let alice_formula_dev = max_over(&grid, |a| {
        let p = params(a)?;
        let f = fidelity(&rho_honest(0, p)?, &rho_honest(1, p)?)?;
        Ok((alice_weak_bound(a)? - 0.5 * (1.0 + f.sqrt())).abs())
    })?;

    Ok(vec![
        Check::new("strong.alice_bound_at_quarter_turn", Within, 0.75, alice_strong_bound(FRAC_PI_2)?, 1e-12),
        Check::new("strong.bob_bound_at_quarter_turn", Within, 0.75, bob_strong_bound(FRAC_PI_2)?, 1e-12),
        Check::new("strong.balance_angle", Within, FRAC_PI_2, strong.alpha, 1e-9),
        Check::new("weak.balance_probability", Within, 0.739, weak.probability, 5e-4),
        Check::new("weak.balance_bias", Within, 0.239, weak.bias(), 5e-4),
        Check::new("weak.balance_matches_closed_form", Within, weak_balance_closed_form(), weak.probability, 1e-9),
        Check::new("strong.bound_product_minimum", AtLeast, 0.5, min_product, 1e-12),
        Check::new("measures.fidelity_identity_max_deviation", Within, 0.0, fidelity_dev, 1e-9),
        Check::new("measures.trace_norm_identity_max_deviation", Within, 0.0, trace_dev, 1e-9),
        Check::new("measures.bob_strong_trace_formula_max_deviation", Within, 0.0, bob_formula_dev, 1e-12),
        Check::new("measures.alice_fidelity_formula_max_deviation", Within, 0.0, alice_formula_dev, 1e-12),
    ])
}

pub fn tightness_checks(seed: u64) -> Result<Vec<Check>> {
    use Comparison::*;
    let grid = linspace(0.0, PI, 21);
    let rows = sweep(&grid)?;
    let worst_gap = |i: usize| rows.iter().map(|r| r.gaps()[i].abs()).fold(0.0, f64::max);

    let literal_margin =
        grid.iter().filter(|&&a| a > 0.0 && a < PI).try_fold(f64::INFINITY, |m, &a| -> Result<f64> {
            let p = params(a)?;
            let got = run_exact(Game::Weak, &honest_alice(p), &cheating_bob_weak_literal(), p)?
                .probability(OutcomeKind::BobWins);
            Ok(m.min(bob_weak_bound(a)? - got))
        })?;

    let mut fairness_dev: f64 = 0.0;
    let mut abort_max: f64 = 0.0;
    for &a in &grid {
        let p = params(a)?;
        let run = run_exact(Game::Weak, &honest_alice(p), &honest_bob(), p)?;
        fairness_dev = fairness_dev
            .max((run.probability(OutcomeKind::AliceWins) - 0.5).abs())
            .max((run.probability(OutcomeKind::BobWins) - 0.5).abs());
        abort_max = abort_max.max(run.abort_probability());
    }
    let p = params(FRAC_PI_2)?;
    let sampled = run_sampled(Game::Weak, &honest_alice(p), &honest_bob(), p, 100_000, seed)?;

    let mut checks = vec![
        Check::new("achieved.alice_weak_max_gap", Within, 0.0, worst_gap(0), 1e-9),
        Check::new("achieved.bob_weak_max_gap", Within, 0.0, worst_gap(1), 1e-9),
        Check::new("achieved.alice_strong_max_gap", Within, 0.0, worst_gap(2), 1e-9),
        Check::new("achieved.bob_strong_max_gap", Within, 0.0, worst_gap(3), 1e-9),
        Check::new("achieved.literal_bob_margin_below_bound", Above, 0.0, literal_margin, 0.0),
        Check::new("honest.exact_fairness_max_deviation", Within, 0.0, fairness_dev, 1e-12),
        Check::new("honest.exact_abort_probability", Within, 0.0, abort_max, 0.0),
        Check::new("honest.sampled_alice_frequency", Within, 0.5, sampled.frequency(OutcomeKind::AliceWins), 0.01),
        Check::new("honest.sampled_bob_frequency", Within, 0.5, sampled.frequency(OutcomeKind::BobWins), 0.01),
    ];
    checks.extend(search_checks(seed)?);
    Ok(checks)
}

/// Adversary searches against honest opponents at three angles.
pub fn search_checks(seed: u64) -> Result<Vec<Check>> {
    use Comparison::*;
    let config = SearchConfig::with_seed(seed);
    let mut checks = Vec::new();
    for (label, alpha) in [("quarter", FRAC_PI_4), ("half", FRAC_PI_2), ("three_quarter", 3.0 * FRAC_PI_4)] {
        let p = params(alpha)?;
        for (kind, fixed) in [(AdversaryKind::AliceCommit, honest_bob()), (AdversaryKind::BobExtract, honest_alice(p))]
        {
            let bound = lemma_bound(Game::Weak, kind.party(), alpha)?;
            let found = best_response_search(Game::Weak, &fixed, kind, p, &config)?;
            let seat = if kind.party() == Party::Alice { "alice" } else { "bob" };
            checks.push(Check::new(format!("search.{seat}_{label}_value"), AtLeast, bound, found.value, 1e-3));
            checks.push(Check::new(format!("search.{seat}_{label}_max_seen"), AtMost, bound, found.max_seen, 1e-6));
        }
    }
    Ok(checks)
}

pub fn fidelity_checks(seed: u64) -> Result<Vec<Check>> {
    use Comparison::*;
    let config = SearchConfig::with_seed(seed);
    let mut checks = Vec::new();
    for k in 1..=5 {
        let alpha = PI * k as f64 / 6.0;
        let bound = 0.5 * (1.0 + (alpha / 2.0).cos().powi(4).sqrt());
        let found = max_avg_fidelity(params(alpha)?, &config)?;
        checks.push(Check::new(format!("fidelity.pi_{k}_over_6_value"), Within, bound, found.value, 1e-4));
        checks.push(Check::new(format!("fidelity.pi_{k}_over_6_max_seen"), AtMost, bound, found.max_seen, 1e-6));
    }
    Ok(checks)
}

pub fn run(suite: Suite, seed: u64) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Bounds => bounds_checks()?,
        Suite::Tightness => tightness_checks(seed)?,
        Suite::Fidelity => fidelity_checks(seed)?,
        Suite::All => {
            let mut all = bounds_checks()?;
            all.extend(tightness_checks(seed)?);
            all.extend(fidelity_checks(seed)?);
            all
        }
    })
}
