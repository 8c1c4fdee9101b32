//! Game runners.
//!
//! Both games are executed by first expanding every classical branch into a
//! tree whose edges carry conditional probabilities: Bob's measurement in
//! round 2, Alice's reveal measurement in round 3, and the final check.
//! Exact mode multiplies the weights out; sampled mode walks the tree once
//! per trial with a seeded generator.

mod runner;
mod strategy;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use runner::{build_tree, run_exact, run_sampled, run_strong_exact, run_weak_exact, GameTree};
pub use strategy::{AliceStrategy, BobStrategy, Measurement, Party, Strategy};

use crate::qmath::{PureState, RegisterLayout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Game {
    /// Four rounds; the winner of `c = a xor b` is checked by the loser.
    Weak,
    /// Three rounds; Bob always checks and accepts the coin `a xor b`.
    Strong,
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Game::Weak => "weak",
            Game::Strong => "strong",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Message {
    /// Round 1: the qutrit of Alice's committed pair.
    QutritRegister { handle: String },
    /// Round 2: Bob's bit `b`.
    ClassicalBit { value: u8 },
    /// Round 3: Alice's revealed bit `a`.
    RevealBit { value: u8 },
    /// Round 3: the sign qubit, sent when Bob is the checker.
    SignQubitRegister { handle: String },
    /// Round 4 of the weak game: Bob hands back the qutrit.
    QutritReturn { handle: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OutcomeKind {
    AliceWins,
    BobWins,
    /// Strong game: the agreed coin is 0.
    Coin0,
    /// Strong game: the agreed coin is 1.
    Coin1,
    AbortByAlice,
    AbortByBob,
}

impl OutcomeKind {
    pub fn is_abort(self) -> bool {
        matches!(self, OutcomeKind::AbortByAlice | OutcomeKind::AbortByBob)
    }

    pub fn coin(value: u8) -> Self {
        if value == 0 {
            OutcomeKind::Coin0
        } else {
            OutcomeKind::Coin1
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeKind::AliceWins => "AliceWins",
            OutcomeKind::BobWins => "BobWins",
            OutcomeKind::Coin0 => "coin=0",
            OutcomeKind::Coin1 => "coin=1",
            OutcomeKind::AbortByAlice => "AbortByAlice",
            OutcomeKind::AbortByBob => "AbortByBob",
        }
    }

    /// Outcomes a game can produce, in report order.
    pub fn all_for(game: Game) -> &'static [OutcomeKind] {
        match game {
            Game::Weak => {
                &[OutcomeKind::AliceWins, OutcomeKind::BobWins, OutcomeKind::AbortByAlice, OutcomeKind::AbortByBob]
            }
            Game::Strong => &[OutcomeKind::Coin0, OutcomeKind::Coin1, OutcomeKind::AbortByBob],
        }
    }
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Terminal result of one branch. `c_a`/`c_b` are `None` for the party that
/// aborted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolOutcome {
    pub kind: OutcomeKind,
    pub c_a: Option<u8>,
    pub c_b: Option<u8>,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub round: u8,
    pub sender: Party,
    pub message: Message,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub checker: Party,
    pub tested_bit: u8,
    pub pass_probability: f64,
}

/// Messages of one classical branch, the joint state before the final
/// check, and the check performed (if any).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub game: Game,
    pub entries: Vec<TranscriptEntry>,
    pub layout: RegisterLayout,
    pub final_state: PureState,
    pub check: Option<CheckRecord>,
}

impl Transcript {
    pub fn rounds(&self) -> Vec<u8> {
        let mut r: Vec<u8> = self.entries.iter().map(|e| e.round).collect();
        r.dedup();
        r
    }

    pub fn bit_sent_by(&self, sender: Party) -> Option<u8> {
        self.entries.iter().find_map(|e| match (&e.message, e.sender == sender) {
            (Message::ClassicalBit { value }, true) | (Message::RevealBit { value }, true) => Some(*value),
            _ => None,
        })
    }
}

/// A weighted leaf of the exact run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub outcome: ProtocolOutcome,
    pub transcript: Transcript,
}

/// Exact outcome distribution of a game between two strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactRun {
    pub game: Game,
    pub branches: Vec<Branch>,
}

impl ExactRun {
    pub fn probability(&self, kind: OutcomeKind) -> f64 {
        self.branches.iter().filter(|b| b.outcome.kind == kind).map(|b| b.outcome.probability).sum()
    }

    pub fn probability_where(&self, event: impl Fn(&ProtocolOutcome) -> bool) -> f64 {
        self.branches.iter().filter(|b| event(&b.outcome)).map(|b| b.outcome.probability).sum()
    }

    pub fn abort_probability(&self) -> f64 {
        self.probability_where(|o| o.kind.is_abort())
    }

    pub fn total(&self) -> f64 {
        self.branches.iter().map(|b| b.outcome.probability).sum()
    }

    /// Probability per outcome kind, in report order.
    pub fn distribution(&self) -> Vec<(OutcomeKind, f64)> {
        OutcomeKind::all_for(self.game).iter().map(|&k| (k, self.probability(k))).collect()
    }
}

/// Outcome counts of a sampled run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledRun {
    pub game: Game,
    pub trials: u64,
    pub seed: u64,
    pub counts: BTreeMap<OutcomeKind, u64>,
}

impl SampledRun {
    pub fn count(&self, kind: OutcomeKind) -> u64 {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn frequency(&self, kind: OutcomeKind) -> f64 {
        self.count(kind) as f64 / self.trials as f64
    }
}
