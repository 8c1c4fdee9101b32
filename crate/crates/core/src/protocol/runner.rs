use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::strategy::{AliceStrategy, BobStrategy, Party, Strategy};
use super::{
    Branch, CheckRecord, ExactRun, Game, Message, OutcomeKind, ProtocolOutcome, SampledRun, Transcript, TranscriptEntry,
};
use crate::config::ZERO_PROBABILITY;
use crate::error::{Error, Result};
use crate::qmath::{basis, kron_vec, norm_sqr, PureState, RegisterLayout};
use crate::states::{check_projector, ProtocolParams, QUTRIT, SIGN};

/// Classical branching structure of one game; edge weights are conditional
/// probabilities.
#[derive(Debug, Clone)]
pub enum GameTree {
    Split(Vec<(f64, GameTree)>),
    Leaf(Box<Branch>),
}

impl GameTree {
    fn flatten_into(self, weight: f64, out: &mut Vec<Branch>) {
        match self {
            GameTree::Split(children) => {
                for (w, child) in children {
                    child.flatten_into(weight * w, out);
                }
            }
            GameTree::Leaf(mut branch) => {
                branch.outcome.probability = weight;
                out.push(*branch);
            }
        }
    }

    /// Walks from the root, drawing one uniform variate per split.
    fn sample<R: Rng>(&self, rng: &mut R) -> OutcomeKind {
        let mut node = self;
        loop {
            match node {
                GameTree::Leaf(branch) => return branch.outcome.kind,
                GameTree::Split(children) => {
                    let total: f64 = children.iter().map(|(w, _)| w).sum();
                    let u: f64 = rng.gen::<f64>() * total;
                    let mut acc = 0.0;
                    let mut chosen = &children[children.len() - 1].1;
                    for (w, child) in children {
                        acc += w;
                        if u < acc {
                            chosen = child;
                            break;
                        }
                    }
                    node = chosen;
                }
            }
        }
    }
}

struct Executor<'a> {
    game: Game,
    params: ProtocolParams,
    alice: &'a AliceStrategy,
    bob: &'a BobStrategy,
    layout: RegisterLayout,
    alice_regs: Vec<String>,
    bob_regs: Vec<String>,
}

impl<'a> Executor<'a> {
    fn new(game: Game, alice: &'a AliceStrategy, bob: &'a BobStrategy, params: ProtocolParams) -> Result<Self> {
        alice.validate()?;
        bob.validate()?;
        let alice_anc: Vec<(String, usize)> =
            alice.ancilla_dims.iter().enumerate().map(|(k, &d)| (format!("alice.anc{k}"), d)).collect();
        let bob_anc: Vec<(String, usize)> =
            bob.ancilla_dims.iter().enumerate().map(|(k, &d)| (format!("bob.anc{k}"), d)).collect();
        let mut alice_regs: Vec<String> = alice_anc.iter().map(|(l, _)| l.clone()).collect();
        alice_regs.push(SIGN.to_string());
        let mut bob_regs = vec![QUTRIT.to_string()];
        bob_regs.extend(bob_anc.iter().map(|(l, _)| l.clone()));
        let mut registers = alice_anc;
        registers.push((SIGN.to_string(), 2));
        registers.push((QUTRIT.to_string(), 3));
        registers.extend(bob_anc);
        let layout = RegisterLayout::new(registers)?;
        Ok(Self { game, params, alice, bob, layout, alice_regs, bob_regs })
    }

    fn labels(regs: &[String]) -> Vec<&str> {
        regs.iter().map(String::as_str).collect()
    }

    fn leaf(
        &self,
        kind: OutcomeKind,
        c_a: Option<u8>,
        c_b: Option<u8>,
        entries: &[TranscriptEntry],
        state: &[Complex64],
        check: Option<CheckRecord>,
    ) -> GameTree {
        GameTree::Leaf(Box::new(Branch {
            outcome: ProtocolOutcome { kind, c_a, c_b, probability: 1.0 },
            transcript: Transcript {
                game: self.game,
                entries: entries.to_vec(),
                layout: self.layout.clone(),
                final_state: PureState::subnormalized(state.to_vec()),
                check,
            },
        }))
    }

    fn run(&self) -> Result<GameTree> {
        let bob_anc = self.bob.ancilla_dim();
        let state = kron_vec(self.alice.initial_state.amplitudes(), &basis(bob_anc, 0));
        let mut entries = vec![TranscriptEntry {
            round: 1,
            sender: Party::Alice,
            message: Message::QutritRegister { handle: QUTRIT.into() },
        }];

        let bob_labels = Self::labels(&self.bob_regs);
        let state = self.layout.apply_local(&state, &bob_labels, &self.bob.extraction_operator())?;
        let mut children = Vec::new();
        for (outcome, projector) in self.bob.measurement.projectors().iter().enumerate() {
            let (weight, post) = self.collapse(&state, &bob_labels, projector)?;
            let Some(post) = post else { continue };
            let b = self.bob.reply_table[outcome];
            entries.push(TranscriptEntry { round: 2, sender: Party::Bob, message: Message::ClassicalBit { value: b } });
            children.push((weight, self.reveal(post, b, &mut entries)?));
            entries.pop();
        }
        Ok(GameTree::Split(children))
    }

    fn collapse(
        &self,
        state: &[Complex64],
        labels: &[&str],
        projector: &crate::qmath::ComplexMatrix,
    ) -> Result<(f64, Option<Vec<Complex64>>)> {
        let projected = self.layout.apply_local(state, labels, projector)?;
        let weight = norm_sqr(&projected);
        if weight <= ZERO_PROBABILITY {
            return Ok((weight, None));
        }
        let norm = weight.sqrt();
        Ok((weight, Some(projected.into_iter().map(|z| z / norm).collect())))
    }

    fn reveal(&self, state: Vec<Complex64>, b: u8, entries: &mut Vec<TranscriptEntry>) -> Result<GameTree> {
        let alice_labels = Self::labels(&self.alice_regs);
        let state = match &self.alice.reply_unitaries {
            Some(us) => self.layout.apply_local(&state, &alice_labels, &us[usize::from(b)])?,
            None => state,
        };
        let mut children = Vec::new();
        for (outcome, projector) in self.alice.reveal_measurement.projectors().iter().enumerate() {
            let (weight, post) = self.collapse(&state, &alice_labels, projector)?;
            let Some(post) = post else { continue };
            let a = self.alice.reveal_table[usize::from(b)][outcome];
            entries.push(TranscriptEntry { round: 3, sender: Party::Alice, message: Message::RevealBit { value: a } });
            children.push((weight, self.conclude(post, a, b, entries)?));
            entries.pop();
        }
        Ok(GameTree::Split(children))
    }

    fn conclude(&self, state: Vec<Complex64>, a: u8, b: u8, entries: &mut Vec<TranscriptEntry>) -> Result<GameTree> {
        let c = a ^ b;
        let depth = entries.len();
        let tree = match (self.game, c) {
            (Game::Weak, 0) => {
                entries.push(TranscriptEntry {
                    round: 3,
                    sender: Party::Alice,
                    message: Message::SignQubitRegister { handle: SIGN.into() },
                });
                if self.bob.checks {
                    self.check(
                        &state,
                        Party::Bob,
                        a,
                        entries,
                        (OutcomeKind::AliceWins, Some(0), Some(0)),
                        (OutcomeKind::AbortByBob, Some(0), None),
                    )?
                } else {
                    self.leaf(OutcomeKind::AliceWins, Some(0), Some(0), entries, &state, None)
                }
            }
            (Game::Weak, _) => {
                let state = match &self.bob.return_unitary {
                    Some(u) => self.layout.apply_local(&state, &Self::labels(&self.bob_regs), u)?,
                    None => state,
                };
                entries.push(TranscriptEntry {
                    round: 4,
                    sender: Party::Bob,
                    message: Message::QutritReturn { handle: QUTRIT.into() },
                });
                if self.alice.checks {
                    self.check(
                        &state,
                        Party::Alice,
                        a,
                        entries,
                        (OutcomeKind::BobWins, Some(1), Some(1)),
                        (OutcomeKind::AbortByAlice, None, Some(1)),
                    )?
                } else {
                    self.leaf(OutcomeKind::BobWins, Some(1), Some(1), entries, &state, None)
                }
            }
            (Game::Strong, c) => {
                entries.push(TranscriptEntry {
                    round: 3,
                    sender: Party::Alice,
                    message: Message::SignQubitRegister { handle: SIGN.into() },
                });
                let coin = OutcomeKind::coin(c);
                if self.bob.checks {
                    self.check(
                        &state,
                        Party::Bob,
                        a,
                        entries,
                        (coin, Some(c), Some(c)),
                        (OutcomeKind::AbortByBob, Some(c), None),
                    )?
                } else {
                    self.leaf(coin, Some(c), Some(c), entries, &state, None)
                }
            }
        };
        entries.truncate(depth);
        Ok(tree)
    }

    /// Tests the (sign, qutrit) pair against `|psi_a>`.
    fn check(
        &self,
        state: &[Complex64],
        checker: Party,
        a: u8,
        entries: &[TranscriptEntry],
        pass: (OutcomeKind, Option<u8>, Option<u8>),
        fail: (OutcomeKind, Option<u8>, Option<u8>),
    ) -> Result<GameTree> {
        let projector = check_projector(a, self.params)?;
        let passed = self.layout.apply_local(state, &[SIGN, QUTRIT], &projector)?;
        let failed: Vec<Complex64> = state.iter().zip(&passed).map(|(s, p)| s - p).collect();
        let (p_pass, p_fail) = (norm_sqr(&passed), norm_sqr(&failed));
        let record = CheckRecord { checker, tested_bit: a, pass_probability: p_pass };
        let mut children = Vec::with_capacity(2);
        if p_pass > ZERO_PROBABILITY {
            children.push((p_pass, self.leaf(pass.0, pass.1, pass.2, entries, state, Some(record.clone()))));
        }
        if p_fail > ZERO_PROBABILITY {
            children.push((p_fail, self.leaf(fail.0, fail.1, fail.2, entries, state, Some(record))));
        }
        Ok(GameTree::Split(children))
    }
}

/// Expands every classical branch of a game.
pub fn build_tree(game: Game, alice: &Strategy, bob: &Strategy, params: ProtocolParams) -> Result<GameTree> {
    Executor::new(game, alice.as_alice()?, bob.as_bob()?, params)?.run()
}

pub fn run_exact(game: Game, alice: &Strategy, bob: &Strategy, params: ProtocolParams) -> Result<ExactRun> {
    let mut branches = Vec::new();
    build_tree(game, alice, bob, params)?.flatten_into(1.0, &mut branches);
    Ok(ExactRun { game, branches })
}

pub fn run_weak_exact(alice: &Strategy, bob: &Strategy, params: ProtocolParams) -> Result<ExactRun> {
    run_exact(Game::Weak, alice, bob, params)
}

/// The runner does not depend on which coin value an adversary targets; the
/// target only enters through the strategy's construction.
pub fn run_strong_exact(alice: &Strategy, bob: &Strategy, params: ProtocolParams) -> Result<ExactRun> {
    run_exact(Game::Strong, alice, bob, params)
}

/// Monte Carlo counterpart of [`run_exact`].
///
/// The generator is ChaCha20 seeded through `seed_from_u64(seed)`. Each trial
/// walks the game tree from the root; at every split it draws one `f64`
/// uniform on `[0, 1)` (53 random bits), scales it by the sum of the split's
/// weights and takes the first child whose cumulative weight exceeds it.
/// Splits occur in protocol order: Bob's round-2 measurement, Alice's reveal
/// measurement, then the final check.
pub fn run_sampled(
    game: Game,
    alice: &Strategy,
    bob: &Strategy,
    params: ProtocolParams,
    trials: u64,
    seed: u64,
) -> Result<SampledRun> {
    if trials == 0 {
        return Err(Error::OutOfRange("sampled mode needs at least one trial".into()));
    }
    let tree = build_tree(game, alice, bob, params)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..trials {
        *counts.entry(tree.sample(&mut rng)).or_insert(0) += 1;
    }
    Ok(SampledRun { game, trials, seed, counts })
}
