use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use qcoin::protocol::{
    run_exact, run_sampled, run_strong_exact, run_weak_exact, BobStrategy, ExactRun, Game, Measurement, OutcomeKind,
    Party, Strategy,
};
use qcoin::qmath::{herm_eig, ComplexMatrix, PureState};
use qcoin::states::ProtocolParams;
use qcoin::strategies::{
    cheating_alice_optimal, cheating_bob_strong_helstrom, cheating_bob_weak_optimal, decode_adversary, honest_alice,
    honest_bob, AdversaryKind, AdversaryParams,
};
use qcoin::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn p(alpha: f64) -> ProtocolParams {
    ProtocolParams::new(alpha).unwrap()
}

fn grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| PI * k as f64 / (points - 1) as f64).collect()
}

fn random_unitary(dim: usize, rng: &mut ChaCha20Rng) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    herm_eig(&m.hermitian_part()).unwrap().vectors
}

fn assert_same_distribution(a: &ExactRun, b: &ExactRun, tol: f64) {
    for ((k, x), (_, y)) in a.distribution().into_iter().zip(b.distribution()) {
        assert!((x - y).abs() <= tol, "{k}: {x} vs {y}");
    }
}

#[test]
fn honest_weak_game_is_fair_and_never_aborts() {
    for alpha in grid(21) {
        let params = p(alpha);
        let run = run_weak_exact(&honest_alice(params), &honest_bob(), params).unwrap();
        assert!((run.probability(OutcomeKind::AliceWins) - 0.5).abs() <= 1e-12);
        assert!((run.probability(OutcomeKind::BobWins) - 0.5).abs() <= 1e-12);
        assert_eq!(run.abort_probability(), 0.0);
    }
}

#[test]
fn honest_strong_game_gives_a_uniform_coin() {
    for alpha in grid(11) {
        let params = p(alpha);
        let run = run_strong_exact(&honest_alice(params), &honest_bob(), params).unwrap();
        assert!((run.probability(OutcomeKind::Coin0) - 0.5).abs() <= 1e-12);
        assert!((run.probability(OutcomeKind::Coin1) - 0.5).abs() <= 1e-12);
        assert_eq!(run.abort_probability(), 0.0);
    }
}

#[test]
fn quarter_turn_examples() {
    let params = p(FRAC_PI_2);
    let alice = run_weak_exact(&cheating_alice_optimal(params), &honest_bob(), params).unwrap();
    assert!((alice.probability(OutcomeKind::AliceWins) - 0.75).abs() <= 1e-9);

    let bob = run_weak_exact(&honest_alice(params), &cheating_bob_weak_optimal(), params).unwrap();
    let expected = (0.5 / 2f64.sqrt() + 0.5).powi(2);
    assert!((bob.probability(OutcomeKind::BobWins) - expected).abs() <= 1e-9);
    assert!((bob.probability(OutcomeKind::BobWins) - 0.728553).abs() <= 1e-6);

    let helstrom = cheating_bob_strong_helstrom(params, 1).unwrap();
    let strong = run_strong_exact(&honest_alice(params), &helstrom, params).unwrap();
    assert!((strong.probability(OutcomeKind::Coin1) - 0.75).abs() <= 1e-9);

    let strong = run_strong_exact(&cheating_alice_optimal(params), &honest_bob(), params).unwrap();
    assert!((strong.probability(OutcomeKind::Coin0) - 0.75).abs() <= 1e-9);
}

#[test]
fn probabilities_sum_to_one() {
    for alpha in grid(9) {
        let params = p(alpha);
        let alices = [honest_alice(params), cheating_alice_optimal(params)];
        let bobs = [
            honest_bob(),
            cheating_bob_weak_optimal(),
            cheating_bob_strong_helstrom(params, 0).unwrap(),
            cheating_bob_strong_helstrom(params, 1).unwrap(),
        ];
        for a in &alices {
            for b in &bobs {
                for game in [Game::Weak, Game::Strong] {
                    let total = run_exact(game, a, b, params).unwrap().total();
                    assert!((total - 1.0).abs() <= 1e-9, "{game} {} vs {}: {total}", a.name(), b.name());
                }
            }
        }
    }
}

#[test]
fn outcome_labels_match_the_coin_values() {
    let params = p(1.2);
    for (a, b) in [
        (honest_alice(params), honest_bob()),
        (cheating_alice_optimal(params), honest_bob()),
        (honest_alice(params), cheating_bob_weak_optimal()),
    ] {
        for branch in run_weak_exact(&a, &b, params).unwrap().branches {
            let o = branch.outcome;
            match o.kind {
                OutcomeKind::AliceWins => assert_eq!((o.c_a, o.c_b), (Some(0), Some(0))),
                OutcomeKind::BobWins => assert_eq!((o.c_a, o.c_b), (Some(1), Some(1))),
                OutcomeKind::AbortByAlice => assert_eq!(o.c_a, None),
                OutcomeKind::AbortByBob => assert_eq!(o.c_b, None),
                other => panic!("weak game produced {other}"),
            }
        }
    }
}

#[test]
fn the_winner_is_the_one_checked() {
    let params = p(0.9);
    for (a, b) in [(honest_alice(params), honest_bob()), (cheating_alice_optimal(params), honest_bob())] {
        for branch in run_weak_exact(&a, &b, params).unwrap().branches {
            let t = &branch.transcript;
            let c = t.bit_sent_by(Party::Alice).unwrap() ^ t.bit_sent_by(Party::Bob).unwrap();
            let check = t.check.as_ref().expect("honest checker tests the winner");
            assert_eq!(check.checker, if c == 0 { Party::Bob } else { Party::Alice });
            assert!(t.rounds().len() <= 4);
            assert!(t.rounds().windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn strong_transcripts_have_three_rounds() {
    let params = p(2.0);
    for branch in run_strong_exact(&honest_alice(params), &honest_bob(), params).unwrap().branches {
        assert_eq!(branch.transcript.rounds(), vec![1, 2, 3]);
        assert_eq!(branch.transcript.check.as_ref().unwrap().checker, Party::Bob);
    }
}

#[test]
fn sampled_runs_are_deterministic_and_close_to_exact() {
    let params = p(FRAC_PI_2);
    let cases = [
        (Game::Weak, honest_alice(params), honest_bob()),
        (Game::Weak, cheating_alice_optimal(params), honest_bob()),
        (Game::Weak, honest_alice(params), cheating_bob_weak_optimal()),
        (Game::Strong, honest_alice(params), cheating_bob_strong_helstrom(params, 1).unwrap()),
    ];
    let n = 100_000u64;
    for (game, a, b) in &cases {
        let exact = run_exact(*game, a, b, params).unwrap();
        let sampled = run_sampled(*game, a, b, params, n, 7).unwrap();
        assert_eq!(sampled, run_sampled(*game, a, b, params, n, 7).unwrap());
        assert_eq!(sampled.counts.values().sum::<u64>(), n);
        for (kind, prob) in exact.distribution() {
            let band = 4.0 * (prob * (1.0 - prob) / n as f64).sqrt();
            let freq = sampled.frequency(kind);
            assert!((freq - prob).abs() <= band.max(1e-12), "{kind}: {freq} vs {prob}");
            assert!((freq - prob).abs() < 0.01);
        }
    }
}

#[test]
fn sampled_run_needs_a_trial() {
    let params = p(1.0);
    assert!(run_sampled(Game::Weak, &honest_alice(params), &honest_bob(), params, 0, 1).is_err());
}

#[test]
fn private_rotations_of_alice_are_invisible() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for alpha in [0.4, FRAC_PI_2, 2.5] {
        let params = p(alpha);
        for _ in 0..4 {
            let values: Vec<f64> = (0..24).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let chart = AdversaryParams::new(AdversaryKind::AliceCommit, values).unwrap();
            let base = decode_adversary(&chart).unwrap();
            let mut rotated = base.as_alice().unwrap().clone();
            let g = random_unitary(2, &mut rng).kron(&ComplexMatrix::identity(6));
            rotated.initial_state = PureState::new(g.mul_vec(rotated.initial_state.amplitudes())).unwrap();
            let rotated = Strategy::Alice(rotated);
            for game in [Game::Weak, Game::Strong] {
                let x = run_exact(game, &base, &honest_bob(), params).unwrap();
                let y = run_exact(game, &rotated, &honest_bob(), params).unwrap();
                assert_same_distribution(&x, &y, 1e-9);
            }
        }
    }
}

#[test]
fn private_rotations_of_bob_are_invisible() {
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    let base = cheating_bob_weak_optimal();
    let inner = base.as_bob().unwrap();
    // extra private qubit after the reply qubit, rotated by G
    let mut padded = ComplexMatrix::zeros(12, 3);
    for r in 0..6 {
        for t in 0..3 {
            padded[(2 * r, t)] = inner.extraction[(r, t)];
        }
    }
    let reply = |bit: usize| {
        ComplexMatrix::from_fn(12, 12, |i, j| {
            if i == j && (i / 2) % 2 == bit {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let measurement = Measurement::new(vec![reply(0), reply(1)]).unwrap();
    for alpha in [0.3, FRAC_PI_2, 2.8] {
        let params = p(alpha);
        let plain = Strategy::Bob(BobStrategy {
            name: "padded".into(),
            ancilla_dims: vec![2, 2],
            extraction: padded.clone(),
            measurement: measurement.clone(),
            reply_table: inner.reply_table.clone(),
            return_unitary: None,
            checks: false,
        });
        let g = ComplexMatrix::identity(6).kron(&random_unitary(2, &mut rng));
        let rotated = match &plain {
            Strategy::Bob(s) => Strategy::Bob(BobStrategy { extraction: &g * &s.extraction, ..s.clone() }),
            Strategy::Alice(_) => unreachable!(),
        };
        let reference = run_weak_exact(&honest_alice(params), &base, params).unwrap();
        for bob in [&plain, &rotated] {
            let run = run_weak_exact(&honest_alice(params), bob, params).unwrap();
            assert_same_distribution(&reference, &run, 1e-9);
        }
    }
}

#[test]
fn structural_errors_are_reported() {
    let params = p(1.0);
    let swapped = run_exact(Game::Weak, &honest_bob(), &honest_alice(params), params);
    assert!(matches!(swapped, Err(Error::WrongSeat { .. })));

    let mut alice = honest_alice(params).as_alice().unwrap().clone();
    alice.initial_state = PureState::basis(6, 0);
    let r = run_exact(Game::Weak, &Strategy::Alice(alice), &honest_bob(), params);
    assert!(matches!(r, Err(Error::DimensionMismatch { .. })));

    let mut bob = honest_bob().as_bob().unwrap().clone();
    bob.extraction = ComplexMatrix::zeros(6, 3);
    let r = run_exact(Game::Weak, &honest_alice(params), &Strategy::Bob(bob), params);
    assert!(matches!(r, Err(Error::NotIsometry { .. })));
}
