use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;
use qcoin::protocol::{run_strong_exact, run_weak_exact, OutcomeKind, Party};
use qcoin::qmath::{kron_vec, partial_trace, trace_norm, ComplexMatrix};
use qcoin::states::{pair_layout, psi, rho_difference, rho_honest, ProtocolParams, SIGN};
use qcoin::strategies::{
    cheating_alice_optimal, cheating_bob_strong_helstrom, cheating_bob_weak_literal, cheating_bob_weak_optimal,
    decode_adversary, honest_alice, honest_bob, named, AdversaryKind, AdversaryParams,
};

fn p(alpha: f64) -> ProtocolParams {
    ProtocolParams::new(alpha).unwrap()
}

fn grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| PI * k as f64 / (points - 1) as f64).collect()
}

fn cos2(alpha: f64) -> f64 {
    (alpha / 2.0).cos().powi(2)
}

fn sin2(alpha: f64) -> f64 {
    (alpha / 2.0).sin().powi(2)
}

fn bob_formula(alpha: f64) -> f64 {
    (cos2(alpha) * FRAC_1_SQRT_2 + sin2(alpha)).powi(2)
}

fn alice_wins(alice: &qcoin::protocol::Strategy, alpha: f64) -> f64 {
    run_weak_exact(alice, &honest_bob(), p(alpha)).unwrap().probability(OutcomeKind::AliceWins)
}

fn bob_wins(bob: &qcoin::protocol::Strategy, alpha: f64) -> f64 {
    let params = p(alpha);
    run_weak_exact(&honest_alice(params), bob, params).unwrap().probability(OutcomeKind::BobWins)
}

#[test]
fn optimal_cheaters_reach_their_formulas() {
    for alpha in grid(21) {
        let a = alice_wins(&cheating_alice_optimal(p(alpha)), alpha);
        assert!((a - 0.5 * (1.0 + cos2(alpha))).abs() <= 1e-9, "alpha {alpha}: {a}");
        let b = bob_wins(&cheating_bob_weak_optimal(), alpha);
        assert!((b - bob_formula(alpha)).abs() <= 1e-9, "alpha {alpha}: {b}");
    }
}

#[test]
fn endpoint_examples() {
    assert!((alice_wins(&cheating_alice_optimal(p(PI)), PI) - 0.5).abs() <= 1e-9);
    assert!((alice_wins(&cheating_alice_optimal(p(0.0)), 0.0) - 1.0).abs() <= 1e-9);
    assert!((bob_wins(&cheating_bob_weak_optimal(), PI) - 1.0).abs() <= 1e-9);
    assert!((bob_wins(&cheating_bob_weak_optimal(), 0.0) - 0.5).abs() <= 1e-9);
    assert!((bob_wins(&cheating_bob_weak_optimal(), FRAC_PI_2) - 0.728553).abs() <= 1e-6);
    for (alpha, want) in [(0.0, 0.5), (FRAC_PI_2, 0.75), (PI, 1.0)] {
        let params = p(alpha);
        let bob = cheating_bob_strong_helstrom(params, 1).unwrap();
        let got = run_strong_exact(&honest_alice(params), &bob, params).unwrap().probability(OutcomeKind::Coin1);
        assert!((got - want).abs() <= 1e-9, "alpha {alpha}: {got}");
    }
}

#[test]
fn literal_reply_loses_to_the_complemented_one() {
    for alpha in grid(21).into_iter().filter(|&a| a > 0.0 && a < PI) {
        let literal = bob_wins(&cheating_bob_weak_literal(), alpha);
        assert!(literal < bob_formula(alpha) - 1e-9, "alpha {alpha}: {literal}");
    }
}

#[test]
fn helstrom_accuracy_matches_trace_norm() {
    for alpha in grid(21) {
        let params = p(alpha);
        let bob = cheating_bob_strong_helstrom(params, 0).unwrap();
        let proj = bob.as_bob().unwrap().measurement.projectors();
        let rho = [rho_honest(0, params).unwrap(), rho_honest(1, params).unwrap()];
        let accuracy = 0.5 * ((&proj[0] * rho[0].matrix()).trace().re + (&proj[1] * rho[1].matrix()).trace().re);
        let norm = trace_norm(&rho_difference(params).unwrap()).unwrap();
        assert!((accuracy - (0.5 + norm / 4.0)).abs() <= 1e-9);
        assert!((accuracy - 0.5 * (1.0 + sin2(alpha))).abs() <= 1e-9);
    }
}

#[test]
fn honest_bob_ignores_the_qutrit() {
    for alpha in [0.0, 1.0, PI] {
        let params = p(alpha);
        for a in 0..2u8 {
            let mut alice = honest_alice(params).as_alice().unwrap().clone();
            let amps = kron_vec(&qcoin::qmath::basis(2, a as usize), psi(a, params).unwrap().amplitudes());
            alice.initial_state = qcoin::qmath::PureState::new(amps).unwrap();
            let run = run_weak_exact(&qcoin::protocol::Strategy::Alice(alice), &honest_bob(), params).unwrap();
            let b_zero: f64 = run
                .branches
                .iter()
                .filter(|br| br.transcript.bit_sent_by(Party::Bob) == Some(0))
                .map(|br| br.outcome.probability)
                .sum();
            assert!((b_zero - 0.5).abs() <= 1e-12);
        }
    }
}

#[test]
fn honest_commitment_reduces_to_rho() {
    let params = p(1.3);
    let layout = pair_layout();
    for a in 0..2u8 {
        let pair = psi(a, params).unwrap().density().unwrap();
        let reduced = partial_trace(&pair, &layout, &[qcoin::states::QUTRIT]).unwrap();
        assert!(reduced.matrix().max_abs_diff(rho_honest(a, params).unwrap().matrix()) <= 1e-12);
        let sign = partial_trace(&pair, &layout, &[SIGN]).unwrap();
        assert!((sign.matrix()[(0, 0)].re - 0.5).abs() <= 1e-12);
    }
}

#[test]
fn alice_chart_embeds_known_commitments() {
    for alpha in [0.5, FRAC_PI_2, 2.4] {
        let params = p(alpha);
        // |0>_anc (x) psi_a: honest preparation, then claiming a = b
        for a in 0..2u8 {
            let state = kron_vec(&qcoin::qmath::basis(2, 0), psi(a, params).unwrap().amplitudes());
            let chart = decode_adversary(&AdversaryParams::from_alice_state(&state).unwrap()).unwrap();
            let overlap = cos2(alpha).powi(2);
            assert!((alice_wins(&chart, alpha) - 0.5 * (1.0 + overlap)).abs() <= 1e-9);
        }
        let opt = cheating_alice_optimal(params);
        let state = kron_vec(&qcoin::qmath::basis(2, 1), opt.as_alice().unwrap().initial_state.amplitudes());
        let chart = decode_adversary(&AdversaryParams::from_alice_state(&state).unwrap()).unwrap();
        assert!((alice_wins(&chart, alpha) - 0.5 * (1.0 + cos2(alpha))).abs() <= 1e-9);
    }
}

#[test]
fn bob_chart_embeds_the_optimal_extraction() {
    let one = Complex64::new(1.0, 0.0);
    let mut v = ComplexMatrix::zeros(6, 3);
    v[(0, 0)] = one * FRAC_1_SQRT_2;
    v[(1, 0)] = one * FRAC_1_SQRT_2;
    v[(3, 1)] = one; // |1> with reply 1
    v[(4, 2)] = one; // |2> with reply 0
    for kind in [AdversaryKind::BobExtract, AdversaryKind::BobExtractBalanced] {
        let bob = decode_adversary(&AdversaryParams::from_bob_isometry(kind, &v).unwrap()).unwrap();
        assert!(bob.as_bob().unwrap().extraction.max_abs_diff(&v) <= 1e-12);
        for alpha in grid(7) {
            assert!((bob_wins(&bob, alpha) - bob_formula(alpha)).abs() <= 1e-9);
        }
    }
}

#[test]
fn names_resolve_per_seat() {
    let params = p(1.0);
    for name in ["honest", "alice-opt"] {
        assert_eq!(named(name, Party::Alice, params).unwrap().party(), Party::Alice);
    }
    for name in ["honest", "bob-opt-weak", "bob-opt-weak-literal", "bob-helstrom-0", "bob-helstrom-1"] {
        assert_eq!(named(name, Party::Bob, params).unwrap().party(), Party::Bob);
    }
    assert!(named("alice-opt", Party::Bob, params).is_err());
    assert!(named("nobody", Party::Alice, params).is_err());
}

#[test]
fn degenerate_chart_points_are_rejected() {
    assert!(decode_adversary(&AdversaryParams::new(AdversaryKind::AliceCommit, vec![0.0; 24]).unwrap()).is_err());
    assert!(decode_adversary(&AdversaryParams::new(AdversaryKind::BobExtract, vec![0.0; 36]).unwrap()).is_err());
    assert!(AdversaryParams::new(AdversaryKind::BobExtract, vec![0.0; 35]).is_err());
    assert!(AdversaryParams::new(AdversaryKind::AliceCommit, vec![f64::NAN; 24]).is_err());
}
