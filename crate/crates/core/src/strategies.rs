//! Concrete strategies and the adversary charts searched by [`crate::verify`].
//!
//! Bob's register order after the extraction is `qutrit (x) reply`, so the
//! row index of an extraction isometry is `2 * t + r` for qutrit basis `t`
//! and reply bit `r`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::SPECTRAL_ZERO;
use crate::error::{Error, Result};
use crate::protocol::{AliceStrategy, BobStrategy, Measurement, Party, Strategy};
use crate::qmath::{herm_eig, inner, kron_vec, norm_sqr, ComplexMatrix, PureState, ONE, ZERO};
use crate::states::{check_bit, psi, rho_difference, ProtocolParams};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Alice: flip a fair coin `a` (kept coherently in a private qubit that she
/// measures in round 3), commit to `|psi_a>`, reveal `a`, and test Bob's
/// return when he wins.
pub fn honest_alice(params: ProtocolParams) -> Strategy {
    let psi0 = psi(0, params).expect("valid params");
    let psi1 = psi(1, params).expect("valid params");
    let amps: Vec<Complex64> = kron_vec(&[c(FRAC_1_SQRT_2), ZERO], psi0.amplitudes())
        .into_iter()
        .zip(kron_vec(&[ZERO, c(FRAC_1_SQRT_2)], psi1.amplitudes()))
        .map(|(x, y)| x + y)
        .collect();
    Strategy::Alice(AliceStrategy {
        name: "honest".into(),
        ancilla_dims: vec![2],
        initial_state: PureState::new(amps).expect("unit vector"),
        reply_unitaries: None,
        reveal_measurement: Measurement::leading_factor(2, 2),
        reveal_table: [vec![0, 1], vec![0, 1]],
        checks: true,
    })
}

/// Bob: reply with a fair coin, independent of the qutrit, and test Alice
/// when she wins.
pub fn honest_bob() -> Strategy {
    let mut v = ComplexMatrix::zeros(6, 3);
    for t in 0..3 {
        v[(2 * t, t)] = c(FRAC_1_SQRT_2);
        v[(2 * t + 1, t)] = c(FRAC_1_SQRT_2);
    }
    Strategy::Bob(BobStrategy {
        name: "honest".into(),
        ancilla_dims: vec![2],
        extraction: v,
        measurement: Measurement::trailing_factor(3, 2),
        reply_table: vec![0, 1],
        return_unitary: None,
        checks: true,
    })
}

/// Alice commits to `(|psi_0> + |psi_1>)` normalised and always reveals
/// `a = b` along with the untouched sign qubit.
pub fn cheating_alice_optimal(params: ProtocolParams) -> Strategy {
    let psi0 = psi(0, params).expect("valid params");
    let psi1 = psi(1, params).expect("valid params");
    let sum: Vec<Complex64> = psi0.amplitudes().iter().zip(psi1.amplitudes()).map(|(x, y)| x + y).collect();
    Strategy::Alice(AliceStrategy {
        name: "alice-opt".into(),
        ancilla_dims: vec![],
        initial_state: PureState::normalized(sum).expect("psi_0 + psi_1 has norm at least sqrt 2"),
        reply_unitaries: None,
        reveal_measurement: Measurement::trivial(2),
        reveal_table: [vec![0], vec![1]],
        checks: true,
    })
}

/// `|0>|0> -> |0>(|0> + |1>)/sqrt 2`, `|x+1>|0> -> |x+1>|x>`.
fn weak_extraction() -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(6, 3);
    v[(0, 0)] = c(FRAC_1_SQRT_2);
    v[(1, 0)] = c(FRAC_1_SQRT_2);
    v[(2, 1)] = ONE; // |1>|0>
    v[(5, 2)] = ONE; // |2>|1>
    v
}

fn weak_bob(name: &str, reply_table: Vec<u8>) -> Strategy {
    Strategy::Bob(BobStrategy {
        name: name.into(),
        ancilla_dims: vec![2],
        extraction: weak_extraction(),
        measurement: Measurement::trailing_factor(3, 2),
        reply_table,
        return_unitary: None,
        checks: false,
    })
}

/// Bob copies the qutrit's `|x+1>` label into an ancilla, measures it as `m`
/// and replies `b = 1 - m`, then returns the qutrit untouched if he wins.
pub fn cheating_bob_weak_optimal() -> Strategy {
    weak_bob("bob-opt-weak", vec![1, 0])
}

/// Same transformation as [`cheating_bob_weak_optimal`], but replying with
/// the measured ancilla `b = m` as-is.
pub fn cheating_bob_weak_literal() -> Strategy {
    weak_bob("bob-opt-weak-literal", vec![0, 1])
}

/// Bob measures the qutrit in the eigenbasis of `rho_0 - rho_1`, guesses
/// `a` (positive part -> 0, negative part -> 1, null space -> 0) and sends
/// `b = guess xor target`.
pub fn cheating_bob_strong_helstrom(params: ProtocolParams, target: u8) -> Result<Strategy> {
    check_bit("target", target)?;
    let eig = herm_eig(&rho_difference(params)?)?;
    let guess_zero = eig.spectral_projector(|l| l >= -SPECTRAL_ZERO);
    let guess_one = eig.spectral_projector(|l| l < -SPECTRAL_ZERO);
    Ok(Strategy::Bob(BobStrategy {
        name: format!("bob-helstrom-{target}"),
        ancilla_dims: vec![],
        extraction: ComplexMatrix::identity(3),
        measurement: Measurement::new(vec![guess_zero, guess_one])?,
        reply_table: vec![target, 1 ^ target],
        return_unitary: None,
        checks: false,
    }))
}

/// Resolves a strategy by its command-line name for the given seat.
pub fn named(name: &str, seat: Party, params: ProtocolParams) -> Result<Strategy> {
    let strategy = match (name, seat) {
        ("honest", Party::Alice) => honest_alice(params),
        ("honest", Party::Bob) => honest_bob(),
        ("alice-opt", Party::Alice) => cheating_alice_optimal(params),
        ("bob-opt-weak", Party::Bob) => cheating_bob_weak_optimal(),
        ("bob-opt-weak-literal", Party::Bob) => cheating_bob_weak_literal(),
        ("bob-helstrom-0", Party::Bob) => cheating_bob_strong_helstrom(params, 0)?,
        ("bob-helstrom-1", Party::Bob) => cheating_bob_strong_helstrom(params, 1)?,
        _ => {
            return Err(Error::InvalidStrategy { name: name.into(), reason: format!("no such strategy for {seat:?}") })
        }
    };
    Ok(strategy)
}

/// Adversary classes covered by a smooth chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    /// Alice's commitment: any pure state on `qubit (x) sign (x) qutrit`,
    /// followed by revealing `a = b`.
    AliceCommit,
    /// Bob's extraction: any isometry `qutrit -> qutrit (x) reply`, replying
    /// with the measured reply qubit.
    BobExtract,
    /// [`AdversaryKind::BobExtract`] with `|phi_{0,0}| = |phi_{0,1}| = 1/sqrt 2`.
    BobExtractBalanced,
}

impl AdversaryKind {
    /// Number of real parameters of the chart.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        match self {
            AdversaryKind::AliceCommit => 24,
            AdversaryKind::BobExtract | AdversaryKind::BobExtractBalanced => 36,
        }
    }

    pub fn party(self) -> Party {
        match self {
            AdversaryKind::AliceCommit => Party::Alice,
            _ => Party::Bob,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AdversaryKind::AliceCommit => "alice-commit",
            AdversaryKind::BobExtract => "bob-extract",
            AdversaryKind::BobExtractBalanced => "bob-extract-balanced",
        }
    }
}

/// A point of an adversary chart: consecutive `(re, im)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversaryParams {
    pub kind: AdversaryKind,
    pub values: Vec<f64>,
}

impl AdversaryParams {
    pub fn new(kind: AdversaryKind, values: Vec<f64>) -> Result<Self> {
        if values.len() != kind.len() {
            return Err(Error::Decode(format!(
                "{} expects {} parameters, got {}",
                kind.as_str(),
                kind.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Decode("non-finite parameter".into()));
        }
        Ok(Self { kind, values })
    }

    /// Chart point of a commitment state on `qubit (x) sign (x) qutrit`.
    pub fn from_alice_state(state: &[Complex64]) -> Result<Self> {
        Self::new(AdversaryKind::AliceCommit, flatten(state))
    }

    /// Chart point of an extraction isometry (`6 x 3`, rows `2t + r`).
    pub fn from_bob_isometry(kind: AdversaryKind, v: &ComplexMatrix) -> Result<Self> {
        if v.rows() != 6 || v.cols() != 3 {
            return Err(Error::DimensionMismatch { expected: 6, got: v.rows() });
        }
        Self::new(kind, flatten(v.as_slice()))
    }

    fn complex(&self) -> Vec<Complex64> {
        self.values.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect()
    }
}

fn flatten(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Turns a chart point into a strategy.
pub fn decode_adversary(p: &AdversaryParams) -> Result<Strategy> {
    if p.values.len() != p.kind.len() {
        return Err(Error::Decode(format!(
            "{} expects {} parameters, got {}",
            p.kind.as_str(),
            p.kind.len(),
            p.values.len()
        )));
    }
    match p.kind {
        AdversaryKind::AliceCommit => {
            let state =
                PureState::normalized(p.complex()).map_err(|_| Error::Decode("zero commitment state".into()))?;
            Ok(Strategy::Alice(AliceStrategy {
                name: "chart:alice-commit".into(),
                ancilla_dims: vec![2],
                initial_state: state,
                reply_unitaries: None,
                reveal_measurement: Measurement::trivial(4),
                reveal_table: [vec![0], vec![1]],
                checks: true,
            }))
        }
        AdversaryKind::BobExtract | AdversaryKind::BobExtractBalanced => {
            let raw = ComplexMatrix::from_row_major(6, 3, p.complex())?;
            let mut columns: Vec<Vec<Complex64>> = (0..3).map(|j| raw.column(j)).collect();
            if p.kind == AdversaryKind::BobExtractBalanced {
                columns[0] = balanced_column(&columns[0])?;
            }
            let v = orthonormalize(columns, p.kind == AdversaryKind::BobExtractBalanced)?;
            Ok(Strategy::Bob(BobStrategy {
                name: format!("chart:{}", p.kind.as_str()),
                ancilla_dims: vec![2],
                extraction: v,
                measurement: Measurement::trailing_factor(3, 2),
                reply_table: vec![0, 1],
                return_unitary: None,
                checks: false,
            }))
        }
    }
}

/// Rescales the reply-0 and reply-1 halves of `U|0>` to norm `1/sqrt 2` each.
fn balanced_column(col: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out = col.to_vec();
    for r in 0..2 {
        let norm = (0..3).map(|t| col[2 * t + r].norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-12 {
            return Err(Error::Decode(format!("phi_(0,{r}) component vanishes")));
        }
        for t in 0..3 {
            out[2 * t + r] = col[2 * t + r] * (FRAC_1_SQRT_2 / norm);
        }
    }
    Ok(out)
}

/// Gram-Schmidt (two passes) on the columns; `keep_first` leaves the first
/// column as given (it must already be a unit vector).
fn orthonormalize(columns: Vec<Vec<Complex64>>, keep_first: bool) -> Result<ComplexMatrix> {
    let rows = columns[0].len();
    let mut basis_cols: Vec<Vec<Complex64>> = Vec::with_capacity(columns.len());
    for (j, mut col) in columns.into_iter().enumerate() {
        let original = norm_sqr(&col).sqrt();
        if !(j == 0 && keep_first) {
            for _ in 0..2 {
                for q in &basis_cols {
                    let overlap = inner(q, &col);
                    for (x, y) in col.iter_mut().zip(q) {
                        *x -= overlap * y;
                    }
                }
            }
        }
        let norm = norm_sqr(&col).sqrt();
        if original <= 1e-12 || norm <= 1e-9 * original {
            return Err(Error::Decode(format!("column {j} is linearly dependent on the previous ones")));
        }
        basis_cols.push(col.into_iter().map(|z| z / norm).collect());
    }
    let mut v = ComplexMatrix::zeros(rows, basis_cols.len());
    for (j, col) in basis_cols.iter().enumerate() {
        v.set_column(j, col);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{run_strong_exact, run_weak_exact, OutcomeKind};
    use crate::states::{pair_layout, rho_honest, QUTRIT};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn p(alpha: f64) -> ProtocolParams {
        ProtocolParams::new(alpha).unwrap()
    }

    #[test]
    fn all_named_strategies_validate() {
        let params = p(1.1);
        for name in ["honest", "alice-opt"] {
            named(name, Party::Alice, params).unwrap().validate().unwrap();
        }
        for name in ["honest", "bob-opt-weak", "bob-opt-weak-literal", "bob-helstrom-0", "bob-helstrom-1"] {
            named(name, Party::Bob, params).unwrap().validate().unwrap();
        }
        assert!(named("alice-opt", Party::Bob, params).is_err());
        assert!(named("nobody", Party::Alice, params).is_err());
        assert!(cheating_bob_strong_helstrom(params, 2).is_err());
    }

    #[test]
    fn honest_alice_sends_rho_a() {
        let params = p(0.9);
        let Strategy::Alice(alice) = honest_alice(params) else { unreachable!() };
        // condition on the private coin, then reduce to the qutrit
        let half = alice.initial_state.amplitudes().len() / 2;
        let layout = pair_layout();
        for a in 0..2u8 {
            let block: Vec<Complex64> = alice.initial_state.amplitudes()
                [usize::from(a) * half..(usize::from(a) + 1) * half]
                .iter()
                .map(|z| z * 2f64.sqrt())
                .collect();
            let reduced = layout.reduce_vector(&block, &[QUTRIT]).unwrap();
            assert!(reduced.max_abs_diff(rho_honest(a, params).unwrap().matrix()) < 1e-12);
        }
    }

    #[test]
    fn honest_bob_reply_ignores_the_qutrit() {
        for alpha in [0.0, 0.7, FRAC_PI_2, PI] {
            let params = p(alpha);
            for a in 0..2u8 {
                let fixed = Strategy::Alice(AliceStrategy {
                    name: "fixed".into(),
                    ancilla_dims: vec![],
                    initial_state: psi(a, params).unwrap(),
                    reply_unitaries: None,
                    reveal_measurement: Measurement::trivial(2),
                    reveal_table: [vec![a], vec![a]],
                    checks: true,
                });
                let run = run_weak_exact(&fixed, &honest_bob(), params).unwrap();
                let b0 = run.probability_where(|o| {
                    o.kind == if a == 0 { OutcomeKind::AliceWins } else { OutcomeKind::BobWins }
                });
                assert!((b0 - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn helstrom_projectors_at_boundaries() {
        let Strategy::Bob(bob) = cheating_bob_strong_helstrom(p(0.0), 1).unwrap() else { unreachable!() };
        // no information at alpha = 0: every outcome guesses 0
        assert!(bob.measurement.projectors()[1].frobenius_norm() < 1e-15);
        for (alpha, expected) in [(0.0, 0.5), (PI, 1.0), (FRAC_PI_2, 0.75)] {
            let params = p(alpha);
            let bob = cheating_bob_strong_helstrom(params, 1).unwrap();
            let run = run_strong_exact(&honest_alice(params), &bob, params).unwrap();
            assert!((run.probability(OutcomeKind::Coin1) - expected).abs() < 1e-12, "alpha {alpha}");
        }
    }

    #[test]
    fn decode_rejects_degenerate_points() {
        assert!(AdversaryParams::new(AdversaryKind::AliceCommit, vec![0.0; 3]).is_err());
        let zero = AdversaryParams { kind: AdversaryKind::AliceCommit, values: vec![0.0; 24] };
        assert!(matches!(decode_adversary(&zero), Err(Error::Decode(_))));
        // two identical columns
        let mut vals = vec![0.0; 36];
        for t in 0..6 {
            vals[2 * (t * 3)] = 1.0;
            vals[2 * (t * 3 + 1)] = 1.0;
            vals[2 * (t * 3 + 2)] = (t as f64).sin();
        }
        let dup = AdversaryParams::new(AdversaryKind::BobExtract, vals).unwrap();
        assert!(matches!(decode_adversary(&dup), Err(Error::Decode(_))));
        let mut vals = vec![0.3; 36];
        // reply-1 half of column 0 vanishes: balanced chart cannot rescale it
        for t in 0..3 {
            vals[2 * ((2 * t + 1) * 3)] = 0.0;
            vals[2 * ((2 * t + 1) * 3) + 1] = 0.0;
        }
        let unbalanced = AdversaryParams::new(AdversaryKind::BobExtractBalanced, vals).unwrap();
        assert!(decode_adversary(&unbalanced).is_err());
    }

    #[test]
    fn decoded_isometries_are_valid_and_balanced() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(5);
        let vals: Vec<f64> = (0..36).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for kind in [AdversaryKind::BobExtract, AdversaryKind::BobExtractBalanced] {
            let s = decode_adversary(&AdversaryParams::new(kind, vals.clone()).unwrap()).unwrap();
            s.validate().unwrap();
            let Strategy::Bob(bob) = s else { unreachable!() };
            if kind == AdversaryKind::BobExtractBalanced {
                for r in 0..2 {
                    let n: f64 = (0..3).map(|t| bob.extraction[(2 * t + r, 0)].norm_sqr()).sum();
                    assert!((n - 0.5).abs() < 1e-12);
                }
            }
        }
    }
}
