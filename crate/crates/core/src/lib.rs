//! Simulation and verification of a qutrit-based quantum coin-flipping game.
//!
//! The weak game (four rounds, the winning party is checked) and the strong
//! game (three rounds, Bob always checks) are both parametrised by an angle
//! `alpha` in `[0, pi]`. This crate builds every protocol state exactly,
//! runs arbitrary pairs of strategies either as an exact outcome distribution
//! or by seeded Monte Carlo sampling, and provides the closed-form cheating
//! bounds together with the numerical machinery that checks them.
//!
//! Module map:
//!
//! - [`qmath`]: small dense complex linear algebra, fidelity and trace norm.
//! - [`states`]: protocol states, honest reduced states and check projectors.
//! - [`protocol`]: the game runners.
//! - [`strategies`]: honest parties, optimal cheaters and adversary charts.
//! - [`bounds`]: closed-form bounds and the equalization solvers.
//! - [`verify`]: adversary search, average-fidelity maximisation and sweeps.

pub mod bounds;
pub mod config;
pub mod error;
pub mod protocol;
pub mod qmath;
pub mod states;
pub mod strategies;
pub mod verify;

pub use error::{Error, Result};
