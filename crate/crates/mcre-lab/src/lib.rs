//! Finite-state models of feedback-driven agent behavior.
//!
//! A population of `N` agents repeatedly acts in a shared platform. Each
//! round, a random user factor arrives, the platform computes deterministic
//! per-agent feedback from the joint behavior, and every agent independently
//! updates its behavior according to a transition kernel selected by its own
//! feedback. The joint behavior sequence is a Markov chain in a random
//! environment: its one-step kernel changes with the feedback.
//!
//! Grouping `(feedback, behavior, next behavior)` into a single state yields
//! an ordinary time-homogeneous chain over a finite state space, which this
//! crate builds explicitly and analyzes exactly:
//!
//! - [`model`] / [`lifted`] — the generative model and the lifted chain;
//! - [`analysis`] — irreducibility, period, primitivity index, stationary
//!   distribution, mixing coefficients, assumption checks;
//! - [`sim`] / [`scenario`] — seeded trajectory sampling and a toy
//!   sponsored-search model builder;
//! - [`learner`] — tabular behavior predictors, bounded losses, empirical
//!   and exact expected risk, ERM, covering numbers;
//! - [`bounds`] — concentration and uniform-convergence bound formulas;
//! - [`verify`] — Monte Carlo deviation-tail estimation and dominance
//!   checks of the bounds against measured tails.

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod fixtures;
pub mod learner;
pub mod lifted;
pub mod model;
pub mod model_file;
pub mod rng;
pub mod scenario;
pub mod sim;
pub mod space;
pub mod stochastic;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
