//! Passive-tracer transport in a synthesized divergence-free random field.
//!
//! The library has three legs:
//!
//! 1. **Simulation** — [`kernel`] defines the spectral ingredients (bump
//!    profile, relaxation rates, incompressible spectral density, covariance
//!    quadrature); [`field`] synthesizes the stationary field as random
//!    Fourier modes with exact per-mode Ornstein–Uhlenbeck refresh;
//!    [`particle`] integrates the tracer SDE and produces ensemble
//!    estimates of the mean-square displacement, its Laplace transform, and
//!    the Brownian/drift decomposition statistics.
//! 2. **Bounds** — [`bounds`] implements the scalar iterated-logarithm
//!    machinery (`L`, `lb`, `ub`, recursion constants, level-1/level-2
//!    resolvent brackets, diffusivity envelopes, and log-corrected
//!    integrals).
//! 3. **Verification** — [`verify`] holds independent numerical oracles:
//!    closed-form identity checks, inequality scans with empirical
//!    constants, and Monte-Carlo-vs-quadrature covariance comparisons.
//!
//! Shared plumbing: [`quad`] (deterministic quadrature rules), [`rng`]
//! (splittable reproducible random streams), [`stats`] (streaming moments
//! with associative merge), [`config`]/[`output`] (strict run configuration
//! and reproducible serialization).

pub mod bounds;
pub mod config;
pub mod field;
pub mod kernel;
pub mod output;
pub mod particle;
pub mod quad;
pub mod rng;
pub mod stats;
pub mod verify;
