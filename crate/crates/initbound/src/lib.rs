//! Robustness-vs-initialization toolkit.
//!
//! Trains small GCN/GIN/MLP classifiers with full-batch gradient descent
//! under configurable weight-initialization schemes, evaluates closed-form
//! adversarial-robustness upper bounds from the recorded training
//! trajectory, and measures them against feature- and structure-space
//! attacks (PGD, DICE, random edge flips).
//!
//! Module map:
//! - [`linalg`]: dense matrix/vector arithmetic, norms, factorizations
//! - [`graph`]: graph data model, normalization, walk sums, datasets
//! - [`nn`]: forward/backward passes and gradient-descent training
//! - [`init`]: weight-initialization schemes and expected-norm bounds
//! - [`bounds`]: closed-form robustness bound evaluators
//! - [`attacks`]: feature PGD, structure PGD, DICE, random edge flips
//! - [`metrics`]: empirical risk estimation, accuracy, success rate
//! - [`harness`]: configs, experiment sweeps, CSV persistence, plots

pub mod attacks;
pub mod bounds;
pub mod graph;
pub mod harness;
pub mod init;
pub mod linalg;
pub mod metrics;
pub mod nn;
pub mod seeds;
