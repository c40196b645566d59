//! Exact-arithmetic laboratory for the non-uniform Littlewood-Offord problem.
//!
//! For `S_n = v_1 e_1 + ... + v_n e_n` with independent Rademacher signs
//! `e_i` and weights `||v_i||_2 <= 1`, the crate computes atom probabilities
//! `P(S_n = x)` exactly, evaluates the optimal bounds on them in terms of
//! `n` and `||x||`, certifies the intersecting-antichain argument behind the
//! one-dimensional case, and searches for counterexamples to two conjectured
//! generalisations (progression-uniform summands, other norms).
//!
//! Every probability is an exact rational; floating point appears only in
//! the search module's exploratory scorer and in the Hoeffding comparison.

pub mod antichain;
pub mod bounds;
pub mod engine;
pub mod error;
pub mod norm;
pub mod oracle;
pub mod parallel;
pub mod rational;
pub mod search;

pub use bounds::{BoundReport, Theorem};
pub use engine::{ApUniformSpec, AtomDistribution, Caps, Engine, Summands, WeightConfig};
pub use error::{Error, Result};
pub use norm::NormSpec;
pub use rational::{Rational, VecD};
