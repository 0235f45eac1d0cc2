//! Numerical toolkit for expected suprema of Bernoulli processes indexed by
//! composite classes `F(T) = {(f(t_1), ..., f(t_n)) : f in F, t in T}`.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`] and [`metric`]: finite index sets `T ⊂ R^{k×n}`, mixed
//!   norms `‖t‖_{p,q}`, Frobenius diameters and finite metric spaces.
//! - [`classes`]: function classes described by an exact supremum oracle
//!   for linear functionals `c ↦ sup_f Σ c_i f(x_i)` (tabulated classes,
//!   bounded Lipschitz balls, Gaussian-kernel RKHS balls).
//! - [`complexity`]: exact (sign enumeration) and Monte Carlo estimators of
//!   `b(T)`, `g(T)`, `b(F(T))`, the empirical Rademacher complexity and the
//!   increment functional `D(F, S)`.
//! - [`chaining`]: covering and entropy numbers, admissible sequences,
//!   `γ₂` upper estimates and the composite entropy bound with its rates.
//! - [`tails`]: doubly-exponential tail series and tail-to-expectation
//!   conversions.
//!
//! Every randomized routine is a pure function of its inputs and a `u64`
//! seed: sample `i` always draws from substream `i`, so results do not
//! depend on the number of worker threads.

#![forbid(unsafe_code)]

pub mod chaining;
pub mod classes;
pub mod complexity;
pub mod error;
pub mod estimate;
pub mod geometry;
pub mod io;
pub mod lp;
pub mod metric;
pub mod rng;
pub mod stats;
pub mod tails;

pub use error::{Error, Result};
pub use estimate::{ComplexityEstimate, Method};
pub use geometry::PointSet;
pub use metric::FiniteMetricSpace;
