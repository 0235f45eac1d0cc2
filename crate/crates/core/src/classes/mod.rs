//! Function classes described by an exact supremum oracle for linear
//! functionals `c ↦ sup_{f∈F} Σ_i c_i f(x_i)`.
//!
//! Every complexity estimator in [`crate::complexity`] reduces to calls of
//! this oracle: for a fixed point list the oracle is *prepared* once and then
//! evaluated for many coefficient (sign) vectors.

mod finite;
mod lipschitz;
mod rkhs;

pub use finite::{FiniteFunctionClass, SingleFunction};
pub use lipschitz::{
    lipschitz_ball_sup, lipschitz_ball_sup_line, lipschitz_ball_sup_simplex, LipschitzBall,
    EXACT_LP_BUDGET,
};
pub use rkhs::{gaussian_kernel, rkhs_ball_sup, GaussianRkhsBall, GRAM_NEGATIVE_TOLERANCE};

use crate::error::{Error, Result};

/// A borrowed list of points in `R^k`, stored contiguously.
#[derive(Debug, Clone, Copy)]
pub struct Points<'a> {
    coords: &'a [f64],
    k: usize,
}

impl<'a> Points<'a> {
    pub fn new(coords: &'a [f64], k: usize) -> Result<Self> {
        if k == 0 || coords.len() % k != 0 {
            return Err(Error::DimensionMismatch { expected: k.max(1), got: coords.len() });
        }
        Ok(Self { coords, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, i: usize) -> &'a [f64] {
        &self.coords[i * self.k..(i + 1) * self.k]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'a, f64> {
        self.coords.chunks_exact(self.k)
    }

    pub fn coords(&self) -> &'a [f64] {
        self.coords
    }
}

/// A supremum oracle bound to a fixed point list.
pub trait PreparedSup: Send + Sync {
    /// `sup_f Σ_i c_i f(x_i)` for the prepared points `x_i`.
    fn sup(&self, c: &[f64]) -> Result<f64>;
}

/// A class of functions `f : R^k → R` known through its capabilities.
pub trait FunctionClassOracle: Send + Sync {
    /// Uniform Lipschitz constant with respect to the Euclidean norm.
    fn lipschitz(&self) -> f64;

    /// `sup_f ‖f‖_X`.
    fn uniform_bound(&self) -> f64;

    /// Binds the oracle to a point list.
    fn prepare<'a>(&'a self, points: Points<'a>) -> Result<Box<dyn PreparedSup + 'a>>;

    /// One-shot `sup_f Σ_i c_i f(x_i)`.
    fn sup(&self, points: Points<'_>, c: &[f64]) -> Result<f64> {
        self.prepare(points)?.sup(c)
    }

    /// Value of member `f` at `x`, for classes with enumerable members.
    fn eval(&self, _f: usize, _x: &[f64]) -> Option<f64> {
        None
    }
}

pub(crate) fn check_coefficients(expected: usize, c: &[f64]) -> Result<()> {
    if c.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: c.len() });
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite coefficient".into()));
    }
    Ok(())
}

/// Checks `sup(λc₁ + (1-λ)c₂) ≤ λ sup(c₁) + (1-λ) sup(c₂) + 1e-9`.
pub fn oracle_convexity_check(
    oracle: &dyn FunctionClassOracle,
    points: Points<'_>,
    c1: &[f64],
    c2: &[f64],
    lambda: f64,
) -> Result<bool> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidInput(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    let prepared = oracle.prepare(points)?;
    let mix: Vec<f64> = c1
        .iter()
        .zip(c2)
        .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
        .collect();
    let lhs = prepared.sup(&mix)?;
    let rhs = lambda * prepared.sup(c1)? + (1.0 - lambda) * prepared.sup(c2)?;
    Ok(lhs <= rhs + 1e-9)
}
