//! Exact and Monte Carlo estimators of expected suprema.
//!
//! Two sign conventions coexist and are never mixed:
//!
//! - matrix form, for `b(T)` and `g(T)` with `T ⊂ R^{k×n}`: one independent
//!   sign (or normal) per entry, `k·n` in total;
//! - composite form, for `b(F(T))`, `D(F, S)` and empirical Rademacher
//!   complexities: one sign per column, `n` in total.
//!
//! Exact mode enumerates all `2^signs` patterns; Monte Carlo mode draws
//! sample `i` from substream `i` of the configured seed and reports the
//! standard error `s / √N`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::classes::{FunctionClassOracle, Points, PreparedSup};
use crate::error::{invalid, Error, Result};
use crate::estimate::{ComplexityEstimate, Method};
use crate::geometry::{frobenius_distance, PointSet};
use crate::rng::{par_samples, rademacher};
use crate::stats::{compensated_sum, mean_and_std_error};

/// Pairs closer than this are skipped by [`chain_rule_d`].
pub const DEGENERATE_PAIR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact iff the number of independent signs is at most `exact_cutoff_n`.
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub mode: Mode,
    pub mc_samples: usize,
    pub seed: u64,
    /// Largest number of independent signs enumerated exactly.
    pub exact_cutoff_n: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self { mode: Mode::Auto, mc_samples: 20_000, seed: 42, exact_cutoff_n: 14 }
    }
}

impl EstimatorConfig {
    pub fn exact() -> Self {
        Self { mode: Mode::Exact, ..Self::default() }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self { mode: Mode::MonteCarlo, mc_samples: samples, seed, ..Self::default() }
    }

    /// Whether `signs` independent signs are enumerated exactly.
    pub fn use_exact(&self, signs: usize) -> Result<bool> {
        match self.mode {
            Mode::Exact if signs > self.exact_cutoff_n => {
                Err(Error::BudgetExceeded { signs, cutoff: self.exact_cutoff_n })
            }
            Mode::Exact => Ok(true),
            Mode::MonteCarlo => Ok(false),
            Mode::Auto => Ok(signs <= self.exact_cutoff_n),
        }
    }

    fn check(&self) -> Result<()> {
        if self.mc_samples == 0 {
            return invalid("mc_samples must be positive");
        }
        if self.exact_cutoff_n > 40 {
            return invalid("exact_cutoff_n above 40 is not enumerable");
        }
        Ok(())
    }
}

/// Fills `signs` with pattern `p`: bit `i` set means `+1`.
fn pattern_signs(p: u64, signs: &mut [f64]) {
    for (i, s) in signs.iter_mut().enumerate() {
        *s = if (p >> i) & 1 == 1 { 1.0 } else { -1.0 };
    }
}

const CHUNK: u64 = 1024;

/// Exact average of `f` over all `2^signs` patterns; chunk sums are merged
/// in chunk order so the result does not depend on the thread count.
fn enumerate<F>(signs: usize, f: F) -> Result<ComplexityEstimate>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let total = 1u64 << signs;
    let chunks = total.div_ceil(CHUNK);
    let sums = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut eps = vec![0.0; signs];
            let mut vals = Vec::with_capacity(CHUNK as usize);
            for p in ch * CHUNK..((ch + 1) * CHUNK).min(total) {
                pattern_signs(p, &mut eps);
                vals.push(f(&eps)?);
            }
            Ok(compensated_sum(vals))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ComplexityEstimate::exact(compensated_sum(sums) / total as f64, total))
}

#[derive(Clone, Copy)]
enum Noise {
    Rademacher,
    Gaussian,
}

fn monte_carlo<F>(signs: usize, noise: Noise, cfg: &EstimatorConfig, f: F) -> Result<ComplexityEstimate>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let vals = par_samples(cfg.seed, cfg.mc_samples, |rng, _| {
        let mut eps = vec![0.0; signs];
        match noise {
            Noise::Rademacher => rademacher(rng, &mut eps),
            Noise::Gaussian => eps.iter_mut().for_each(|e| *e = rng.sample(StandardNormal)),
        }
        f(&eps)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let (mean, se) = mean_and_std_error(&vals);
    Ok(ComplexityEstimate::monte_carlo(mean, se, cfg.mc_samples as u64, cfg.seed))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sup_linear(t: &PointSet, eps: &[f64]) -> f64 {
    t.elements().map(|e| dot(e, eps)).fold(f64::NEG_INFINITY, f64::max)
}

/// `b(T) = E sup_{t∈T} Σ_{j,i} ε_{ji} t_{ji}` (matrix form, `k·n` signs).
pub fn bernoulli_complexity(t: &PointSet, cfg: &EstimatorConfig) -> Result<ComplexityEstimate> {
    cfg.check()?;
    let signs = t.k() * t.n();
    let exact = cfg.use_exact(signs)?;
    if t.len() == 1 {
        return Ok(ComplexityEstimate::closed_form(0.0));
    }
    let f = |eps: &[f64]| Ok(sup_linear(t, eps));
    if exact {
        enumerate(signs, f)
    } else {
        monte_carlo(signs, Noise::Rademacher, cfg, f)
    }
}

/// `g(T) = E sup_{t∈T} Σ_{j,i} ξ_{ji} t_{ji}` (matrix form). Monte Carlo only,
/// except the closed form `g({t}) = 0`.
pub fn gaussian_complexity(t: &PointSet, cfg: &EstimatorConfig) -> Result<ComplexityEstimate> {
    cfg.check()?;
    if t.len() == 1 {
        return Ok(ComplexityEstimate::closed_form(0.0));
    }
    if cfg.mode == Mode::Exact {
        return invalid("Gaussian complexity has no exact enumeration; use Monte Carlo");
    }
    let signs = t.k() * t.n();
    monte_carlo(signs, Noise::Gaussian, cfg, |eps| Ok(sup_linear(t, eps)))
}

fn prepare_elements<'a>(
    oracle: &'a dyn FunctionClassOracle,
    t: &'a PointSet,
) -> Result<Vec<Box<dyn PreparedSup + 'a>>> {
    t.elements()
        .map(|e| oracle.prepare(Points::new(e, t.k())?))
        .collect()
}

/// `b(F(T)) = E sup_{t∈T} sup_{f∈F} Σ_i ε_i f(t_i)` (composite form, `n`
/// signs). The supremum is joint over `f` and `t`.
pub fn composite_bernoulli_complexity(
    oracle: &dyn FunctionClassOracle,
    t: &PointSet,
    cfg: &EstimatorConfig,
) -> Result<ComplexityEstimate> {
    cfg.check()?;
    let signs = t.n();
    let exact = cfg.use_exact(signs)?;
    let prepared = prepare_elements(oracle, t)?;
    let f = |eps: &[f64]| {
        let mut best = f64::NEG_INFINITY;
        for p in &prepared {
            best = best.max(p.sup(eps)?);
        }
        Ok(best)
    };
    if exact {
        enumerate(signs, f)
    } else {
        monte_carlo(signs, Noise::Rademacher, cfg, f)
    }
}

/// `R̂_n(F) = (1/n) E sup_f Σ_i ε_i f(z_i)` for a class given by its oracle
/// and the sample `z_1..z_n`.
pub fn empirical_rademacher(
    oracle: &dyn FunctionClassOracle,
    sample: Points<'_>,
    cfg: &EstimatorConfig,
) -> Result<ComplexityEstimate> {
    let n = sample.len();
    let t = PointSet::new(sample.k(), n, vec![sample.coords().to_vec()])?;
    Ok(composite_bernoulli_complexity(oracle, &t, cfg)?.scaled(1.0 / n as f64))
}

/// `R̂_n(G)` for a finite class tabulated on the sample: `rows[j][i] = g_j(z_i)`.
pub fn empirical_rademacher_table(rows: &[Vec<f64>], cfg: &EstimatorConfig) -> Result<ComplexityEstimate> {
    cfg.check()?;
    let n = rows.first().map_or(0, Vec::len);
    if n == 0 {
        return invalid("empty table");
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: r.len() });
    }
    let exact = cfg.use_exact(n)?;
    if rows.len() == 1 {
        return Ok(ComplexityEstimate::closed_form(0.0));
    }
    let f = |eps: &[f64]| Ok(rows.iter().map(|r| dot(r, eps)).fold(f64::NEG_INFINITY, f64::max));
    let est = if exact { enumerate(n, f)? } else { monte_carlo(n, Noise::Rademacher, cfg, f)? };
    Ok(est.scaled(1.0 / n as f64))
}

/// Result of [`chain_rule_d`]: the largest estimated ratio and its pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementRatio {
    pub value: f64,
    /// Standard error of the maximising pair's ratio.
    pub std_error: f64,
    /// Ordered pair `(s, t)` of element indices attaining the maximum.
    pub pair: (usize, usize),
    pub method: Method,
    pub samples: u64,
    pub seed: u64,
}

/// `D(F, S) = sup_{s≠t} E sup_f Σ_i ε_i (f(s_i) - f(t_i)) / ‖s - t‖₂`.
///
/// All pairs share the same sign draws. Pairs with `‖s - t‖₂ <
/// DEGENERATE_PAIR` are skipped.
pub fn chain_rule_d(
    oracle: &dyn FunctionClassOracle,
    s: &PointSet,
    cfg: &EstimatorConfig,
) -> Result<IncrementRatio> {
    cfg.check()?;
    if s.len() < 2 {
        return Err(Error::DegenerateSet("need at least two elements".into()));
    }
    let n = s.n();
    let k = s.k();
    let mut pairs = Vec::new();
    let mut joined = Vec::new();
    for a in 0..s.len() {
        for b in 0..s.len() {
            if a == b {
                continue;
            }
            let d = frobenius_distance(s.element(a), s.element(b));
            if d < DEGENERATE_PAIR {
                continue;
            }
            let mut buf = s.element(a).to_vec();
            buf.extend_from_slice(s.element(b));
            pairs.push((a, b, d));
            joined.push(buf);
        }
    }
    if pairs.is_empty() {
        return Err(Error::DegenerateSet("all pairs coincide".into()));
    }
    let prepared = joined
        .iter()
        .map(|buf| oracle.prepare(Points::new(buf, k)?))
        .collect::<Result<Vec<_>>>()?;
    let pair_values = |eps: &[f64]| -> Result<Vec<f64>> {
        let mut c = Vec::with_capacity(2 * n);
        c.extend_from_slice(eps);
        c.extend(eps.iter().map(|e| -e));
        prepared.iter().map(|p| p.sup(&c)).collect()
    };

    let exact = cfg.use_exact(n)?;
    let (means, ses, method, samples) = if exact {
        let total = 1u64 << n;
        let rows = (0..total)
            .into_par_iter()
            .map(|p| {
                let mut eps = vec![0.0; n];
                pattern_signs(p, &mut eps);
                pair_values(&eps)
            })
            .collect::<Result<Vec<_>>>()?;
        let means = (0..pairs.len())
            .map(|q| compensated_sum(rows.iter().map(|r| r[q])) / total as f64)
            .collect::<Vec<_>>();
        (means, vec![0.0; pairs.len()], Method::ExactEnumeration, total)
    } else {
        let rows = par_samples(cfg.seed, cfg.mc_samples, |rng, _| {
            let mut eps = vec![0.0; n];
            rademacher(rng, &mut eps);
            pair_values(&eps)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let mut means = Vec::with_capacity(pairs.len());
        let mut ses = Vec::with_capacity(pairs.len());
        for q in 0..pairs.len() {
            let col: Vec<f64> = rows.iter().map(|r| r[q]).collect();
            let (m, se) = mean_and_std_error(&col);
            means.push(m);
            ses.push(se);
        }
        (means, ses, Method::MonteCarlo, cfg.mc_samples as u64)
    };

    let mut best = 0;
    for q in 1..pairs.len() {
        if means[q] / pairs[q].2 > means[best] / pairs[best].2 {
            best = q;
        }
    }
    let (a, b, d) = pairs[best];
    Ok(IncrementRatio {
        value: (means[best] / d).max(0.0),
        std_error: ses[best] / d,
        pair: (a, b),
        method,
        samples,
        seed: if exact { 0 } else { cfg.seed },
    })
}
