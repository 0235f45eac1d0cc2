//! The doubly exponential tail series `p(u) = Σ_{m≥1} 2^{2^{m+1+w}} e^{-u² 2^{m-1}}`,
//! its cap `q = min(p, 1)`, the expectation constant `C_w = ∫₀^∞ q`, and
//! the un-centred sub-Gaussian tail.
//!
//! Everything is evaluated in log space: term `m` has logarithm
//! `2^{m-1} (2^{w+2} ln 2 - u²)`, so the series diverges exactly when
//! `u² ≤ 2^{w+2} ln 2`, in which case `q = 1`.

use std::f64::consts::LN_2;

use crate::error::{invalid, Error, Result};

/// Integration window beyond `u*` before the analytic remainder takes over.
const QUAD_WINDOW: f64 = 20.0;
const QUAD_REL_TOL: f64 = 1e-8;
const QUAD_MAX_DEPTH: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSeriesParams {
    pub w: u32,
    /// Terms smaller than this fraction of the running sum end the series.
    pub truncation_floor: f64,
}

impl Default for TailSeriesParams {
    fn default() -> Self {
        Self { w: 0, truncation_floor: 1e-300 }
    }
}

impl TailSeriesParams {
    pub fn new(w: u32) -> Self {
        Self { w, ..Self::default() }
    }

    fn check(&self) -> Result<()> {
        if !(self.truncation_floor > 0.0 && self.truncation_floor < 1.0) {
            return invalid("truncation_floor must lie in (0, 1)");
        }
        if self.w > 60 {
            return invalid("w above 60 is not representable");
        }
        Ok(())
    }

    /// `2^{w+2} ln 2`; the series converges iff `u²` exceeds it.
    pub fn divergence_threshold(&self) -> f64 {
        ((self.w + 2) as f64).exp2() * LN_2
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

fn check_u(u: f64) -> Result<()> {
    if !(u > 0.0 && u.is_finite()) {
        return invalid(format!("u = {u} must be a positive real"));
    }
    Ok(())
}

/// `ln p(u)`; `+∞` when the series diverges.
pub fn log_tail_series_p(u: f64, params: &TailSeriesParams) -> Result<f64> {
    check_u(u)?;
    params.check()?;
    let a = params.divergence_threshold() - u * u;
    if a >= 0.0 {
        return Ok(f64::INFINITY);
    }
    let cut = params.truncation_floor.ln();
    let mut sum = f64::NEG_INFINITY;
    let mut half_pow = 1.0; // 2^{m-1}
    loop {
        let t = half_pow * a;
        if sum != f64::NEG_INFINITY && t <= sum + cut {
            return Ok(sum);
        }
        sum = log_add(sum, t);
        half_pow *= 2.0;
        if t == f64::NEG_INFINITY {
            return Ok(sum);
        }
    }
}

/// `ln Σ_{m=1}^{terms}` of the series terms, without truncation.
pub fn log_tail_series_partial(u: f64, params: &TailSeriesParams, terms: u32) -> Result<f64> {
    check_u(u)?;
    params.check()?;
    let a = params.divergence_threshold() - u * u;
    Ok((1..=terms).fold(f64::NEG_INFINITY, |s, m| log_add(s, ((m - 1) as f64).exp2() * a)))
}

/// `p(u)`, possibly `+∞`.
pub fn tail_series_p(u: f64, params: &TailSeriesParams) -> Result<f64> {
    Ok(log_tail_series_p(u, params)?.exp())
}

/// `q(u) = min(p(u), 1)`.
pub fn tail_series_q(u: f64, params: &TailSeriesParams) -> Result<f64> {
    Ok(tail_series_p(u, params)?.min(1.0))
}

/// `(ln p(u), d/du ln p(u))` in one pass over the terms, on the convergent
/// range. Terms are scaled by the leading one, `e^a` with `a = thr - u²`.
fn log_p_and_slope(u: f64, params: &TailSeriesParams) -> (f64, f64) {
    let a = params.divergence_threshold() - u * u;
    if a >= 0.0 {
        return (f64::INFINITY, f64::NAN);
    }
    let cut = params.truncation_floor.ln();
    let (mut sum, mut slope) = (0.0, 0.0);
    let mut half_pow = 1.0;
    loop {
        let rel = (half_pow - 1.0) * a;
        if half_pow > 1.0 && rel <= cut {
            break;
        }
        let e = rel.exp();
        sum += e;
        slope += e * half_pow;
        half_pow *= 2.0;
    }
    (a + sum.ln(), -2.0 * u * slope / sum)
}

/// The `u > threshold` with `ln p(u) = target`, by safeguarded Newton steps.
fn solve_log_p(target: f64, params: &TailSeriesParams) -> Result<f64> {
    let thr = params.divergence_threshold();
    // ln p ≥ its m = 1 term thr - u², so the root lies at or beyond √(thr - target).
    let mut lo = (thr - target).max(thr).sqrt();
    let mut hi = lo + 1.0;
    while log_tail_series_p(hi, params)? > target {
        lo = hi;
        hi *= 2.0;
    }
    let mut u = lo;
    for _ in 0..200 {
        let (lp, dlp) = log_p_and_slope(u, params);
        if lp > target {
            lo = u;
        } else {
            hi = u;
        }
        if lp == target || hi - lo <= 2.0 * f64::EPSILON * hi {
            return Ok(u);
        }
        let step = u - (lp - target) / dlp;
        if (step - u).abs() <= 8.0 * f64::EPSILON * u {
            return Ok(step.clamp(lo, hi));
        }
        if step.is_finite() && step > lo && step < hi {
            u = step;
        } else {
            u = 0.5 * (lo + hi);
        }
    }
    Err(Error::Solver(format!("tail inverse did not converge for ln q = {target}")))
}

/// Generalised inverse of `q`: the `u` with `q(u) = v` for `v ∈ (0, 1)`,
/// and `u*` for `v = 1`.
pub fn tail_q_inverse(v: f64, params: &TailSeriesParams) -> Result<f64> {
    if !(v > 0.0 && v <= 1.0) {
        return invalid(format!("v = {v} must lie in (0, 1]"));
    }
    params.check()?;
    solve_log_p(v.ln(), params)
}

/// `u*`, the crossing `p(u*) = 1`; `q = 1` on `(0, u*]`.
pub fn tail_crossing(params: &TailSeriesParams) -> Result<f64> {
    tail_q_inverse(1.0, params)
}

fn simpson(f: &impl Fn(f64) -> Result<f64>, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!("adaptive Simpson did not converge on [{a}, {b}]")));
    }
    Ok(simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}

/// `∫_a^b f` by adaptive Simpson with the given absolute tolerance.
fn adaptive_simpson(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (fa, fb, fm) = (f(a)?, f(b)?, f(0.5 * (a + b))?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, a, b, fa, fm, fb, whole, tol, QUAD_MAX_DEPTH)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailExpectationBound {
    /// `C_w ϱ + ζ`.
    pub bound: f64,
    /// `C_w = ∫₀^∞ q(u) du`.
    pub c_w: f64,
    /// Crossing point `p(u*) = 1`.
    pub u_star: f64,
}

/// `C_w = u* + ∫_{u*}^{u*+20} p + R`, where `R ≤ p(U)/(2U)` bounds the tail
/// beyond `U = u* + 20` (each term has `u²`-coefficient at least 1).
pub fn tail_constant(params: &TailSeriesParams) -> Result<(f64, f64)> {
    let u_star = tail_crossing(params)?;
    let upper = u_star + QUAD_WINDOW;
    let p = |u: f64| tail_series_p(u, params).map(|v| v.min(1.0));
    // p decays at least like e^{-(u² - u*²)}, so its integral is below
    // √π / 2; refine the tolerance against a coarse first pass.
    let coarse = adaptive_simpson(p, u_star, upper, 1e-4)?;
    let body = adaptive_simpson(p, u_star, upper, QUAD_REL_TOL * (u_star + coarse))?;
    let rest = tail_series_p(upper, params)? / (2.0 * upper);
    Ok((u_star + body + rest, u_star))
}

/// `E Y ≤ C_w ϱ + ζ` for nonnegative `Y` with `P(Y > uϱ + ζ) ≤ q(u)`.
pub fn expectation_bound_from_tail(rho_scale: f64, zeta_shift: f64, params: &TailSeriesParams) -> Result<TailExpectationBound> {
    if !(rho_scale > 0.0 && rho_scale.is_finite()) {
        return invalid("rho_scale must be positive");
    }
    if !(zeta_shift >= 0.0 && zeta_shift.is_finite()) {
        return invalid("zeta_shift must be nonnegative");
    }
    let (c_w, u_star) = tail_constant(params)?;
    Ok(TailExpectationBound { bound: c_w * rho_scale + zeta_shift, c_w, u_star })
}

/// `min(1, e^{a² - u²/2})`: the tail of `Y` given `P(Y - a > u) ≤ e^{-u²}`.
pub fn uncenter_tail(a: f64, u: f64) -> Result<f64> {
    check_u(u)?;
    if !a.is_finite() {
        return invalid("a must be finite");
    }
    Ok((a * a - u * u / 2.0).exp().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_examples() {
        let p0 = TailSeriesParams::new(0);
        let v = tail_series_p(10.0, &p0).unwrap();
        let hand = (16f64.ln() - 100.0).exp() + (256f64.ln() - 200.0).exp();
        assert!((v / hand - 1.0).abs() < 1e-13, "{v} vs {hand}");
        assert!((v / 5.95e-43 - 1.0).abs() < 2e-3);
        assert!(tail_series_p(1.0, &p0).unwrap() > 1.0);
        assert_eq!(tail_series_q(1.0, &p0).unwrap(), 1.0);
        assert!(tail_series_p(0.0, &p0).is_err());
        assert!(tail_series_p(-1.0, &p0).is_err());
    }

    #[test]
    fn monotone_in_u_and_w() {
        for w in 0..4 {
            let p = TailSeriesParams::new(w);
            let q = TailSeriesParams::new(w + 1);
            let mut prev = f64::INFINITY;
            for i in 1..200 {
                let u = 0.05 * i as f64;
                let lp = log_tail_series_p(u, &p).unwrap();
                assert!(lp < log_tail_series_p(u, &q).unwrap() || lp == f64::INFINITY);
                assert!(lp < prev || prev == f64::INFINITY);
                prev = lp;
            }
        }
    }

    #[test]
    fn log_space_matches_direct_partial_sums() {
        for w in 0..=2u32 {
            let p = TailSeriesParams::new(w);
            for i in 0..40 {
                let u = 3.0 + 0.25 * i as f64;
                for terms in 1..=4u32 {
                    let direct: f64 = (1..=terms)
                        .map(|m| (2f64).powi(1 << (m + 1 + w)) * (-u * u * ((m - 1) as f64).exp2()).exp())
                        .sum();
                    if direct == 0.0 || !direct.is_finite() {
                        continue;
                    }
                    let logv = log_tail_series_partial(u, &p, terms).unwrap();
                    assert!((logv.exp() / direct - 1.0).abs() < 1e-12, "w={w} u={u} terms={terms}");
                }
            }
        }
    }

    #[test]
    fn crossing_and_constant() {
        let p = TailSeriesParams::new(0);
        let b = expectation_bound_from_tail(1.0, 0.0, &p).unwrap();
        assert!((tail_series_p(b.u_star, &p).unwrap() - 1.0).abs() < 1e-12);
        assert!(b.u_star > (4.0 * LN_2).sqrt() && b.u_star < 2.0);
        assert!(b.c_w > b.u_star);
        let b2 = expectation_bound_from_tail(2.0, 0.3, &p).unwrap();
        assert!(((b2.bound - 0.3) - 2.0 * b.bound).abs() < 1e-12);
        let mut prev = 0.0;
        for w in 0..6 {
            let c = tail_constant(&TailSeriesParams::new(w)).unwrap().0;
            assert!(c > prev);
            prev = c;
        }
        assert!(expectation_bound_from_tail(0.0, 0.0, &p).is_err());
    }

    #[test]
    fn constant_matches_fine_trapezoid() {
        let p = TailSeriesParams::new(1);
        let (c, u_star) = tail_constant(&p).unwrap();
        let h = 1e-5;
        let steps = (6.0 / h) as usize;
        let f = |u: f64| tail_series_q(u, &p).unwrap();
        let mut s = 0.5 * (f(u_star) + f(u_star + 6.0));
        for i in 1..steps {
            s += f(u_star + i as f64 * h);
        }
        assert!((u_star + s * h - c).abs() < 1e-8, "{c} vs {}", u_star + s * h);
    }

    #[test]
    fn inverse_round_trip() {
        for w in 0..3 {
            let p = TailSeriesParams::new(w);
            for v in [1.0, 0.9, 0.5, 1e-3, 1e-12, 1e-200] {
                let u = tail_q_inverse(v, &p).unwrap();
                let back = tail_series_p(u, &p).unwrap();
                assert!((back / v - 1.0).abs() < 1e-10, "w={w} v={v} back={back}");
            }
        }
        assert!(tail_q_inverse(0.0, &TailSeriesParams::new(0)).is_err());
    }

    #[test]
    fn uncenter_examples() {
        assert!((uncenter_tail(0.0, 2.0).unwrap() - (-2f64).exp()).abs() < 1e-16);
        assert_eq!(uncenter_tail(3.0, 0.1).unwrap(), 1.0);
        for i in 1..100 {
            assert!(uncenter_tail(0.7, i as f64 * 0.3).unwrap() <= 1.0);
        }
        assert!(uncenter_tail(0.0, 0.0).is_err());
    }
}
