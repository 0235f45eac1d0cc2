//! Dense dictionary simplex for `max cᵀx  s.t.  Ax ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! Since `b ≥ 0` the origin is feasible and no phase-one is needed. The
//! dictionary keeps one row per constraint and one column per nonbasic
//! variable, so memory is `m × n` rather than `m × (n + m)`.
//!
//! Pivoting uses the largest reduced cost while the objective strictly
//! improves and falls back to Bland's rule (lowest-index entering and
//! leaving variables) after any degenerate pivot, which rules out cycling.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: f64,
    /// Optimal structural variables.
    pub x: Vec<f64>,
    pub pivots: usize,
}

/// Dense LP in inequality form with a nonnegative right-hand side.
#[derive(Debug, Clone)]
pub struct Lp {
    n: usize,
    objective: Vec<f64>,
    // Row-major constraint coefficients, `rows × n`.
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Lp {
    pub fn new(objective: Vec<f64>) -> Self {
        Self { n: objective.len(), objective, a: Vec::new(), b: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_constraints(&self) -> usize {
        self.b.len()
    }

    /// Adds `Σ coeffs_j x_j ≤ rhs`; `rhs` must be nonnegative.
    pub fn add_dense(&mut self, coeffs: &[f64], rhs: f64) -> Result<()> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: coeffs.len() });
        }
        self.check_rhs(rhs)?;
        self.a.extend_from_slice(coeffs);
        self.b.push(rhs);
        Ok(())
    }

    /// Adds `Σ v x_j ≤ rhs` for sparse `(j, v)` terms.
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], rhs: f64) -> Result<()> {
        self.check_rhs(rhs)?;
        let start = self.a.len();
        self.a.resize(start + self.n, 0.0);
        for &(j, v) in terms {
            if j >= self.n {
                self.a.truncate(start);
                return Err(Error::DimensionMismatch { expected: self.n, got: j + 1 });
            }
            self.a[start + j] += v;
        }
        self.b.push(rhs);
        Ok(())
    }

    fn check_rhs(&self, rhs: f64) -> Result<()> {
        if !(rhs >= 0.0) || !rhs.is_finite() {
            return Err(Error::InvalidInput(format!(
                "right-hand side must be finite and nonnegative, got {rhs}"
            )));
        }
        Ok(())
    }

    /// Solves the LP; `max_pivots` bounds the work before reporting failure.
    pub fn maximize(&self, max_pivots: usize) -> Result<LpSolution> {
        let n = self.n;
        let m = self.b.len();
        let mut tab = self.a.clone();
        let mut rhs = self.b.clone();
        let mut cost = self.objective.clone();
        let mut z = 0.0_f64;
        // Variable ids: 0..n structural, n..n+m slack.
        let mut nonbasic: Vec<usize> = (0..n).collect();
        let mut basic: Vec<usize> = (n..n + m).collect();
        let mut bland = false;
        let mut pivots = 0usize;

        loop {
            let entering = if bland {
                (0..n)
                    .filter(|&j| cost[j] > COST_EPS)
                    .min_by_key(|&j| nonbasic[j])
            } else {
                let mut best: Option<usize> = None;
                for j in 0..n {
                    if cost[j] > COST_EPS && best.is_none_or(|b| cost[j] > cost[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(e) = entering else { break };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let coef = tab[r * n + e];
                if coef > PIVOT_EPS {
                    let ratio = rhs[r] / coef;
                    match leave {
                        None => leave = Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio || (ratio == lratio && basic[r] < basic[lr]) {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Err(Error::Solver(format!(
                    "unbounded objective along variable {} after {pivots} pivots",
                    nonbasic[e]
                )));
            };

            if pivots >= max_pivots {
                return Err(Error::Solver(format!(
                    "no convergence after {pivots} pivots ({m} constraints, {n} variables, \
                     objective {z})"
                )));
            }
            pivots += 1;
            bland = ratio <= 0.0;

            let p = tab[r * n + e];
            let inv = 1.0 / p;
            rhs[r] *= inv;
            {
                let row = &mut tab[r * n..(r + 1) * n];
                for (j, v) in row.iter_mut().enumerate() {
                    if j == e {
                        *v = inv;
                    } else {
                        *v *= inv;
                    }
                }
            }
            let pivot_row: Vec<f64> = tab[r * n..(r + 1) * n].to_vec();
            for i in 0..m {
                if i == r {
                    continue;
                }
                let f = tab[i * n + e];
                if f == 0.0 {
                    continue;
                }
                rhs[i] -= f * rhs[r];
                if rhs[i] < 0.0 && rhs[i] > -1e-12 {
                    rhs[i] = 0.0;
                }
                let row = &mut tab[i * n..(i + 1) * n];
                for (j, v) in row.iter_mut().enumerate() {
                    if j == e {
                        *v = -f * inv;
                    } else {
                        *v -= f * pivot_row[j];
                    }
                }
            }
            let ce = cost[e];
            z += ce * rhs[r];
            for (j, c) in cost.iter_mut().enumerate() {
                if j == e {
                    *c = -ce * inv;
                } else {
                    *c -= ce * pivot_row[j];
                }
            }
            std::mem::swap(&mut basic[r], &mut nonbasic[e]);
        }

        let mut x = vec![0.0; n];
        for (r, &var) in basic.iter().enumerate() {
            if var < n {
                x[var] = rhs[r];
            }
        }
        Ok(LpSolution { value: z, x, pivots })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y  s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18  => (2, 6), value 36
        let mut lp = Lp::new(vec![3.0, 5.0]);
        lp.add_dense(&[1.0, 0.0], 4.0).unwrap();
        lp.add_dense(&[0.0, 2.0], 12.0).unwrap();
        lp.add_dense(&[3.0, 2.0], 18.0).unwrap();
        let s = lp.maximize(100).unwrap();
        assert!((s.value - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's classic cycling example (in max form), with rhs 0 rows.
        let mut lp = Lp::new(vec![0.75, -20.0, 0.5, -6.0]);
        lp.add_dense(&[0.25, -8.0, -1.0, 9.0], 0.0).unwrap();
        lp.add_dense(&[0.5, -12.0, -0.5, 3.0], 0.0).unwrap();
        lp.add_dense(&[0.0, 0.0, 1.0, 0.0], 1.0).unwrap();
        let s = lp.maximize(1000).unwrap();
        assert!((s.value - 1.25).abs() < 1e-12, "value {}", s.value);
    }

    #[test]
    fn unbounded_and_bad_rhs() {
        let mut lp = Lp::new(vec![1.0]);
        lp.add_dense(&[-1.0], 1.0).unwrap();
        assert!(matches!(lp.maximize(10), Err(Error::Solver(_))));
        assert!(lp.add_dense(&[1.0], -1.0).is_err());
        assert!(lp.add_sparse(&[(3, 1.0)], 1.0).is_err());
    }

    #[test]
    fn zero_objective_is_origin() {
        let mut lp = Lp::new(vec![0.0, 0.0]);
        lp.add_sparse(&[(0, 1.0), (1, 1.0)], 1.0).unwrap();
        let s = lp.maximize(10).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.pivots, 0);
    }
}
