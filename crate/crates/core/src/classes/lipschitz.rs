//! The bounded Lipschitz ball `{f : ‖f‖_Lip ≤ L, |f| ≤ LR}`.
//!
//! Reduction: for points `x_1..x_n`, `sup_f Σ c_i f(x_i)` equals the maximum
//! of `Σ c_i y_i` over value vectors with `|y_i - y_j| ≤ L‖x_i - x_j‖₂` and
//! `|y_i| ≤ LR`. Every member restricts to such a `y`; conversely any such
//! `y` extends to an `L`-Lipschitz function on `R^k` (McShane), and clipping
//! that extension to `[-LR, LR]` keeps both constraints.
//!
//! For general `k` the reduction is solved as an LP by the dense simplex in
//! [`crate::lp`]. For `k = 1` the pairwise constraints collapse to the
//! adjacent ones along the sorted line and the problem is solved exactly by
//! a dynamic program over concave piecewise-linear value functions.

use super::{check_coefficients, FunctionClassOracle, Points, PreparedSup};
use crate::error::{invalid, Error, Result};
use crate::geometry::frobenius_distance;
use crate::lp::Lp;

/// Maximum `constraints × variables` accepted by the simplex path; equals the
/// dense problem size at `n = 64` (`n(n-1) + n` rows of `n` columns).
pub const EXACT_LP_BUDGET: usize = 64 * (64 * 63 + 64);

/// The class of `L`-Lipschitz functions bounded by `LR` in absolute value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzBall {
    pub lipschitz: f64,
    pub radius: f64,
}

impl LipschitzBall {
    pub fn new(lipschitz: f64, radius: f64) -> Result<Self> {
        if !(lipschitz > 0.0 && lipschitz.is_finite()) || !(radius > 0.0 && radius.is_finite()) {
            return invalid("Lipschitz ball needs positive finite L and R");
        }
        Ok(Self { lipschitz, radius })
    }

    fn bound(&self) -> f64 {
        self.lipschitz * self.radius
    }
}

/// Exact `sup_f Σ c_i f(x_i)` over the bounded Lipschitz ball.
pub fn lipschitz_ball_sup(points: Points<'_>, c: &[f64], lipschitz: f64, radius: f64) -> Result<f64> {
    let ball = LipschitzBall::new(lipschitz, radius)?;
    ball.sup(points, c)
}

/// The simplex route, usable for every `k`.
pub fn lipschitz_ball_sup_simplex(
    points: Points<'_>,
    c: &[f64],
    lipschitz: f64,
    radius: f64,
) -> Result<f64> {
    let ball = LipschitzBall::new(lipschitz, radius)?;
    check_coefficients(points.len(), c)?;
    SimplexSup::new(&ball, points)?.sup(c)
}

/// The one-dimensional dynamic-programming route (`k = 1` only).
pub fn lipschitz_ball_sup_line(
    points: &[f64],
    c: &[f64],
    lipschitz: f64,
    radius: f64,
) -> Result<f64> {
    let ball = LipschitzBall::new(lipschitz, radius)?;
    check_coefficients(points.len(), c)?;
    LineSup::new(&ball, points)?.sup(c)
}

impl FunctionClassOracle for LipschitzBall {
    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn uniform_bound(&self) -> f64 {
        self.bound()
    }

    fn prepare<'a>(&'a self, points: Points<'a>) -> Result<Box<dyn PreparedSup + 'a>> {
        if points.is_empty() {
            return invalid("need at least one point");
        }
        if points.coords().iter().any(|v| !v.is_finite()) {
            return invalid("non-finite point coordinate");
        }
        if points.k() == 1 {
            Ok(Box::new(LineSup::new(self, points.coords())?))
        } else {
            Ok(Box::new(SimplexSup::new(self, points)?))
        }
    }
}

/// LP over shifted values `z_i = y_i + LR ∈ [0, 2LR]`, so the origin is
/// feasible: `z_i - z_j ≤ L d_ij` for every non-implied ordered pair and
/// `z_i ≤ 2LR`.
struct SimplexSup {
    n: usize,
    bound: f64,
    // (i, j, rhs) for `z_i - z_j ≤ rhs`.
    pairs: Vec<(usize, usize, f64)>,
}

impl SimplexSup {
    fn new(ball: &LipschitzBall, points: Points<'_>) -> Result<Self> {
        let n = points.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = frobenius_distance(points.get(i), points.get(j));
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let dij = d[i * n + j];
                // `|y_i - y_j| ≤ L(d_il + d_lj)` already follows from the two
                // constraints through `l`; both are strictly shorter, so the
                // pruning is well founded.
                let implied = (0..n).any(|l| {
                    l != i
                        && l != j
                        && d[i * n + l] > 0.0
                        && d[l * n + j] > 0.0
                        && d[i * n + l] + d[l * n + j] <= dij
                });
                if !implied {
                    let rhs = ball.lipschitz * dij;
                    pairs.push((i, j, rhs));
                    pairs.push((j, i, rhs));
                }
            }
        }
        let rows = pairs.len() + n;
        if rows.saturating_mul(n) > EXACT_LP_BUDGET {
            return Err(Error::InvalidInput(format!(
                "exact Lipschitz LP with {n} points and {rows} constraints exceeds the budget; \
                 use a sampled finite subclass"
            )));
        }
        Ok(Self { n, bound: ball.bound(), pairs })
    }
}

impl PreparedSup for SimplexSup {
    fn sup(&self, c: &[f64]) -> Result<f64> {
        check_coefficients(self.n, c)?;
        let mut lp = Lp::new(c.to_vec());
        for &(i, j, rhs) in &self.pairs {
            lp.add_sparse(&[(i, 1.0), (j, -1.0)], rhs)?;
        }
        for i in 0..self.n {
            lp.add_sparse(&[(i, 1.0)], 2.0 * self.bound)?;
        }
        let rows = lp.num_constraints();
        let sol = lp.maximize(50 * (rows + self.n) + 1000)?;
        Ok(sol.value - self.bound * c.iter().sum::<f64>())
    }
}

/// Points sorted along the line with the window radii `L·gap` between
/// consecutive points.
struct LineSup {
    order: Vec<usize>,
    radii: Vec<f64>,
    bound: f64,
}

impl LineSup {
    fn new(ball: &LipschitzBall, xs: &[f64]) -> Result<Self> {
        if xs.iter().any(|v| !v.is_finite()) {
            return invalid("non-finite point coordinate");
        }
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]).then(a.cmp(&b)));
        let radii = order
            .windows(2)
            .map(|w| ball.lipschitz * (xs[w[1]] - xs[w[0]]))
            .collect();
        Ok(Self { order, radii, bound: ball.bound() })
    }
}

/// Concave piecewise-linear function on `[-B, B]` given by its value at `-B`
/// and consecutive `(length, slope)` pieces with nonincreasing slopes.
struct Concave {
    left_value: f64,
    pieces: Vec<(f64, f64)>,
}

impl Concave {
    /// `W(y) = max { V(y') : |y' - y| ≤ r }` restricted to `[-B, B]`.
    fn window_max(&mut self, r: f64) {
        if r <= 0.0 {
            return;
        }
        let split = self.pieces.iter().position(|&(_, s)| s <= 0.0).unwrap_or(self.pieces.len());
        self.pieces.insert(split, (2.0 * r, 0.0));
        // Drop `r` of length from the left, tracking the value at the new end.
        let mut cut = r;
        let mut drop = 0;
        for piece in self.pieces.iter_mut() {
            if cut <= 0.0 {
                break;
            }
            let take = piece.0.min(cut);
            self.left_value += take * piece.1;
            piece.0 -= take;
            cut -= take;
            if piece.0 <= 0.0 {
                drop += 1;
            }
        }
        self.pieces.drain(..drop);
        let mut cut = r;
        while cut > 0.0 {
            let Some(last) = self.pieces.last_mut() else { break };
            if last.0 <= cut {
                cut -= last.0;
                self.pieces.pop();
            } else {
                last.0 -= cut;
                cut = 0.0;
            }
        }
    }

    /// `V(y) + c y`, with `y = -B` at the left end.
    fn add_linear(&mut self, c: f64, bound: f64) {
        self.left_value -= c * bound;
        for piece in self.pieces.iter_mut() {
            piece.1 += c;
        }
        // Merge equal neighbouring slopes to keep the piece list short.
        self.pieces.dedup_by(|next, prev| {
            if next.1 == prev.1 {
                prev.0 += next.0;
                true
            } else {
                false
            }
        });
    }

    fn maximum(&self) -> f64 {
        self.left_value
            + self
                .pieces
                .iter()
                .filter(|p| p.1 > 0.0)
                .map(|p| p.0 * p.1)
                .sum::<f64>()
    }
}

impl PreparedSup for LineSup {
    fn sup(&self, c: &[f64]) -> Result<f64> {
        check_coefficients(self.order.len(), c)?;
        let b = self.bound;
        let mut v = Concave { left_value: 0.0, pieces: vec![(2.0 * b, 0.0)] };
        for (step, &i) in self.order.iter().enumerate() {
            if step > 0 {
                v.window_max(self.radii[step - 1]);
            }
            v.add_linear(c[i], b);
        }
        Ok(v.maximum())
    }
}
