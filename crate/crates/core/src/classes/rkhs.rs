//! Balls of the Gaussian-kernel RKHS, `{f : ‖f‖_K ≤ ϱ}` with
//! `K(x, y) = exp(-‖x - y‖² / 2σ²)`.
//!
//! By the reproducing property `Σ c_i f(x_i) = ⟨f, Σ c_i K_{x_i}⟩_K`, so the
//! supremum over the ball is `ϱ ‖Σ c_i K_{x_i}‖_K = ϱ √(cᵀ G c)` with `G` the
//! Gram matrix of the points.

use super::{check_coefficients, FunctionClassOracle, Points, PreparedSup};
use crate::error::{invalid, Error, Result};
use crate::stats::compensated_sum;

/// Quadratic forms `cᵀGc` below `-GRAM_NEGATIVE_TOLERANCE · max(1, Σc_i²)`
/// are reported as errors; smaller negatives are rounding and clamp to 0.
pub const GRAM_NEGATIVE_TOLERANCE: f64 = 1e-12;

pub fn gaussian_kernel(x: &[f64], y: &[f64], sigma: f64) -> f64 {
    let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    (-sq / (2.0 * sigma * sigma)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianRkhsBall {
    pub sigma: f64,
    pub rho: f64,
}

impl GaussianRkhsBall {
    pub fn new(sigma: f64, rho: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) || !(rho > 0.0 && rho.is_finite()) {
            return invalid("RKHS ball needs positive finite sigma and rho");
        }
        Ok(Self { sigma, rho })
    }

    /// Gram matrix of the points, row-major.
    pub fn gram(&self, points: Points<'_>) -> Vec<f64> {
        let n = points.len();
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            g[i * n + i] = 1.0;
            for j in (i + 1)..n {
                let v = gaussian_kernel(points.get(i), points.get(j), self.sigma);
                g[i * n + j] = v;
                g[j * n + i] = v;
            }
        }
        g
    }
}

/// `ϱ √(cᵀ G c)`.
pub fn rkhs_ball_sup(points: Points<'_>, c: &[f64], class: &GaussianRkhsBall) -> Result<f64> {
    class.sup(points, c)
}

struct PreparedRkhs {
    n: usize,
    rho: f64,
    gram: Vec<f64>,
}

impl PreparedSup for PreparedRkhs {
    fn sup(&self, c: &[f64]) -> Result<f64> {
        check_coefficients(self.n, c)?;
        let n = self.n;
        let q = compensated_sum((0..n).flat_map(|i| {
            let row = &self.gram[i * n..(i + 1) * n];
            let ci = c[i];
            row.iter().zip(c).map(move |(g, cj)| ci * g * cj)
        }));
        let scale = c.iter().map(|v| v * v).sum::<f64>().max(1.0);
        if q < -GRAM_NEGATIVE_TOLERANCE * scale {
            return Err(Error::InvalidInput(format!(
                "Gram quadratic form is negative ({q:e}); kernel matrix is not PSD"
            )));
        }
        Ok(self.rho * q.max(0.0).sqrt())
    }
}

impl FunctionClassOracle for GaussianRkhsBall {
    fn lipschitz(&self) -> f64 {
        self.rho / self.sigma
    }

    fn uniform_bound(&self) -> f64 {
        self.rho
    }

    fn prepare<'a>(&'a self, points: Points<'a>) -> Result<Box<dyn PreparedSup + 'a>> {
        if points.coords().iter().any(|v| !v.is_finite()) {
            return invalid("non-finite point coordinate");
        }
        Ok(Box::new(PreparedRkhs { n: points.len(), rho: self.rho, gram: self.gram(points) }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::oracle_convexity_check;
    use crate::rng::substream;
    use rand::Rng;

    #[test]
    fn closed_form_examples() {
        let ball = GaussianRkhsBall::new(0.7, 2.5).unwrap();
        let one = [0.3, -0.2];
        assert_eq!(rkhs_ball_sup(Points::new(&one, 2).unwrap(), &[1.0], &ball).unwrap(), 2.5);
        let same = [0.3, 0.3];
        let v = rkhs_ball_sup(Points::new(&same, 1).unwrap(), &[1.0, -1.0], &ball).unwrap();
        assert_eq!(v, 0.0);

        // ‖x₁ - x₂‖ = σ √(2 ln 2) gives K = 1/2 and √(2 + 2·½) = √3.
        let sigma = 1.3;
        let unit = GaussianRkhsBall::new(sigma, 1.0).unwrap();
        let gap = sigma * (2.0 * 2.0f64.ln()).sqrt();
        let pair = [0.0, gap];
        let p = Points::new(&pair, 1).unwrap();
        assert!((gaussian_kernel(&[0.0], &[gap], sigma) - 0.5).abs() < 1e-15);
        let v = rkhs_ball_sup(p, &[1.0, 1.0], &unit).unwrap();
        assert!((v - 3.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn random_ball_members_stay_below_closed_form() {
        // f = ϱ Σ a_j K_{x_j} / ‖Σ a_j K_{x_j}‖_K has norm ϱ, so
        // Σ c_i f(x_i) = ϱ cᵀGa / √(aᵀGa) ≤ ϱ √(cᵀGc), approaching it as a → c.
        let sigma = 1.3;
        let unit = GaussianRkhsBall::new(sigma, 1.0).unwrap();
        let gap = sigma * (2.0 * 2.0f64.ln()).sqrt();
        let pair = [0.0, gap];
        let g = unit.gram(Points::new(&pair, 1).unwrap());
        let mut rng = substream(2, 0);
        let mut best = f64::NEG_INFINITY;
        for _ in 0..20_000 {
            let a = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let ga = [g[0] * a[0] + g[1] * a[1], g[2] * a[0] + g[3] * a[1]];
            let norm = (a[0] * ga[0] + a[1] * ga[1]).sqrt();
            best = best.max((ga[0] + ga[1]) / norm);
        }
        assert!(best <= 3.0f64.sqrt() + 1e-12);
        assert!(best > 3.0f64.sqrt() - 1e-4);
    }

    #[test]
    fn scales_with_rho_and_is_convex() {
        for s in 0..100 {
            let mut rng = substream(6, s);
            let coords: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
            let p = Points::new(&coords, 2).unwrap();
            let c1: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let c2: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let rho = rng.random_range(0.1..4.0);
            let big = GaussianRkhsBall::new(0.8, rho).unwrap();
            let unit = GaussianRkhsBall::new(0.8, 1.0).unwrap();
            let a = rkhs_ball_sup(p, &c1, &big).unwrap();
            let b = rkhs_ball_sup(p, &c1, &unit).unwrap();
            assert!((a - rho * b).abs() < 1e-12 * (1.0 + a));
            assert!(oracle_convexity_check(&big, p, &c1, &c2, rng.random()).unwrap());
        }
    }

    #[test]
    fn induced_lipschitz_constant() {
        let ball = GaussianRkhsBall::new(0.5, 2.0).unwrap();
        assert_eq!(ball.lipschitz(), 4.0);
        assert!(GaussianRkhsBall::new(0.0, 1.0).is_err());
    }
}
