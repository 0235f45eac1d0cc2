//! Finite metric spaces backing covering, entropy and chaining computations.

use crate::error::{invalid, Error, Result};
use crate::geometry::{frobenius_distance, PointSet};

/// Absolute slack allowed when validating the triangle inequality.
pub const TRIANGLE_SLACK: f64 = 1e-9;

/// A finite list of labelled points with a symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    m: usize,
    dist: Vec<f64>,
}

impl FiniteMetricSpace {
    /// Validated constructor: symmetric, zero diagonal, nonnegative, and the
    /// triangle inequality within [`TRIANGLE_SLACK`].
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return invalid("metric space must have at least one point");
        }
        if dist.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: dist.len() });
        }
        let mut flat = vec![0.0; m * m];
        for (i, row) in dist.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: row.len() });
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return invalid(format!("dist[{i}][{j}] = {d} is not a nonnegative real"));
                }
                flat[i * m + j] = d;
            }
        }
        for i in 0..m {
            if flat[i * m + i] != 0.0 {
                return invalid(format!("dist[{i}][{i}] must be 0"));
            }
            for j in 0..i {
                if flat[i * m + j] != flat[j * m + i] {
                    return invalid(format!("dist is not symmetric at ({i}, {j})"));
                }
            }
        }
        let space = Self { labels, m, dist: flat };
        if let Some((i, j, l)) = space.triangle_violation() {
            return invalid(format!(
                "triangle inequality fails: d({i},{j}) > d({i},{l}) + d({l},{j})"
            ));
        }
        Ok(space)
    }

    /// Distances induced by a norm; the triangle inequality holds by
    /// construction and is not re-checked.
    fn from_norm(m: usize, labels: Option<Vec<String>>, d: impl Fn(usize, usize) -> f64) -> Self {
        let mut dist = vec![0.0; m * m];
        for i in 0..m {
            for j in (i + 1)..m {
                let v = d(i, j);
                dist[i * m + j] = v;
                dist[j * m + i] = v;
            }
        }
        let labels = labels.unwrap_or_else(|| (0..m).map(|i| i.to_string()).collect());
        Self { labels, m, dist }
    }

    /// Euclidean distances between points of equal dimension.
    pub fn euclidean(points: &[Vec<f64>]) -> Result<Self> {
        check_rows(points)?;
        Ok(Self::from_norm(points.len(), None, |i, j| {
            frobenius_distance(&points[i], &points[j])
        }))
    }

    /// Uniform (sup) distances between tabulated functions: row `j` holds the
    /// values of function `j` on a common finite point list.
    pub fn uniform(rows: &[Vec<f64>]) -> Result<Self> {
        check_rows(rows)?;
        Ok(Self::from_norm(rows.len(), None, |i, j| {
            rows[i]
                .iter()
                .zip(&rows[j])
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
        }))
    }

    /// Frobenius distances between the elements of `T`.
    pub fn from_pointset(t: &PointSet) -> Self {
        Self::from_norm(t.len(), None, |i, j| {
            frobenius_distance(t.element(i), t.element(j))
        })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.m + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.m..(i + 1) * self.m]
    }

    /// `Δ(T, d)`.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Diameter of a subset of point indices.
    pub fn diameter_of(&self, block: &[usize]) -> f64 {
        let mut best = 0.0_f64;
        for (a, &i) in block.iter().enumerate() {
            for &j in &block[a + 1..] {
                best = best.max(self.dist(i, j));
            }
        }
        best
    }

    /// `sup_t d(t, centers)`.
    pub fn covering_radius(&self, centers: &[usize]) -> f64 {
        (0..self.m)
            .map(|t| {
                centers
                    .iter()
                    .map(|&c| self.dist(t, c))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    /// First `(i, j, l)` with `d(i,j) > d(i,l) + d(l,j) + slack`, if any.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                let dij = self.dist(i, j);
                for l in 0..self.m {
                    if dij > self.dist(i, l) + self.dist(l, j) + TRIANGLE_SLACK {
                        return Some((i, j, l));
                    }
                }
            }
        }
        None
    }
}

fn check_rows(rows: &[Vec<f64>]) -> Result<()> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidInput("metric space must have at least one point".into()))?;
    for r in rows {
        if r.len() != first.len() {
            return Err(Error::DimensionMismatch { expected: first.len(), got: r.len() });
        }
        if r.iter().any(|x| !x.is_finite()) {
            return invalid("non-finite coordinate");
        }
    }
    Ok(())
}

/// Frobenius metric on the elements of `T`.
pub fn metric_space_from_pointset(t: &PointSet) -> FiniteMetricSpace {
    FiniteMetricSpace::from_pointset(t)
}
