//! Finite index sets `T ⊂ R^{k×n}` and the mixed norms used to measure them.
//!
//! An element `t ∈ R^{k×n}` is a list of `n` columns `t_1, ..., t_n ∈ R^k`.
//! Elements are stored column-major: entry `t_{ji}` (coordinate `j` of column
//! `i`) lives at `i * k + j`.

use crate::error::{invalid, Error, Result};

/// A finite index set of `k × n` real matrices, kept in insertion order.
///
/// Duplicates are legal; no deduplication is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    k: usize,
    n: usize,
    elements: Vec<Vec<f64>>,
}

impl PointSet {
    /// Builds a set from column-major element buffers of length `k * n`.
    pub fn new(k: usize, n: usize, elements: Vec<Vec<f64>>) -> Result<Self> {
        if k == 0 || n == 0 {
            return invalid(format!("k and n must be positive (k={k}, n={n})"));
        }
        if elements.is_empty() {
            return invalid("point set must contain at least one element");
        }
        for (e, t) in elements.iter().enumerate() {
            if t.len() != k * n {
                return Err(Error::DimensionMismatch {
                    expected: k * n,
                    got: t.len(),
                });
            }
            if let Some(pos) = t.iter().position(|x| !x.is_finite()) {
                return invalid(format!("element {e} has non-finite entry at {pos}"));
            }
        }
        Ok(Self { k, n, elements })
    }

    /// Builds a set of `k = 1` elements, each given as a row vector in `R^n`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        Self::new(1, n, rows)
    }

    /// Builds a set from elements given as lists of columns.
    pub fn from_columns(elements: &[Vec<Vec<f64>>]) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidInput("empty point set".into()))?;
        let n = first.len();
        let k = first.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(elements.len());
        for t in elements {
            if t.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: t.len() });
            }
            let mut buf = Vec::with_capacity(k * n);
            for col in t {
                if col.len() != k {
                    return Err(Error::DimensionMismatch { expected: k, got: col.len() });
                }
                buf.extend_from_slice(col);
            }
            flat.push(buf);
        }
        Self::new(k, n, flat)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of elements `|T|`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Column-major buffer of element `e`.
    pub fn element(&self, e: usize) -> &[f64] {
        &self.elements[e]
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.elements.iter().map(Vec::as_slice)
    }

    /// Column `i` of element `e`, a point in `R^k`.
    pub fn column(&self, e: usize, i: usize) -> &[f64] {
        &self.elements[e][i * self.k..(i + 1) * self.k]
    }

    pub fn columns(&self, e: usize) -> std::slice::ChunksExact<'_, f64> {
        self.elements[e].chunks_exact(self.k)
    }

    /// The sub-set made of the listed elements, in the listed order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut out = Vec::with_capacity(indices.len());
        for &i in indices {
            match self.elements.get(i) {
                Some(t) => out.push(t.clone()),
                None => return invalid(format!("element index {i} out of range")),
            }
        }
        Self::new(self.k, self.n, out)
    }

    /// `{t - t0 : t ∈ T}`.
    pub fn translate(&self, t0: &[f64]) -> Result<Self> {
        if t0.len() != self.k * self.n {
            return Err(Error::DimensionMismatch {
                expected: self.k * self.n,
                got: t0.len(),
            });
        }
        let elements = self
            .elements
            .iter()
            .map(|t| t.iter().zip(t0).map(|(a, b)| a - b).collect())
            .collect();
        Self::new(self.k, self.n, elements)
    }

    /// `αT`.
    pub fn scale(&self, alpha: f64) -> Result<Self> {
        let elements = self
            .elements
            .iter()
            .map(|t| t.iter().map(|x| alpha * x).collect())
            .collect();
        Self::new(self.k, self.n, elements)
    }

    /// `‖T‖_{p,q} = sup_{t∈T} ‖t‖_{p,q}`.
    pub fn sup_norm_pq(&self, p: f64, q: f64) -> Result<f64> {
        let mut best = 0.0_f64;
        for t in self.elements() {
            best = best.max(norm_pq(t, self.k, p, q)?);
        }
        Ok(best)
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return invalid(format!("norm exponent must lie in [1, inf], got {p}"));
    }
    Ok(())
}

/// `ℓ^p` norm of a vector; `p = f64::INFINITY` is a max-reduction.
pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p == f64::INFINITY {
        x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    } else if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    } else {
        let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let s: f64 = x.iter().map(|v| (v.abs() / scale).powf(p)).sum();
        scale * s.powf(1.0 / p)
    }
}

/// `‖t‖_{p,q}`: the `q`-norm of the vector of column `p`-norms of a
/// column-major `k × n` buffer.
pub fn norm_pq(t: &[f64], k: usize, p: f64, q: f64) -> Result<f64> {
    check_exponent(p)?;
    check_exponent(q)?;
    if k == 0 || t.len() % k != 0 {
        return Err(Error::DimensionMismatch {
            expected: k.max(1),
            got: t.len(),
        });
    }
    if t.iter().any(|x| !x.is_finite()) {
        return invalid("non-finite entry");
    }
    let cols: Vec<f64> = t.chunks_exact(k).map(|c| lp_norm(c, p)).collect();
    Ok(lp_norm(&cols, q))
}

/// Frobenius distance between two buffers of equal length.
pub fn frobenius_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `Δ₂(T)`: largest Frobenius distance between two elements; 0 for singletons.
pub fn diameter2(t: &PointSet) -> f64 {
    let mut best = 0.0_f64;
    for i in 0..t.len() {
        for j in (i + 1)..t.len() {
            best = best.max(frobenius_distance(t.element(i), t.element(j)));
        }
    }
    best
}
