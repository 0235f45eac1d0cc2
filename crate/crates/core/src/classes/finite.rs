use std::collections::HashMap;

use rand::Rng;

use super::{check_coefficients, FunctionClassOracle, Points, PreparedSup};
use crate::error::{invalid, Error, Result};
use crate::geometry::frobenius_distance;

/// Absolute slack for the tabulated bound and Lipschitz checks, covering
/// rounding in the tabulation only.
const TABLE_SLACK: f64 = 1e-12;

/// A finite class tabulated on a fixed point list: `table[j][i] = f_j(x_i)`.
#[derive(Debug, Clone)]
pub struct FiniteFunctionClass {
    k: usize,
    domain: Vec<Vec<f64>>,
    table: Vec<Vec<f64>>,
    lipschitz: f64,
    bound: f64,
    index: HashMap<Vec<u64>, usize>,
}

fn key(x: &[f64]) -> Vec<u64> {
    // +0.0 and -0.0 must map to the same column.
    x.iter().map(|v| (v + 0.0).to_bits()).collect()
}

impl FiniteFunctionClass {
    /// Validates `|table[j][i]| ≤ B` and
    /// `|table[j][i] - table[j][i']| ≤ L ‖x_i - x_i'‖₂` on all tabulated pairs.
    pub fn new(
        domain: Vec<Vec<f64>>,
        table: Vec<Vec<f64>>,
        lipschitz: f64,
        bound: f64,
    ) -> Result<Self> {
        if !(lipschitz > 0.0) || !(bound > 0.0) {
            return invalid("L and B must be positive");
        }
        let n = domain.len();
        if n == 0 || table.is_empty() {
            return invalid("finite class needs at least one point and one function");
        }
        let k = domain[0].len();
        if k == 0 {
            return invalid("domain points must have positive dimension");
        }
        let mut index = HashMap::with_capacity(n);
        for (i, x) in domain.iter().enumerate() {
            if x.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: x.len() });
            }
            if x.iter().any(|v| !v.is_finite()) {
                return invalid(format!("domain point {i} is not finite"));
            }
            if index.insert(key(x), i).is_some() {
                return invalid(format!("domain point {i} is duplicated"));
            }
        }
        for (j, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for (i, &v) in row.iter().enumerate() {
                if !v.is_finite() || v.abs() > bound + TABLE_SLACK {
                    return invalid(format!("f_{j}(x_{i}) = {v} exceeds the uniform bound {bound}"));
                }
            }
            for i in 0..n {
                for i2 in (i + 1)..n {
                    let d = frobenius_distance(&domain[i], &domain[i2]);
                    if (row[i] - row[i2]).abs() > lipschitz * d + TABLE_SLACK {
                        return invalid(format!(
                            "f_{j} is not {lipschitz}-Lipschitz between x_{i} and x_{i2}"
                        ));
                    }
                }
            }
        }
        Ok(Self { k, domain, table, lipschitz, bound, index })
    }

    /// Random `L`-Lipschitz piecewise-linear functions on `[-R, R]` (`k = 1`):
    /// slopes uniform in `[-L, L]` on a 32-cell grid, a uniform starting value
    /// in `[-LR, LR]`, values clipped to `[-LR, LR]`, tabulated at `points`.
    pub fn sample_piecewise_linear<Rg: Rng + ?Sized>(
        rng: &mut Rg,
        points: &[f64],
        count: usize,
        lipschitz: f64,
        radius: f64,
    ) -> Result<Self> {
        const CELLS: usize = 32;
        if points.iter().any(|x| x.abs() > radius) {
            return invalid("sample points must lie in [-R, R]");
        }
        let b = lipschitz * radius;
        let h = 2.0 * radius / CELLS as f64;
        let mut table = Vec::with_capacity(count);
        for _ in 0..count {
            let mut knots = Vec::with_capacity(CELLS + 1);
            knots.push(rng.random_range(-b..=b));
            for c in 0..CELLS {
                let slope = rng.random_range(-lipschitz..=lipschitz);
                knots.push(knots[c] + slope * h);
            }
            let row = points
                .iter()
                .map(|&x| {
                    let s = ((x + radius) / h).clamp(0.0, CELLS as f64);
                    let c = (s.floor() as usize).min(CELLS - 1);
                    let t = s - c as f64;
                    let v = knots[c] + (knots[c + 1] - knots[c]) * t;
                    v.clamp(-b, b)
                })
                .collect();
            table.push(row);
        }
        let domain = points.iter().map(|&x| vec![x]).collect();
        Self::new(domain, table, lipschitz, b)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of functions `r`.
    pub fn num_functions(&self) -> usize {
        self.table.len()
    }

    /// Number of tabulated points `n`.
    pub fn num_points(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[Vec<f64>] {
        &self.domain
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    /// Column of the tabulated point equal to `x`.
    pub fn column_of(&self, x: &[f64]) -> Option<usize> {
        self.index.get(&key(x)).copied()
    }

    /// `max_j Σ_i c_i table[j][i]`.
    pub fn finite_class_sup(&self, c: &[f64]) -> Result<f64> {
        check_coefficients(self.num_points(), c)?;
        Ok(self
            .table
            .iter()
            .map(|row| row.iter().zip(c).map(|(v, ci)| v * ci).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max))
    }
}

struct PreparedFinite<'a> {
    class: &'a FiniteFunctionClass,
    columns: Vec<usize>,
}

impl PreparedSup for PreparedFinite<'_> {
    fn sup(&self, c: &[f64]) -> Result<f64> {
        check_coefficients(self.columns.len(), c)?;
        Ok(self
            .class
            .table
            .iter()
            .map(|row| self.columns.iter().zip(c).map(|(&i, ci)| row[i] * ci).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max))
    }
}

impl FunctionClassOracle for FiniteFunctionClass {
    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn uniform_bound(&self) -> f64 {
        self.bound
    }

    fn prepare<'a>(&'a self, points: Points<'a>) -> Result<Box<dyn PreparedSup + 'a>> {
        if points.k() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: points.k() });
        }
        let columns = points
            .iter()
            .map(|x| {
                self.column_of(x)
                    .ok_or_else(|| Error::InvalidInput(format!("point {x:?} is not tabulated")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Box::new(PreparedFinite { class: self, columns }))
    }

    fn eval(&self, f: usize, x: &[f64]) -> Option<f64> {
        let i = self.column_of(x)?;
        self.table.get(f).map(|row| row[i])
    }
}

/// A class with exactly one member given as a closure.
pub struct SingleFunction<F> {
    f: F,
    lipschitz: f64,
    bound: f64,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> SingleFunction<F> {
    pub fn new(f: F, lipschitz: f64, bound: f64) -> Self {
        Self { f, lipschitz, bound }
    }
}

struct PreparedSingle {
    values: Vec<f64>,
}

impl PreparedSup for PreparedSingle {
    fn sup(&self, c: &[f64]) -> Result<f64> {
        check_coefficients(self.values.len(), c)?;
        Ok(self.values.iter().zip(c).map(|(v, ci)| v * ci).sum())
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FunctionClassOracle for SingleFunction<F> {
    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn uniform_bound(&self) -> f64 {
        self.bound
    }

    fn prepare<'a>(&'a self, points: Points<'a>) -> Result<Box<dyn PreparedSup + 'a>> {
        let values = points.iter().map(|x| (self.f)(x)).collect();
        Ok(Box::new(PreparedSingle { values }))
    }

    fn eval(&self, f: usize, x: &[f64]) -> Option<f64> {
        (f == 0).then(|| (self.f)(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::oracle_convexity_check;
    use crate::rng::substream;

    fn grid(n: usize) -> Vec<Vec<f64>> {
        (0..n).map(|i| vec![i as f64]).collect()
    }

    #[test]
    fn finite_sup_examples() {
        let one = FiniteFunctionClass::new(grid(2), vec![vec![2.0, 3.0]], 1.0, 3.0).unwrap();
        assert_eq!(one.finite_class_sup(&[1.0, 1.0]).unwrap(), 5.0);
        let two = FiniteFunctionClass::new(grid(2), vec![vec![1.0, 0.0], vec![0.0, 1.0]], 1.0, 1.0)
            .unwrap();
        assert_eq!(two.finite_class_sup(&[1.0, -1.0]).unwrap(), 1.0);
        assert_eq!(two.finite_class_sup(&[0.0, 0.0]).unwrap(), 0.0);
        assert!(two.finite_class_sup(&[1.0]).is_err());
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(FiniteFunctionClass::new(grid(2), vec![vec![0.0, 2.0]], 1.0, 5.0).is_err());
        assert!(FiniteFunctionClass::new(grid(2), vec![vec![0.0, 1.0]], 1.0, 0.5).is_err());
        assert!(FiniteFunctionClass::new(vec![vec![0.0], vec![0.0]], vec![vec![0.0, 0.0]], 1.0, 1.0)
            .is_err());
    }

    #[test]
    fn oracle_looks_up_points() {
        let c = FiniteFunctionClass::new(grid(3), vec![vec![0.0, 1.0, 0.5]], 1.0, 1.0).unwrap();
        let pts = [2.0, 1.0, 1.0];
        let v = c.sup(Points::new(&pts, 1).unwrap(), &[1.0, 1.0, -1.0]).unwrap();
        assert_eq!(v, 0.5);
        assert!(c.sup(Points::new(&[0.5], 1).unwrap(), &[1.0]).is_err());
        assert_eq!(c.eval(0, &[-0.0]), Some(0.0));
    }

    #[test]
    fn sampled_classes_pass_their_invariants() {
        let pts: Vec<f64> = (0..64).map(|i| -1.0 + 2.0 * i as f64 / 63.0).collect();
        for s in 0..20 {
            let mut rng = substream(11, s);
            let c = FiniteFunctionClass::sample_piecewise_linear(&mut rng, &pts, 25, 1.5, 1.0)
                .unwrap();
            assert_eq!(c.num_functions(), 25);
            assert_eq!(c.uniform_bound(), 1.5);
        }
    }

    #[test]
    fn finite_oracle_is_convex() {
        use rand::Rng;
        let pts: Vec<f64> = (0..8).map(|i| -1.0 + i as f64 / 4.0).collect();
        let mut rng = substream(3, 0);
        let class = FiniteFunctionClass::sample_piecewise_linear(&mut rng, &pts, 10, 1.0, 1.0)
            .unwrap();
        for _ in 0..1000 {
            let c1: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
            let c2: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
            let lambda = rng.random_range(0.0..=1.0);
            let p = Points::new(&pts, 1).unwrap();
            assert!(oracle_convexity_check(&class, p, &c1, &c2, lambda).unwrap());
            assert!(oracle_convexity_check(&class, p, &c1, &c2, 0.0).unwrap());
        }
    }
}
