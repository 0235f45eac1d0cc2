use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{admissible_cardinality, M_MAX};
use crate::error::{invalid, Error, Result};
use crate::metric::FiniteMetricSpace;

/// Exhaustive entropy search runs only when `C(m_pts, 2^{2^m}) ≤` this.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropySource {
    EmpiricalGreedy,
    Exhaustive,
    LipschitzFormula,
}

impl EntropySource {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::EmpiricalGreedy => "empirical-greedy",
            Self::Exhaustive => "exhaustive",
            Self::LipschitzFormula => "lipschitz-formula",
        }
    }
}

impl fmt::Display for EntropySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntropySource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empirical-greedy" => Ok(Self::EmpiricalGreedy),
            "exhaustive" => Ok(Self::Exhaustive),
            "lipschitz-formula" => Ok(Self::LipschitzFormula),
            _ => invalid(format!("unknown entropy source `{s}`")),
        }
    }
}

/// Entropy numbers `e_0 ≥ e_1 ≥ … ≥ e_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    values: Vec<f64>,
    source: EntropySource,
}

impl EntropyProfile {
    pub fn new(values: Vec<f64>, source: EntropySource) -> Result<Self> {
        if values.is_empty() {
            return invalid("entropy profile must be nonempty");
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return invalid(format!("entropy number {v} is not a nonnegative real"));
        }
        if let Some(m) = (1..values.len()).find(|&m| values[m] > values[m - 1]) {
            return invalid(format!("entropy profile increases at m = {m}"));
        }
        Ok(Self { values, source })
    }

    /// `e_m = C_k L B 2^{-m/k}` for `m = 0..=max_m`.
    pub fn lipschitz_formula(max_m: usize, l: f64, b: f64, k: usize, c_k: f64) -> Result<Self> {
        let values = (0..=max_m)
            .map(|m| lipschitz_entropy_formula(m, l, b, k, c_k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(values, EntropySource::LipschitzFormula)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> EntropySource {
        self.source
    }

    /// Largest index `M` in the profile.
    pub fn max_m(&self) -> usize {
        self.values.len() - 1
    }
}

/// `e_m(T, d)` with centres drawn from `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyNumber {
    /// Covering radius of the farthest-first centre set.
    pub upper: f64,
    /// Optimum over all centre sets, when the exhaustive search ran.
    pub exact: Option<f64>,
    /// Centres attaining `exact` (lexicographically first), else the greedy set.
    pub centers: Vec<usize>,
}

/// Index minimising the eccentricity `max_t d(c, t)`; the exact 1-centre.
fn one_center(space: &FiniteMetricSpace) -> usize {
    let ecc = |c: usize| space.row(c).iter().copied().fold(0.0, f64::max);
    (0..space.len()).fold(0, |best, c| if ecc(c) < ecc(best) { c } else { best })
}

/// Farthest-first traversal from the exact 1-centre; ties go to the lowest
/// index. Returns the first `count` centres.
fn farthest_first(space: &FiniteMetricSpace, count: usize) -> Vec<usize> {
    let count = count.min(space.len());
    let first = one_center(space);
    let mut centers = vec![first];
    let mut near = space.row(first).to_vec();
    while centers.len() < count {
        let mut far = usize::MAX;
        for (i, &d) in near.iter().enumerate() {
            if centers.contains(&i) {
                continue;
            }
            if far == usize::MAX || d > near[far] {
                far = i;
            }
        }
        centers.push(far);
        for (v, d) in near.iter_mut().zip(space.row(far)) {
            *v = v.min(*d);
        }
    }
    centers
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

/// Best `(radius, centres)` over all `size`-subsets whose smallest element is
/// `first`; lexicographically first among ties.
fn best_with_first(space: &FiniteMetricSpace, first: usize, size: usize) -> (f64, Vec<usize>) {
    fn rec(
        space: &FiniteMetricSpace,
        near: &[f64],
        chosen: &mut Vec<usize>,
        size: usize,
        best: &mut (f64, Vec<usize>),
    ) {
        if chosen.len() == size {
            let r = near.iter().copied().fold(0.0, f64::max);
            if r < best.0 {
                *best = (r, chosen.clone());
            }
            return;
        }
        let start = chosen.last().map_or(0, |c| c + 1);
        let need = size - chosen.len();
        for c in start..=space.len() - need {
            let next: Vec<f64> = near.iter().zip(space.row(c)).map(|(a, b)| a.min(*b)).collect();
            chosen.push(c);
            rec(space, &next, chosen, size, best);
            chosen.pop();
        }
    }
    let mut best = (f64::INFINITY, Vec::new());
    rec(space, space.row(first), &mut vec![first], size, &mut best);
    best
}

/// `e_m(T, d) = inf_{T_m ⊂ T, |T_m| ≤ N_m} sup_t d(t, T_m)` with `N_0 = 1`,
/// `N_m = 2^{2^m}`.
pub fn entropy_number(space: &FiniteMetricSpace, m: usize) -> EntropyNumber {
    let pts = space.len();
    let size = admissible_cardinality(m);
    if size >= pts {
        let all: Vec<usize> = (0..pts).collect();
        return EntropyNumber { upper: 0.0, exact: Some(0.0), centers: all };
    }
    let greedy = farthest_first(space, size);
    let upper = space.covering_radius(&greedy);
    if binomial(pts, size) > EXHAUSTIVE_LIMIT {
        return EntropyNumber { upper, exact: None, centers: greedy };
    }
    let (exact, centers) = (0..=pts - size)
        .into_par_iter()
        .map(|first| best_with_first(space, first, size))
        .reduce(
            || (f64::INFINITY, Vec::new()),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && !b.1.is_empty() && (a.1.is_empty() || b.1 < a.1)) {
                    b
                } else {
                    a
                }
            },
        );
    EntropyNumber { upper, exact: Some(exact), centers }
}

/// Profile `e_0..e_max_m`, capped at [`M_MAX`]. Exhaustive values are used
/// when every level could be searched exhaustively, greedy ones otherwise.
pub fn entropy_profile(space: &FiniteMetricSpace, max_m: usize) -> EntropyProfile {
    let max_m = max_m.min(M_MAX);
    let nums: Vec<EntropyNumber> = (0..=max_m).map(|m| entropy_number(space, m)).collect();
    let (values, source) = if nums.iter().all(|e| e.exact.is_some()) {
        (nums.iter().map(|e| e.exact.unwrap()).collect(), EntropySource::Exhaustive)
    } else {
        (nums.iter().map(|e| e.upper).collect(), EntropySource::EmpiricalGreedy)
    };
    EntropyProfile::new(values, source).expect("farthest-first radii are nonincreasing")
}

/// `C_k L B 2^{-m/k}`: entropy of `L`-Lipschitz, `B`-bounded functions on a
/// `k`-dimensional ball under the uniform metric.
pub fn lipschitz_entropy_formula(m: usize, l: f64, b: f64, k: usize, c_k: f64) -> Result<f64> {
    if !(l > 0.0 && b > 0.0 && c_k > 0.0) || k == 0 {
        return invalid("L, B, C_k and k must be positive");
    }
    Ok(c_k * l * b * (-(m as f64) / k as f64).exp2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::FiniteFunctionClass;
    use crate::rng::substream;
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> FiniteMetricSpace {
        FiniteMetricSpace::euclidean(&xs.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn examples() {
        let two = line(&[0.0, 1.0]);
        assert_eq!(entropy_number(&two, 0).exact, Some(1.0));
        assert_eq!(entropy_number(&two, 0).upper, 1.0);
        assert_eq!(entropy_number(&two, 1).exact, Some(0.0));
        let one = line(&[3.0]);
        for m in 0..4 {
            assert_eq!(entropy_number(&one, m).upper, 0.0);
        }
        assert_eq!(lipschitz_entropy_formula(0, 2.0, 3.0, 1, 0.5).unwrap(), 3.0);
        assert_eq!(lipschitz_entropy_formula(3, 1.0, 1.0, 1, 4.0).unwrap(), 0.5);
        assert!(lipschitz_entropy_formula(1, 0.0, 1.0, 1, 1.0).is_err());
    }

    #[test]
    fn greedy_vs_exact_on_a_line() {
        // 1-centre of {0, 1, 2, 10} is 2 (radius 8); four centres cover exactly.
        let s = line(&[0.0, 1.0, 2.0, 10.0]);
        let e0 = entropy_number(&s, 0);
        assert_eq!((e0.upper, e0.exact), (8.0, Some(8.0)));
        assert_eq!(e0.centers, vec![2]);
    }

    #[test]
    fn sampled_lipschitz_functions_obey_formula() {
        let grid: Vec<f64> = (0..64).map(|i| -1.0 + 2.0 * i as f64 / 63.0).collect();
        let mut rng = substream(5, 0);
        let class = FiniteFunctionClass::sample_piecewise_linear(&mut rng, &grid, 200, 1.0, 1.0).unwrap();
        let space = FiniteMetricSpace::uniform(class.table()).unwrap();
        for m in 0..=4 {
            let e = entropy_number(&space, m).upper;
            assert!(e <= lipschitz_entropy_formula(m, 1.0, 1.0, 1, 4.0).unwrap(), "m={m}: {e}");
        }
    }

    #[test]
    fn profile_rejects_increase() {
        assert!(EntropyProfile::new(vec![1.0, 2.0], EntropySource::Exhaustive).is_err());
        assert!(EntropyProfile::new(vec![], EntropySource::Exhaustive).is_err());
        let p = EntropyProfile::lipschitz_formula(3, 1.0, 1.0, 2, 1.0).unwrap();
        assert_eq!(p.values().len(), 4);
        assert_eq!(p.source().as_str(), "lipschitz-formula");
    }

    proptest! {
        #[test]
        fn exact_below_greedy(xs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 1..24)) {
            let s = FiniteMetricSpace::euclidean(&xs).unwrap();
            let mut prev = (f64::INFINITY, f64::INFINITY);
            for m in 0..4 {
                let e = entropy_number(&s, m);
                let exact = e.exact.unwrap();
                prop_assert!(exact <= e.upper);
                prop_assert!(exact <= prev.0 && e.upper <= prev.1);
                prev = (exact, e.upper);
                if admissible_cardinality(m) >= xs.len() {
                    prop_assert_eq!(e.upper, 0.0);
                }
            }
        }
    }
}
