use crate::error::{invalid, Result};
use crate::metric::FiniteMetricSpace;

/// Largest number of search nodes spent on an exact cover before giving up.
const COVER_NODE_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoveringNumber {
    /// Size of the farthest-first cover.
    pub upper: usize,
    /// Minimum cover size, when the exact search finished within budget.
    pub exact: Option<usize>,
}

/// Farthest-first centres until every point is within `delta` of one.
/// Starts at index 0; ties go to the lowest index.
pub fn greedy_cover(space: &FiniteMetricSpace, delta: f64) -> Vec<usize> {
    let m = space.len();
    let mut centers = vec![0];
    let mut near: Vec<f64> = space.row(0).to_vec();
    loop {
        let (far, &r) = near
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |best, cur| if *cur.1 > *best.1 { cur } else { best });
        if r <= delta || centers.len() == m {
            return centers;
        }
        centers.push(far);
        for (v, d) in near.iter_mut().zip(space.row(far)) {
            *v = v.min(*d);
        }
    }
}

struct Bits(Vec<u64>);

impl Bits {
    fn empty(m: usize) -> Self {
        Bits(vec![0; m.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn or(&mut self, o: &Bits) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a |= b);
    }
}

struct CoverSearch {
    balls: Vec<Bits>,
    /// `coverers[i]`: centres whose ball contains point i.
    coverers: Vec<Vec<usize>>,
    m: usize,
    best: usize,
    nodes: u64,
}

impl CoverSearch {
    /// Returns false when the node budget ran out.
    fn dfs(&mut self, covered: &Bits, used: usize) -> bool {
        self.nodes += 1;
        if self.nodes > COVER_NODE_BUDGET {
            return false;
        }
        // uncovered point with the fewest coverers
        let mut pick = None;
        for i in 0..self.m {
            if !covered.get(i) && pick.is_none_or(|p: usize| self.coverers[i].len() < self.coverers[p].len()) {
                pick = Some(i);
            }
        }
        let Some(p) = pick else {
            self.best = self.best.min(used);
            return true;
        };
        if used + 1 >= self.best {
            return true;
        }
        for ci in 0..self.coverers[p].len() {
            let c = self.coverers[p][ci];
            let mut next = Bits(covered.0.clone());
            next.or(&self.balls[c]);
            if !self.dfs(&next, used + 1) {
                return false;
            }
        }
        true
    }
}

/// Minimum number of centres from the space covering it at radius `delta`,
/// or `None` if the search exceeds its node budget.
pub fn exact_covering_number(space: &FiniteMetricSpace, delta: f64) -> Option<usize> {
    let m = space.len();
    let upper = greedy_cover(space, delta).len();
    let mut balls = Vec::with_capacity(m);
    let mut coverers = vec![Vec::new(); m];
    for c in 0..m {
        let mut b = Bits::empty(m);
        for (i, &d) in space.row(c).iter().enumerate() {
            if d <= delta {
                b.set(i);
                coverers[i].push(c);
            }
        }
        balls.push(b);
    }
    let mut search = CoverSearch { balls, coverers, m, best: upper, nodes: 0 };
    search.dfs(&Bits::empty(m), 0).then_some(search.best)
}

/// `N(T, d, δ)`: greedy upper bound plus the exact value when it is cheap.
pub fn covering_number(space: &FiniteMetricSpace, delta: f64) -> Result<CoveringNumber> {
    if !(delta > 0.0) {
        return invalid("delta must be positive");
    }
    let upper = greedy_cover(space, delta).len();
    let exact = if upper == 1 { Some(1) } else { exact_covering_number(space, delta) };
    Ok(CoveringNumber { upper, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> FiniteMetricSpace {
        FiniteMetricSpace::euclidean(&xs.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(covering_number(&line(&[0.3]), 0.01).unwrap(), CoveringNumber { upper: 1, exact: Some(1) });
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let c = covering_number(&line(&grid), 0.25).unwrap();
        assert_eq!(c.exact, Some(2));
        assert!(c.upper >= 2);
        let c = covering_number(&line(&grid), 1.0).unwrap();
        assert_eq!(c.upper, 1);
        assert!(covering_number(&line(&grid), 0.0).is_err());
    }

    proptest! {
        #[test]
        fn exact_below_greedy_and_monotone(xs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 1..14)) {
            let s = FiniteMetricSpace::euclidean(&xs).unwrap();
            let mut prev = usize::MAX;
            for delta in [0.1, 0.3, 0.6, 1.2, 3.0] {
                let c = covering_number(&s, delta).unwrap();
                let e = c.exact.unwrap();
                prop_assert!(e <= c.upper);
                prop_assert!(e <= prev);
                prev = e;
            }
            prop_assert_eq!(covering_number(&s, s.diameter().max(1e-9)).unwrap().exact, Some(1));
        }
    }
}
