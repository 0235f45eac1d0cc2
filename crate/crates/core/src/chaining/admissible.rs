use std::fmt;

use super::{admissible_cardinality, M_MAX};
use crate::error::{invalid, Error, Result};
use crate::metric::FiniteMetricSpace;

/// Nested partitions `𝒜_0, 𝒜_1, …` of `{0, …, m_pts-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSequence {
    levels: Vec<Vec<Vec<usize>>>,
}

impl AdmissibleSequence {
    /// Validating constructor; blocks are sorted and listed by smallest member.
    pub fn new(points: usize, mut levels: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        for level in &mut levels {
            for b in level.iter_mut() {
                b.sort_unstable();
            }
            level.sort_unstable_by_key(|b| b.first().copied());
        }
        let seq = Self { levels };
        seq.validate(points)?;
        Ok(seq)
    }

    pub fn levels(&self) -> &[Vec<Vec<usize>>] {
        &self.levels
    }

    /// Index of the last level, `M`.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Checks partition, cardinality and nesting invariants.
    pub fn validate(&self, points: usize) -> Result<()> {
        if self.levels.is_empty() {
            return invalid("admissible sequence has no levels");
        }
        let mut prev_owner: Option<Vec<usize>> = None;
        for (m, level) in self.levels.iter().enumerate() {
            if level.len() > admissible_cardinality(m) {
                return invalid(format!(
                    "level {m} has {} blocks, more than {}",
                    level.len(),
                    admissible_cardinality(m)
                ));
            }
            let mut owner = vec![usize::MAX; points];
            for (bi, block) in level.iter().enumerate() {
                if block.is_empty() {
                    return invalid(format!("level {m} has an empty block"));
                }
                for &i in block {
                    if i >= points {
                        return invalid(format!("level {m} names point {i} of {points}"));
                    }
                    if owner[i] != usize::MAX {
                        return invalid(format!("level {m} lists point {i} twice"));
                    }
                    owner[i] = bi;
                }
            }
            if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
                return invalid(format!("level {m} does not cover point {i}"));
            }
            if let Some(prev) = &prev_owner {
                for block in level {
                    if block.iter().any(|&i| prev[i] != prev[block[0]]) {
                        return invalid(format!("a block of level {m} straddles two blocks of level {}", m - 1));
                    }
                }
            }
            prev_owner = Some(owner);
        }
        Ok(())
    }

    /// Parses the `level m: {i,j} {k}` text format.
    pub fn parse(points: usize, text: &str) -> Result<Self> {
        let mut levels = Vec::new();
        for (ln, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let parse_err = |msg: &str| Error::Parse { line: ln + 1, msg: msg.to_string() };
            let rest = line.trim().strip_prefix("level ").ok_or_else(|| parse_err("expected `level m:`"))?;
            let (m, blocks) = rest.split_once(':').ok_or_else(|| parse_err("missing `:`"))?;
            if m.trim().parse::<usize>().ok() != Some(levels.len()) {
                return Err(parse_err("levels must be numbered 0, 1, 2, ..."));
            }
            let mut level = Vec::new();
            for tok in blocks.split('}').map(str::trim).filter(|t| !t.is_empty()) {
                let inner = tok.strip_prefix('{').ok_or_else(|| parse_err("expected `{`"))?;
                let block = inner
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| parse_err("bad point index")))
                    .collect::<Result<Vec<_>>>()?;
                level.push(block);
            }
            levels.push(level);
        }
        Self::new(points, levels)
    }
}

impl fmt::Display for AdmissibleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, level) in self.levels.iter().enumerate() {
            write!(f, "level {m}:")?;
            for block in level {
                let items: Vec<String> = block.iter().map(usize::to_string).collect();
                write!(f, " {{{}}}", items.join(","))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Splits `block` around up to `parts` farthest-first centres (first centre
/// is the block's lowest index, ties to the lowest index); every point joins
/// its nearest centre, ties to the earlier centre.
fn split_block(space: &FiniteMetricSpace, block: &[usize], parts: usize) -> Vec<Vec<usize>> {
    let parts = parts.min(block.len());
    let mut centers = vec![block[0]];
    let mut is_center = vec![false; block.len()];
    is_center[0] = true;
    let mut near: Vec<f64> = block.iter().map(|&i| space.dist(block[0], i)).collect();
    while centers.len() < parts {
        let mut far = usize::MAX;
        for p in 0..block.len() {
            if !is_center[p] && (far == usize::MAX || near[p] > near[far]) {
                far = p;
            }
        }
        is_center[far] = true;
        centers.push(block[far]);
        for (p, v) in near.iter_mut().enumerate() {
            *v = v.min(space.dist(block[far], block[p]));
        }
    }
    let mut out = vec![Vec::new(); centers.len()];
    for &i in block {
        let c = match centers.iter().position(|&c| c == i) {
            Some(c) => c,
            None => (0..centers.len())
                .fold(0, |b, c| if space.dist(centers[c], i) < space.dist(centers[b], i) { c } else { b }),
        };
        out[c].push(i);
    }
    out
}

/// Recursive farthest-first splitting: level `m` splits each block of level
/// `m-1` into at most `⌊2^{2^m} / |𝒜_{m-1}|⌋` parts. Stops at the first
/// level made of singletons.
pub fn build_admissible_sequence(space: &FiniteMetricSpace) -> AdmissibleSequence {
    let pts = space.len();
    let mut levels = vec![vec![(0..pts).collect::<Vec<_>>()]];
    for m in 1..=M_MAX {
        let prev = levels.last().unwrap();
        if prev.iter().all(|b| b.len() == 1) {
            break;
        }
        let share = (admissible_cardinality(m) / prev.len()).max(1);
        let next: Vec<Vec<usize>> = prev.iter().flat_map(|b| split_block(space, b, share)).collect();
        levels.push(next);
    }
    AdmissibleSequence::new(pts, levels).expect("splitting preserves the invariants")
}

/// `sup_t Σ_m 2^{m/2} Δ(A_m(t))` for the given sequence, an upper bound on
/// `γ₂`. The sequence must end in singletons, so no terms are dropped.
pub fn gamma2_upper(space: &FiniteMetricSpace, seq: &AdmissibleSequence) -> Result<f64> {
    seq.validate(space.len())?;
    if seq.levels.last().unwrap().iter().any(|b| b.len() > 1) {
        return invalid("admissible sequence must end in singleton blocks");
    }
    let mut total = vec![0.0; space.len()];
    for (m, level) in seq.levels.iter().enumerate() {
        let w = (m as f64 / 2.0).exp2();
        for block in level {
            let d = space.diameter_of(block);
            for &i in block {
                total[i] += w * d;
            }
        }
    }
    Ok(total.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaining::entropy_profile;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let one = FiniteMetricSpace::euclidean(&[vec![1.0]]).unwrap();
        let s = build_admissible_sequence(&one);
        assert_eq!(s.levels(), &[vec![vec![0]]]);
        assert_eq!(gamma2_upper(&one, &s).unwrap(), 0.0);

        let two = FiniteMetricSpace::euclidean(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let s = build_admissible_sequence(&two);
        assert_eq!(s.levels(), &[vec![vec![0, 1]], vec![vec![0], vec![1]]]);
        assert_eq!(gamma2_upper(&two, &s).unwrap(), 5.0);
        assert_eq!(s.to_string(), "level 0: {0,1}\nlevel 1: {0} {1}\n");
    }

    #[test]
    fn text_round_trip_and_rejections() {
        let s = AdmissibleSequence::parse(3, "level 0: {0,1,2}\nlevel 1: {0,2} {1}\nlevel 2: {0} {1} {2}\n").unwrap();
        assert_eq!(AdmissibleSequence::parse(3, &s.to_string()).unwrap(), s);
        // not nested
        assert!(AdmissibleSequence::parse(3, "level 0: {0,1,2}\nlevel 1: {0,2} {1}\nlevel 2: {0,1} {2}\n").is_err());
        // two blocks at level 0
        assert!(AdmissibleSequence::new(2, vec![vec![vec![0], vec![1]]]).is_err());
        // missing point
        assert!(AdmissibleSequence::new(3, vec![vec![vec![0, 1]]]).is_err());
        // too many blocks at level 1
        let five: Vec<Vec<usize>> = (0..5).map(|i| vec![i]).collect();
        assert!(AdmissibleSequence::new(5, vec![vec![(0..5).collect()], five]).is_err());
        let two = FiniteMetricSpace::euclidean(&[vec![0.0], vec![1.0]]).unwrap();
        let coarse = AdmissibleSequence::new(2, vec![vec![vec![0, 1]]]).unwrap();
        assert!(gamma2_upper(&two, &coarse).is_err());
    }

    #[test]
    fn duplicate_points_still_reach_singletons() {
        let s = FiniteMetricSpace::euclidean(&vec![vec![0.5]; 7]).unwrap();
        let seq = build_admissible_sequence(&s);
        assert!(seq.levels().last().unwrap().iter().all(|b| b.len() == 1));
        assert_eq!(gamma2_upper(&s, &seq).unwrap(), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn invariants_and_dudley_dominance(xs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 1..40)) {
            let s = FiniteMetricSpace::euclidean(&xs).unwrap();
            let seq = build_admissible_sequence(&s);
            prop_assert!(seq.validate(s.len()).is_ok());
            let g = gamma2_upper(&s, &seq).unwrap();
            prop_assert!(g >= s.diameter());
            let dudley: f64 = entropy_profile(&s, 6)
                .values()
                .iter()
                .enumerate()
                .map(|(m, e)| (m as f64 / 2.0).exp2() * e)
                .sum();
            prop_assert!(g <= 8.0 * dudley + 1e-12, "γ₂ {} vs Dudley {}", g, dudley);
        }
    }
}
