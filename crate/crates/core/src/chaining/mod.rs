//! Covering and entropy numbers, admissible sequences, γ₂ upper estimates and
//! the entropy-sum bounds built on them.

mod admissible;
mod bounds;
mod covering;
mod entropy;

pub use admissible::{build_admissible_sequence, gamma2_upper, AdmissibleSequence};
pub use bounds::{
    chaining_expectation_bound, composite_entropy_bound, h_of_m, min_h, residual_rate,
    CompositeBound,
};
pub use covering::{covering_number, exact_covering_number, greedy_cover, CoveringNumber};
pub use entropy::{
    entropy_number, entropy_profile, lipschitz_entropy_formula, EntropyNumber, EntropyProfile,
    EntropySource, EXHAUSTIVE_LIMIT,
};

/// Largest level considered anywhere; `2^{2^20}` exceeds any finite space.
pub const M_MAX: usize = 20;

/// Admissible cardinality at level `m`: 1 for `m = 0`, `2^{2^m}` otherwise,
/// saturating at `usize::MAX`.
pub fn admissible_cardinality(m: usize) -> usize {
    if m == 0 {
        1
    } else if m >= 6 {
        usize::MAX
    } else {
        1usize.checked_shl(1 << m).unwrap_or(usize::MAX)
    }
}
