use super::{EntropyProfile, M_MAX};
use crate::error::{invalid, Result};

/// `c (γ₂ + Δ √(ln κ))`.
pub fn chaining_expectation_bound(gamma2: f64, diameter: f64, kappa: f64, c_univ: f64) -> Result<f64> {
    if !(kappa >= 1.0) {
        return invalid(format!("kappa = {kappa} must be at least 1"));
    }
    if !(c_univ > 0.0) || gamma2 < 0.0 || diameter < 0.0 {
        return invalid("constants and geometric inputs must be nonnegative");
    }
    Ok(c_univ * (gamma2 + diameter * kappa.ln().sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeBound {
    /// `c₁ L b(T) + n · inner`.
    pub value: f64,
    /// Minimiser of the entropy term (smallest on ties).
    pub argmin_m: usize,
    /// `min_M [e_M + Σ_{m≤M} 2^{m/2} e_m / √n]`.
    pub inner: f64,
}

/// `c₁ L b(T) + n min_{M ≤ M_max} [e_M + Σ_{m=0}^{M} 2^{m/2} e_m / √n]`,
/// scanning `M` over the profile.
pub fn composite_entropy_bound(
    n: usize,
    lipschitz: f64,
    b_t: f64,
    profile: &EntropyProfile,
    c1: f64,
) -> Result<CompositeBound> {
    if n == 0 {
        return invalid("n must be positive");
    }
    let sqrt_n = (n as f64).sqrt();
    let e = profile.values();
    let mut partial = 0.0;
    let mut best = (f64::INFINITY, 0);
    for (m, &em) in e.iter().enumerate().take(M_MAX + 1) {
        partial += (m as f64 / 2.0).exp2() * em / sqrt_n;
        let v = em + partial;
        if v < best.0 {
            best = (v, m);
        }
    }
    Ok(CompositeBound { value: c1 * lipschitz * b_t + n as f64 * best.0, argmin_m: best.1, inner: best.0 })
}

/// `h(M) = 2^{-M/k} + n^{-1/2} Σ_{m=0}^{M} 2^{m(1/2 - 1/k)}`.
pub fn h_of_m(m: usize, k: usize, n: usize) -> f64 {
    let r = 0.5 - 1.0 / k as f64;
    let sum: f64 = (0..=m).map(|j| (j as f64 * r).exp2()).sum();
    (-(m as f64) / k as f64).exp2() + sum / (n as f64).sqrt()
}

/// `(min_M h(M), argmin)` by exhaustive scan over `M ∈ {0, …, M_MAX}`.
pub fn min_h(k: usize, n: usize) -> (f64, usize) {
    (0..=M_MAX).fold((f64::INFINITY, 0), |best, m| {
        let v = h_of_m(m, k, n);
        if v < best.0 { (v, m) } else { best }
    })
}

/// Residual rate `r_{n,k}/n`: `n^{-1/2}`, `n^{-1/2} ln n`, `n^{-1/k}` for
/// `k = 1`, `k = 2`, `k > 2`.
pub fn residual_rate(n: usize, k: usize) -> f64 {
    let n = n as f64;
    match k {
        0 | 1 => n.powf(-0.5),
        2 => n.ln() / n.sqrt(),
        _ => n.powf(-1.0 / k as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaining::EntropySource;
    use proptest::prelude::*;

    #[test]
    fn chaining_bound_examples() {
        assert_eq!(chaining_expectation_bound(2.5, 1.0, 1.0, 3.0).unwrap(), 7.5);
        assert_eq!(chaining_expectation_bound(0.0, 0.0, 100.0, 3.0).unwrap(), 0.0);
        let v = chaining_expectation_bound(1.0, 1.0, std::f64::consts::E, 2.0).unwrap();
        assert!((v - 4.0).abs() < 1e-15);
        assert!(chaining_expectation_bound(1.0, 1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn composite_bound_examples() {
        let zeros = EntropyProfile::new(vec![0.0; 5], EntropySource::Exhaustive).unwrap();
        let b = composite_entropy_bound(100, 2.0, 0.7, &zeros, 1.0).unwrap();
        assert_eq!((b.value, b.argmin_m), (1.4, 0));

        let n = 256;
        let p = EntropyProfile::new((0..=M_MAX).map(|m| (-(m as f64)).exp2()).collect(), EntropySource::LipschitzFormula).unwrap();
        let b = composite_entropy_bound(n, 1.0, 0.0, &p, 1.0).unwrap();
        assert!(b.inner * (n as f64).sqrt() < 4.0);
        assert!((b.argmin_m as f64 - (n as f64).sqrt().log2()).abs() <= 4.0);
    }

    #[test]
    fn h_rates() {
        // Σ_m 2^{-m/2} < 2 + √2, so min_M h(M) √n stays below 3.5 for k = 1.
        for e in 4..=12 {
            let n = 1usize << e;
            assert!(min_h(1, n).0 <= 3.5 / (n as f64).sqrt());
        }
        let n = 1024;
        assert!(h_of_m(10, 2, n) <= 2.0 * (n as f64).ln() / (n as f64).sqrt());
        let r = min_h(4, 4096).0 / 4096f64.powf(-0.25);
        assert!((0.2..=5.0).contains(&r), "{r}");
        assert_eq!(residual_rate(4096, 4), 0.125);
    }

    proptest! {
        #[test]
        fn scan_matches_exhaustive_and_is_monotone(
            mut e in prop::collection::vec(0.0f64..2.0, 1..22),
            n in 1usize..5000,
            i in 0usize..22,
            shrink in 0.0f64..1.0,
        ) {
            e.sort_by(|a, b| b.total_cmp(a));
            let p = EntropyProfile::new(e.clone(), EntropySource::Exhaustive).unwrap();
            let b = composite_entropy_bound(n, 1.0, 0.0, &p, 1.0).unwrap();
            let sq = (n as f64).sqrt();
            let brute = (0..e.len().min(M_MAX + 1))
                .map(|mm| e[mm] + (0..=mm).map(|m| (m as f64 / 2.0).exp2() * e[m] / sq).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            prop_assert!((b.inner - brute).abs() <= 1e-12 * brute.max(1.0));

            let i = i % e.len();
            let lower = if i + 1 < e.len() { e[i + 1] } else { 0.0 };
            e[i] = lower + (e[i] - lower) * shrink;
            let q = EntropyProfile::new(e, EntropySource::Exhaustive).unwrap();
            prop_assert!(composite_entropy_bound(n, 1.0, 0.0, &q, 1.0).unwrap().value <= b.value + 1e-12);
        }
    }
}
