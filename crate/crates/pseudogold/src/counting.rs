//! Counting admissible words by trailing-run class.
//!
//! N_r(m) is the number of 0/1 words of length m with no run of n ones that end
//! in exactly r ones. The counts satisfy N_0(m+1) = Σ_r N_r(m) and
//! N_r(m+1) = N_{r−1}(m), i.e. one application of the transfer matrix.

use crate::parry::ParryBasis;
use crate::{Error, Result};

/// Exact counts at word length m; `counts[r]` = N_r(m), r = 0..n−1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    pub m: u32,
    pub counts: Vec<u64>,
}

impl CountVector {
    /// |Ω_m| = Σ_r N_r(m).
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Exact integer counts via the recursion, from the closed-form base
/// N_r(m) = 2^{m−(r+1)} for r < m ≤ n−1, N_m(m) = 1.
pub fn count_exact(n: u32, m: u32) -> Result<CountVector> {
    if n < 2 {
        return Err(Error::Domain(format!("count_exact needs n >= 2, got {n}")));
    }
    if m < 1 {
        return Err(Error::Domain("count_exact needs m >= 1".into()));
    }
    let nn = n as usize;
    let base_len = n - 1;
    if m <= base_len {
        let counts = (0..nn as u32)
            .map(|r| {
                if r == m {
                    1
                } else if r < m {
                    1u64 << (m - r - 1)
                } else {
                    0
                }
            })
            .collect();
        return Ok(CountVector { m, counts });
    }
    let mut counts: Vec<u64> = (0..nn as u32)
        .map(|r| if r == base_len { 1 } else { 1u64 << (base_len - r - 1) })
        .collect();
    for _ in base_len..m {
        let mut top: u64 = 0;
        for &c in &counts {
            top = top
                .checked_add(c)
                .ok_or(Error::CountOverflow { n, m })?;
        }
        for r in (1..nn).rev() {
            counts[r] = counts[r - 1];
        }
        counts[0] = top;
    }
    Ok(CountVector { m, counts })
}

/// Independent oracle: filter all 2^m binary words by the run restriction and
/// classify by trailing run. Only for m ≤ 20.
pub fn count_brute(n: u32, m: u32) -> Result<CountVector> {
    if n < 2 {
        return Err(Error::Domain(format!("count_brute needs n >= 2, got {n}")));
    }
    if !(1..=20).contains(&m) {
        return Err(Error::Domain(format!("count_brute needs 1 <= m <= 20, got {m}")));
    }
    let mut counts = vec![0u64; n as usize];
    for mask in 0u32..(1 << m) {
        let mut run = 0u32;
        let mut max_run = 0u32;
        for k in 0..m {
            if mask >> k & 1 == 1 {
                run += 1;
                max_run = max_run.max(run);
            } else {
                run = 0;
            }
        }
        if max_run < n {
            counts[mask.trailing_ones().min(m) as usize] += 1;
        }
    }
    Ok(CountVector { m, counts })
}

/// Leading spectral term of N_r(m): β^{m+n−1−r}/⟨v,u⟩. The neglected remainder
/// is O(|λ₂|^m); tests characterize its constant, this returns the term alone.
pub fn count_asymptotic(basis: &ParryBasis, m: u32, r: u32) -> f64 {
    assert!(r < basis.n, "trailing-run class r must satisfy r < n");
    assert!(m >= basis.n, "asymptotic form needs m >= n");
    let vu: f64 = basis.v.iter().zip(&basis.u).map(|(a, b)| a * b).sum();
    basis.beta.powi((m + basis.n - 1 - r) as i32) / vu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parry::build_basis;

    #[test]
    fn exact_examples() {
        assert_eq!(count_exact(2, 3).unwrap().counts, vec![3, 2]);
        assert_eq!(count_exact(3, 2).unwrap().counts, vec![2, 1, 1]);
        assert_eq!(count_exact(2, 1).unwrap().counts, vec![1, 1]);
    }

    #[test]
    fn brute_examples() {
        assert_eq!(count_brute(2, 5).unwrap().total(), 13);
        assert_eq!(count_brute(4, 3).unwrap().total(), 8);
        assert_eq!(count_brute(2, 2).unwrap().counts, vec![2, 1]);
    }

    #[test]
    fn brute_rejects_large_m() {
        assert!(matches!(count_brute(2, 21), Err(Error::Domain(_))));
    }

    #[test]
    fn overflow_detected() {
        assert!(matches!(
            count_exact(2, 5000),
            Err(Error::CountOverflow { n: 2, m: 5000 })
        ));
    }

    #[test]
    fn zero_padding_above_run_cap() {
        let cv = count_exact(4, 2).unwrap();
        assert_eq!(cv.counts, vec![2, 1, 1, 0]);
    }

    #[test]
    fn asymptotic_examples() {
        let b2 = build_basis(2).unwrap();
        let exact = count_exact(2, 20).unwrap().counts[0] as f64;
        let lead = count_asymptotic(&b2, 20, 0);
        assert!((exact - lead).abs() <= 5.0 * b2.lambda2_abs.powi(20));

        let b3 = build_basis(3).unwrap();
        let exact = count_exact(3, 15).unwrap().counts[2] as f64;
        let lead = count_asymptotic(&b3, 15, 2);
        assert!((exact - lead).abs() / exact < 0.01);

        // N_0/N_1 -> beta
        let cv = count_exact(2, 30).unwrap();
        let ratio = cv.counts[0] as f64 / cv.counts[1] as f64;
        assert!((ratio - b2.beta).abs() < 1e-9);
    }
}
