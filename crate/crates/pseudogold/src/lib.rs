//! Greedy β-expansions for pseudo golden means.
//!
//! For each order `n ≥ 2` the pseudo golden mean β is the unique positive root of
//! βⁿ = 1 + β + ⋯ + βⁿ⁻¹ (the golden ratio at n = 2). Iterating the digit map
//! t(x) = βx − ⌊βx⌋ produces the greedy digit sequence of x; the words that occur
//! are exactly the 0/1 words with no run of n ones. This crate computes:
//!
//! - the full spectrum of the digit-count transfer matrix and the eigenvector
//!   data entering the invariant (Parry) density ([`parry`]);
//! - admissible words, their cylinder intervals, and greedy digits ([`expansion`]);
//! - exact and asymptotic counts of admissible words by trailing-run class
//!   ([`counting`]);
//! - the invariant density f_β, the exact density f_m of the scaled remainder
//!   βᵐ(x − Σ_{k≤m} x_k β⁻ᵏ), the one-step transfer operator, and sup/TV error
//!   norms ([`density`]);
//! - convergence-rate experiments and a Monte Carlo cross-check ([`experiments`]).

pub mod counting;
pub mod density;
pub mod expansion;
pub mod experiments;
pub mod parry;
pub mod rng;
pub mod verify;

pub use counting::CountVector;
pub use density::{EvaluatedDensity, SourceDensity, StepDensity};
pub use expansion::{AdmissibleWord, Cylinder};
pub use experiments::{ErrorCurve, McReport, RateFit};
pub use parry::ParryBasis;

/// Errors for every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument's value was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// The order n is outside the supported range.
    #[error("order n={n} unsupported (need 2 <= n <= {cap})")]
    UnsupportedOrder { n: u32, cap: u32 },
    /// Enumerating Ω_m would emit more words than the caller's budget.
    #[error("enumeration budget exceeded: |Omega_m| = {required} words, budget {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    /// An exact count no longer fits in 64 bits.
    #[error("word count overflow for n={n}, m={m}")]
    CountOverflow { n: u32, m: u32 },
    /// A root solve, construction cross-check, or certified bound failed.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A density failed its construction checks.
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    /// Inverse-CDF sampling is not available for this source.
    #[error("sampling unsupported for source '{0}'")]
    UnsupportedSampling(String),
    /// A regression was requested with too few usable points.
    #[error("rate fit needs at least 4 usable rows, got {0}")]
    TooFewRows(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Compensated (Neumaier) accumulator; keeps long sums accurate to a few ulps.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(self) -> f64 {
        self.sum + self.carry
    }
}
