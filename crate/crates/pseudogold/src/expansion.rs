//! The digit map, greedy digits, admissibility, and cylinder intervals.
//!
//! A word J = (j₁,…,j_m) ∈ {0,1}^m is admissible iff it has no run of n ones.
//! Its cylinder I_J = [L_J, L_J + β^{−m}K(J)) collects exactly the x whose first
//! m greedy digits equal J, where L_J = Σ j_k β^{−k} and K(J) depends only on
//! the trailing-run length r(J): K(J) = β^{−1} + ⋯ + β^{−(n−r(J))}.

use crate::counting::count_exact;
use crate::parry::ParryBasis;
use crate::{Error, Result};

/// Words exceeding this count are refused unless the caller raises the budget.
pub const DEFAULT_BUDGET: u64 = 1 << 25;

/// A finite 0/1 digit word with no run of n ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleWord {
    pub digits: Vec<u8>,
}

impl AdmissibleWord {
    pub fn m(&self) -> usize {
        self.digits.len()
    }

    /// Length of the maximal all-ones suffix.
    pub fn trailing_ones(&self) -> usize {
        self.digits.iter().rev().take_while(|&&d| d == 1).count()
    }
}

/// The interval of points whose first m greedy digits equal `word`.
#[derive(Debug, Clone)]
pub struct Cylinder {
    pub word: AdmissibleWord,
    /// L_J = Σ j_k β^{−k}.
    pub left: f64,
    /// β^{−m}·K(J).
    pub width: f64,
    /// r(J).
    pub trailing_ones: usize,
    /// K(J) = β^{−1} + ⋯ + β^{−(n−r(J))}.
    pub k_of_j: f64,
}

fn require_unit_interval(x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0,1)")));
    }
    Ok(())
}

/// One step of t(x) = βx − ⌊βx⌋; returns (digit, t(x)). The digit is 0 or 1
/// because β < 2.
pub fn digit_map(basis: &ParryBasis, x: f64) -> Result<(u8, f64)> {
    require_unit_interval(x)?;
    let bx = basis.beta * x;
    let digit = bx.floor();
    Ok((digit as u8, bx - digit))
}

/// First m greedy digits of x; the truncation error βᵐ(x − Σ x_k β^{−k}) stays
/// in [0,1) by construction.
pub fn greedy_digits(basis: &ParryBasis, x: f64, m: usize) -> Result<AdmissibleWord> {
    require_unit_interval(x)?;
    let mut digits = Vec::with_capacity(m);
    let mut y = x;
    for _ in 0..m {
        let (d, next) = digit_map(basis, y)?;
        digits.push(d);
        y = next;
    }
    Ok(AdmissibleWord { digits })
}

/// True iff no run of 1s has length ≥ n.
pub fn is_admissible_word(n: u32, digits: &[u8]) -> bool {
    let mut run = 0;
    for &d in digits {
        if d == 1 {
            run += 1;
            if run >= n {
                return false;
            }
        } else {
            run = 0;
        }
    }
    true
}

/// Admissibility of an eventually periodic digit sequence (preperiod then
/// period repeated forever): no run of n ones anywhere, and the tail must not
/// equal the excluded pattern S = (1^{n−1}, 0) repeated. An empty period means
/// a terminating (all zeros) tail.
pub fn is_admissible_tail(n: u32, preperiod: &[u8], period: &[u8]) -> bool {
    let period: Vec<u8> = if period.is_empty() {
        vec![0]
    } else {
        period.to_vec()
    };
    let nn = n as usize;
    // Unroll far enough that any run and any alignment of S is visible:
    // runs need n+1 digits past the preperiod; the S comparison below needs
    // lcm(|period|, n) digits from every candidate start inside one full cycle.
    let lcm = {
        let (mut a, mut b) = (period.len(), nn);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        period.len() / a * nn
    };
    let window = lcm + nn;
    let total = preperiod.len() + lcm + window;
    let seq: Vec<u8> = preperiod
        .iter()
        .copied()
        .chain(period.iter().copied().cycle())
        .take(total)
        .collect();

    let mut run = 0usize;
    for &d in &seq {
        if d == 1 {
            run += 1;
            if run >= nn {
                return false;
            }
        } else {
            run = 0;
        }
    }
    // Any tail equal to S from inside the preperiod is also equal to S from
    // n digits later (S is n-periodic), so scanning starts in the periodic
    // region is complete. There, agreement over lcm + n digits exceeds the
    // Fine–Wilf bound |period| + n − gcd and proves agreement forever.
    let s_at = |i: usize| u8::from(!(i + 1).is_multiple_of(nn));
    for start in preperiod.len()..=(preperiod.len() + lcm) {
        if (0..window).all(|i| seq[start + i] == s_at(i)) {
            return false;
        }
    }
    true
}

/// Lexicographic stream over Ω_m with cylinder data.
#[derive(Debug)]
pub struct WordIter {
    m: usize,
    run_cap: usize,
    /// pw[k] = β^{−(k+1)}.
    pw: Vec<f64>,
    width_factors: Vec<f64>,
    scale: f64,
    digits: Vec<u8>,
    stack: Vec<Frame>,
}

#[derive(Debug)]
struct Frame {
    depth: usize,
    digit: u8,
    run: usize,
    left: f64,
}

impl WordIter {
    fn new(basis: &ParryBasis, m: usize) -> Self {
        let mut pw = Vec::with_capacity(m);
        let mut p = 1.0;
        for _ in 0..m {
            p /= basis.beta;
            pw.push(p);
        }
        WordIter {
            m,
            run_cap: basis.n as usize - 1,
            pw,
            width_factors: basis.width_factors(),
            scale: basis.beta.powi(-(m as i32)),
            digits: Vec::with_capacity(m),
            stack: vec![
                Frame { depth: 0, digit: 1, run: 1, left: 0.0 },
                Frame { depth: 0, digit: 0, run: 0, left: 0.0 },
            ],
        }
    }
}

impl Iterator for WordIter {
    type Item = Cylinder;

    fn next(&mut self) -> Option<Cylinder> {
        loop {
            let frame = self.stack.pop()?;
            self.digits.truncate(frame.depth);
            self.digits.push(frame.digit);
            let left = frame.left + if frame.digit == 1 { self.pw[frame.depth] } else { 0.0 };
            let depth = frame.depth + 1;
            if depth == self.m {
                return Some(Cylinder {
                    word: AdmissibleWord { digits: self.digits.clone() },
                    left,
                    width: self.scale * self.width_factors[frame.run],
                    trailing_ones: frame.run,
                    k_of_j: self.width_factors[frame.run],
                });
            }
            if frame.run < self.run_cap {
                self.stack.push(Frame { depth, digit: 1, run: frame.run + 1, left });
            }
            self.stack.push(Frame { depth, digit: 0, run: 0, left });
        }
    }
}

/// All of Ω_m in lexicographic order, under the default word budget.
pub fn enumerate_words(basis: &ParryBasis, m: usize) -> Result<WordIter> {
    enumerate_words_with_budget(basis, m, DEFAULT_BUDGET)
}

/// All of Ω_m in lexicographic order; fails up front (with the exact count)
/// if |Ω_m| exceeds `budget`.
pub fn enumerate_words_with_budget(basis: &ParryBasis, m: usize, budget: u64) -> Result<WordIter> {
    if m < 1 {
        return Err(Error::Domain("enumeration needs m >= 1".into()));
    }
    let required = count_exact(basis.n, m as u32)?.total();
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(WordIter::new(basis, m))
}

/// The unique cylinder containing x; its word is greedy_digits(x, m).
/// Rounding may leave x marginally outside the computed endpoints; membership
/// is accepted within 1e−12, keeping the assignment deterministic.
pub fn locate(basis: &ParryBasis, x: f64, m: usize) -> Result<Cylinder> {
    require_unit_interval(x)?;
    let word = greedy_digits(basis, x, m)?;
    let mut left = 0.0;
    let mut p = 1.0;
    for &d in &word.digits {
        p /= basis.beta;
        if d == 1 {
            left += p;
        }
    }
    let r = word.trailing_ones();
    let k = basis.width_factors()[r];
    let width = basis.beta.powi(-(m as i32)) * k;
    if x < left - 1e-12 || x >= left + width + 1e-12 {
        return Err(Error::Numerical(format!(
            "locate: x = {x} escaped its greedy cylinder [{left}, {})",
            left + width
        )));
    }
    Ok(Cylinder { word, left, width, trailing_ones: r, k_of_j: k })
}
