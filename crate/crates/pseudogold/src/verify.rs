//! Named verification checks over the whole construction: spectral facts
//! about β and its conjugates, the eigenvector algebra, cylinder
//! combinatorics, and the invariant density. Each check takes the raw values
//! it judges, so callers can feed deliberately corrupted inputs and watch the
//! right check fail by name.

use nalgebra::Complex;

use crate::counting::{count_brute, count_exact};
use crate::density::{parry_density, parry_density_forms, transfer_step};
use crate::expansion::{enumerate_words, greedy_digits};
use crate::parry::{build_basis, ParryBasis};
use crate::rng::SplitMix64;
use crate::Result;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub n: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(n: u32, name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { n, name, passed, detail }
}

pub fn check_beta_in_range(n: u32, beta: f64) -> CheckResult {
    check(n, "beta_in_range", beta > 1.0 && beta < 2.0, format!("beta = {beta:.15}"))
}

/// 2 − β = β^{−n}, the defining identity rearranged into its numerically
/// friendliest form.
pub fn check_two_minus_beta(n: u32, beta: f64) -> CheckResult {
    let dev = (2.0 - beta - beta.powi(-(n as i32))).abs();
    check(n, "two_minus_beta", dev < 1e-12, format!("|2 - beta - beta^-n| = {dev:.3e}"))
}

/// Every conjugate root lies strictly inside the unit circle.
pub fn check_spectral_gap(n: u32, roots: &[Complex<f64>]) -> CheckResult {
    let max_inner = roots[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    check(n, "spectral_gap", max_inner < 1.0, format!("max |lambda_j| = {max_inner:.15}"))
}

/// |λ₂| ≥ β^{−1/(n−1)}, with equality at n = 2 and n = 3.
pub fn check_lambda2_lower_bound(n: u32, beta: f64, lambda2_abs: f64) -> CheckResult {
    let bound = beta.powf(-1.0 / (n as f64 - 1.0));
    check(
        n,
        "lambda2_lower_bound",
        lambda2_abs >= bound - 1e-10,
        format!("|lambda_2| = {lambda2_abs:.15}, bound = {bound:.15}"),
    )
}

pub fn check_lambda2_equality(n: u32, beta: f64, lambda2_abs: f64) -> CheckResult {
    let bound = beta.powf(-1.0 / (n as f64 - 1.0));
    let dev = (lambda2_abs - bound).abs();
    check(n, "lambda2_equality", dev < 1e-10, format!("||lambda_2| - beta^(-1/(n-1))| = {dev:.3e}"))
}

/// Every root modulus is at least 3^{−1/n}.
pub fn check_cube_root_bound(n: u32, roots: &[Complex<f64>]) -> CheckResult {
    let bound = 3.0f64.powf(-1.0 / n as f64);
    let min_mod = roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    check(
        n,
        "cube_root_bound",
        min_mod >= bound - 1e-10,
        format!("min |lambda_j| = {min_mod:.15}, bound = {bound:.15}"),
    )
}

/// The product of all roots equals (−1)^{n+1} (constant term −1, monic).
pub fn check_root_product(n: u32, roots: &[Complex<f64>]) -> CheckResult {
    let prod = roots.iter().fold(Complex::new(1.0, 0.0), |a, z| a * z);
    let want = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let dev = (prod - Complex::new(want, 0.0)).norm();
    check(n, "root_product", dev < 1e-8, format!("|prod - ({want})| = {dev:.3e}"))
}

/// All roots are simple: pairwise separation bounded away from zero.
pub fn check_root_simplicity(n: u32, roots: &[Complex<f64>]) -> CheckResult {
    let mut min_sep = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            min_sep = min_sep.min((roots[i] - roots[j]).norm());
        }
    }
    check(n, "root_simplicity", min_sep > 1e-8, format!("min pairwise gap = {min_sep:.3e}"))
}

/// Even n has exactly one real negative root (and it is the smallest in
/// modulus); odd n has none.
pub fn check_negative_root_parity(n: u32, roots: &[Complex<f64>]) -> CheckResult {
    let negatives: Vec<&Complex<f64>> =
        roots.iter().filter(|z| z.im == 0.0 && z.re < 0.0).collect();
    let want = if n.is_multiple_of(2) { 1 } else { 0 };
    let mut passed = negatives.len() == want;
    if passed && want == 1 {
        let min_mod = roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        passed = (negatives[0].norm() - min_mod).abs() < 1e-12;
    }
    check(n, "negative_root_parity", passed, format!("{} real negative roots", negatives.len()))
}

/// v_j = β^{j−1} − β^{j−2} − ⋯ − 1 equals β^{−1} + ⋯ + β^{−(n−j+1)}.
pub fn check_eigenvector_identity(basis: &ParryBasis) -> CheckResult {
    let n = basis.n as usize;
    let mut worst = 0.0f64;
    for j in 1..=n {
        let mut direct = basis.beta.powi(j as i32 - 1);
        for k in 0..j - 1 {
            direct -= basis.beta.powi(k as i32);
        }
        let mut inverse = 0.0;
        for k in 1..=(n - j + 1) {
            inverse += basis.beta.powi(-(k as i32));
        }
        worst = worst.max((direct - inverse).abs());
    }
    check(basis.n, "eigenvector_identity", worst < 1e-12, format!("max deviation = {worst:.3e}"))
}

/// ⟨v, w⟩ = β^{n−1} with w = (2^{n−2}, …, 2, 1, 1).
pub fn check_vw_identity(basis: &ParryBasis) -> CheckResult {
    let dot: f64 = basis.v.iter().zip(&basis.w).map(|(a, b)| a * b).sum();
    let want = basis.beta.powi(basis.n as i32 - 1);
    let dev = (dot - want).abs() / want;
    check(basis.n, "vw_identity", dev < 1e-10, format!("relative deviation = {dev:.3e}"))
}

/// ⟨v, u⟩ = ∏_{j≥2}(β − λ_j), the eigenprojection normalizer.
pub fn check_vu_product(basis: &ParryBasis) -> CheckResult {
    let dot: f64 = basis.v.iter().zip(&basis.u).map(|(a, b)| a * b).sum();
    let prod = basis.roots[1..]
        .iter()
        .fold(Complex::new(1.0, 0.0), |a, z| a * (Complex::new(basis.beta, 0.0) - z));
    let dev = (Complex::new(dot, 0.0) - prod).norm() / dot.abs();
    check(basis.n, "vu_product", dev < 1e-8, format!("relative deviation = {dev:.3e}"))
}

/// Cylinders at depth m tile [0,1): consecutive left endpoints advance by
/// exactly the previous width and the widths sum to 1.
pub fn check_partition_of_unity(basis: &ParryBasis, m: usize) -> Result<CheckResult> {
    let mut worst_chain = 0.0f64;
    let mut expected_left = 0.0f64;
    let mut total = crate::Compensated::default();
    for cyl in enumerate_words(basis, m)? {
        worst_chain = worst_chain.max((cyl.left - expected_left).abs());
        expected_left = cyl.left + cyl.width;
        total.add(cyl.width);
    }
    let total_dev = (total.value() - 1.0).abs();
    let passed = worst_chain < 1e-12 && total_dev < 1e-10;
    Ok(check(
        basis.n,
        "partition_of_unity",
        passed,
        format!("m = {m}: max chain gap = {worst_chain:.3e}, |total - 1| = {total_dev:.3e}"),
    ))
}

/// The count recursion agrees with the brute-force scan over all bitstrings.
pub fn check_count_matches_brute(basis: &ParryBasis, m_max: usize) -> Result<CheckResult> {
    for m in 1..=m_max {
        let exact = count_exact(basis.n, m as u32)?;
        let brute = count_brute(basis.n, m as u32)?;
        if exact.counts != brute.counts {
            return Ok(check(
                basis.n,
                "count_matches_brute",
                false,
                format!("mismatch at m = {m}: {:?} vs {:?}", exact.counts, brute.counts),
            ));
        }
    }
    Ok(check(basis.n, "count_matches_brute", true, format!("m = 1..={m_max} all agree")))
}

/// The two closed forms of the invariant density's piece values agree.
pub fn check_parry_two_forms(basis: &ParryBasis) -> CheckResult {
    let (nested, direct) = parry_density_forms(basis);
    let worst = nested
        .iter()
        .zip(&direct)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    check(basis.n, "parry_two_forms", worst < 1e-12, format!("max deviation = {worst:.3e}"))
}

/// Tf_β = f_β at 1000 interior midpoints.
pub fn check_parry_fixed_point(basis: &ParryBasis) -> Result<CheckResult> {
    let fb = parry_density(basis)?;
    let fb2 = fb.clone();
    let t = transfer_step(basis, move |x| fb2.eval(x));
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let x = (k as f64 + 0.5) / 1000.0;
        worst = worst.max((t(x) - fb.eval(x)).abs());
    }
    Ok(check(basis.n, "parry_fixed_point", worst < 1e-10, format!("sup deviation = {worst:.3e}")))
}

/// Greedy digits reconstruct their point: 0 ≤ x − Σ d_k β^{−k} < β^{−m}.
pub fn check_greedy_roundtrip(basis: &ParryBasis) -> Result<CheckResult> {
    let m = 20usize;
    let tol = basis.beta.powi(-(m as i32));
    let mut rng = SplitMix64::new(0xC0FFEE);
    let mut worst = 0.0f64;
    let mut ordered = true;
    for _ in 0..200 {
        let x = rng.next_f64();
        let digits = greedy_digits(basis, x, m)?;
        let mut s = 0.0;
        for (k, &d) in digits.digits.iter().enumerate() {
            s += d as f64 * basis.beta.powi(-(k as i32 + 1));
        }
        ordered &= s <= x + 1e-15;
        worst = worst.max(x - s);
    }
    let passed = ordered && worst < tol + 1e-12;
    Ok(check(
        basis.n,
        "greedy_roundtrip",
        passed,
        format!("200 points, m = {m}: max remainder = {worst:.3e} < beta^-m = {tol:.3e}"),
    ))
}

/// Runs every check for each order in `n_min..=n_max`. Exhaustive checks
/// (brute-force counts, the fixed-point sweep) run for n ≤ 6 where they are
/// cheap and already decisive.
pub fn run_suite(n_min: u32, n_max: u32) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for n in n_min..=n_max {
        let basis = build_basis(n)?;
        out.push(check_beta_in_range(n, basis.beta));
        out.push(check_two_minus_beta(n, basis.beta));
        out.push(check_spectral_gap(n, &basis.roots));
        out.push(check_lambda2_lower_bound(n, basis.beta, basis.lambda2_abs));
        if n == 2 || n == 3 {
            out.push(check_lambda2_equality(n, basis.beta, basis.lambda2_abs));
        }
        out.push(check_cube_root_bound(n, &basis.roots));
        out.push(check_root_product(n, &basis.roots));
        out.push(check_root_simplicity(n, &basis.roots));
        out.push(check_negative_root_parity(n, &basis.roots));
        out.push(check_eigenvector_identity(&basis));
        out.push(check_vw_identity(&basis));
        out.push(check_vu_product(&basis));
        out.push(check_partition_of_unity(&basis, 12)?);
        if n <= 6 {
            out.push(check_count_matches_brute(&basis, 12)?);
            out.push(check_parry_fixed_point(&basis)?);
        }
        out.push(check_parry_two_forms(&basis));
        out.push(check_greedy_roundtrip(&basis)?);
    }
    Ok(out)
}
