//! The pseudo golden mean β, the spectrum of the digit-count transfer matrix,
//! and the eigenvector data behind the invariant density.

use nalgebra::{Complex, DMatrix};

use crate::{Error, Result};

/// Largest order built by default; |λ₂| → 1 as n grows and the experiments
/// stop being informative well before this.
pub const DEFAULT_MAX_N: u32 = 24;

/// Spectral data for one order n.
///
/// `beta` is the unique positive root of p(x) = xⁿ − (1 + x + ⋯ + xⁿ⁻¹); the
/// remaining roots all lie strictly inside the unit circle. `u`, `v` are the
/// unnormalized right/left eigenvectors of the transfer matrix at β, `w` is the
/// count vector at word length n−1, and `d_beta` = β^{−(n−1)}⟨v,u⟩ normalizes
/// the invariant density.
#[derive(Debug, Clone)]
pub struct ParryBasis {
    pub n: u32,
    pub beta: f64,
    /// All n roots of p, sorted by descending modulus; conjugate ties place the
    /// positive-imaginary member first. `roots[0]` is β.
    pub roots: Vec<Complex<f64>>,
    /// |roots[1]|, the modulus governing error decay rates.
    pub lambda2_abs: f64,
    /// u_j = β^{n−j} (1-indexed j), so u = (β^{n−1}, …, β, 1).
    pub u: Vec<f64>,
    /// v_j = β^{j−1} − (β^{j−2} + ⋯ + 1); equals β^{−1} + ⋯ + β^{−(n−j+1)}.
    pub v: Vec<f64>,
    /// w = (2^{n−2}, 2^{n−3}, …, 2, 1, 1).
    pub w: Vec<f64>,
    /// D(β) = β^{−(n−1)}⟨v,u⟩.
    pub d_beta: f64,
}

/// q(x) = x^{n+1} − 2xⁿ + 1 = (x − 1)p(x), evaluated as xⁿ(x − 2) + 1.
/// Better conditioned near β ≈ 2 than the raw geometric sum.
fn q_eval(n: i32, x: f64) -> f64 {
    x.powi(n) * (x - 2.0) + 1.0
}

fn q_deriv(n: i32, x: f64) -> f64 {
    ((n + 1) as f64) * x.powi(n) - 2.0 * (n as f64) * x.powi(n - 1)
}

/// Horner evaluation of p(z) = zⁿ − z^{n−1} − ⋯ − 1 and p′(z).
fn p_and_dp(n: u32, z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let one = Complex::new(1.0, 0.0);
    let mut p = one;
    let mut dp = Complex::new(0.0, 0.0);
    for _ in 0..n {
        dp = dp * z + p;
        p = p * z - one;
    }
    (p, dp)
}

/// The unique positive root of p, via Newton on the deflated q from 2 − 2⁻ⁿ.
///
/// The returned root is the attainable f64 fixed point; its residual satisfies
/// |q(β)| ≤ max(1e−14, 2ⁿ·ε) because q′(β) ≈ 2ⁿ bounds what any f64 can achieve.
pub fn solve_beta(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("solve_beta needs n >= 2, got {n}")));
    }
    let ni = n as i32;
    let mut x = 2.0 - (2.0f64).powi(-ni);
    let mut best = x;
    let mut best_q = q_eval(ni, x).abs();
    for _ in 0..60 {
        let q = q_eval(ni, x);
        let next = x - q / q_deriv(ni, x);
        if !(1.0..2.0).contains(&next) || next == x {
            break;
        }
        x = next;
        let qn = q_eval(ni, x).abs();
        if qn < best_q {
            best_q = qn;
            best = x;
        }
    }
    let tol = 1e-14f64.max((2.0f64).powi(ni) * f64::EPSILON);
    if !(best > 1.0 && best < 2.0) || best_q > tol {
        return Err(Error::Numerical(format!(
            "beta solve for n={n} did not converge (|q| = {best_q:.3e})"
        )));
    }
    Ok(best)
}

/// All n roots of p, by companion-matrix eigensolve plus Newton polish,
/// sorted by descending modulus (positive-imaginary first among ties).
pub fn solve_spectrum(n: u32) -> Result<Vec<Complex<f64>>> {
    if n < 2 {
        return Err(Error::Domain(format!("solve_spectrum needs n >= 2, got {n}")));
    }
    let beta = solve_beta(n)?;
    let nn = n as usize;
    let m = DMatrix::<f64>::from_fn(nn, nn, |i, j| {
        if i == 0 || j + 1 == i {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex<f64>> = m.complex_eigenvalues().iter().copied().collect();
    for z in roots.iter_mut() {
        for _ in 0..12 {
            let (p, dp) = p_and_dp(n, *z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            *z -= step;
            if step.norm() <= 1e-17 * z.norm().max(1.0) {
                break;
            }
        }
        // real-coefficient polynomial: snap residual imaginary dust to the axis
        if z.im.abs() <= 1e-11 * (1.0 + z.re.abs()) {
            z.im = 0.0;
        }
    }
    roots.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.im.total_cmp(&a.im))
    });
    // the leading root is real; pin it to the dedicated solver's value
    roots[0] = Complex::new(beta, 0.0);
    for z in &roots {
        let (p, _) = p_and_dp(n, *z);
        let scale = z.norm().powi(n as i32).max(1.0);
        if p.norm() > 1e-10 * scale {
            return Err(Error::Numerical(format!(
                "spectrum for n={n}: root {z} has residual {:.3e}",
                p.norm() / scale
            )));
        }
    }
    Ok(roots)
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Numerical(what()))
    }
}

/// Builds the full basis for order n (capped at [`DEFAULT_MAX_N`]), asserting
/// every structural invariant at construction.
pub fn build_basis(n: u32) -> Result<ParryBasis> {
    build_basis_with_cap(n, DEFAULT_MAX_N)
}

/// [`build_basis`] with an explicit order cap.
pub fn build_basis_with_cap(n: u32, cap: u32) -> Result<ParryBasis> {
    if n < 2 || n > cap {
        return Err(Error::UnsupportedOrder { n, cap });
    }
    let beta = solve_beta(n)?;
    let roots = solve_spectrum(n)?;
    let nn = n as usize;
    let ni = n as i32;

    let p_res = q_eval(ni, beta).abs() / (beta - 1.0);
    check(p_res <= 1e-12f64.max((2.0f64).powi(ni) * f64::EPSILON), || {
        format!("n={n}: |p(beta)| = {p_res:.3e} too large")
    })?;
    let two_minus = (2.0 - beta - beta.powi(-ni)).abs();
    check(two_minus <= 1e-12, || {
        format!("n={n}: |2 - beta - beta^-n| = {two_minus:.3e}")
    })?;

    let lambda2_abs = roots[1].norm();
    let lower = beta.powf(-1.0 / (n as f64 - 1.0));
    let cube = 3.0f64.powf(-1.0 / n as f64);
    for (j, z) in roots.iter().enumerate().skip(1) {
        check(z.norm() < 1.0, || format!("n={n}: |lambda_{}| >= 1", j + 1))?;
        check(z.norm() >= cube - 1e-10, || {
            format!("n={n}: |lambda_{}| below 3^(-1/n)", j + 1)
        })?;
    }
    check(lambda2_abs >= lower - 1e-10, || {
        format!("n={n}: |lambda_2| = {lambda2_abs} below beta^(-1/(n-1)) = {lower}")
    })?;
    for i in 0..nn {
        for j in (i + 1)..nn {
            check((roots[i] - roots[j]).norm() > 1e-8, || {
                format!("n={n}: roots {i} and {j} collide")
            })?;
        }
    }
    let negatives = roots.iter().skip(1).filter(|z| z.im == 0.0 && z.re < 0.0).count();
    let non_real = roots.iter().skip(1).filter(|z| z.im != 0.0).count();
    if n.is_multiple_of(2) {
        check(negatives == 1 && non_real == nn - 2, || {
            format!("n={n}: expected exactly one real negative root")
        })?;
        let neg = roots
            .iter()
            .skip(1)
            .find(|z| z.im == 0.0 && z.re < 0.0)
            .unwrap()
            .norm();
        let min_mod = roots.iter().skip(1).map(|z| z.norm()).fold(f64::MAX, f64::min);
        check(neg <= min_mod + 1e-10, || {
            format!("n={n}: real negative root is not the smallest in modulus")
        })?;
    } else {
        check(negatives == 0 && non_real == nn - 1, || {
            format!("n={n}: odd order must have no real root besides beta")
        })?;
    }

    let u: Vec<f64> = (0..nn).map(|i| beta.powi(ni - 1 - i as i32)).collect();
    // The direct form beta^{j-1} - (beta^{j-2} + ... + 1) cancels to O(1) from
    // terms of size ~2^n, so it carries ~n 2^{n-1} eps of absolute noise; the
    // all-positive inverse sum is the form worth keeping.
    let v_tol = 1e-12f64.max(n as f64 * 2f64.powi(ni - 1) * f64::EPSILON);
    let mut v = Vec::with_capacity(nn);
    for j in 1..=nn {
        let mut lower_sum = 0.0;
        for i in 0..(j - 1) {
            lower_sum += beta.powi(i as i32);
        }
        let direct = beta.powi(j as i32 - 1) - lower_sum;
        let mut inverse_sum = 0.0;
        for i in 1..=(nn - j + 1) {
            inverse_sum += beta.powi(-(i as i32));
        }
        check((direct - inverse_sum).abs() <= v_tol, || {
            format!("n={n}: v_{j} identity violated ({direct} vs {inverse_sum})")
        })?;
        check(inverse_sum > 0.0, || format!("n={n}: v_{j} not positive"))?;
        v.push(inverse_sum);
    }
    let mut w = vec![1.0; nn];
    for (i, slot) in w.iter_mut().enumerate().take(nn - 1) {
        *slot = (2.0f64).powi(ni - 2 - i as i32);
    }

    let vw: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
    // relative: beta^{n-1} reaches 2^23 at the order cap, where 1e-10 is sub-ulp
    check((vw - beta.powi(ni - 1)).abs() / beta.powi(ni - 1) <= 1e-10, || {
        format!("n={n}: <v,w> = {vw} but beta^(n-1) = {}", beta.powi(ni - 1))
    })?;
    let vu: f64 = v.iter().zip(&u).map(|(a, b)| a * b).sum();
    let mut prod = Complex::new(1.0, 0.0);
    for z in roots.iter().skip(1) {
        prod *= Complex::new(beta, 0.0) - z;
    }
    check(
        prod.im.abs() <= 1e-8 * vu && (prod.re - vu).abs() <= 1e-8 * vu.max(1.0),
        || format!("n={n}: <v,u> = {vu} but prod(beta - lambda_j) = {prod}"),
    )?;
    let d_beta = beta.powi(-(ni - 1)) * vu;

    Ok(ParryBasis {
        n,
        beta,
        roots,
        lambda2_abs,
        u,
        v,
        w,
        d_beta,
    })
}

impl ParryBasis {
    /// (t, t/(1+t)) with t = 1 − ln|λ₂|/ln β; t/(1+t) is the exponent in the
    /// optimized sup-norm decay rate β^{−mt/(1+t)}.
    pub fn rate_exponents(&self) -> (f64, f64) {
        let t = 1.0 - self.lambda2_abs.ln() / self.beta.ln();
        (t, t / (1.0 + t))
    }

    /// c_j = β^{−1} + ⋯ + β^{−j} for j = 1..n; c_n = 1 up to rounding, and
    /// c_{n−1} = β − 1 since 2 − β = β^{−n}.
    pub fn inverse_power_sums(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut acc = 0.0;
        let mut pw = 1.0;
        for _ in 0..self.n {
            pw /= self.beta;
            acc += pw;
            out.push(acc);
        }
        out
    }

    /// Cylinder width factor per trailing-run class: K(r) = c_{n−r}, r = 0..n−1.
    pub fn width_factors(&self) -> Vec<f64> {
        let c = self.inverse_power_sums();
        (0..self.n as usize).map(|r| c[self.n as usize - r - 1]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_examples() {
        assert!((solve_beta(2).unwrap() - 1.618).abs() < 5e-4);
        assert!((solve_beta(3).unwrap() - 1.839).abs() < 5e-4);
        let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((solve_beta(2).unwrap() - golden).abs() < 1e-12);
    }

    #[test]
    fn beta_rejects_small_n() {
        assert!(matches!(solve_beta(1), Err(Error::Domain(_))));
        assert!(matches!(solve_beta(0), Err(Error::Domain(_))));
    }

    #[test]
    fn spectrum_examples() {
        let r2 = solve_spectrum(2).unwrap();
        assert!((r2[0].re - 1.618033988749895).abs() < 1e-12);
        assert!((r2[1].re + 0.6180339887498949).abs() < 1e-10);
        assert!((solve_spectrum(4).unwrap()[1].norm() - 0.818).abs() < 5e-4);
        assert!((solve_spectrum(10).unwrap()[1].norm() - 0.968).abs() < 5e-4);
    }

    #[test]
    fn basis_examples() {
        let b = build_basis(2).unwrap();
        assert_eq!(b.w, vec![1.0, 1.0]);
        assert!((b.v[0] - 1.0).abs() < 1e-14);
        assert!((b.v[1] - (b.beta - 1.0)).abs() < 1e-12);
        assert!((b.u[0] - b.beta).abs() < 1e-14);
        assert_eq!(b.u[1], 1.0);
        assert!((b.d_beta - (2.0 * b.beta - 1.0) / b.beta).abs() < 1e-12);

        let b3 = build_basis(3).unwrap();
        assert_eq!(b3.w, vec![2.0, 1.0, 1.0]);
        let vw: f64 = b3.v.iter().zip(&b3.w).map(|(a, b)| a * b).sum();
        assert!((vw - b3.beta * b3.beta).abs() < 1e-10);
    }

    #[test]
    fn basis_cap() {
        assert!(matches!(
            build_basis(25),
            Err(Error::UnsupportedOrder { n: 25, cap: 24 })
        ));
        assert!(matches!(
            build_basis(1),
            Err(Error::UnsupportedOrder { n: 1, cap: 24 })
        ));
        assert!(build_basis_with_cap(25, 30).is_ok());
    }

    #[test]
    fn rate_exponent_examples() {
        let (t2, r2) = build_basis(2).unwrap().rate_exponents();
        assert!((t2 - 2.0).abs() < 1e-10);
        assert!((r2 - 0.667).abs() < 5e-4);
        let (_, r3) = build_basis(3).unwrap().rate_exponents();
        assert!((r3 - 0.600).abs() < 5e-4);
    }

    #[test]
    fn inverse_power_sums_structure() {
        for n in 2..=6 {
            let b = build_basis(n).unwrap();
            let c = b.inverse_power_sums();
            assert!((c[n as usize - 1] - 1.0).abs() < 1e-12);
            assert!((c[n as usize - 2] - (b.beta - 1.0)).abs() < 1e-12);
            let k = b.width_factors();
            assert_eq!(k.len(), n as usize);
            assert!((k[0] - 1.0).abs() < 1e-12);
            assert!((k[1] - (b.beta - 1.0)).abs() < 1e-12);
        }
    }
}
