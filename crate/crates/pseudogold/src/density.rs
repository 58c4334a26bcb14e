//! The invariant Parry density f_β, the exact remainder densities f_m, the
//! one-step transfer operator, and sup/TV error norms.
//!
//! f_m is the density of βᵐ(x − Σ_{k≤m} x_k β^{−k}) = t^m(x) when x is drawn
//! from a source density f:
//!
//!   f_m(y) = β^{−m} Σ_{J ∈ Ω_m} χ_{[0,K(J))}(y) · f(L_J + β^{−m} y).
//!
//! Its only discontinuities are at the n−1 interior width factors K_r, which
//! coincide with the breakpoints of f_β; evaluation grids therefore sample
//! one-sided limits at ±[`GRID_OFFSET`] around each breakpoint and never at a
//! breakpoint itself, where the indicator is ambiguous at 1-ulp level.

use std::sync::Arc;

use crate::expansion::enumerate_words;
use crate::parry::ParryBasis;
use crate::{Compensated, Error, Result};

/// One-sided distance used to sample limits at step discontinuities.
pub const GRID_OFFSET: f64 = 1e-13;

const MIN_GRID: usize = 64;

/// A normalized source density on [0,1) with a known Lipschitz constant when
/// the family provides one; densities without a constant evaluate fine but
/// produce uncertified error norms.
#[derive(Clone)]
pub struct SourceDensity {
    kind: Kind,
    lipschitz: Option<f64>,
    name: String,
}

#[derive(Clone)]
enum Kind {
    Uniform,
    Power { alpha: f64 },
    Affine,
    Step(StepDensity),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for SourceDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SourceDensity")
            .field("name", &self.name)
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

impl SourceDensity {
    /// f(x) = 1.
    pub fn uniform() -> Self {
        SourceDensity { kind: Kind::Uniform, lipschitz: Some(0.0), name: "uniform".into() }
    }

    /// f(x) = αx^{α−1}, α ≥ 1. For α ≥ 2 the Lipschitz constant is α(α−1);
    /// for α in (1,2) the derivative is unbounded at 0 and the density is
    /// uncertified; α = 1 is the uniform density.
    pub fn power(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::InvalidDensity(format!("power exponent must be >= 1, got {alpha}")));
        }
        let lipschitz = if alpha == 1.0 {
            Some(0.0)
        } else if alpha >= 2.0 {
            Some(alpha * (alpha - 1.0))
        } else {
            None
        };
        Ok(SourceDensity {
            kind: Kind::Power { alpha },
            lipschitz,
            name: format!("power({alpha})"),
        })
    }

    /// f(x) = 2(1−x), the right-skewed mirror of power(2).
    pub fn affine_decreasing() -> Self {
        SourceDensity { kind: Kind::Affine, lipschitz: Some(2.0), name: "affine-decreasing".into() }
    }

    /// A step density as a source, e.g. f_β itself to start at stationarity.
    /// Normalization was already validated in closed form by
    /// [`StepDensity::new`]; the jumps make it non-Lipschitz, so error norms
    /// against it are uncertified.
    pub fn from_step(name: &str, step: StepDensity) -> Self {
        SourceDensity { kind: Kind::Step(step), lipschitz: None, name: name.into() }
    }

    /// A caller-supplied density. Checked at construction by composite-Simpson
    /// quadrature (∫ = 1 within 1e−10) and nonnegativity on a 10⁴-point grid;
    /// the named families are normalized in closed form instead. Without a
    /// declared Lipschitz constant the density runs uncertified.
    pub fn custom(
        name: &str,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        lipschitz: Option<f64>,
    ) -> Result<Self> {
        let d = SourceDensity { kind: Kind::Custom(f), lipschitz, name: name.into() };
        let panels = 5_000usize;
        let h = 1.0 / (2 * panels) as f64;
        let mut acc = Compensated::default();
        for i in 0..=(2 * panels) {
            let x = (i as f64 * h).min(1.0 - f64::EPSILON);
            let y = d.eval(x);
            if y < 0.0 {
                return Err(Error::InvalidDensity(format!("negative at x = {x}")));
            }
            let w = if i == 0 || i == 2 * panels {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc.add(w * y);
        }
        let integral = acc.value() * h / 3.0;
        if (integral - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDensity(format!("integral = {integral}, want 1")));
        }
        Ok(d)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Uniform => 1.0,
            Kind::Power { alpha } => {
                let a = *alpha;
                if a == 1.0 {
                    1.0
                } else if a == 2.0 {
                    2.0 * x
                } else if a == 3.0 {
                    3.0 * x * x
                } else if a == 4.0 {
                    4.0 * x * x * x
                } else if a.fract() == 0.0 && a <= 32.0 {
                    a * x.powi(a as i32 - 1)
                } else {
                    a * x.powf(a - 1.0)
                }
            }
            Kind::Affine => 2.0 * (1.0 - x),
            Kind::Step(s) => s.eval(x),
            Kind::Custom(f) => f(x),
        }
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Inverse-CDF transform of u ∈ [0,1); `None` for custom densities.
    pub fn sample_from_u01(&self, u: f64) -> Option<f64> {
        match &self.kind {
            Kind::Uniform => Some(u),
            Kind::Power { alpha } => Some(if *alpha == 1.0 { u } else { u.powf(1.0 / alpha) }),
            Kind::Affine => Some(1.0 - (1.0 - u).sqrt()),
            Kind::Step(s) => {
                let mut cum = 0.0;
                for (v, w) in s.values.iter().zip(s.breakpoints.windows(2)) {
                    let mass = v * (w[1] - w[0]);
                    if u < cum + mass {
                        return Some((w[0] + (u - cum) / v).min(1.0 - f64::EPSILON));
                    }
                    cum += mass;
                }
                Some(1.0 - f64::EPSILON)
            }
            Kind::Custom(_) => None,
        }
    }
}

/// Piecewise-constant density on [0,1): value `values[i]` on
/// [breakpoints[i], breakpoints[i+1]).
#[derive(Debug, Clone)]
pub struct StepDensity {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepDensity {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::InvalidDensity("breakpoints must bracket every piece".into()));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::InvalidDensity("breakpoints must run from 0 to 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDensity("breakpoints must be strictly ascending".into()));
        }
        if values.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::InvalidDensity("piece values must be nonnegative".into()));
        }
        let integral: f64 = values
            .iter()
            .zip(breakpoints.windows(2))
            .map(|(v, w)| v * (w[1] - w[0]))
            .sum();
        if (integral - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDensity(format!("step integral = {integral}, want 1")));
        }
        Ok(StepDensity { breakpoints, values })
    }

    /// Value on the half-open piece containing x; 0 outside [0,1).
    pub fn eval(&self, x: f64) -> f64 {
        if !(0.0..1.0).contains(&x) {
            return 0.0;
        }
        let i = self.breakpoints.partition_point(|&b| b <= x);
        self.values[i - 1]
    }

    /// Piecewise-linear CDF, clamped to [0,1].
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let mut acc = 0.0;
        for (v, w) in self.values.iter().zip(self.breakpoints.windows(2)) {
            if x >= w[1] {
                acc += v * (w[1] - w[0]);
            } else {
                acc += v * (x - w[0]);
                break;
            }
        }
        acc
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Both closed forms of the invariant density's piece values, 1/D(β)-normalized:
/// the nested-indicator form Σ_{s=0}^{n−j} β^{−s}/D and the direct form
/// (β^j − β^{j−1} − ⋯ − β)/D on piece j. They must agree to 1e−12.
pub fn parry_density_forms(basis: &ParryBasis) -> (Vec<f64>, Vec<f64>) {
    let n = basis.n as usize;
    let d = basis.d_beta;
    let nested: Vec<f64> = (1..=n)
        .map(|j| {
            let mut s = 0.0;
            for k in 0..=(n - j) {
                s += basis.beta.powi(-(k as i32));
            }
            s / d
        })
        .collect();
    let direct: Vec<f64> = (1..=n)
        .map(|j| {
            let mut s = basis.beta.powi(j as i32);
            for k in 1..j {
                s -= basis.beta.powi(k as i32);
            }
            s / d
        })
        .collect();
    (nested, direct)
}

/// The invariant density f_β as a step function with breakpoints at
/// c_j = β^{−1} + ⋯ + β^{−j}. Construction cross-checks the two closed forms.
pub fn parry_density(basis: &ParryBasis) -> Result<StepDensity> {
    let (nested, direct) = parry_density_forms(basis);
    for (j, (a, b)) in nested.iter().zip(&direct).enumerate() {
        if (a - b).abs() > 1e-12 {
            return Err(Error::Numerical(format!(
                "invariant density forms disagree on piece {}: {a} vs {b}",
                j + 1
            )));
        }
    }
    let c = basis.inverse_power_sums();
    let mut breakpoints = Vec::with_capacity(basis.n as usize + 1);
    breakpoints.push(0.0);
    breakpoints.extend_from_slice(&c[..basis.n as usize - 1]);
    breakpoints.push(1.0);
    StepDensity::new(breakpoints, nested)
}

/// Evaluation grid: `grid_size` uniform midpoints per piece of f_β plus
/// one-sided limits at ±[`GRID_OFFSET`] around every piece edge. No grid point
/// sits exactly on a breakpoint (or 0 or 1).
pub fn evaluation_grid(basis: &ParryBasis, grid_size: usize) -> Vec<f64> {
    let c = basis.inverse_power_sums();
    let mut edges = Vec::with_capacity(basis.n as usize + 1);
    edges.push(0.0);
    edges.extend_from_slice(&c[..basis.n as usize - 1]);
    edges.push(1.0);
    let mut grid = Vec::with_capacity((grid_size + 2) * basis.n as usize);
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = (b - a) / grid_size as f64;
        grid.push(a + GRID_OFFSET);
        for k in 0..grid_size {
            grid.push(a + h * (k as f64 + 0.5));
        }
        grid.push(b - GRID_OFFSET);
    }
    grid
}

/// f_m sampled on an evaluation grid, with the certified per-piece Lipschitz
/// bound |Ω_m|·β^{−2m}·L_f when the source carries a constant.
#[derive(Debug, Clone)]
pub struct EvaluatedDensity {
    pub m: u32,
    pub grid: Vec<f64>,
    pub samples: Vec<f64>,
    pub lipschitz_piecewise: Option<f64>,
}

impl EvaluatedDensity {
    pub fn certified(&self) -> bool {
        self.lipschitz_piecewise.is_some()
    }
}

fn max_spacing(grid: &[f64]) -> f64 {
    grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

fn trapezoid(grid: &[f64], samples: &[f64]) -> f64 {
    let mut acc = Compensated::default();
    for i in 1..grid.len() {
        acc.add((samples[i] + samples[i - 1]) * 0.5 * (grid[i] - grid[i - 1]));
    }
    acc.value()
}

/// Exact evaluation of f_m on the standard grid. Words are grouped by
/// trailing-run class (the indicator depends only on r(J)); each grid point
/// accumulates Σ f(L_J + β^{−m}x) class by class in lexicographic order with
/// compensated summation, so results are deterministic to the last bit.
pub fn remainder_density(
    basis: &ParryBasis,
    f: &SourceDensity,
    m: u32,
    grid_size: usize,
) -> Result<EvaluatedDensity> {
    if m < 1 {
        return Err(Error::Domain("remainder_density needs m >= 1".into()));
    }
    if grid_size < MIN_GRID {
        return Err(Error::Domain(format!("grid_size must be >= {MIN_GRID}, got {grid_size}")));
    }
    let n = basis.n as usize;
    let grid = evaluation_grid(basis, grid_size);
    let mut classes: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut word_count = 0u64;
    for cyl in enumerate_words(basis, m as usize)? {
        classes[cyl.trailing_ones].push(cyl.left);
        word_count += 1;
    }
    let scale = basis.beta.powi(-(m as i32));
    let widths = basis.width_factors();
    let mut acc = vec![Compensated::default(); grid.len()];
    for (r, class) in classes.iter().enumerate() {
        if class.is_empty() {
            continue;
        }
        // the grid is ascending: indicator x < K(r) holds exactly below cut
        let cut = grid.partition_point(|&x| x < widths[r]);
        for (i, &x) in grid.iter().take(cut).enumerate() {
            let sx = scale * x;
            let mut local = Compensated::default();
            for &left in class {
                local.add(f.eval(left + sx));
            }
            acc[i].add(local.value());
        }
    }
    let samples: Vec<f64> = acc.into_iter().map(|a| scale * a.value()).collect();
    let lipschitz_piecewise = f.lipschitz().map(|lf| word_count as f64 * scale * scale * lf);

    if let Some(l_pw) = lipschitz_piecewise {
        let max_s = samples.iter().copied().fold(0.0, f64::max);
        let slack =
            l_pw * max_spacing(&grid) / 4.0 + 4.0 * n as f64 * GRID_OFFSET * max_s + 1e-12;
        let integral = trapezoid(&grid, &samples);
        if (integral - 1.0).abs() > slack {
            return Err(Error::Numerical(format!(
                "f_{m} integral = {integral}, off by more than certified slack {slack:.3e}"
            )));
        }
    }
    Ok(EvaluatedDensity { m, grid, samples, lipschitz_piecewise })
}

/// The transfer operator of t: (Tf)(x) = β^{−1}[f(x/β) + f((1+x)/β)·1{x < K₁}]
/// with K₁ = β^{−1} + ⋯ + β^{−(n−1)} = β − 1, the width factor of the word (1).
/// Independent of the word enumeration; agrees with `remainder_density` at
/// m = 1 pointwise away from breakpoints.
pub fn transfer_step<F: Fn(f64) -> f64>(basis: &ParryBasis, f: F) -> impl Fn(f64) -> f64 {
    let beta = basis.beta;
    let k1 = basis.width_factors()[1];
    move |x| {
        let second = if x < k1 { f((1.0 + x) / beta) } else { 0.0 };
        (f(x / beta) + second) / beta
    }
}

/// m-fold composition of [`transfer_step`]. Each call fans out into 2 source
/// evaluations per level, so cost is O(2^m) per point; fine for the oracle
/// range m ≤ 12.
pub fn transfer_iterate(
    basis: &ParryBasis,
    f: impl Fn(f64) -> f64 + 'static,
    m: u32,
) -> Box<dyn Fn(f64) -> f64> {
    let beta = basis.beta;
    let k1 = basis.width_factors()[1];
    let mut g: Box<dyn Fn(f64) -> f64> = Box::new(f);
    for _ in 0..m {
        let prev = g;
        g = Box::new(move |x| {
            let second = if x < k1 { prev((1.0 + x) / beta) } else { 0.0 };
            (prev(x / beta) + second) / beta
        });
    }
    g
}

/// An error norm: the raw grid value, plus a certified upper bound when the
/// evaluated density carries Lipschitz data.
#[derive(Debug, Clone, Copy)]
pub struct ErrorValue {
    pub raw: f64,
    pub certified: Option<f64>,
}

/// sup|f_m − f_β| over the grid. f_m and f_β step at the same breakpoints, so
/// between grid points the difference moves at most L_piece·h/2 from a sample.
pub fn sup_error(fm: &EvaluatedDensity, fbeta: &StepDensity) -> ErrorValue {
    let raw = fm
        .grid
        .iter()
        .zip(&fm.samples)
        .map(|(&x, &s)| (s - fbeta.eval(x)).abs())
        .fold(0.0, f64::max);
    let certified = fm
        .lipschitz_piecewise
        .map(|l| raw + l * max_spacing(&fm.grid) / 2.0);
    ErrorValue { raw, certified }
}

/// Total-variation distance ½∫|f_m − f_β| by trapezoid on the shared grid.
pub fn tv_distance(fm: &EvaluatedDensity, fbeta: &StepDensity) -> ErrorValue {
    let diffs: Vec<f64> = fm
        .grid
        .iter()
        .zip(&fm.samples)
        .map(|(&x, &s)| (s - fbeta.eval(x)).abs())
        .collect();
    let raw = 0.5 * trapezoid(&fm.grid, &diffs);
    let max_d = diffs.iter().copied().fold(0.0, f64::max);
    let n = fbeta.values.len() as f64;
    let certified = fm
        .lipschitz_piecewise
        .map(|l| raw + l * max_spacing(&fm.grid) / 2.0 + 2.0 * n * GRID_OFFSET * max_d + 1e-12);
    ErrorValue { raw, certified }
}
