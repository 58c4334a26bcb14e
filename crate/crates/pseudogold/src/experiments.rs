//! Reproducible numerical experiments: the summary table over n, error curves
//! sup|f_m − f_β| and TV(f_m, f_β) against m, log-linear rate fits, the
//! skewed-source comparison, and the Monte Carlo histogram/KS run.

use crate::density::{
    parry_density, remainder_density, sup_error, tv_distance, ErrorValue, SourceDensity,
};
use crate::expansion::digit_map;
use crate::parry::{build_basis, ParryBasis};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// One row of the rate-constant table.
#[derive(Debug, Clone, Copy)]
pub struct Table1Row {
    pub n: u32,
    pub beta: f64,
    pub lambda2_abs: f64,
    /// β^{−1/(n−1)}, the proven lower bound for |λ₂| (an equality at n = 2, 3).
    pub beta_pow: f64,
    /// t/(1+t) with t = 1 − ln|λ₂|/ln β: the guaranteed decay exponent of
    /// sup|f_m − f_β| per unit m, in units of ln β.
    pub t_ratio: f64,
}

/// Rate constants for each order in `n_min..=n_max`.
pub fn table1(n_min: u32, n_max: u32) -> Result<Vec<Table1Row>> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::Domain(format!("need 2 <= n_min <= n_max, got {n_min}..{n_max}")));
    }
    (n_min..=n_max)
        .map(|n| {
            let b = build_basis(n)?;
            let (t, ratio) = b.rate_exponents();
            debug_assert!(t > 0.0);
            Ok(Table1Row {
                n,
                beta: b.beta,
                lambda2_abs: b.lambda2_abs,
                beta_pow: b.beta.powf(-1.0 / (n as f64 - 1.0)),
                t_ratio: ratio,
            })
        })
        .collect()
}

/// One m-step of an error curve. `sup_slack` is the certified-bound excess
/// over the raw grid sup (0 when the source is uncertified).
#[derive(Debug, Clone, Copy)]
pub struct ErrorRow {
    pub m: u32,
    pub sup_error: f64,
    pub tv: f64,
    pub sup_slack: f64,
}

/// sup and TV errors of f_m against f_β for m in a contiguous range.
#[derive(Debug, Clone)]
pub struct ErrorCurve {
    pub n: u32,
    pub source_name: String,
    pub grid_size: usize,
    pub rows: Vec<ErrorRow>,
}

pub fn error_curve(
    basis: &ParryBasis,
    source: &SourceDensity,
    m_min: u32,
    m_max: u32,
    grid_size: usize,
) -> Result<ErrorCurve> {
    if m_min < 1 || m_min > m_max {
        return Err(Error::Domain(format!("need 1 <= m_min <= m_max, got {m_min}..{m_max}")));
    }
    let fbeta = parry_density(basis)?;
    let mut rows = Vec::with_capacity((m_max - m_min + 1) as usize);
    for m in m_min..=m_max {
        let fm = remainder_density(basis, source, m, grid_size)?;
        let sup = sup_error(&fm, &fbeta);
        let tv = tv_distance(&fm, &fbeta);
        debug_assert!(tv.raw <= sup.raw + 1e-15);
        rows.push(ErrorRow {
            m,
            sup_error: sup.raw,
            tv: tv.raw,
            sup_slack: slack_of(sup),
        });
    }
    Ok(ErrorCurve { n: basis.n, source_name: source.name().to_string(), grid_size, rows })
}

fn slack_of(v: ErrorValue) -> f64 {
    v.certified.map(|c| c - v.raw).unwrap_or(0.0)
}

/// Least-squares fit of ln(sup_error) against m.
#[derive(Debug, Clone, Copy)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// |slope| in units of ln β; ≈ t/(1+t) is guaranteed, individual sources
    /// do better (the uniform source reaches t for small n).
    pub normalized: f64,
    pub r_squared: f64,
    pub used_rows: usize,
    pub dropped_rows: usize,
}

/// Fits ln(sup) = slope·m + intercept over the curve's rows, dropping rows
/// whose raw sup is within a factor 10 of its certified slack (where the grid
/// value no longer resolves the true error). Needs at least 4 usable rows.
pub fn fit_rate(curve: &ErrorCurve, basis: &ParryBasis) -> Result<RateFit> {
    let usable: Vec<(f64, f64)> = curve
        .rows
        .iter()
        .filter(|r| r.sup_error > 0.0 && r.sup_error >= 10.0 * r.sup_slack)
        .map(|r| (r.m as f64, r.sup_error.ln()))
        .collect();
    let dropped = curve.rows.len() - usable.len();
    if usable.len() < 4 {
        return Err(Error::TooFewRows(usable.len()));
    }
    let k = usable.len() as f64;
    let mean_x = usable.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = usable.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = usable.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = usable
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(RateFit {
        slope,
        intercept,
        normalized: -slope / basis.beta.ln(),
        r_squared,
        used_rows: usable.len(),
        dropped_rows: dropped,
    })
}

/// Error curves for the left-skewed power(2) source and the right-skewed
/// affine-decreasing source, with the per-m sup ratio power/affine.
#[derive(Debug, Clone)]
pub struct SkewComparison {
    pub power: ErrorCurve,
    pub affine: ErrorCurve,
    pub ratios: Vec<(u32, f64)>,
}

pub fn skew_comparison(
    basis: &ParryBasis,
    m_min: u32,
    m_max: u32,
    grid_size: usize,
) -> Result<SkewComparison> {
    let power = error_curve(basis, &SourceDensity::power(2.0)?, m_min, m_max, grid_size)?;
    let affine = error_curve(basis, &SourceDensity::affine_decreasing(), m_min, m_max, grid_size)?;
    let ratios = power
        .rows
        .iter()
        .zip(&affine.rows)
        .map(|(p, a)| (p.m, p.sup_error / a.sup_error))
        .collect();
    Ok(SkewComparison { power, affine, ratios })
}

pub const MC_MIN_SAMPLES: u64 = 10_000;
pub const MC_BINS: usize = 512;

/// Result of one Monte Carlo run: KS distance of the empirical t^m sample
/// against the f_β CDF, and the binned (512 equal bins) TV discrepancy.
#[derive(Debug, Clone, Copy)]
pub struct McReport {
    pub n: u32,
    pub m: u32,
    pub sample_count: u64,
    pub seed: u64,
    pub ks_stat: f64,
    pub tv_bins: f64,
}

/// Draws `sample_count` points from the source by inverse CDF, applies the
/// digit map m times, and compares the empirical law with f_β. Fully
/// deterministic given the seed: one counter-based draw per sample.
pub fn monte_carlo(
    basis: &ParryBasis,
    source: &SourceDensity,
    m: u32,
    sample_count: u64,
    seed: u64,
) -> Result<McReport> {
    if sample_count < MC_MIN_SAMPLES {
        return Err(Error::Domain(format!(
            "need at least {MC_MIN_SAMPLES} samples, got {sample_count}"
        )));
    }
    if source.sample_from_u01(0.5).is_none() {
        return Err(Error::UnsupportedSampling(source.name().to_string()));
    }
    let fbeta = parry_density(basis)?;
    let mut rng = SplitMix64::new(seed);
    let mut points = Vec::with_capacity(sample_count as usize);
    for _ in 0..sample_count {
        let mut x = source.sample_from_u01(rng.next_f64()).unwrap();
        for _ in 0..m {
            x = digit_map(basis, x)?.1;
        }
        points.push(x);
    }

    points.sort_unstable_by(|a, b| a.total_cmp(b));
    let inv = 1.0 / sample_count as f64;
    let mut ks = 0.0f64;
    for (i, &x) in points.iter().enumerate() {
        let c = fbeta.cdf(x);
        ks = ks.max(c - i as f64 * inv).max((i + 1) as f64 * inv - c);
    }

    let mut hist = vec![0u64; MC_BINS];
    for &x in &points {
        let b = ((x * MC_BINS as f64) as usize).min(MC_BINS - 1);
        hist[b] += 1;
    }
    let mut tv_bins = 0.0;
    for (b, &count) in hist.iter().enumerate() {
        let lo = b as f64 / MC_BINS as f64;
        let hi = (b + 1) as f64 / MC_BINS as f64;
        let exact = fbeta.cdf(hi) - fbeta.cdf(lo);
        tv_bins += (count as f64 * inv - exact).abs();
    }
    tv_bins *= 0.5;

    Ok(McReport { n: basis.n, m, sample_count, seed, ks_stat: ks, tv_bins })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        let rows = table1(2, 10).unwrap();
        assert_eq!(rows.len(), 9);
        assert!((rows[0].beta - 1.618033988749895).abs() < 1e-12);
        assert!((rows[0].lambda2_abs - rows[0].beta_pow).abs() < 1e-10);
        assert!((rows[0].t_ratio - 2.0 / 3.0).abs() < 1e-10);
        assert!((rows[1].t_ratio - 0.6).abs() < 1e-10);
        // beta increases toward 2, the ratio decreases toward 1/2
        assert!(rows.windows(2).all(|w| w[0].beta < w[1].beta));
        assert!(rows.windows(2).all(|w| w[0].t_ratio > w[1].t_ratio));
        assert!(rows.iter().all(|r| r.t_ratio > 0.5 && r.t_ratio <= 2.0 / 3.0));
        assert!(table1(1, 5).is_err());
        assert!(table1(3, 2).is_err());
    }

    #[test]
    fn error_curve_decreases() {
        let b = build_basis(2).unwrap();
        let c = error_curve(&b, &SourceDensity::uniform(), 1, 8, 128).unwrap();
        assert_eq!(c.rows.len(), 8);
        assert!(c.rows.windows(2).all(|w| w[1].sup_error < w[0].sup_error));
        assert!(c.rows.windows(2).all(|w| w[1].tv < w[0].tv));
        assert!((c.rows[0].sup_error - 0.10557280900008426).abs() < 1e-13);
    }

    #[test]
    fn fit_recovers_synthetic_decay() {
        // rows manufactured as exact beta^{-m}: slope must be -ln(beta) exactly
        let b = build_basis(2).unwrap();
        let rows = (3..=12)
            .map(|m| ErrorRow {
                m,
                sup_error: b.beta.powi(-(m as i32)),
                tv: 0.0,
                sup_slack: 0.0,
            })
            .collect();
        let curve =
            ErrorCurve { n: 2, source_name: "synthetic".into(), grid_size: 512, rows };
        let fit = fit_rate(&curve, &b).unwrap();
        assert!((fit.normalized - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.used_rows, 10);
        assert_eq!(fit.dropped_rows, 0);
    }

    #[test]
    fn fit_drops_slack_dominated_rows() {
        let b = build_basis(2).unwrap();
        let mut rows: Vec<ErrorRow> = (1..=6)
            .map(|m| ErrorRow {
                m,
                sup_error: b.beta.powi(-(m as i32)),
                tv: 0.0,
                sup_slack: 0.0,
            })
            .collect();
        rows.push(ErrorRow { m: 7, sup_error: 1e-15, tv: 0.0, sup_slack: 1e-3 });
        let curve =
            ErrorCurve { n: 2, source_name: "synthetic".into(), grid_size: 512, rows };
        let fit = fit_rate(&curve, &b).unwrap();
        assert_eq!(fit.dropped_rows, 1);
        assert!((fit.normalized - 1.0).abs() < 1e-12);

        let short = ErrorCurve {
            n: 2,
            source_name: "short".into(),
            grid_size: 512,
            rows: vec![ErrorRow { m: 1, sup_error: 0.1, tv: 0.0, sup_slack: 0.0 }; 3],
        };
        assert!(matches!(fit_rate(&short, &b), Err(Error::TooFewRows(3))));
    }

    #[test]
    fn skew_ratio_sanity() {
        let b = build_basis(2).unwrap();
        let s = skew_comparison(&b, 2, 6, 128).unwrap();
        assert_eq!(s.ratios.len(), 5);
        // both curves decay at the same exponent, so the ratio stays bounded
        assert!(s.ratios.iter().all(|&(_, r)| r > 0.1 && r < 10.0));
    }

    #[test]
    fn monte_carlo_deterministic() {
        let b = build_basis(2).unwrap();
        let r1 = monte_carlo(&b, &SourceDensity::uniform(), 3, 20_000, 42).unwrap();
        let r2 = monte_carlo(&b, &SourceDensity::uniform(), 3, 20_000, 42).unwrap();
        assert_eq!(r1.ks_stat.to_bits(), r2.ks_stat.to_bits());
        assert_eq!(r1.tv_bins.to_bits(), r2.tv_bins.to_bits());
        let r3 = monte_carlo(&b, &SourceDensity::uniform(), 3, 20_000, 43).unwrap();
        assert_ne!(r1.ks_stat.to_bits(), r3.ks_stat.to_bits());
        assert!(r1.ks_stat > 0.0 && r1.ks_stat < 0.05);
    }

    #[test]
    fn monte_carlo_guards() {
        let b = build_basis(2).unwrap();
        assert!(matches!(
            monte_carlo(&b, &SourceDensity::uniform(), 1, 100, 1),
            Err(Error::Domain(_))
        ));
        let custom = SourceDensity::custom(
            "flat",
            std::sync::Arc::new(|_| 1.0),
            Some(0.0),
        )
        .unwrap();
        assert!(matches!(
            monte_carlo(&b, &custom, 1, 20_000, 1),
            Err(Error::UnsupportedSampling(_))
        ));
    }
}
