//! The invariant density, exact remainder densities, and the transfer
//! operator, cross-checked against each other and against closed forms.

use pseudogold::density::{
    evaluation_grid, parry_density, remainder_density, sup_error, transfer_iterate,
    transfer_step, SourceDensity, GRID_OFFSET,
};
use pseudogold::parry::build_basis;

#[test]
fn invariant_density_normalizes_and_descends() {
    for n in 2..=10u32 {
        let b = build_basis(n).unwrap();
        let f = parry_density(&b).unwrap();
        assert_eq!(f.values.len(), n as usize);
        assert!((f.cdf(1.0) - 1.0).abs() < 1e-12, "n={n}");
        assert!(f.values.windows(2).all(|w| w[0] > w[1]), "n={n}: not descending");
        assert!(f.values.iter().all(|&v| v > 0.0));
        // the top piece exceeds 1 (mass pushed left), the bottom sits below 1
        assert!(f.values[0] > 1.0 && f.values[n as usize - 1] < 1.0, "n={n}");
    }
}

#[test]
fn transfer_fixes_the_invariant_density() {
    for n in 2..=6u32 {
        let b = build_basis(n).unwrap();
        let fb = parry_density(&b).unwrap();
        let fb2 = fb.clone();
        let t = transfer_step(&b, move |x| fb2.eval(x));
        let mut worst = 0.0f64;
        for k in 0..1000 {
            let x = (k as f64 + 0.5) / 1000.0;
            worst = worst.max((t(x) - fb.eval(x)).abs());
        }
        assert!(worst < 1e-10, "n={n}: sup = {worst:e}");
    }
}

#[test]
fn word_sum_matches_operator_composition() {
    // two oracles for f_m with no shared code path: explicit sum over
    // cylinders vs m-fold operator composition
    for n in [2u32, 3] {
        let b = build_basis(n).unwrap();
        for source in [SourceDensity::uniform(), SourceDensity::power(2.0).unwrap()] {
            for m in [1u32, 2, 3, 6] {
                let fm = remainder_density(&b, &source, m, 128).unwrap();
                let s = source.clone();
                let composed = transfer_iterate(&b, move |x| s.eval(x), m);
                let mut worst = 0.0f64;
                for (&x, &v) in fm.grid.iter().zip(&fm.samples) {
                    worst = worst.max((composed(x) - v).abs());
                }
                assert!(worst < 1e-8, "n={n} m={m} {}: sup = {worst:e}", source.name());
            }
        }
    }
}

#[test]
fn affine_one_step_closed_form() {
    let b = build_basis(2).unwrap();
    let beta = b.beta;
    let f1 = remainder_density(&b, &SourceDensity::affine_decreasing(), 1, 256).unwrap();
    for (&x, &v) in f1.grid.iter().zip(&f1.samples) {
        let mut expect = 2.0 * (1.0 - x / beta) / beta;
        if x < beta - 1.0 {
            expect += 2.0 * (1.0 - (1.0 + x) / beta) / beta;
        }
        assert!((v - expect).abs() < 1e-13, "x={x}");
    }
}

#[test]
fn grid_avoids_breakpoints() {
    for n in 2..=6u32 {
        let b = build_basis(n).unwrap();
        let grid = evaluation_grid(&b, 512);
        assert!(grid.windows(2).all(|w| w[0] < w[1]), "n={n}: grid not ascending");
        assert!(grid[0] > 0.0 && *grid.last().unwrap() < 1.0);
        let c = b.inverse_power_sums();
        for &x in &grid {
            for &edge in c[..n as usize - 1].iter() {
                assert!(
                    (x - edge).abs() >= GRID_OFFSET * 0.99,
                    "n={n}: grid point {x} touches breakpoint {edge}"
                );
            }
        }
    }
}

#[test]
fn errors_shrink_monotonically_for_smooth_sources() {
    let b = build_basis(2).unwrap();
    let fb = parry_density(&b).unwrap();
    for source in [
        SourceDensity::uniform(),
        SourceDensity::power(2.0).unwrap(),
        SourceDensity::affine_decreasing(),
    ] {
        let mut prev = f64::INFINITY;
        for m in 1..=10u32 {
            let fm = remainder_density(&b, &source, m, 128).unwrap();
            let sup = sup_error(&fm, &fb).raw;
            assert!(sup < prev, "{} m={m}: {sup} >= {prev}", source.name());
            prev = sup;
        }
    }
}

#[test]
fn stationary_source_stays_fixed() {
    for n in [2u32, 3] {
        let b = build_basis(n).unwrap();
        let fb = parry_density(&b).unwrap();
        let src = SourceDensity::from_step("stationary", fb.clone());
        for m in [1u32, 5, 9] {
            let fm = remainder_density(&b, &src, m, 128).unwrap();
            let sup = sup_error(&fm, &fb);
            assert!(sup.raw < 1e-12, "n={n} m={m}: {:e}", sup.raw);
            assert!(sup.certified.is_none());
        }
    }
}

#[test]
fn stationary_sampler_inverts_the_cdf() {
    let b = build_basis(3).unwrap();
    let fb = parry_density(&b).unwrap();
    let src = SourceDensity::from_step("stationary", fb.clone());
    for k in 0..=1000 {
        let u = k as f64 / 1000.0;
        let x = src.sample_from_u01(u).unwrap();
        assert!((0.0..1.0).contains(&x));
        assert!((fb.cdf(x) - u).abs() < 1e-12, "u={u}: cdf mismatch");
    }
}
