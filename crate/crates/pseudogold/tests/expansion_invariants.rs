//! Greedy digits, cylinder geometry, and the order structure of admissible
//! words.

use proptest::prelude::*;
use pseudogold::expansion::{
    digit_map, enumerate_words, greedy_digits, is_admissible_word, locate,
};
use pseudogold::parry::build_basis;
use pseudogold::rng::SplitMix64;

#[test]
fn greedy_digits_reconstruct_their_point() {
    for n in [2u32, 3, 5] {
        let b = build_basis(n).unwrap();
        let m = 20usize;
        let tol = b.beta.powi(-(m as i32));
        let mut rng = SplitMix64::new(1234 + n as u64);
        for _ in 0..10_000 {
            let x = rng.next_f64();
            let word = greedy_digits(&b, x, m).unwrap();
            assert!(is_admissible_word(n, &word.digits));
            // Horner from the tail keeps the partial sum below x
            let mut s = 0.0;
            for &d in word.digits.iter().rev() {
                s = (s + d as f64) / b.beta;
            }
            let rem = x - s;
            assert!(rem >= -1e-15, "n={n} x={x}: overshoot {rem:e}");
            assert!(rem < tol + 1e-12, "n={n} x={x}: remainder {rem:e} >= beta^-20");
        }
    }
}

#[test]
fn greedy_digits_match_iterated_digit_map() {
    let b = build_basis(3).unwrap();
    let mut rng = SplitMix64::new(99);
    for _ in 0..1_000 {
        let mut x = rng.next_f64();
        let word = greedy_digits(&b, x, 12).unwrap();
        for (k, &d) in word.digits.iter().enumerate() {
            let (digit, next) = digit_map(&b, x).unwrap();
            assert_eq!(digit, d, "digit {k} disagrees");
            x = next;
        }
    }
}

#[test]
fn cylinders_tile_the_interval() {
    for n in 2..=6 {
        let b = build_basis(n).unwrap();
        for m in [4usize, 8, 12, 16] {
            let mut expected_left = 0.0f64;
            let mut worst_gap = 0.0f64;
            let mut total = 0.0f64;
            let mut count = 0u64;
            for cyl in enumerate_words(&b, m).unwrap() {
                worst_gap = worst_gap.max((cyl.left - expected_left).abs());
                expected_left = cyl.left + cyl.width;
                total += cyl.width;
                count += 1;
            }
            assert!(worst_gap < 1e-12, "n={n} m={m}: chain gap {worst_gap:e}");
            assert!((total - 1.0).abs() < 1e-10, "n={n} m={m}: total {total}");
            assert_eq!(count, pseudogold::counting::count_exact(n, m as u32).unwrap().total());
        }
    }
}

#[test]
fn locate_agrees_with_greedy() {
    for n in [2u32, 4] {
        let b = build_basis(n).unwrap();
        let mut rng = SplitMix64::new(777);
        for _ in 0..10_000 {
            let x = rng.next_f64();
            let cyl = locate(&b, x, 14).unwrap();
            let word = greedy_digits(&b, x, 14).unwrap();
            assert_eq!(cyl.word.digits, word.digits);
            assert!(cyl.left <= x && x < cyl.left + cyl.width + 1e-12);
        }
    }
}

#[test]
fn every_enumerated_word_is_admissible_and_sorted() {
    for n in [2u32, 3] {
        let b = build_basis(n).unwrap();
        for m in 1..=10usize {
            let mut prev_left = -1.0;
            for cyl in enumerate_words(&b, m).unwrap() {
                assert!(is_admissible_word(n, &cyl.word.digits));
                assert!(cyl.left > prev_left, "lefts not strictly increasing");
                prev_left = cyl.left;
                assert!(cyl.width > 0.0);
            }
        }
    }
}

fn word_value(beta: f64, digits: &[u8]) -> f64 {
    let mut s = 0.0;
    for &d in digits.iter().rev() {
        s = (s + d as f64) / beta;
    }
    s
}

/// Caps every 1-run at n−1 by zeroing the digit that would complete a run;
/// admissible words are fixed points, so all of Ω_m is reachable.
fn repair(n: u32, mut digits: Vec<u8>) -> Vec<u8> {
    let mut run = 0u32;
    for d in &mut digits {
        if *d == 1 {
            run += 1;
            if run == n {
                *d = 0;
                run = 0;
            }
        } else {
            run = 0;
        }
    }
    digits
}

fn equal_length_pair() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (1usize..=12).prop_flat_map(|m| {
        (
            proptest::collection::vec(0u8..=1, m),
            proptest::collection::vec(0u8..=1, m),
        )
    })
}

proptest! {
    // Lexicographic order on equal-length admissible words is numeric order
    // of their cylinder left endpoints.
    #[test]
    fn lex_order_is_numeric_order((raw_a, raw_c) in equal_length_pair()) {
        let b = build_basis(2).unwrap();
        let a = repair(2, raw_a);
        let c = repair(2, raw_c);
        prop_assert!(is_admissible_word(2, &a) && is_admissible_word(2, &c));
        prop_assume!(a != c);
        let (va, vc) = (word_value(b.beta, &a), word_value(b.beta, &c));
        prop_assert_eq!(a < c, va < vc, "lex and numeric order disagree");
    }

    // The greedy word of any point in a cylinder starts with that cylinder's
    // word.
    #[test]
    fn greedy_extends_prefixes(x in 0.0f64..1.0, m in 1usize..=10) {
        let b = build_basis(3).unwrap();
        let cyl = locate(&b, x, m).unwrap();
        let longer = greedy_digits(&b, x, m + 4).unwrap();
        prop_assert_eq!(&longer.digits[..m], &cyl.word.digits[..]);
    }
}
