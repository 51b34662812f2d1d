//! Independent oracles for the counting functions: the recursion-based
//! Stirling numbers against the inclusion-exclusion closed form, the
//! partition totals against the Bell triangle, and structural facts about
//! Stirling rows.

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, binomial};
use num_traits::{One, Signed, ToPrimitive, Zero};

use seriagraph::combinatorics::{
    all_partitions_count, factorial, format_count, stirling2, stirling_row_argmax,
    unique_seriation_count,
};

/// Closed form `S(n,m) = (1/m!) * sum_j (-1)^j C(m,j) (m-j)^n`.
fn stirling_inclusion_exclusion(n: usize, m: usize) -> BigUint {
    let mut acc = BigInt::zero();
    for j in 0..=m {
        let c = binomial(BigInt::from(m), BigInt::from(j));
        let powed = BigInt::from(m - j).pow(n as u32);
        let term = c * powed;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let mut m_fact = BigInt::one();
    for i in 2..=m {
        m_fact *= i as i64;
    }
    let (q, r) = acc.div_rem(&m_fact);
    assert!(r.is_zero(), "inclusion-exclusion sum must divide m! exactly");
    assert!(!q.is_negative());
    q.to_biguint().unwrap()
}

/// Bell numbers from the Bell triangle.
fn bell_triangle(n: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for v in &row {
            let sum = next.last().unwrap() + v;
            next.push(sum);
        }
        row = next;
    }
    row[0].clone()
}

#[test]
fn recursion_matches_inclusion_exclusion_up_to_60() {
    for n in 0..=60 {
        for m in 0..=n {
            assert_eq!(
                stirling2(n, m),
                stirling_inclusion_exclusion(n, m),
                "S({n},{m}) disagrees with the closed form"
            );
        }
    }
}

#[test]
fn partition_totals_match_bell_triangle_up_to_60() {
    for n in 1..=60 {
        assert_eq!(all_partitions_count(n), bell_triangle(n), "Bell({n})");
    }
}

#[test]
fn bell_triangle_spot_values() {
    assert_eq!(bell_triangle(3), BigUint::from(5u32));
    assert_eq!(bell_triangle(8), BigUint::from(4140u32));
    assert_eq!(bell_triangle(10), BigUint::from(115_975u32));
    assert_eq!(bell_triangle(12), BigUint::from(4_213_597u32));
}

#[test]
fn stirling_rows_rise_to_a_single_peak_then_fall() {
    for n in 4..=100 {
        let row: Vec<BigUint> = (1..=n).map(|m| stirling2(n, m)).collect();
        let peak_first = row
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .unwrap();
        let peak_last = row
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        assert!(peak_last - peak_first <= 1, "peak of row {n} is wider than two entries");
        for i in 0..peak_first {
            assert!(row[i] < row[i + 1], "row {n} not strictly rising at m={}", i + 1);
        }
        for i in peak_last..n - 1 {
            assert!(row[i] > row[i + 1], "row {n} not strictly falling at m={}", i + 1);
        }
    }
}

#[test]
fn stirling_row_peak_sits_before_half_n() {
    for n in 4..=100 {
        let peak = stirling_row_argmax(n);
        assert!(
            (peak as f64) < n as f64 / 2.0 + 1.0,
            "argmax {peak} of row {n} is not below n/2 + 1"
        );
    }
}

#[test]
fn prose_check_values() {
    assert_eq!(stirling2(10, 3).to_u64(), Some(9330));
    assert_eq!(format_count(&factorial(40), 4), "8.159e+47");
    assert_eq!(format_count(&all_partitions_count(40), 4), "1.575e+35");
}

#[test]
fn canonical_count_is_half_the_factorial() {
    for n in 2..=30 {
        assert_eq!(unique_seriation_count(n) * 2u32, factorial(n));
    }
}
