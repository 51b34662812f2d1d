//! Sample-size-aware tolerance for unimodality comparisons.
//!
//! Each assemblage row is resampled multinomially at its own sample size,
//! giving a percentile confidence interval per class frequency. Two
//! frequencies differ significantly only when their intervals are disjoint,
//! so small samples tolerate larger apparent reversals than large ones.
//!
//! Everything here is deterministic: the generator for a row is seeded from
//! the configured seed and the row's counts, so results do not depend on
//! evaluation order or on how work was split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BootstrapError {
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    BadAlpha(f64),
    #[error("at least 100 bootstrap replicates required, got {0}")]
    TooFewReplicates(u32),
    #[error("cannot resample a row with zero total count")]
    ZeroRowTotal,
}

/// Percentile confidence interval for one class frequency of one assemblage.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequencyInterval {
    pub lower: f64,
    pub upper: f64,
    /// Observed frequency.
    pub point: f64,
    /// Row total the interval was resampled at.
    pub sample_size: u64,
}

/// Resampling parameters. Replicate counts under 100 are rejected outright;
/// counts under 1000 are legal but coarse (callers may want to warn).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BootstrapConfig {
    pub alpha: f64,
    pub replicates: u32,
    pub seed: u64,
}

/// Replicate count below which interval percentiles get noticeably coarse.
pub const RECOMMENDED_REPLICATES: u32 = 1000;

impl BootstrapConfig {
    pub fn new(alpha: f64, replicates: u32, seed: u64) -> Result<Self, BootstrapError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(BootstrapError::BadAlpha(alpha));
        }
        if replicates < 100 {
            return Err(BootstrapError::TooFewReplicates(replicates));
        }
        Ok(Self { alpha, replicates, seed })
    }
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self { alpha: 0.05, replicates: RECOMMENDED_REPLICATES, seed: 0 }
    }
}

/// Resample a count row multinomially at its observed frequencies and return
/// the `[alpha/2, 1 - alpha/2]` percentile interval of each class frequency.
///
/// The interval point is the observed frequency and is clamped into the
/// interval, so `lower <= point <= upper` always holds.
pub fn bootstrap_intervals(
    counts_row: &[u64],
    cfg: &BootstrapConfig,
) -> Result<Vec<FrequencyInterval>, BootstrapError> {
    let total: u64 = counts_row.iter().sum();
    if total == 0 {
        return Err(BootstrapError::ZeroRowTotal);
    }
    let classes = counts_row.len();
    let replicates = cfg.replicates as usize;
    let probs: Vec<f64> = counts_row.iter().map(|&c| c as f64 / total as f64).collect();
    let last_nonzero = counts_row
        .iter()
        .rposition(|&c| c > 0)
        .expect("nonzero total implies a nonzero class");

    let mut rng = ChaCha8Rng::seed_from_u64(row_seed(cfg.seed, counts_row));
    // freqs[class][replicate]
    let mut freqs = vec![vec![0.0f64; replicates]; classes];
    for rep in 0..replicates {
        let mut remaining = total;
        let mut mass_left = 1.0f64;
        for class in 0..classes {
            if counts_row[class] == 0 {
                continue;
            }
            let drawn = if class == last_nonzero {
                remaining
            } else if remaining == 0 {
                0
            } else {
                let p = (probs[class] / mass_left).clamp(0.0, 1.0);
                Binomial::new(remaining, p).expect("p clamped into [0,1]").sample(&mut rng)
            };
            remaining -= drawn;
            mass_left -= probs[class];
            freqs[class][rep] = drawn as f64 / total as f64;
        }
    }

    let lower_idx = (cfg.alpha / 2.0 * replicates as f64) as usize;
    let upper_idx = (((1.0 - cfg.alpha / 2.0) * replicates as f64) as usize).min(replicates - 1);
    let intervals = freqs
        .iter_mut()
        .zip(&probs)
        .map(|(samples, &point)| {
            samples.sort_by(f64::total_cmp);
            FrequencyInterval {
                lower: samples[lower_idx].min(point),
                upper: samples[upper_idx].max(point),
                point,
                sample_size: total,
            }
        })
        .collect();
    Ok(intervals)
}

/// Disjoint-interval significance test: `a` is significantly greater than
/// `b` only when `a`'s whole interval lies above `b`'s. Touching intervals
/// are not evidence of a difference.
pub fn significantly_greater(a: &FrequencyInterval, b: &FrequencyInterval) -> bool {
    a.lower > b.upper
}

/// Mix the configured seed with the row contents (splitmix64 steps) so equal
/// rows get equal generators no matter where or when they are resampled.
fn row_seed(seed: u64, counts_row: &[u64]) -> u64 {
    let mut h = splitmix64(seed ^ (counts_row.len() as u64));
    for &c in counts_row {
        h = splitmix64(h ^ c);
    }
    h
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> BootstrapConfig {
        BootstrapConfig::new(0.05, 1000, 42).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(BootstrapConfig::new(0.0, 1000, 0).is_err());
        assert!(BootstrapConfig::new(1.0, 1000, 0).is_err());
        assert!(BootstrapConfig::new(0.05, 99, 0).is_err());
        assert!(BootstrapConfig::new(0.05, 100, 0).is_ok());
    }

    #[test]
    fn zero_row_is_rejected() {
        assert_eq!(bootstrap_intervals(&[0, 0], &cfg()), Err(BootstrapError::ZeroRowTotal));
    }

    #[test]
    fn zero_count_class_collapses_to_zero() {
        let ivs = bootstrap_intervals(&[10, 0, 5], &cfg()).unwrap();
        assert_eq!(ivs[1].lower, 0.0);
        assert_eq!(ivs[1].upper, 0.0);
        assert_eq!(ivs[1].point, 0.0);
    }

    #[test]
    fn balanced_row_brackets_a_half() {
        let ivs = bootstrap_intervals(&[50, 50], &cfg()).unwrap();
        for iv in &ivs {
            assert!(iv.lower < 0.5 && 0.5 < iv.upper);
            assert!(iv.lower <= iv.point && iv.point <= iv.upper);
            assert_eq!(iv.sample_size, 100);
        }
        // Binomial(100, 0.5) percentile oracle: the 2.5% and 97.5% quantiles
        // sit near 40 and 60 successes.
        assert!((ivs[0].lower - 0.40).abs() < 0.03, "lower {}", ivs[0].lower);
        assert!((ivs[0].upper - 0.60).abs() < 0.03, "upper {}", ivs[0].upper);
    }

    #[test]
    fn huge_sample_degenerates_to_a_point() {
        let ivs = bootstrap_intervals(&[1_000_000, 0, 0], &cfg()).unwrap();
        assert_eq!(ivs[0].lower, 1.0);
        assert_eq!(ivs[0].upper, 1.0);
    }

    #[test]
    fn resampling_is_deterministic() {
        let a = bootstrap_intervals(&[7, 3, 12], &cfg()).unwrap();
        let b = bootstrap_intervals(&[7, 3, 12], &cfg()).unwrap();
        assert_eq!(a, b);
        let other_seed = BootstrapConfig::new(0.05, 1000, 43).unwrap();
        let c = bootstrap_intervals(&[7, 3, 12], &other_seed).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn intervals_tighten_with_sample_size() {
        let small = bootstrap_intervals(&[5, 5], &cfg()).unwrap();
        let large = bootstrap_intervals(&[500, 500], &cfg()).unwrap();
        for (s, l) in small.iter().zip(&large) {
            assert!(l.upper - l.lower < s.upper - s.lower);
        }
    }

    #[test]
    fn identical_rows_are_never_significantly_different() {
        let a = bootstrap_intervals(&[30, 20, 10], &cfg()).unwrap();
        let b = bootstrap_intervals(&[30, 20, 10], &cfg()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(!significantly_greater(x, y));
            assert!(!significantly_greater(y, x));
        }
    }

    #[test]
    fn disjoint_intervals_order() {
        let a = FrequencyInterval { lower: 0.4, upper: 0.6, point: 0.5, sample_size: 10 };
        let b = FrequencyInterval { lower: 0.1, upper: 0.3, point: 0.2, sample_size: 10 };
        assert!(significantly_greater(&a, &b));
        assert!(!significantly_greater(&b, &a));
        let c = FrequencyInterval { lower: 0.2, upper: 0.5, point: 0.3, sample_size: 10 };
        let d = FrequencyInterval { lower: 0.4, upper: 0.7, point: 0.6, sample_size: 10 };
        assert!(!significantly_greater(&c, &d));
        assert!(!significantly_greater(&d, &c));
    }

    #[test]
    fn never_significant_in_both_directions() {
        let rows: [&[u64]; 4] = [&[9, 1], &[5, 5], &[1, 9], &[100, 3]];
        let mut ivs = Vec::new();
        for r in rows {
            ivs.push(bootstrap_intervals(r, &cfg()).unwrap());
        }
        for x in &ivs {
            for y in &ivs {
                for (a, b) in x.iter().zip(y.iter()) {
                    assert!(!(significantly_greater(a, b) && significantly_greater(b, a)));
                }
            }
        }
    }
}
