//! Generators for synthetic instances with a known valid structure.
//!
//! A planted instance is built from frequency "battleship" profiles along a
//! chosen ordering, so recovery can be checked exactly: the planted ordering
//! is valid by construction, and in the grouped generator the cross-group
//! frequencies are arranged so that assemblages from different groups do not
//! seriate together. Used heavily by the test suite; also convenient for
//! benchmarking.

use rand::Rng;
use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::model::{AssemblageMatrix, Evaluator, Ordering, UnimodalityCriterion};

/// Specimens per assemblage row in generated instances.
pub const ROW_TOTAL: u64 = 10_000;

/// A matrix with one known valid ordering.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub matrix: AssemblageMatrix,
    /// The planted ordering, canonical form.
    pub ordering: Ordering,
}

/// A matrix built from several groups that each seriate on their own but do
/// not mix.
#[derive(Clone, Debug)]
pub struct PlantedGrouping {
    pub matrix: AssemblageMatrix,
    /// Group label per row.
    pub membership: Vec<usize>,
    /// Per group, the planted seriation as global rows in time order.
    pub sequences: Vec<Vec<usize>>,
}

/// One matrix whose class columns are unimodal along a hidden shuffled
/// ordering. The ordering is returned in canonical form and is valid under
/// the strict criterion by construction (asserted).
///
/// With four or more classes, the last two are monotone "clocks" (one rises
/// along the planted timeline, one falls). A pair of opposed monotone
/// columns admits only monotone arrangements, so every valid arrangement of
/// any subset follows the planted relative order or its mirror; that makes
/// planted instances fully order-pinned, which recovery tests rely on.
pub fn planted_single(n: usize, k: usize, seed: u64) -> PlantedInstance {
    assert!(n >= 1 && k >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let clocked = k >= 4;
    let hat_classes = if clocked { k - 2 } else { k };
    let hat_mass = if clocked { 0.8 } else { 1.0 };
    let clock_mass = 1.0 - hat_mass;
    let knots = spread_knots(n, hat_classes, &mut rng);
    let mut counts = vec![Vec::new(); n];
    for (t, &row) in order.iter().enumerate() {
        let mut freq: Vec<f64> =
            hat_weights(&knots, t as f64).iter().map(|w| w * hat_mass).collect();
        if clocked {
            let phase = if n == 1 { 0.5 } else { t as f64 / (n - 1) as f64 };
            freq.push(clock_mass * phase);
            freq.push(clock_mass * (1.0 - phase));
        }
        counts[row] = integer_profile(&freq, ROW_TOTAL);
    }
    let matrix = AssemblageMatrix::new(default_ids(n), counts).expect("generated rows are nonzero");
    let ordering = Ordering::from_vec_unchecked(order).canonicalize();

    let evaluator = Evaluator::new(&matrix, &UnimodalityCriterion::strict()).unwrap();
    assert!(
        evaluator.evaluate(&ordering).unwrap().valid,
        "planted construction must be valid"
    );
    PlantedInstance { matrix, ordering }
}

/// Number of classes each planted group dominates.
pub const CLASSES_PER_GROUP: usize = 3;

/// A matrix of `sizes.len()` planted groups over disjoint dominant class
/// blocks. Within its block each group runs a battleship whose first and
/// last classes vanish at the opposite end of the group's timeline; in every
/// foreign block a group contributes a flat mid-level frequency. Mixing rows
/// across groups then breaks some column: a foreign row interrupts the flat
/// plateau with a zero, or extends an interior-peaked column that has
/// already fallen to zero. Each group's own ordering stays valid (asserted).
pub fn planted_groups(sizes: &[usize], seed: u64) -> PlantedGrouping {
    let group_count = sizes.len();
    assert!(group_count >= 1 && sizes.iter().all(|&s| s >= 1));
    let n: usize = sizes.iter().sum();
    let k = CLASSES_PER_GROUP * group_count;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut rows: Vec<usize> = (0..n).collect();
    rows.shuffle(&mut rng);
    let mut membership = vec![0usize; n];
    let mut sequences = Vec::with_capacity(group_count);
    let mut cursor = 0;
    for (g, &size) in sizes.iter().enumerate() {
        let slice = rows[cursor..cursor + size].to_vec();
        cursor += size;
        for &r in &slice {
            membership[r] = g;
        }
        sequences.push(slice);
    }

    let dominant_mass = if group_count == 1 { 1.0 } else { 0.85 };
    let foreign_mass =
        if group_count == 1 { 0.0 } else { (1.0 - dominant_mass) / (group_count as f64 - 1.0) };
    let mut counts = vec![Vec::new(); n];
    for (g, seq) in sequences.iter().enumerate() {
        let ng = seq.len();
        let knots = group_knots(ng);
        for (t, &row) in seq.iter().enumerate() {
            let mut freq = vec![0.0f64; k];
            for (c, w) in hat_weights(&knots, t as f64).iter().enumerate() {
                freq[CLASSES_PER_GROUP * g + c] = w * dominant_mass;
            }
            for h in 0..group_count {
                if h == g {
                    continue;
                }
                for c in 0..CLASSES_PER_GROUP {
                    freq[CLASSES_PER_GROUP * h + c] = foreign_mass / CLASSES_PER_GROUP as f64;
                }
            }
            counts[row] = integer_profile(&freq, ROW_TOTAL);
        }
    }
    let matrix = AssemblageMatrix::new(default_ids(n), counts).expect("generated rows are nonzero");

    let evaluator = Evaluator::new(&matrix, &UnimodalityCriterion::strict()).unwrap();
    for seq in &sequences {
        assert!(evaluator.is_valid_rows(seq), "each planted group must seriate");
    }
    PlantedGrouping { matrix, membership, sequences }
}

/// Uniform random counts in `0..=20` with all-zero rows patched; no planted
/// structure at all.
pub fn random_matrix(n: usize, k: usize, seed: u64) -> AssemblageMatrix {
    assert!(n >= 1 && k >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row: Vec<u64> = (0..k).map(|_| rng.random_range(0..=20)).collect();
        if row.iter().all(|&c| c == 0) {
            let idx = rng.random_range(0..k);
            row[idx] = 1;
        }
        counts.push(row);
    }
    AssemblageMatrix::new(default_ids(n), counts).expect("rows patched to be nonzero")
}

fn default_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("a{:02}", i + 1)).collect()
}

/// Class peak positions over the timeline `0..n-1`, evenly spread with mild
/// jitter on the interior peaks.
fn spread_knots(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    if k == 1 {
        return vec![0.0];
    }
    let span = (n.max(2) - 1) as f64;
    let spacing = span / (k - 1) as f64;
    (0..k)
        .map(|j| {
            let base = j as f64 * spacing;
            if j == 0 || j == k - 1 {
                base
            } else {
                base + rng.random_range(-0.25..0.25) * spacing
            }
        })
        .collect()
}

/// Dominant-block peaks: first class at the start of the group's timeline,
/// one in the middle, one at the end.
fn group_knots(ng: usize) -> Vec<f64> {
    if ng <= 2 {
        vec![0.0, 0.5, 1.0]
    } else {
        vec![0.0, (ng - 1) as f64 / 2.0, (ng - 1) as f64]
    }
}

/// Piecewise-linear hat weights over sorted knots; the weights always sum to
/// one, and each class's weight is unimodal in `t` with its peak at its knot.
fn hat_weights(knots: &[f64], t: f64) -> Vec<f64> {
    let k = knots.len();
    let mut w = vec![0.0; k];
    if t <= knots[0] {
        w[0] = 1.0;
        return w;
    }
    if t >= knots[k - 1] {
        w[k - 1] = 1.0;
        return w;
    }
    let seg = (0..k - 1)
        .find(|&j| knots[j] <= t && t <= knots[j + 1])
        .expect("t lies inside the knot span");
    let span = knots[seg + 1] - knots[seg];
    let right = (t - knots[seg]) / span;
    w[seg] = 1.0 - right;
    w[seg + 1] = right;
    w
}

/// Round a frequency profile onto integer counts summing exactly to `total`;
/// the rounding remainder lands on the largest entry, which dwarfs it.
fn integer_profile(freq: &[f64], total: u64) -> Vec<u64> {
    let mut counts: Vec<u64> = freq.iter().map(|&f| (f * total as f64).round() as u64).collect();
    let sum: u64 = counts.iter().sum();
    let argmax = counts
        .iter()
        .enumerate()
        .max_by_key(|&(_, &c)| c)
        .map(|(i, _)| i)
        .expect("profile is non-empty");
    if sum < total {
        counts[argmax] += total - sum;
    } else {
        counts[argmax] -= sum - total;
    }
    counts
}
