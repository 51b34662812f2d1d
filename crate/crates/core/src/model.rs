//! Problem-instance data model: assemblage count matrices, relative
//! frequencies, mirror-canonical orderings, and the unimodality evaluation
//! that defines what counts as a valid seriation.

use std::collections::HashSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::bootstrap::{self, BootstrapConfig, BootstrapError, FrequencyInterval};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("matrix needs at least one assemblage")]
    EmptyMatrix,
    #[error("matrix needs at least one class")]
    NoClasses,
    #[error("assemblage id must be non-empty (row {0})")]
    EmptyId(usize),
    #[error("assemblage ids must be unique, '{0}' repeats")]
    DuplicateId(String),
    #[error("assemblage '{id}' has {got} counts, expected {want}")]
    RaggedRow { id: String, got: usize, want: usize },
    #[error("assemblage '{0}' has an all-zero count row")]
    ZeroRow(String),
    #[error("sequence is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("ordering indexes {got} assemblages but the matrix has {want}")]
    OrderingMismatch { got: usize, want: usize },
    #[error(transparent)]
    Bootstrap(#[from] BootstrapError),
}

/// The problem instance: `n` assemblages by `k` classes of specimen counts.
///
/// Rows with a zero total are rejected at construction; every downstream
/// frequency is therefore well defined. Relative frequencies are computed
/// once and cached.
#[derive(Clone, Debug)]
pub struct AssemblageMatrix {
    ids: Vec<String>,
    counts: Vec<Vec<u64>>,
    freqs: OnceLock<FrequencyMatrix>,
}

impl AssemblageMatrix {
    pub fn new(ids: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self, ModelError> {
        if ids.is_empty() || counts.is_empty() {
            return Err(ModelError::EmptyMatrix);
        }
        debug_assert_eq!(ids.len(), counts.len());
        let classes = counts[0].len();
        if classes == 0 {
            return Err(ModelError::NoClasses);
        }
        let mut seen = HashSet::new();
        for (i, id) in ids.iter().enumerate() {
            if id.is_empty() {
                return Err(ModelError::EmptyId(i));
            }
            if !seen.insert(id.as_str()) {
                return Err(ModelError::DuplicateId(id.clone()));
            }
        }
        for (id, row) in ids.iter().zip(&counts) {
            if row.len() != classes {
                return Err(ModelError::RaggedRow {
                    id: id.clone(),
                    got: row.len(),
                    want: classes,
                });
            }
            if row.iter().all(|&c| c == 0) {
                return Err(ModelError::ZeroRow(id.clone()));
            }
        }
        Ok(Self { ids, counts, freqs: OnceLock::new() })
    }

    /// Number of assemblages (rows).
    pub fn assemblage_count(&self) -> usize {
        self.ids.len()
    }

    /// Number of artifact classes (columns).
    pub fn class_count(&self) -> usize {
        self.counts[0].len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, row: usize) -> &str {
        &self.ids[row]
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.counts[row]
    }

    /// Relative frequencies, computed on first use and cached.
    pub fn frequencies(&self) -> &FrequencyMatrix {
        self.freqs
            .get_or_init(|| frequencies(self).expect("row totals validated at construction"))
    }
}

/// Per-assemblage relative class frequencies; each row sums to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyMatrix {
    values: Vec<Vec<f64>>,
    row_totals: Vec<u64>,
}

impl FrequencyMatrix {
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, row: usize, class: usize) -> f64 {
        self.values[row][class]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row]
    }

    /// Sample size behind each row.
    pub fn row_totals(&self) -> &[u64] {
        &self.row_totals
    }
}

/// Counts-to-frequencies: `values[i][j] = counts[i][j] / row_total(i)`.
pub fn frequencies(matrix: &AssemblageMatrix) -> Result<FrequencyMatrix, ModelError> {
    let mut values = Vec::with_capacity(matrix.assemblage_count());
    let mut row_totals = Vec::with_capacity(matrix.assemblage_count());
    for (id, row) in matrix.ids().iter().zip(matrix.counts()) {
        let total: u64 = row.iter().sum();
        if total == 0 {
            return Err(ModelError::ZeroRow(id.clone()));
        }
        values.push(row.iter().map(|&c| c as f64 / total as f64).collect());
        row_totals.push(total);
    }
    Ok(FrequencyMatrix { values, row_totals })
}

/// A candidate seriation: a permutation of assemblage row indices, read
/// earliest-to-latest or latest-to-earliest (the data cannot tell which).
///
/// The canonical representative of a mirror pair puts the smaller index at
/// the front, so the set of canonical orderings has size `n!/2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordering(Vec<usize>);

impl Ordering {
    pub fn new(perm: Vec<usize>) -> Result<Self, ModelError> {
        let n = perm.len();
        if n == 0 {
            return Err(ModelError::NotAPermutation(0));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(ModelError::NotAPermutation(n));
            }
            seen[p] = true;
        }
        Ok(Self(perm))
    }

    /// `0, 1, .., n-1`.
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub(crate) fn from_vec_unchecked(perm: Vec<usize>) -> Self {
        debug_assert!(Self::new(perm.clone()).is_ok());
        Self(perm)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the first index is below the last (or the ordering is a
    /// singleton), i.e. this is the representative of its mirror pair.
    pub fn is_canonical(&self) -> bool {
        self.0.len() < 2 || self.0[0] < self.0[self.0.len() - 1]
    }

    /// The mirror-pair representative: `self` if already canonical, else the
    /// reversal. Idempotent.
    pub fn canonicalize(mut self) -> Self {
        if !self.is_canonical() {
            self.0.reverse();
        }
        self
    }

    pub fn reversed(&self) -> Self {
        let mut perm = self.0.clone();
        perm.reverse();
        Self(perm)
    }
}

/// How unimodality comparisons tolerate sampling noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionMode {
    /// Exact frequency comparisons; equal values count as ties.
    Strict,
    /// Comparisons require bootstrap confidence intervals to be disjoint.
    Bootstrap,
}

impl CriterionMode {
    pub fn name(&self) -> &'static str {
        match self {
            CriterionMode::Strict => "strict",
            CriterionMode::Bootstrap => "bootstrap",
        }
    }
}

impl std::str::FromStr for CriterionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(CriterionMode::Strict),
            "bootstrap" => Ok(CriterionMode::Bootstrap),
            other => Err(format!("unknown criterion mode '{other}' (expected strict or bootstrap)")),
        }
    }
}

/// The validity rule applied to every class column of an ordering.
///
/// `alpha`, `replicates`, and `seed` only matter in bootstrap mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnimodalityCriterion {
    pub mode: CriterionMode,
    pub alpha: f64,
    pub replicates: u32,
    pub seed: u64,
}

impl UnimodalityCriterion {
    pub fn strict() -> Self {
        Self::default()
    }

    pub fn bootstrap(alpha: f64, replicates: u32, seed: u64) -> Self {
        Self { mode: CriterionMode::Bootstrap, alpha, replicates, seed }
    }
}

impl Default for UnimodalityCriterion {
    fn default() -> Self {
        Self { mode: CriterionMode::Strict, alpha: 0.05, replicates: 1000, seed: 0 }
    }
}

/// One monotonicity failure: a frequency increase observed after the column
/// had already started to descend.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub class_index: usize,
    /// Adjacent positions within the evaluated sequence.
    pub positions: (usize, usize),
    /// Size of the offending frequency increase.
    pub magnitude: f64,
}

/// Outcome of testing an ordering against the unimodality criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Sum of violation magnitudes; zero exactly when valid.
    pub score: f64,
}

impl EvaluationReport {
    fn clean() -> Self {
        Self { valid: true, violations: Vec::new(), score: 0.0 }
    }
}

/// True when `seq` rises to a single peak and then falls, with `tie`-equal
/// neighbors treated as flat. `seq` must be non-empty (a singleton is
/// trivially unimodal).
pub fn is_unimodal<F>(seq: &[f64], tie: F) -> bool
where
    F: Fn(f64, f64) -> bool,
{
    let mut descending = false;
    for pair in seq.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if tie(a, b) {
            continue;
        }
        if b < a {
            descending = true;
        } else if descending {
            return false;
        }
    }
    true
}

/// Decides whether one assemblage carries materially more of a class than
/// another. Strict and bootstrap modes plug in behind this trait.
pub trait FrequencyComparator: Send + Sync {
    /// True when row `a`'s frequency of `class` genuinely exceeds row `b`'s.
    fn exceeds(&self, a: usize, b: usize, class: usize) -> bool;

    /// Point frequency used for violation magnitudes.
    fn point(&self, row: usize, class: usize) -> f64;
}

struct StrictComparator {
    values: Vec<f64>,
    classes: usize,
}

impl FrequencyComparator for StrictComparator {
    fn exceeds(&self, a: usize, b: usize, class: usize) -> bool {
        self.values[a * self.classes + class] > self.values[b * self.classes + class]
    }

    fn point(&self, row: usize, class: usize) -> f64 {
        self.values[row * self.classes + class]
    }
}

struct BootstrapComparator {
    intervals: Vec<FrequencyInterval>,
    classes: usize,
}

impl FrequencyComparator for BootstrapComparator {
    fn exceeds(&self, a: usize, b: usize, class: usize) -> bool {
        bootstrap::significantly_greater(
            &self.intervals[a * self.classes + class],
            &self.intervals[b * self.classes + class],
        )
    }

    fn point(&self, row: usize, class: usize) -> f64 {
        self.intervals[row * self.classes + class].point
    }
}

/// Per-class scan phase: a column may rise freely until its first genuine
/// descent, after which any genuine ascent is a violation.
#[derive(Clone, Debug)]
pub struct PrefixScan {
    descending: Vec<bool>,
    last_row: usize,
    valid: bool,
}

impl PrefixScan {
    pub fn is_valid(&self) -> bool {
        self.valid
    }
}

/// Reusable unimodality evaluator for one matrix under one criterion.
///
/// Construction does all mode-specific preparation (frequency snapshot or
/// bootstrap interval tables); evaluation is then a pure read, safe to share
/// across worker threads. Sequences may name any subset of rows in any
/// order, which is how per-group evaluation works in multigroup solving.
pub struct Evaluator {
    comparator: Box<dyn FrequencyComparator>,
    assemblages: usize,
    classes: usize,
}

impl Evaluator {
    pub fn new(matrix: &AssemblageMatrix, criterion: &UnimodalityCriterion) -> Result<Self, ModelError> {
        let classes = matrix.class_count();
        let comparator: Box<dyn FrequencyComparator> = match criterion.mode {
            CriterionMode::Strict => {
                let values = matrix.frequencies().values().iter().flatten().copied().collect();
                Box::new(StrictComparator { values, classes })
            }
            CriterionMode::Bootstrap => {
                let cfg = BootstrapConfig::new(criterion.alpha, criterion.replicates, criterion.seed)?;
                let mut intervals = Vec::with_capacity(matrix.assemblage_count() * classes);
                for row in matrix.counts() {
                    intervals.extend(bootstrap::bootstrap_intervals(row, &cfg)?);
                }
                Box::new(BootstrapComparator { intervals, classes })
            }
        };
        Ok(Self { comparator, assemblages: matrix.assemblage_count(), classes })
    }

    pub fn assemblage_count(&self) -> usize {
        self.assemblages
    }

    /// Full report for a sequence of distinct row indices.
    pub fn report_rows(&self, rows: &[usize]) -> EvaluationReport {
        let mut violations = Vec::new();
        let mut score = 0.0;
        for class in 0..self.classes {
            let mut descending = false;
            for (pos, pair) in rows.windows(2).enumerate() {
                let (a, b) = (pair[0], pair[1]);
                if self.comparator.exceeds(a, b, class) {
                    descending = true;
                } else if self.comparator.exceeds(b, a, class) && descending {
                    let magnitude =
                        self.comparator.point(b, class) - self.comparator.point(a, class);
                    violations.push(Violation { class_index: class, positions: (pos, pos + 1), magnitude });
                    score += magnitude;
                }
            }
        }
        EvaluationReport { valid: violations.is_empty(), violations, score }
    }

    /// Validity only, abandoning the scan at the first violation.
    pub fn is_valid_rows(&self, rows: &[usize]) -> bool {
        for class in 0..self.classes {
            let mut descending = false;
            for pair in rows.windows(2) {
                if self.comparator.exceeds(pair[0], pair[1], class) {
                    descending = true;
                } else if descending && self.comparator.exceeds(pair[1], pair[0], class) {
                    return false;
                }
            }
        }
        true
    }

    /// Begin an incremental left-to-right scan at `row`.
    pub fn start_scan(&self, row: usize) -> PrefixScan {
        PrefixScan { descending: vec![false; self.classes], last_row: row, valid: true }
    }

    /// Extend a scan by one row; `scan.is_valid()` goes false permanently on
    /// the first violation.
    pub fn advance_scan(&self, scan: &mut PrefixScan, row: usize) {
        let prev = scan.last_row;
        for class in 0..self.classes {
            if self.comparator.exceeds(prev, row, class) {
                scan.descending[class] = true;
            } else if scan.descending[class] && self.comparator.exceeds(row, prev, class) {
                scan.valid = false;
            }
        }
        scan.last_row = row;
    }

    /// Evaluate a full-matrix ordering.
    pub fn evaluate(&self, ordering: &Ordering) -> Result<EvaluationReport, ModelError> {
        if ordering.len() != self.assemblages {
            return Err(ModelError::OrderingMismatch { got: ordering.len(), want: self.assemblages });
        }
        Ok(self.report_rows(ordering.indices()))
    }

    /// A report known to be clean, for solutions already screened by
    /// [`Self::is_valid_rows`].
    pub(crate) fn clean_report() -> EvaluationReport {
        EvaluationReport::clean()
    }
}

/// Test one ordering of the whole matrix against the criterion.
pub fn evaluate_ordering(
    matrix: &AssemblageMatrix,
    ordering: &Ordering,
    criterion: &UnimodalityCriterion,
) -> Result<EvaluationReport, ModelError> {
    Evaluator::new(matrix, criterion)?.evaluate(ordering)
}
