//! Exhaustive search over canonical orderings for single-group seriation.
//!
//! The space of `n!/2` canonical permutations is split into first-two-element
//! prefix blocks handed round-robin to workers; each worker walks its blocks
//! in lexicographic order and the merge is deterministic, so results are
//! identical for any worker count. Exhaustion is refused above
//! [`ENUMERATION_LIMIT`] assemblages unless explicitly overridden.

use std::thread;
use std::time::Instant;

use thiserror::Error;

use crate::combinatorics::{BigCount, ComputeBudget, estimate_time, format_count, unique_seriation_count};
use crate::model::{AssemblageMatrix, EvaluationReport, Evaluator, ModelError, Ordering, UnimodalityCriterion};

/// Practical ceiling for direct enumeration: beyond 13 assemblages the
/// search space outgrows any reasonable wall-clock budget.
pub const ENUMERATION_LIMIT: usize = 13;

/// Estimated total seconds up to which exhaustion is a non-event.
const COMFORTABLE_SECONDS: f64 = 1e3;
/// Estimated total seconds up to which exhaustion is still worth scheduling.
const LIMIT_SECONDS: f64 = 1e6;

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error(
        "{n} assemblages exceed the practical enumeration limit of {ENUMERATION_LIMIT}: {estimate}; \
         enable the override to search anyway"
    )]
    FeasibilityRefused { n: usize, estimate: String },
    #[error("invalid enumeration request: {0}")]
    InstanceInvalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// What the search should return.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Every canonical ordering that satisfies the criterion.
    AllValid,
    /// All canonical orderings attaining the minimum violation score.
    BestScoring,
}

/// One exhaustive-search job.
#[derive(Clone, Debug)]
pub struct EnumerationRequest {
    pub matrix: AssemblageMatrix,
    pub criterion: UnimodalityCriterion,
    pub mode: SearchMode,
    pub worker_count: usize,
    pub feasibility_override: bool,
}

impl EnumerationRequest {
    pub fn new(matrix: AssemblageMatrix, criterion: UnimodalityCriterion) -> Self {
        Self { matrix, criterion, mode: SearchMode::AllValid, worker_count: 1, feasibility_override: false }
    }
}

/// Outcome of an exhaustive search, sorted by ascending score and then by
/// lexicographic permutation.
#[derive(Clone, Debug)]
pub struct EnumerationResult {
    pub solutions: Vec<(Ordering, EvaluationReport)>,
    /// Canonical orderings covered; `n!/2` when the search ran to completion.
    pub tested_count: BigCount,
    pub elapsed_seconds: f64,
}

/// Lazy stream of every canonical permutation of `0..n` in lexicographic
/// order; `n!/2` items for `n >= 2`, one for `n <= 1`.
pub fn canonical_permutations(n: usize) -> CanonicalPermutations {
    CanonicalPermutations { current: Some((0..n).collect()) }
}

pub struct CanonicalPermutations {
    current: Option<Vec<usize>>,
}

impl Iterator for CanonicalPermutations {
    type Item = Ordering;

    fn next(&mut self) -> Option<Ordering> {
        loop {
            let cur = self.current.as_mut()?;
            if cur.is_empty() {
                self.current = None;
                return None;
            }
            let canonical = cur.len() < 2 || cur[0] < cur[cur.len() - 1];
            let item = canonical.then(|| Ordering::from_vec_unchecked(cur.clone()));
            if !next_permutation(cur) {
                self.current = None;
            }
            if item.is_some() {
                return item;
            }
        }
    }
}

/// Advance to the lexicographic successor in place; false when `perm` was
/// already the last permutation.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let pivot = i - 1;
    let mut j = perm.len() - 1;
    while perm[j] <= perm[pivot] {
        j -= 1;
    }
    perm.swap(pivot, j);
    perm[i..].reverse();
    true
}

/// Exhaustively test every canonical ordering of the request's matrix.
///
/// The result is bit-identical for any `worker_count`.
pub fn solve_single(req: &EnumerationRequest) -> Result<EnumerationResult, EnumerationError> {
    let started = Instant::now();
    if req.worker_count == 0 {
        return Err(EnumerationError::InstanceInvalid("worker count must be at least 1".into()));
    }
    let n = req.matrix.assemblage_count();
    if n > ENUMERATION_LIMIT && !req.feasibility_override {
        let report = feasibility_report(n, &ComputeBudget::default());
        return Err(EnumerationError::FeasibilityRefused { n, estimate: report.summary() });
    }
    let evaluator = Evaluator::new(&req.matrix, &req.criterion)?;

    if n == 1 {
        let ordering = Ordering::identity(1);
        let report = evaluator.evaluate(&ordering)?;
        return Ok(EnumerationResult {
            solutions: vec![(ordering, report)],
            tested_count: BigCount::from(1u32),
            elapsed_seconds: started.elapsed().as_secs_f64(),
        });
    }

    let mut blocks = Vec::with_capacity(n * (n - 1));
    for a in 0..n {
        for b in 0..n {
            if a != b {
                blocks.push((a, b));
            }
        }
    }
    let workers = req.worker_count.min(blocks.len()).max(1);
    let outputs: Vec<WorkerOutput> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let blocks = &blocks;
                let evaluator = &evaluator;
                let mode = req.mode;
                scope.spawn(move || scan_blocks(n, blocks, w, workers, evaluator, mode))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let tested: u64 = outputs.iter().map(|o| o.tested).sum();
    let mut solutions = match req.mode {
        SearchMode::AllValid => outputs.into_iter().flat_map(|o| o.solutions).collect::<Vec<_>>(),
        SearchMode::BestScoring => {
            let best = outputs
                .iter()
                .filter(|o| !o.solutions.is_empty())
                .map(|o| o.best_score)
                .min_by(f64::total_cmp)
                .expect("at least one canonical ordering exists");
            outputs
                .into_iter()
                .filter(|o| !o.solutions.is_empty() && o.best_score == best)
                .flat_map(|o| o.solutions)
                .collect()
        }
    };
    solutions.sort_by(|a, b| a.1.score.total_cmp(&b.1.score).then_with(|| a.0.cmp(&b.0)));

    Ok(EnumerationResult {
        solutions,
        tested_count: BigCount::from(tested),
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

struct WorkerOutput {
    solutions: Vec<(Ordering, EvaluationReport)>,
    best_score: f64,
    tested: u64,
}

fn scan_blocks(
    n: usize,
    blocks: &[(usize, usize)],
    worker: usize,
    stride: usize,
    evaluator: &Evaluator,
    mode: SearchMode,
) -> WorkerOutput {
    let mut out = WorkerOutput { solutions: Vec::new(), best_score: f64::INFINITY, tested: 0 };
    let mut perm = vec![0usize; n];
    for &(a, b) in blocks.iter().skip(worker).step_by(stride) {
        perm[0] = a;
        perm[1] = b;
        let mut suffix: Vec<usize> = (0..n).filter(|&x| x != a && x != b).collect();
        loop {
            perm[2..].copy_from_slice(&suffix);
            if perm[0] < perm[n - 1] {
                out.tested += 1;
                match mode {
                    SearchMode::AllValid => {
                        if evaluator.is_valid_rows(&perm) {
                            out.solutions
                                .push((Ordering::from_vec_unchecked(perm.clone()), Evaluator::clean_report()));
                        }
                    }
                    SearchMode::BestScoring => {
                        let report = evaluator.report_rows(&perm);
                        if report.score < out.best_score {
                            out.best_score = report.score;
                            out.solutions.clear();
                        }
                        if report.score == out.best_score {
                            out.solutions.push((Ordering::from_vec_unchecked(perm.clone()), report));
                        }
                    }
                }
            }
            if !next_permutation(&mut suffix) {
                break;
            }
        }
    }
    out
}

/// Single-threaded reference path: walk all `n!` permutations, collapse
/// mirror pairs, and evaluate each survivor in full. Slow by design; the
/// parallel solver is checked against it.
pub fn solve_single_reference(req: &EnumerationRequest) -> Result<EnumerationResult, EnumerationError> {
    let started = Instant::now();
    let n = req.matrix.assemblage_count();
    if n > ENUMERATION_LIMIT && !req.feasibility_override {
        let report = feasibility_report(n, &ComputeBudget::default());
        return Err(EnumerationError::FeasibilityRefused { n, estimate: report.summary() });
    }
    let evaluator = Evaluator::new(&req.matrix, &req.criterion)?;

    let mut canonical = std::collections::BTreeSet::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let o = Ordering::from_vec_unchecked(perm.clone()).canonicalize();
        canonical.insert(o.indices().to_vec());
        if !next_permutation(&mut perm) {
            break;
        }
    }

    let tested = canonical.len() as u64;
    let mut solutions = Vec::new();
    let mut best = f64::INFINITY;
    for seq in canonical {
        let report = evaluator.report_rows(&seq);
        match req.mode {
            SearchMode::AllValid => {
                if report.valid {
                    solutions.push((Ordering::from_vec_unchecked(seq), report));
                }
            }
            SearchMode::BestScoring => {
                if report.score < best {
                    best = report.score;
                    solutions.clear();
                }
                if report.score == best {
                    solutions.push((Ordering::from_vec_unchecked(seq), report));
                }
            }
        }
    }
    solutions.sort_by(|a, b| a.1.score.total_cmp(&b.1.score).then_with(|| a.0.cmp(&b.0)));
    Ok(EnumerationResult {
        solutions,
        tested_count: BigCount::from(tested),
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

/// How approachable exhaustive enumeration is at a given problem size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibilityTier {
    /// All solutions can be tested quickly.
    Comfortable,
    /// Near the practical limit; a long but schedulable run.
    Limit,
    /// Combinatorial explosion; exhaustion is impractical.
    Infeasible,
}

impl FeasibilityTier {
    pub fn name(&self) -> &'static str {
        match self {
            FeasibilityTier::Comfortable => "comfortable",
            FeasibilityTier::Limit => "limit",
            FeasibilityTier::Infeasible => "infeasible",
        }
    }
}

/// Solution-space size, estimated wall clock, and an advisory tier for
/// exhaustively testing `n` assemblages under a budget.
#[derive(Clone, Debug)]
pub struct FeasibilityReport {
    pub n: usize,
    pub solution_count: BigCount,
    pub estimate: crate::combinatorics::TimeEstimate,
    pub tier: FeasibilityTier,
    pub advisory: String,
}

impl FeasibilityReport {
    /// One-line summary used in refusal messages and CLI output.
    pub fn summary(&self) -> String {
        format!(
            "{} candidate orderings, ~{} s ({} yr) to test: {}",
            format_count(&self.solution_count, 2),
            self.estimate.seconds_display(2),
            self.estimate.years_display(2),
            self.advisory,
        )
    }
}

/// Estimate the cost of exhaustively testing all `n!/2` orderings of `n`
/// assemblages and classify it into an advisory tier.
///
/// The tier comes from the estimated wall clock, so a faster per-test budget
/// shifts feasibility upward slightly; the boundaries reproduce "quick up to
/// 10, limit at 13, explosion from 14" under the default budget.
pub fn feasibility_report(n: usize, budget: &ComputeBudget) -> FeasibilityReport {
    let solution_count = unique_seriation_count(n);
    let estimate = estimate_time(&solution_count, budget);
    let seconds = estimate.seconds();
    let tier = if seconds <= COMFORTABLE_SECONDS {
        FeasibilityTier::Comfortable
    } else if seconds <= LIMIT_SECONDS {
        FeasibilityTier::Limit
    } else {
        FeasibilityTier::Infeasible
    };
    let verdict = match tier {
        FeasibilityTier::Comfortable => "all solutions can be tested quickly",
        FeasibilityTier::Limit => "near the practical limit for direct enumeration",
        FeasibilityTier::Infeasible => "combinatorial explosion, direct enumeration is impractical",
    };
    let advisory = format!(
        "{verdict} (model-based estimate assuming {} cores at {} s per test)",
        budget.cores(),
        budget.seconds_per_test(),
    );
    FeasibilityReport { n, solution_count, estimate, tier, advisory }
}
