//! Seriation with multiple solution groups: partition the assemblages into
//! subsets that each satisfy the unimodality criterion on their own.
//!
//! Two interchangeable strategies sit behind [`GroupingStrategy`] and are
//! selected by name at runtime: `exact` enumerates every set partition
//! (desk-scale only; the space is the Bell number), `heuristic` grows groups
//! greedily from the most extendable valid triple, as suits problem sizes
//! where exact search explodes.

use std::thread;

use thiserror::Error;

use crate::combinatorics::{
    ComputeBudget, all_partitions_count, estimate_time, format_count, total_multigroup_solutions,
};
use crate::model::{
    AssemblageMatrix, EvaluationReport, Evaluator, ModelError, Ordering, UnimodalityCriterion,
};

/// Exact partition search is refused above this many assemblages unless
/// overridden; Bell(12) is about 4.2 million partitions, a desk-scale scan.
pub const EXACT_PARTITION_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum MultigroupError {
    #[error("cannot partition {n} items into {m} non-empty groups")]
    TooManyGroups { n: usize, m: usize },
    #[error("at least one group is required")]
    ZeroGroups,
    #[error("restricted-growth string is malformed at position {0}")]
    NotRestrictedGrowth(usize),
    #[error("partition of zero items")]
    EmptyPartition,
    #[error(
        "{n} assemblages exceed the exact-partition limit of {EXACT_PARTITION_LIMIT}: {detail}; \
         enable the override to search anyway"
    )]
    ScaleRefused { n: usize, detail: String },
    #[error("invalid multigroup request: {0}")]
    InstanceInvalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A set partition of `0..n` into unlabeled non-empty groups, encoded as a
/// restricted-growth string: `rgs[0] = 0` and each later entry is at most
/// one more than the running maximum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rgs: Vec<usize>,
    group_count: usize,
}

impl Partition {
    pub fn from_rgs(rgs: Vec<usize>) -> Result<Self, MultigroupError> {
        if rgs.is_empty() {
            return Err(MultigroupError::EmptyPartition);
        }
        let mut max = 0usize;
        for (i, &v) in rgs.iter().enumerate() {
            let cap = if i == 0 { 0 } else { max + 1 };
            if v > cap {
                return Err(MultigroupError::NotRestrictedGrowth(i));
            }
            max = max.max(v);
        }
        Ok(Self { group_count: max + 1, rgs })
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    pub fn group_count(&self) -> usize {
        self.group_count
    }

    /// Number of items partitioned.
    pub fn len(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgs.is_empty()
    }

    /// Member indices per group, in label order; members ascend within each
    /// group.
    pub fn group_members(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.group_count];
        for (i, &g) in self.rgs.iter().enumerate() {
            groups[g].push(i);
        }
        groups
    }

    pub fn singleton_count(&self) -> usize {
        let mut sizes = vec![0usize; self.group_count];
        for &g in &self.rgs {
            sizes[g] += 1;
        }
        sizes.iter().filter(|&&s| s == 1).count()
    }
}

/// All partitions of `n` items, every group count, in lexicographic
/// restricted-growth order; the stream length is the Bell number.
pub fn enumerate_all_partitions(n: usize) -> AllPartitions {
    AllPartitions {
        rgs: vec![0; n],
        prefix_max: vec![0; n],
        fresh: n > 0,
    }
}

pub struct AllPartitions {
    rgs: Vec<usize>,
    prefix_max: Vec<usize>,
    fresh: bool,
}

impl Iterator for AllPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.fresh {
            self.fresh = false;
            return Some(Partition::from_rgs(self.rgs.clone()).expect("generated rgs is valid"));
        }
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                return None;
            }
            i -= 1;
            if self.rgs[i] <= self.prefix_max[i - 1] {
                break;
            }
        }
        self.rgs[i] += 1;
        self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
        for j in i + 1..n {
            self.rgs[j] = 0;
            self.prefix_max[j] = self.prefix_max[i];
        }
        Some(Partition::from_rgs(self.rgs.clone()).expect("generated rgs is valid"))
    }
}

/// Partitions of `n` items into exactly `m` non-empty groups, in
/// lexicographic restricted-growth order; the stream length is `S(n, m)`.
pub fn enumerate_partitions(n: usize, m: usize) -> Result<ExactPartitions, MultigroupError> {
    if m == 0 {
        return Err(MultigroupError::ZeroGroups);
    }
    if m > n {
        return Err(MultigroupError::TooManyGroups { n, m });
    }
    let mut it = ExactPartitions {
        rgs: vec![0; n],
        prefix_max: vec![0; n],
        m,
        fresh: true,
    };
    // Seed with the lexicographically least m-group string.
    let ok = it.fill_least_suffix(1);
    debug_assert!(ok, "m <= n guarantees a first partition");
    Ok(it)
}

pub struct ExactPartitions {
    rgs: Vec<usize>,
    prefix_max: Vec<usize>,
    m: usize,
    fresh: bool,
}

impl ExactPartitions {
    /// Rewrite positions `from..` with the lex-least completion that still
    /// reaches exactly `m` groups: zeros first, then the missing labels in
    /// ascending order. False if too few positions remain.
    fn fill_least_suffix(&mut self, from: usize) -> bool {
        let n = self.rgs.len();
        let current_max = if from == 0 { 0 } else { self.prefix_max[from - 1] };
        let need = self.m - 1 - current_max.min(self.m - 1);
        let slots = n - from;
        if need > slots {
            return false;
        }
        let zeros = slots - need;
        for j in from..from + zeros {
            self.rgs[j] = 0;
            self.prefix_max[j] = current_max;
        }
        for (step, j) in (from + zeros..n).enumerate() {
            self.rgs[j] = current_max + 1 + step;
            self.prefix_max[j] = self.rgs[j];
        }
        true
    }
}

impl Iterator for ExactPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.fresh {
            self.fresh = false;
            return Some(Partition::from_rgs(self.rgs.clone()).expect("generated rgs is valid"));
        }
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                return None;
            }
            i -= 1;
            let cap = (self.prefix_max[i - 1] + 1).min(self.m - 1);
            let mut advanced = false;
            for v in self.rgs[i] + 1..=cap {
                self.rgs[i] = v;
                self.prefix_max[i] = self.prefix_max[i - 1].max(v);
                if self.fill_least_suffix(i + 1) {
                    advanced = true;
                    break;
                }
            }
            if advanced {
                return Some(Partition::from_rgs(self.rgs.clone()).expect("generated rgs is valid"));
            }
        }
    }
}

/// Which grouping algorithm to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultigroupMode {
    Exact,
    Agglomerative,
}

impl MultigroupMode {
    pub fn strategy_name(&self) -> &'static str {
        match self {
            MultigroupMode::Exact => "exact",
            MultigroupMode::Agglomerative => "heuristic",
        }
    }
}

/// Knobs for multigroup solving. Group-size and group-count bounds apply to
/// the exact search; the heuristic's procedure is fixed and ignores them.
#[derive(Clone, Debug)]
pub struct MultigroupConstraints {
    pub min_group_size: usize,
    pub max_groups: Option<usize>,
    pub mode: MultigroupMode,
    /// Also collect every valid ordering per group, not just the first.
    pub all_orderings: bool,
    /// Run the exact search past [`EXACT_PARTITION_LIMIT`].
    pub scale_override: bool,
    pub worker_count: usize,
}

impl Default for MultigroupConstraints {
    fn default() -> Self {
        Self {
            min_group_size: 1,
            max_groups: None,
            mode: MultigroupMode::Exact,
            all_orderings: false,
            scale_override: false,
            worker_count: 1,
        }
    }
}

impl MultigroupConstraints {
    fn validate(&self) -> Result<(), MultigroupError> {
        if self.min_group_size == 0 {
            return Err(MultigroupError::InstanceInvalid("min group size must be at least 1".into()));
        }
        if self.max_groups == Some(0) {
            return Err(MultigroupError::InstanceInvalid("max groups must be at least 1".into()));
        }
        if self.worker_count == 0 {
            return Err(MultigroupError::InstanceInvalid("worker count must be at least 1".into()));
        }
        Ok(())
    }
}

/// One solved group: which assemblages, in what order, with its evaluation.
#[derive(Clone, Debug)]
pub struct SolvedGroup {
    /// Global row indices, ascending.
    pub members: Vec<usize>,
    /// Canonical ordering over positions of `members`.
    pub ordering: Ordering,
    pub report: EvaluationReport,
    /// Every valid canonical ordering of the group, when requested.
    pub all_orderings: Option<Vec<Ordering>>,
}

impl SolvedGroup {
    /// The group's seriation as global row indices.
    pub fn sequence(&self) -> Vec<usize> {
        self.ordering.indices().iter().map(|&i| self.members[i]).collect()
    }
}

/// A partition of all assemblages with one valid seriation per group.
#[derive(Clone, Debug)]
pub struct GroupedSolution {
    pub partition: Partition,
    /// Groups in partition label order.
    pub groups: Vec<SolvedGroup>,
}

impl GroupedSolution {
    pub fn group_count(&self) -> usize {
        self.partition.group_count()
    }

    pub fn singleton_count(&self) -> usize {
        self.partition.singleton_count()
    }
}

/// Feasibility of every subset, indexed by member bitmask.
struct SubsetTable {
    entries: Vec<Option<SubsetEntry>>,
}

#[derive(Clone)]
struct SubsetEntry {
    /// Lexicographically least valid canonical ordering (local indices).
    ordering: Ordering,
    all: Option<Vec<Ordering>>,
}

impl SubsetTable {
    fn get(&self, mask: usize) -> Option<&SubsetEntry> {
        self.entries[mask].as_ref()
    }
}

fn mask_members(mask: usize) -> Vec<usize> {
    let mut members = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        members.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    members
}

/// Depth-first search for valid orderings of `members`, in lexicographic
/// order of local permutations. A prefix whose scan already carries a
/// violation can never recover, so its whole subtree is skipped; the first
/// valid leaf is therefore the lexicographically least one.
fn search_subset(evaluator: &Evaluator, members: &[usize], collect_all: bool) -> Option<SubsetEntry> {
    let size = members.len();
    if size <= 2 {
        let ordering = Ordering::identity(size);
        let all = collect_all.then(|| vec![ordering.clone()]);
        return Some(SubsetEntry { ordering, all });
    }

    struct Dfs<'a> {
        evaluator: &'a Evaluator,
        members: &'a [usize],
        used: Vec<bool>,
        seq: Vec<usize>,
        found: Vec<Vec<usize>>,
        collect_all: bool,
    }

    impl Dfs<'_> {
        /// Returns true once the search can stop.
        fn go(&mut self, scan: Option<&crate::model::PrefixScan>) -> bool {
            let depth = self.seq.len();
            let size = self.members.len();
            if depth == size {
                // Keep canonical representatives only; members ascend, so
                // local rank order matches global index order.
                if self.seq[0] < self.seq[size - 1] {
                    self.found.push(self.seq.clone());
                    return !self.collect_all;
                }
                return false;
            }
            for local in 0..size {
                if self.used[local] {
                    continue;
                }
                let row = self.members[local];
                let next = match scan {
                    None => self.evaluator.start_scan(row),
                    Some(prev) => {
                        let mut s = prev.clone();
                        self.evaluator.advance_scan(&mut s, row);
                        if !s.is_valid() {
                            continue;
                        }
                        s
                    }
                };
                self.used[local] = true;
                self.seq.push(local);
                let stop = self.go(Some(&next));
                self.seq.pop();
                self.used[local] = false;
                if stop {
                    return true;
                }
            }
            false
        }
    }

    let mut dfs = Dfs {
        evaluator,
        members,
        used: vec![false; size],
        seq: Vec::with_capacity(size),
        found: Vec::new(),
        collect_all,
    };
    dfs.go(None);
    if dfs.found.is_empty() {
        return None;
    }
    let ordering = Ordering::from_vec_unchecked(dfs.found[0].clone());
    let all = collect_all
        .then(|| dfs.found.into_iter().map(Ordering::from_vec_unchecked).collect());
    Some(SubsetEntry { ordering, all })
}

/// Solve every subset's feasibility up front; masks are independent, so the
/// table is identical for any worker count.
fn build_subset_table(
    evaluator: &Evaluator,
    n: usize,
    min_group_size: usize,
    collect_all: bool,
    workers: usize,
) -> SubsetTable {
    let total = 1usize << n;
    let workers = workers.clamp(1, total);
    let chunks: Vec<Vec<(usize, Option<SubsetEntry>)>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut out = Vec::new();
                    let mut mask = w + 1;
                    while mask < total {
                        if mask.count_ones() as usize >= min_group_size {
                            let members = mask_members(mask);
                            out.push((mask, search_subset(evaluator, &members, collect_all)));
                        }
                        mask += workers;
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut entries = vec![None; total];
    for chunk in chunks {
        for (mask, entry) in chunk {
            entries[mask] = entry;
        }
    }
    SubsetTable { entries }
}

fn solved_group(members: Vec<usize>, entry: &SubsetEntry) -> SolvedGroup {
    SolvedGroup {
        members,
        ordering: entry.ordering.clone(),
        report: Evaluator::clean_report(),
        all_orderings: entry.all.clone(),
    }
}

/// Enumerate every constraint-satisfying partition and keep those whose
/// groups all admit a valid seriation, ranked by (fewest groups, fewest
/// singletons, lexicographic restricted-growth string).
///
/// Per group the reported ordering is the lexicographically least valid
/// canonical one. The result is deterministic for any worker count.
pub fn solve_exact(
    matrix: &AssemblageMatrix,
    criterion: &UnimodalityCriterion,
    cons: &MultigroupConstraints,
) -> Result<Vec<GroupedSolution>, MultigroupError> {
    cons.validate()?;
    let n = matrix.assemblage_count();
    if n > EXACT_PARTITION_LIMIT && !cons.scale_override {
        return Err(MultigroupError::ScaleRefused { n, detail: scale_detail(n) });
    }
    let evaluator = Evaluator::new(matrix, criterion)?;
    let table = build_subset_table(&evaluator, n, cons.min_group_size, cons.all_orderings, cons.worker_count);

    let mut solutions = Vec::new();
    'partitions: for partition in enumerate_all_partitions(n) {
        if let Some(max) = cons.max_groups {
            if partition.group_count() > max {
                continue;
            }
        }
        let member_lists = partition.group_members();
        let mut masks = Vec::with_capacity(member_lists.len());
        for members in &member_lists {
            if members.len() < cons.min_group_size {
                continue 'partitions;
            }
            let mask: usize = members.iter().map(|&i| 1usize << i).sum();
            if table.get(mask).is_none() {
                continue 'partitions;
            }
            masks.push(mask);
        }
        let groups = member_lists
            .into_iter()
            .zip(&masks)
            .map(|(members, &mask)| solved_group(members, table.get(mask).expect("checked above")))
            .collect();
        solutions.push(GroupedSolution { partition, groups });
    }

    solutions.sort_by(|a, b| {
        a.group_count()
            .cmp(&b.group_count())
            .then_with(|| a.singleton_count().cmp(&b.singleton_count()))
            .then_with(|| a.partition.rgs().cmp(b.partition.rgs()))
    });
    Ok(solutions)
}

fn scale_detail(n: usize) -> String {
    let partitions = all_partitions_count(n);
    let mut detail = format!("{} candidate partitions (sum of S(n,m) over m)", format_count(&partitions, 2));
    if let Ok(total) = total_multigroup_solutions(n) {
        let estimate = estimate_time(&total, &ComputeBudget::default());
        detail.push_str(&format!(
            ", worst-case {} ordering tests ~{} s on the default budget",
            format_count(&total, 2),
            estimate.seconds_display(2),
        ));
    }
    detail
}

/// Grow groups greedily: seed with the valid triple admitting the most
/// one-assemblage extensions, extend while any insertion keeps the group
/// valid, then repeat on the remainder. Assemblages that fit in no triple
/// fall back to pair groups (ascending index), with an odd leftover kept as
/// a singleton. Always returns a solution; every emitted group is valid.
pub fn solve_agglomerative(
    matrix: &AssemblageMatrix,
    criterion: &UnimodalityCriterion,
    cons: &MultigroupConstraints,
) -> Result<GroupedSolution, MultigroupError> {
    cons.validate()?;
    let n = matrix.assemblage_count();
    let evaluator = Evaluator::new(matrix, criterion)?;

    let mut unassigned: Vec<usize> = (0..n).collect();
    let mut sequences: Vec<Vec<usize>> = Vec::new();
    while unassigned.len() >= 3 {
        let Some(seed) = select_seed(&evaluator, &unassigned) else {
            break;
        };
        let sequence = grow_group(&evaluator, seed, &unassigned);
        unassigned.retain(|x| !sequence.contains(x));
        sequences.push(sequence);
    }
    for pair in unassigned.chunks(2) {
        sequences.push(pair.to_vec());
    }

    let mut assignment = vec![usize::MAX; n];
    for (g, seq) in sequences.iter().enumerate() {
        for &row in seq {
            assignment[row] = g;
        }
    }
    // Canonical relabeling by first occurrence, reordering groups to match.
    let mut label_of_group = vec![usize::MAX; sequences.len()];
    let mut rgs = vec![0usize; n];
    let mut next_label = 0usize;
    for row in 0..n {
        let g = assignment[row];
        if label_of_group[g] == usize::MAX {
            label_of_group[g] = next_label;
            next_label += 1;
        }
        rgs[row] = label_of_group[g];
    }
    let mut ordered_sequences: Vec<Vec<usize>> = vec![Vec::new(); sequences.len()];
    for (g, seq) in sequences.into_iter().enumerate() {
        ordered_sequences[label_of_group[g]] = seq;
    }

    let groups = ordered_sequences
        .into_iter()
        .map(|seq| finalize_group(&evaluator, seq, cons.all_orderings))
        .collect();
    let partition = Partition::from_rgs(rgs).expect("relabeled assignment is restricted-growth");
    Ok(GroupedSolution { partition, groups })
}

struct Seed {
    extension_count: usize,
    members: [usize; 3],
    sequence: Vec<usize>,
}

/// Valid triples are ranked by how many (assemblage, position) insertions
/// keep them valid; ties fall to the smallest member triple, then the
/// lexicographically least arrangement.
fn select_seed(evaluator: &Evaluator, unassigned: &[usize]) -> Option<Seed> {
    let mut best: Option<Seed> = None;
    let u = unassigned.len();
    for x in 0..u {
        for y in x + 1..u {
            for z in y + 1..u {
                let (i, j, k) = (unassigned[x], unassigned[y], unassigned[z]);
                // The three canonical arrangements of a sorted triple.
                for sequence in [[i, j, k], [i, k, j], [j, i, k]] {
                    if !evaluator.is_valid_rows(&sequence) {
                        continue;
                    }
                    let mut extension_count = 0;
                    for &a in unassigned {
                        if a == i || a == j || a == k {
                            continue;
                        }
                        for pos in 0..=3 {
                            let mut candidate = sequence.to_vec();
                            candidate.insert(pos, a);
                            if evaluator.is_valid_rows(&candidate) {
                                extension_count += 1;
                            }
                        }
                    }
                    let candidate = Seed { extension_count, members: [i, j, k], sequence: sequence.to_vec() };
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            candidate.extension_count > b.extension_count
                                || (candidate.extension_count == b.extension_count
                                    && (candidate.members, &candidate.sequence) < (b.members, &b.sequence))
                        }
                    };
                    if better {
                        best = Some(candidate);
                    }
                }
            }
        }
    }
    best
}

/// Insert unassigned assemblages one at a time, always applying the valid
/// insertion with the lowest resulting score, ties broken by (assemblage
/// index, position). Stops when no insertion keeps the group valid.
fn grow_group(evaluator: &Evaluator, seed: Seed, unassigned: &[usize]) -> Vec<usize> {
    let mut sequence = seed.sequence;
    let mut pool: Vec<usize> = unassigned.iter().copied().filter(|a| !seed.members.contains(a)).collect();
    loop {
        let mut applied: Option<(f64, usize, usize, Vec<usize>)> = None;
        for (pool_idx, &a) in pool.iter().enumerate() {
            for pos in 0..=sequence.len() {
                let mut candidate = sequence.clone();
                candidate.insert(pos, a);
                let report = evaluator.report_rows(&candidate);
                if !report.valid {
                    continue;
                }
                let better = match &applied {
                    None => true,
                    Some((score, ..)) => report.score < *score,
                };
                if better {
                    applied = Some((report.score, pool_idx, pos, candidate));
                }
            }
        }
        match applied {
            Some((_, pool_idx, _, candidate)) => {
                sequence = candidate;
                pool.remove(pool_idx);
            }
            None => break,
        }
    }
    sequence
}

/// Package a seriation sequence (global rows) as a solved group with a
/// canonical local ordering.
fn finalize_group(evaluator: &Evaluator, sequence: Vec<usize>, collect_all: bool) -> SolvedGroup {
    let report = evaluator.report_rows(&sequence);
    debug_assert!(report.valid, "agglomerative growth only emits valid groups");
    let mut members = sequence.clone();
    members.sort_unstable();
    let local: Vec<usize> = sequence
        .iter()
        .map(|&row| members.binary_search(&row).expect("row is a member"))
        .collect();
    let ordering = Ordering::from_vec_unchecked(local).canonicalize();
    let all_orderings = collect_all.then(|| {
        search_subset(evaluator, &members, true)
            .expect("group is valid, so at least one ordering exists")
            .all
            .expect("collect_all fills the list")
    });
    SolvedGroup { members, ordering, report, all_orderings }
}

/// A named, runtime-selectable multigroup algorithm.
pub trait GroupingStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn solve(
        &self,
        matrix: &AssemblageMatrix,
        criterion: &UnimodalityCriterion,
        cons: &MultigroupConstraints,
    ) -> Result<Vec<GroupedSolution>, MultigroupError>;
}

struct ExactStrategy;

impl GroupingStrategy for ExactStrategy {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn summary(&self) -> &'static str {
        "enumerate every set partition and keep those whose groups all seriate"
    }

    fn solve(
        &self,
        matrix: &AssemblageMatrix,
        criterion: &UnimodalityCriterion,
        cons: &MultigroupConstraints,
    ) -> Result<Vec<GroupedSolution>, MultigroupError> {
        solve_exact(matrix, criterion, cons)
    }
}

struct AgglomerativeStrategy;

impl GroupingStrategy for AgglomerativeStrategy {
    fn name(&self) -> &'static str {
        "heuristic"
    }

    fn summary(&self) -> &'static str {
        "grow valid groups greedily from the most extendable triple"
    }

    fn solve(
        &self,
        matrix: &AssemblageMatrix,
        criterion: &UnimodalityCriterion,
        cons: &MultigroupConstraints,
    ) -> Result<Vec<GroupedSolution>, MultigroupError> {
        solve_agglomerative(matrix, criterion, cons).map(|s| vec![s])
    }
}

static EXACT: ExactStrategy = ExactStrategy;
static AGGLOMERATIVE: AgglomerativeStrategy = AgglomerativeStrategy;

/// Registered strategies, in presentation order.
pub fn strategies() -> [&'static dyn GroupingStrategy; 2] {
    [&EXACT, &AGGLOMERATIVE]
}

/// Look up a strategy by name; `agglomerative` is accepted as an alias for
/// `heuristic`.
pub fn strategy(name: &str) -> Option<&'static dyn GroupingStrategy> {
    let name = if name == "agglomerative" { "heuristic" } else { name };
    strategies().into_iter().find(|s| s.name() == name)
}

/// Dispatch to the strategy selected by `cons.mode`.
pub fn solve(
    matrix: &AssemblageMatrix,
    criterion: &UnimodalityCriterion,
    cons: &MultigroupConstraints,
) -> Result<Vec<GroupedSolution>, MultigroupError> {
    strategy(cons.mode.strategy_name())
        .expect("built-in modes are registered")
        .solve(matrix, criterion, cons)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::stirling2;
    use num_traits::ToPrimitive;

    #[test]
    fn partition_encoding_rejects_bad_strings() {
        assert!(Partition::from_rgs(vec![]).is_err());
        assert!(Partition::from_rgs(vec![1]).is_err());
        assert!(Partition::from_rgs(vec![0, 2]).is_err());
        let p = Partition::from_rgs(vec![0, 1, 0, 2]).unwrap();
        assert_eq!(p.group_count(), 3);
        assert_eq!(p.group_members(), vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(p.singleton_count(), 2);
    }

    #[test]
    fn all_partitions_of_three() {
        let got: Vec<Vec<usize>> =
            enumerate_all_partitions(3).map(|p| p.rgs().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0, 0],
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 1, 2]
            ]
        );
    }

    #[test]
    fn all_partition_stream_lengths_are_bell_numbers() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            assert_eq!(enumerate_all_partitions(n).count(), bell);
        }
    }

    #[test]
    fn exact_partition_streams_match_stirling_counts() {
        for n in 1..=8 {
            for m in 1..=n {
                let count = enumerate_partitions(n, m).unwrap().count();
                assert_eq!(count, stirling2(n, m).to_usize().unwrap(), "S({n},{m})");
            }
        }
    }

    #[test]
    fn exact_partition_stream_is_the_filtered_all_stream() {
        for m in 1..=5 {
            let filtered: Vec<Vec<usize>> = enumerate_all_partitions(5)
                .filter(|p| p.group_count() == m)
                .map(|p| p.rgs().to_vec())
                .collect();
            let direct: Vec<Vec<usize>> =
                enumerate_partitions(5, m).unwrap().map(|p| p.rgs().to_vec()).collect();
            assert_eq!(direct, filtered);
        }
    }

    #[test]
    fn exact_partition_bad_arguments() {
        assert!(enumerate_partitions(3, 0).is_err());
        assert!(enumerate_partitions(3, 4).is_err());
        assert_eq!(enumerate_partitions(4, 4).unwrap().count(), 1);
    }

    #[test]
    fn ten_into_three_has_9330_partitions() {
        assert_eq!(enumerate_partitions(10, 3).unwrap().count(), 9330);
    }

    #[test]
    fn strategy_registry_lookup() {
        assert_eq!(strategy("exact").unwrap().name(), "exact");
        assert_eq!(strategy("heuristic").unwrap().name(), "heuristic");
        assert_eq!(strategy("agglomerative").unwrap().name(), "heuristic");
        assert!(strategy("annealing").is_none());
    }
}
