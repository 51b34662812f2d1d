//! Multigroup solvers against a naive partition-by-partition oracle, planted
//! group recovery, and heuristic soundness.

use std::collections::BTreeSet;

use seriagraph::enumeration::{EnumerationRequest, solve_single_reference};
use seriagraph::model::{AssemblageMatrix, Evaluator, UnimodalityCriterion};
use seriagraph::multigroup::{
    GroupedSolution, MultigroupConstraints, MultigroupError, MultigroupMode, solve_agglomerative,
    solve_exact,
};
use seriagraph::planted::{planted_groups, planted_single, random_matrix};

fn constraints() -> MultigroupConstraints {
    MultigroupConstraints::default()
}

/// Enumerate partitions recursively (assign each item to an existing group
/// or open a new one) so the generation path shares nothing with the
/// library's iterator.
fn naive_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn recurse(item: usize, n: usize, groups: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if item == n {
            out.push(groups.clone());
            return;
        }
        for g in 0..groups.len() {
            groups[g].push(item);
            recurse(item + 1, n, groups, out);
            groups[g].pop();
        }
        groups.push(vec![item]);
        recurse(item + 1, n, groups, out);
        groups.pop();
    }
    let mut out = Vec::new();
    recurse(0, n, &mut Vec::new(), &mut out);
    out
}

/// Group feasibility through the single-threaded reference enumerator on an
/// extracted submatrix.
fn group_seriates(matrix: &AssemblageMatrix, members: &[usize], criterion: &UnimodalityCriterion) -> bool {
    let ids = members.iter().map(|&r| matrix.id(r).to_string()).collect();
    let counts = members.iter().map(|&r| matrix.row(r).to_vec()).collect();
    let sub = AssemblageMatrix::new(ids, counts).unwrap();
    let req = EnumerationRequest::new(sub, *criterion);
    !solve_single_reference(&req).unwrap().solutions.is_empty()
}

fn membership_of(solution: &GroupedSolution) -> BTreeSet<Vec<usize>> {
    solution.groups.iter().map(|g| g.members.clone()).collect()
}

fn planted_membership(sequences: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    sequences
        .iter()
        .map(|seq| {
            let mut members = seq.clone();
            members.sort_unstable();
            members
        })
        .collect()
}

#[test]
fn exact_solver_equals_naive_partition_oracle() {
    let criterion = UnimodalityCriterion::strict();
    for (n, seed) in [(5usize, 31u64), (6, 32), (7, 33), (8, 34)] {
        let matrix = random_matrix(n, 3, seed);
        let mut expected = BTreeSet::new();
        for groups in naive_partitions(n) {
            if groups.iter().all(|g| group_seriates(&matrix, g, &criterion)) {
                let set: BTreeSet<Vec<usize>> = groups.into_iter().collect();
                expected.insert(set);
            }
        }
        let solutions = solve_exact(&matrix, &criterion, &constraints()).unwrap();
        let got: BTreeSet<BTreeSet<Vec<usize>>> =
            solutions.iter().map(membership_of).collect();
        assert_eq!(got.len(), solutions.len(), "duplicate partitions in output");
        assert_eq!(got, expected, "n={n} seed={seed}");
    }
}

#[test]
fn exact_solver_is_never_empty_with_free_constraints() {
    let matrix = random_matrix(6, 3, 77);
    let solutions = solve_exact(&matrix, &UnimodalityCriterion::strict(), &constraints()).unwrap();
    // The all-singletons partition is always feasible.
    assert!(!solutions.is_empty());
    assert!(solutions.iter().any(|s| s.group_count() == 6));
}

#[test]
fn exact_solver_respects_constraints() {
    let matrix = random_matrix(6, 3, 78);
    let mut cons = constraints();
    cons.min_group_size = 2;
    let solutions = solve_exact(&matrix, &UnimodalityCriterion::strict(), &cons).unwrap();
    for s in &solutions {
        assert!(s.groups.iter().all(|g| g.members.len() >= 2));
    }
    let mut cons = constraints();
    cons.max_groups = Some(2);
    let solutions = solve_exact(&matrix, &UnimodalityCriterion::strict(), &cons).unwrap();
    for s in &solutions {
        assert!(s.group_count() <= 2);
    }
}

#[test]
fn planted_two_groups_rank_first() {
    for seed in 0..10 {
        let plant = planted_groups(&[5, 3], seed);
        let solutions =
            solve_exact(&plant.matrix, &UnimodalityCriterion::strict(), &constraints()).unwrap();
        let top = &solutions[0];
        assert_eq!(top.group_count(), 2, "seed {seed}: top solution has {} groups", top.group_count());
        assert_eq!(
            membership_of(top),
            planted_membership(&plant.sequences),
            "seed {seed}: membership mismatch"
        );
    }
}

#[test]
fn single_cohesive_group_ranks_first() {
    let plant = planted_groups(&[7], 5);
    let solutions =
        solve_exact(&plant.matrix, &UnimodalityCriterion::strict(), &constraints()).unwrap();
    assert_eq!(solutions[0].group_count(), 1);
}

#[test]
fn exact_solver_ranking_is_ordered() {
    let plant = planted_groups(&[4, 3], 9);
    let solutions =
        solve_exact(&plant.matrix, &UnimodalityCriterion::strict(), &constraints()).unwrap();
    for pair in solutions.windows(2) {
        let a = (pair[0].group_count(), pair[0].singleton_count(), pair[0].partition.rgs().to_vec());
        let b = (pair[1].group_count(), pair[1].singleton_count(), pair[1].partition.rgs().to_vec());
        assert!(a <= b, "ranking out of order: {a:?} after {b:?}");
    }
}

#[test]
fn exact_solver_worker_invariance() {
    let plant = planted_groups(&[4, 3], 2);
    let mut rendered = Vec::new();
    for workers in [1, 2, 8] {
        let mut cons = constraints();
        cons.worker_count = workers;
        let solutions =
            solve_exact(&plant.matrix, &UnimodalityCriterion::strict(), &cons).unwrap();
        rendered.push(format!("{solutions:?}"));
    }
    assert_eq!(rendered[0], rendered[1]);
    assert_eq!(rendered[0], rendered[2]);
}

#[test]
fn exact_solver_refuses_beyond_scale_gate() {
    let matrix = random_matrix(13, 3, 4);
    let err = solve_exact(&matrix, &UnimodalityCriterion::strict(), &constraints()).unwrap_err();
    match err {
        MultigroupError::ScaleRefused { n, detail } => {
            assert_eq!(n, 13);
            assert!(detail.contains("partitions"), "detail: {detail}");
        }
        other => panic!("expected scale refusal, got {other:?}"),
    }
}

#[test]
fn all_orderings_flag_collects_every_valid_ordering() {
    let plant = planted_groups(&[4], 3);
    let mut cons = constraints();
    cons.all_orderings = true;
    let solutions =
        solve_exact(&plant.matrix, &UnimodalityCriterion::strict(), &cons).unwrap();
    let whole = solutions.iter().find(|s| s.group_count() == 1).unwrap();
    let all = whole.groups[0].all_orderings.as_ref().unwrap();
    assert!(all.contains(&whole.groups[0].ordering));
    // Lexicographically least valid ordering comes first.
    assert_eq!(all[0], whole.groups[0].ordering);
    for pair in all.windows(2) {
        assert!(pair[0] < pair[1]);
    }
}

#[test]
fn heuristic_recovers_a_single_planted_order() {
    let plant = planted_single(9, 5, 17);
    let solution =
        solve_agglomerative(&plant.matrix, &UnimodalityCriterion::strict(), &constraints()).unwrap();
    assert_eq!(solution.group_count(), 1, "expected one group, got {:?}", solution.partition);
    let sequence = solution.groups[0].sequence();
    let planted: Vec<usize> = plant.ordering.indices().to_vec();
    let mut reversed = planted.clone();
    reversed.reverse();
    assert!(
        sequence == planted || sequence == reversed,
        "sequence {sequence:?} is not the planted order {planted:?} up to mirror"
    );
}

#[test]
fn heuristic_splits_two_planted_groups() {
    let plant = planted_groups(&[6, 6], 23);
    let criterion = UnimodalityCriterion::strict();
    let heuristic = solve_agglomerative(&plant.matrix, &criterion, &constraints()).unwrap();
    assert_eq!(membership_of(&heuristic), planted_membership(&plant.sequences));

    // The exact solver at n = 12 agrees on the top-ranked membership.
    let exact = solve_exact(&plant.matrix, &criterion, &constraints()).unwrap();
    assert_eq!(membership_of(&exact[0]), membership_of(&heuristic));
}

#[test]
fn heuristic_pairs_tiny_instances() {
    let matrix = random_matrix(2, 3, 8);
    let solution =
        solve_agglomerative(&matrix, &UnimodalityCriterion::strict(), &constraints()).unwrap();
    assert_eq!(solution.group_count(), 1);
    assert_eq!(solution.groups[0].members, vec![0, 1]);

    let matrix = random_matrix(1, 3, 8);
    let solution =
        solve_agglomerative(&matrix, &UnimodalityCriterion::strict(), &constraints()).unwrap();
    assert_eq!(solution.group_count(), 1);
    assert_eq!(solution.groups[0].members, vec![0]);
}

#[test]
fn heuristic_is_always_sound() {
    let criterion = UnimodalityCriterion::strict();
    for seed in 0..30 {
        let n = 4 + (seed as usize % 7);
        let matrix = random_matrix(n, 3, 500 + seed);
        let solution = solve_agglomerative(&matrix, &criterion, &constraints()).unwrap();
        let evaluator = Evaluator::new(&matrix, &criterion).unwrap();
        let mut covered = vec![false; n];
        for group in &solution.groups {
            assert!(evaluator.is_valid_rows(&group.sequence()), "seed {seed}");
            assert!(group.report.valid);
            for &m in &group.members {
                assert!(!covered[m], "seed {seed}: row {m} in two groups");
                covered[m] = true;
            }
        }
        assert!(covered.iter().all(|&c| c), "seed {seed}: rows left unassigned");
    }
}

#[test]
fn group_reports_are_mirror_invariant() {
    let plant = planted_groups(&[5, 3], 6);
    let criterion = UnimodalityCriterion::strict();
    let evaluator = Evaluator::new(&plant.matrix, &criterion).unwrap();
    let solution = solve_agglomerative(&plant.matrix, &criterion, &constraints()).unwrap();
    for group in &solution.groups {
        let seq = group.sequence();
        let mut mirrored = seq.clone();
        mirrored.reverse();
        let fwd = evaluator.report_rows(&seq);
        let rev = evaluator.report_rows(&mirrored);
        assert_eq!(fwd.valid, rev.valid);
        assert_eq!(fwd.score, rev.score);
    }
}

#[test]
fn heuristic_dispatches_through_the_registry() {
    let plant = planted_groups(&[4, 4], 12);
    let mut cons = constraints();
    cons.mode = MultigroupMode::Agglomerative;
    let via_mode = seriagraph::multigroup::solve(&plant.matrix, &UnimodalityCriterion::strict(), &cons)
        .unwrap();
    assert_eq!(via_mode.len(), 1);
    let direct =
        solve_agglomerative(&plant.matrix, &UnimodalityCriterion::strict(), &cons).unwrap();
    assert_eq!(format!("{:?}", via_mode[0]), format!("{direct:?}"));
}
