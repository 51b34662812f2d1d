use seriagraph::model::UnimodalityCriterion;
use seriagraph::multigroup::{MultigroupConstraints, solve_agglomerative};
use seriagraph::planted::{planted_groups, planted_single};

fn main() {
    for k in [5, 6, 7, 9] {
        let mut ok = 0;
        for seed in 0..20 {
            let plant = planted_single(9, k, seed);
            let sol = solve_agglomerative(&plant.matrix, &UnimodalityCriterion::strict(), &MultigroupConstraints::default()).unwrap();
            if sol.group_count() == 1 {
                let seq = sol.groups[0].sequence();
                let planted: Vec<usize> = plant.ordering.indices().to_vec();
                let mut rev = planted.clone(); rev.reverse();
                if seq == planted || seq == rev { ok += 1; }
            }
        }
        println!("k={k}: {ok}/20 single-group planted recovery");
    }
    let mut ok = 0;
    for seed in 0..20 {
        let plant = planted_groups(&[6, 6], seed);
        let sol = solve_agglomerative(&plant.matrix, &UnimodalityCriterion::strict(), &MultigroupConstraints::default()).unwrap();
        let mut got: Vec<Vec<usize>> = sol.groups.iter().map(|g| g.members.clone()).collect();
        got.sort();
        let mut want: Vec<Vec<usize>> = plant.sequences.iter().map(|s| { let mut v = s.clone(); v.sort(); v }).collect();
        want.sort();
        if got == want { ok += 1; } else if seed < 3 { println!("  seed {seed}: got {got:?}"); }
    }
    println!("6+6: {ok}/20 heuristic membership recovery");
}
